#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mwi/dielectric.hpp"
#include "mwi/objective.hpp"
#include "mwi/optimizer.hpp"
#include "mwi/tumor.hpp"

namespace mwi {

// Flat key = value configuration. Lengths accept unit suffixes (m, cm,
// mm), frequencies accept Hz/MHz/GHz; everything is stored in SI.
// Unknown keys are an error; CLI flags override file values.
struct RunConfig {
  // setup
  double frequency = 1.3e9;
  double eps_b = 22.4;
  double sigma_b = 1.26;
  int n_views = 16;
  double ring_radius = 0.076;

  // grids: 0 = derive from lambda_min (forward /20, inverse /10)
  double side_length = 0.072;
  int n_forward = 0;
  int n_inverse = 0;

  // phantom
  std::string phantom = "ideal";  // ideal | segmented
  double breast_radius = 0.025;
  double eps_n = 16.5;
  double sigma_n = 0.60;
  // segmented phantom: fibroglandular inner disc
  double fibro_radius = 0.012;
  double fibro_offset_x = 0.0;
  double fibro_offset_y = 0.0;
  double eps_f = 28.0;
  double sigma_f = 0.89;

  // tumor truth (synthetic runs)
  bool tumor_present = true;
  double tumor_x = 0.0;
  double tumor_y = 0.0;
  double tumor_radius = 0.005;
  double eps_psi = 59.3;
  double sigma_psi = 1.54;
  double tumor_delta = 0.0;  // permittivity perturbation fraction

  // noise
  double snr_db = std::numeric_limits<double>::infinity();

  // optimizer
  int n_control = 4;  // C
  OptimizerConfig opt;
  // search bounds (0-sized = defaults from the support geometry)
  Eigen::VectorXd bound_lower;
  Eigen::VectorXd bound_upper;

  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

RunConfig parse_config(const std::string& path);
// Parses one `key = value` assignment into the config (used by both the
// file parser and CLI overrides).
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

// Text grid-map format, lossless on round-trip:
//   gridmap v1 <n> <L_meters> <f_Hz>
//   <eps_r> <sigma>          (n*n lines, row-major from the lower-left)
struct GridMapData {
  PermittivityMap map;
  double frequency = 0.0;
};
void write_gridmap(const std::string& path, const PermittivityMap& map, double frequency);
GridMapData read_gridmap(const std::string& path);

// Text measurement format:
//   meas v1 <V> <M> <f_Hz>
//   <v> <m> <re> <im>        (V*M lines; v 1-based view, m 1-based receiver,
//                             receivers in ascending antenna index, transmitter skipped)
void write_meas(const std::string& path, const std::vector<Eigen::VectorXcd>& data,
                double frequency);
struct MeasData {
  std::vector<Eigen::VectorXcd> data;
  double frequency = 0.0;
};
MeasData read_meas(const std::string& path);

// Fine-to-coarse resampling by cell-center sampling; n_fine must be an
// integer multiple of n_coarse >= 1.
PermittivityMap resample_to(const PermittivityMap& fine, int n_coarse);

// CLI commands. Each returns the paths it wrote (first = primary output).
std::vector<std::string> cmd_simulate(const RunConfig& cfg);
std::vector<std::string> cmd_invert(const RunConfig& cfg, const std::string& meas_path,
                                    const std::string& reference_path,
                                    const std::string& method);
std::vector<std::string> cmd_metrics(const RunConfig& cfg, const std::string& recon_path,
                                     const std::string& actual_path,
                                     const std::string& reference_path,
                                     const std::string& truth_path,
                                     const std::string& summary_path = "");
std::vector<std::string> cmd_export_csv(const std::string& gridmap_path,
                                        const std::string& out_prefix);

}  // namespace mwi
