#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mwi/io.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "key = value configuration file");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--seed", flags.seed, "run seed (overrides the config file)")
      ->each([&flags](const std::string&) { flags.seed_set = true; });
}

mwi::RunConfig load_config(const CommonFlags& flags) {
  mwi::RunConfig cfg =
      flags.config_path.empty() ? mwi::RunConfig{} : mwi::parse_config(flags.config_path);
  if (flags.seed_set) cfg.seed = flags.seed;
  if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
  return cfg;
}

void report(const std::vector<std::string>& written) {
  for (const std::string& path : written) std::cout << "wrote " << path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"differential microwave inverse-scattering toolkit"};
  app.require_subcommand(1);

  CommonFlags sim_flags;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "generate synthetic differential measurements and truth maps");
  add_common(simulate, sim_flags);

  CommonFlags inv_flags;
  std::string meas_path, reference_path, method = "sbd";
  CLI::App* invert = app.add_subcommand("invert", "reconstruct a tumor from measurements");
  invert->add_option("meas", meas_path, "measurement file")->required();
  invert->add_option("reference", reference_path, "reference grid map")->required();
  invert->add_option("--method", method, "optimizer: sbd or ea");
  add_common(invert, inv_flags);

  CommonFlags met_flags;
  std::string recon_path, actual_path, met_reference_path, truth_path, summary_path;
  CLI::App* metrics = app.add_subcommand("metrics", "quantify a reconstruction");
  metrics->add_option("reconstruction", recon_path, "reconstructed grid map")->required();
  metrics->add_option("actual", actual_path, "ground-truth grid map")->required();
  metrics->add_option("reference", met_reference_path, "reference grid map")->required();
  metrics->add_option("truth", truth_path, "tumor truth file")->required();
  metrics->add_option("summary", summary_path, "inversion summary (optional)");
  add_common(metrics, met_flags);

  std::string export_gridmap, export_prefix;
  CLI::App* exporter = app.add_subcommand("export", "dump a grid map as CSV matrices");
  exporter->add_option("gridmap", export_gridmap, "grid map file")->required();
  exporter->add_option("prefix", export_prefix, "output path prefix")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      report(mwi::cmd_simulate(load_config(sim_flags)));
    } else if (invert->parsed()) {
      report(mwi::cmd_invert(load_config(inv_flags), meas_path, reference_path, method));
    } else if (metrics->parsed()) {
      report(mwi::cmd_metrics(load_config(met_flags), recon_path, actual_path,
                              met_reference_path, truth_path, summary_path));
    } else if (exporter->parsed()) {
      report(mwi::cmd_export_csv(export_gridmap, export_prefix));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
