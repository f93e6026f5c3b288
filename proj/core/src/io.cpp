#include "mwi/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "mwi/fields.hpp"

namespace mwi {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double x = std::stod(value, &used);
    if (trim(value.substr(used)).empty()) return x;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("config: bad number for " + key + ": '" + value + "'");
}

// Number with an optional length suffix; stored in meters.
double parse_length(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad length for " + key + ": '" + value + "'");
  }
  const std::string unit = trim(value.substr(used));
  if (unit.empty() || unit == "m") return x;
  if (unit == "cm") return x * 1e-2;
  if (unit == "mm") return x * 1e-3;
  throw std::invalid_argument("config: bad length unit for " + key + ": '" + unit + "'");
}

double parse_frequency(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad frequency for " + key + ": '" + value + "'");
  }
  const std::string unit = trim(value.substr(used));
  if (unit.empty() || unit == "Hz") return x;
  if (unit == "kHz") return x * 1e3;
  if (unit == "MHz") return x * 1e6;
  if (unit == "GHz") return x * 1e9;
  throw std::invalid_argument("config: bad frequency unit for " + key + ": '" + unit + "'");
}

int parse_int(const std::string& key, const std::string& value) {
  const double x = parse_double(key, value);
  const int i = static_cast<int>(std::llround(x));
  if (x != static_cast<double>(i))
    throw std::invalid_argument("config: expected integer for " + key + ": '" + value + "'");
  return i;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "yes" || value == "1" || value == "on") return true;
  if (value == "false" || value == "no" || value == "0" || value == "off") return false;
  throw std::invalid_argument("config: bad boolean for " + key + ": '" + value + "'");
}

double parse_snr(const std::string& key, const std::string& value) {
  if (value == "inf" || value == "off" || value == "none")
    return std::numeric_limits<double>::infinity();
  return parse_double(key, value);
}

Eigen::VectorXd parse_vector(const std::string& key, const std::string& value) {
  std::stringstream row(value);
  std::vector<double> entries;
  std::string token;
  while (row >> token) entries.push_back(parse_double(key, token));
  return Eigen::Map<const Eigen::VectorXd>(entries.data(),
                                           static_cast<Eigen::Index>(entries.size()));
}

std::string format17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double wavelength_of(double eps_r, double sigma, double frequency) {
  const std::complex<double> kappa =
      2.0 * std::numbers::pi * frequency *
      std::sqrt(4e-7 * std::numbers::pi * eps0 * complex_permittivity(eps_r, sigma, frequency));
  return 2.0 * std::numbers::pi / kappa.real();
}

ImagingSetup setup_from(const RunConfig& cfg) {
  ImagingSetup setup;
  setup.frequency = cfg.frequency;
  setup.eps_b = cfg.eps_b;
  setup.sigma_b = cfg.sigma_b;
  setup.n_views = cfg.n_views;
  setup.ring_radius = cfg.ring_radius;
  return setup;
}

// Shortest wavelength among the constituent tissues of the configured
// scene; drives the automatic grid rules.
double scene_min_wavelength(const RunConfig& cfg) {
  double lambda = wavelength_of(cfg.eps_b, cfg.sigma_b, cfg.frequency);
  lambda = std::min(lambda, wavelength_of(cfg.eps_n, cfg.sigma_n, cfg.frequency));
  if (cfg.phantom == "segmented")
    lambda = std::min(lambda, wavelength_of(cfg.eps_f, cfg.sigma_f, cfg.frequency));
  if (cfg.tumor_present) {
    const auto [eps_t, sigma_t] =
        perturb_tissue(cfg.eps_psi, cfg.sigma_psi, cfg.tumor_delta, cfg.frequency);
    lambda = std::min(lambda, wavelength_of(eps_t, sigma_t, cfg.frequency));
  }
  return lambda;
}

void resolve_grids(RunConfig& cfg) {
  if (cfg.n_inverse <= 0) {
    const double lambda = scene_min_wavelength(cfg);
    cfg.n_inverse = static_cast<int>(std::ceil(10.0 * cfg.side_length / lambda));
  }
  if (cfg.n_forward <= 0) cfg.n_forward = 2 * cfg.n_inverse;
}

void check_grid_guard(const RunConfig& cfg) {
  if (cfg.n_forward % cfg.n_inverse != 0 || cfg.n_forward / cfg.n_inverse < 2)
    throw std::invalid_argument(
        "simulate: forward grid must be an integer multiple (>= 2x) of the inverse grid, got " +
        std::to_string(cfg.n_forward) + " vs " + std::to_string(cfg.n_inverse));
}

PermittivityMap reference_phantom(const RunConfig& cfg, const Grid& grid,
                                  const ImagingSetup& setup) {
  if (cfg.phantom != "ideal" && cfg.phantom != "segmented")
    throw std::invalid_argument("config: unknown phantom '" + cfg.phantom + "'");
  PermittivityMap map = ideal_phantom(grid, setup, cfg.breast_radius, cfg.eps_n, cfg.sigma_n);
  if (cfg.phantom == "segmented")
    paint_disc(map, grid.center + Eigen::Vector2d{cfg.fibro_offset_x, cfg.fibro_offset_y},
               cfg.fibro_radius, cfg.eps_f, cfg.sigma_f);
  return map;
}

PermittivityMap actual_phantom(const RunConfig& cfg, const PermittivityMap& reference) {
  PermittivityMap map = reference;
  if (!cfg.tumor_present) return map;
  const auto [eps_t, sigma_t] =
      perturb_tissue(cfg.eps_psi, cfg.sigma_psi, cfg.tumor_delta, cfg.frequency);
  paint_disc(map, {cfg.tumor_x, cfg.tumor_y}, cfg.tumor_radius, eps_t, sigma_t);
  return map;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  if (!dir.empty()) std::filesystem::create_directories(dir);
}

void require_close(const std::string& what, double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1.0});
  if (std::abs(a - b) > 1e-12 * scale)
    throw std::invalid_argument("invert: " + what + " mismatch: " + format17(a) + " vs " +
                                format17(b));
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "frequency") cfg.frequency = parse_frequency(key, value);
  else if (key == "eps_b") cfg.eps_b = parse_double(key, value);
  else if (key == "sigma_b") cfg.sigma_b = parse_double(key, value);
  else if (key == "n_views") cfg.n_views = parse_int(key, value);
  else if (key == "ring_radius") cfg.ring_radius = parse_length(key, value);
  else if (key == "side_length") cfg.side_length = parse_length(key, value);
  else if (key == "n_forward") cfg.n_forward = parse_int(key, value);
  else if (key == "n_inverse") cfg.n_inverse = parse_int(key, value);
  else if (key == "phantom") cfg.phantom = value;
  else if (key == "breast_radius") cfg.breast_radius = parse_length(key, value);
  else if (key == "eps_n") cfg.eps_n = parse_double(key, value);
  else if (key == "sigma_n") cfg.sigma_n = parse_double(key, value);
  else if (key == "fibro_radius") cfg.fibro_radius = parse_length(key, value);
  else if (key == "fibro_offset_x") cfg.fibro_offset_x = parse_length(key, value);
  else if (key == "fibro_offset_y") cfg.fibro_offset_y = parse_length(key, value);
  else if (key == "eps_f") cfg.eps_f = parse_double(key, value);
  else if (key == "sigma_f") cfg.sigma_f = parse_double(key, value);
  else if (key == "tumor_present") cfg.tumor_present = parse_bool(key, value);
  else if (key == "tumor_x") cfg.tumor_x = parse_length(key, value);
  else if (key == "tumor_y") cfg.tumor_y = parse_length(key, value);
  else if (key == "tumor_radius") cfg.tumor_radius = parse_length(key, value);
  else if (key == "eps_psi") cfg.eps_psi = parse_double(key, value);
  else if (key == "sigma_psi") cfg.sigma_psi = parse_double(key, value);
  else if (key == "tumor_delta") cfg.tumor_delta = parse_double(key, value);
  else if (key == "snr_db") cfg.snr_db = parse_snr(key, value);
  else if (key == "n_control") cfg.n_control = parse_int(key, value);
  else if (key == "swarm") cfg.opt.swarm = parse_int(key, value);
  else if (key == "iterations") cfg.opt.iterations = parse_int(key, value);
  else if (key == "init_samples") cfg.opt.init_samples = parse_int(key, value);
  else if (key == "swarm_from_best") cfg.opt.swarm_from_best = parse_bool(key, value);
  else if (key == "omega") cfg.opt.pso.omega = parse_double(key, value);
  else if (key == "c1") cfg.opt.pso.c1 = parse_double(key, value);
  else if (key == "c2") cfg.opt.pso.c2 = parse_double(key, value);
  else if (key == "vmax") cfg.opt.pso.vmax = parse_double(key, value);
  else if (key == "v_init") cfg.opt.pso.v_init = parse_double(key, value);
  else if (key == "fit_starts") cfg.opt.initial_fit.starts = parse_int(key, value);
  else if (key == "fit_max_evals") cfg.opt.initial_fit.max_evals = parse_int(key, value);
  else if (key == "refit_starts") cfg.opt.refit.starts = parse_int(key, value);
  else if (key == "refit_max_evals") cfg.opt.refit.max_evals = parse_int(key, value);
  else if (key == "bound_lower") cfg.bound_lower = parse_vector(key, value);
  else if (key == "bound_upper") cfg.bound_upper = parse_vector(key, value);
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
  else if (key == "out_dir") cfg.out_dir = value;
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot read " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not 'key = value' in " + path);
    apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void write_gridmap(const std::string& path, const PermittivityMap& map, double frequency) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_gridmap: cannot write " + path);
  const int n = map.grid.n_per_side;
  out << "gridmap v1 " << n << ' ' << format17(map.grid.side_length) << ' '
      << format17(frequency) << "\n";
  for (int i = 0; i < map.grid.cell_count(); ++i)
    out << format17(map.eps_r[i]) << ' ' << format17(map.sigma[i]) << "\n";
}

GridMapData read_gridmap(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_gridmap: cannot read " + path);
  std::string magic, version;
  int n = 0;
  double side = 0.0, frequency = 0.0;
  if (!(in >> magic >> version >> n >> side >> frequency) || magic != "gridmap" ||
      version != "v1" || n < 1 || !(side > 0.0))
    throw std::runtime_error("read_gridmap: bad header in " + path);

  GridMapData data;
  data.frequency = frequency;
  data.map.grid = Grid{side, n, Eigen::Vector2d::Zero()};
  const int count = n * n;
  data.map.eps_r.resize(count);
  data.map.sigma.resize(count);
  for (int i = 0; i < count; ++i)
    if (!(in >> data.map.eps_r[i] >> data.map.sigma[i]))
      throw std::runtime_error("read_gridmap: truncated body in " + path);
  return data;
}

void write_meas(const std::string& path, const std::vector<Eigen::VectorXcd>& data,
                double frequency) {
  if (data.empty()) throw std::invalid_argument("write_meas: no views");
  const Eigen::Index m = data[0].size();
  for (const auto& d : data)
    if (d.size() != m) throw std::invalid_argument("write_meas: ragged views");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_meas: cannot write " + path);
  out << "meas v1 " << data.size() << ' ' << m << ' ' << format17(frequency) << "\n";
  for (std::size_t v = 0; v < data.size(); ++v)
    for (Eigen::Index r = 0; r < m; ++r)
      out << (v + 1) << ' ' << (r + 1) << ' ' << format17(data[v][r].real()) << ' '
          << format17(data[v][r].imag()) << "\n";
}

MeasData read_meas(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_meas: cannot read " + path);
  std::string magic, version;
  int n_views = 0, m = 0;
  double frequency = 0.0;
  if (!(in >> magic >> version >> n_views >> m >> frequency) || magic != "meas" ||
      version != "v1" || n_views < 1 || m < 1)
    throw std::runtime_error("read_meas: bad header in " + path);

  MeasData data;
  data.frequency = frequency;
  data.data.assign(n_views, Eigen::VectorXcd(m));
  for (int v = 1; v <= n_views; ++v)
    for (int r = 1; r <= m; ++r) {
      int fv = 0, fr = 0;
      double re = 0.0, im = 0.0;
      if (!(in >> fv >> fr >> re >> im) || fv != v || fr != r)
        throw std::runtime_error("read_meas: bad row (view " + std::to_string(v) +
                                 ", receiver " + std::to_string(r) + ") in " + path);
      data.data[v - 1][r - 1] = {re, im};
    }
  return data;
}

PermittivityMap resample_to(const PermittivityMap& fine, int n_coarse) {
  const int n_fine = fine.grid.n_per_side;
  if (n_coarse < 1 || n_fine % n_coarse != 0)
    throw std::invalid_argument("resample_to: fine grid must be an integer multiple");
  PermittivityMap coarse;
  coarse.grid = Grid{fine.grid.side_length, n_coarse, fine.grid.center};
  coarse.eps_r.resize(n_coarse * n_coarse);
  coarse.sigma.resize(n_coarse * n_coarse);
  for (int iy = 0; iy < n_coarse; ++iy)
    for (int ix = 0; ix < n_coarse; ++ix) {
      const int jx = ((2 * ix + 1) * n_fine) / (2 * n_coarse);
      const int jy = ((2 * iy + 1) * n_fine) / (2 * n_coarse);
      const int src = jy * n_fine + jx;
      const int dst = iy * n_coarse + ix;
      coarse.eps_r[dst] = fine.eps_r[src];
      coarse.sigma[dst] = fine.sigma[src];
    }
  return coarse;
}

std::vector<std::string> cmd_simulate(const RunConfig& config) {
  RunConfig cfg = config;
  resolve_grids(cfg);
  check_grid_guard(cfg);
  ensure_dir(cfg.out_dir);

  const ImagingSetup setup = setup_from(cfg);
  const Grid fine{cfg.side_length, cfg.n_forward, Eigen::Vector2d::Zero()};
  const PermittivityMap reference = reference_phantom(cfg, fine, setup);
  const PermittivityMap actual = actual_phantom(cfg, reference);

  const std::complex<double> kappa = background_wavenumber(setup);
  const FieldSet ref_fields = forward_solve(reference, setup);
  const FieldSet act_fields = forward_solve(actual, setup);

  std::vector<Eigen::VectorXcd> total_ref(setup.n_views), total_act(setup.n_views);
  for (int v = 0; v < setup.n_views; ++v) {
    const Eigen::VectorXcd inc = incident_field_at_receivers(setup, v, kappa);
    total_ref[v] = inc + ref_fields.scattered_at_receivers[v];
    total_act[v] = inc + act_fields.scattered_at_receivers[v];
  }
  Rng noise_rng = make_stream(cfg.seed, rng_stream::noise);
  const std::vector<Eigen::VectorXcd> total_act_noisy =
      add_awgn(total_act, cfg.snr_db, noise_rng);

  std::vector<Eigen::VectorXcd> d_meas(setup.n_views);
  for (int v = 0; v < setup.n_views; ++v) d_meas[v] = total_act_noisy[v] - total_ref[v];

  const std::string meas_path = join_path(cfg.out_dir, "meas.txt");
  const std::string ref_path = join_path(cfg.out_dir, "reference.gridmap");
  const std::string act_path = join_path(cfg.out_dir, "actual.gridmap");
  const std::string truth_path = join_path(cfg.out_dir, "truth.txt");

  write_meas(meas_path, d_meas, cfg.frequency);
  write_gridmap(ref_path, resample_to(reference, cfg.n_inverse), cfg.frequency);
  write_gridmap(act_path, resample_to(actual, cfg.n_inverse), cfg.frequency);

  std::ofstream truth(truth_path);
  if (!truth) throw std::runtime_error("simulate: cannot write " + truth_path);
  truth << "tumor_present = " << (cfg.tumor_present ? "true" : "false") << "\n";
  truth << "tumor_x = " << format17(cfg.tumor_x) << "\n";
  truth << "tumor_y = " << format17(cfg.tumor_y) << "\n";
  truth << "tumor_radius = " << format17(cfg.tumor_radius) << "\n";
  truth.close();

  return {meas_path, ref_path, act_path, truth_path};
}

std::vector<std::string> cmd_invert(const RunConfig& config, const std::string& meas_path,
                                    const std::string& reference_path,
                                    const std::string& method) {
  if (method != "sbd" && method != "ea")
    throw std::invalid_argument("invert: method must be sbd or ea, got '" + method + "'");
  RunConfig cfg = config;
  ensure_dir(cfg.out_dir);

  const MeasData meas = read_meas(meas_path);
  const GridMapData reference = read_gridmap(reference_path);
  require_close("measurement/map frequency", meas.frequency, reference.frequency);
  require_close("config/file frequency", cfg.frequency, meas.frequency);
  if (static_cast<int>(meas.data.size()) != cfg.n_views)
    throw std::invalid_argument("invert: view count mismatch: file has " +
                                std::to_string(meas.data.size()) + ", config expects " +
                                std::to_string(cfg.n_views));
  if (meas.data[0].size() != cfg.n_views - 1)
    throw std::invalid_argument("invert: receiver count mismatch: file has " +
                                std::to_string(meas.data[0].size()) + ", expected " +
                                std::to_string(cfg.n_views - 1));

  const ImagingSetup setup = setup_from(cfg);
  MeasurementSet mset;
  mset.d_meas = meas.data;
  const EvalContext ctx = make_eval_context(reference.map, setup, std::move(mset));

  // Bounds: explicit from the config, else derived from the support mask.
  SearchSpace space;
  if (cfg.bound_lower.size() > 0 || cfg.bound_upper.size() > 0) {
    const int dim = 4 + cfg.n_control;
    if (cfg.bound_lower.size() != dim || cfg.bound_upper.size() != dim)
      throw std::invalid_argument("invert: bounds must have 4 + n_control entries");
    space.lower = cfg.bound_lower;
    space.upper = cfg.bound_upper;
  } else {
    Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
    int count = 0;
    for (int i = 0; i < ctx.grid.cell_count(); ++i)
      if (ctx.support[i]) {
        centroid += ctx.grid.cell_center(i);
        ++count;
      }
    if (count == 0) throw std::invalid_argument("invert: reference map has no tissue");
    centroid /= count;
    double radius = 0.0;
    for (int i = 0; i < ctx.grid.cell_count(); ++i)
      if (ctx.support[i])
        radius = std::max(radius, (ctx.grid.cell_center(i) - centroid).norm());
    space = default_search_space(cfg.n_control, centroid, radius);
  }

  OptimizerConfig opt = cfg.opt;
  opt.seed = cfg.seed;
  const RunReport report = method == "sbd" ? run_sbd(ctx, space, opt) : run_ea(ctx, space, opt);

  // Reconstructed map: the winning descriptor painted over the reference.
  const RasterResult raster =
      rasterize_tumor(report.best_descriptor, ctx.grid, ctx.samples_per_arc);
  const PermittivityMap recon =
      decode_map(report.best_descriptor, ctx.reference, ctx.support, raster);

  const std::string recon_path = join_path(cfg.out_dir, "reconstruction.gridmap");
  const std::string trace_path = join_path(cfg.out_dir, "trace.csv");
  const std::string summary_path = join_path(cfg.out_dir, "summary.txt");
  write_gridmap(recon_path, recon, cfg.frequency);
  write_trace_csv(trace_path, report);
  write_summary(summary_path, report, opt);

  std::vector<std::string> written{recon_path, trace_path, summary_path};
  if (method == "sbd") {
    const std::string training_path = join_path(cfg.out_dir, "training.csv");
    report.training.dump_csv(training_path);
    written.push_back(training_path);
  }
  return written;
}

std::vector<std::string> cmd_metrics(const RunConfig& config, const std::string& recon_path,
                                     const std::string& actual_path,
                                     const std::string& reference_path,
                                     const std::string& truth_path,
                                     const std::string& summary_path) {
  RunConfig cfg = config;
  ensure_dir(cfg.out_dir);

  const GridMapData recon = read_gridmap(recon_path);
  const GridMapData actual = read_gridmap(actual_path);
  const GridMapData reference = read_gridmap(reference_path);
  const auto same_grid = [](const Grid& a, const Grid& b) {
    return a.n_per_side == b.n_per_side && a.side_length == b.side_length;
  };
  if (!same_grid(recon.map.grid, reference.map.grid) ||
      !same_grid(actual.map.grid, reference.map.grid))
    throw std::invalid_argument("metrics: grids do not match across input maps");

  RunConfig truth;
  {
    std::ifstream in(truth_path);
    if (!in) throw std::runtime_error("metrics: cannot read " + truth_path);
    std::string line;
    while (std::getline(in, line)) {
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("metrics: bad truth line '" + line + "'");
      apply_config_entry(truth, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  }

  ImagingSetup setup = setup_from(cfg);
  setup.frequency = reference.frequency;
  const Eigen::VectorXcd tau_recon = contrast(recon.map, setup);
  const Eigen::VectorXcd tau_actual = contrast(actual.map, setup);
  const Eigen::VectorXcd tau_ref = contrast(reference.map, setup);
  const Eigen::VectorXcd delta_recon = tau_recon - tau_ref;
  const Eigen::VectorXcd delta_true = tau_actual - tau_ref;

  const Grid& grid = reference.map.grid;
  std::vector<std::uint8_t> true_mask(grid.cell_count(), 0);
  int true_count = 0;
  for (int i = 0; i < grid.cell_count(); ++i)
    if (actual.map.eps_r[i] != reference.map.eps_r[i] ||
        actual.map.sigma[i] != reference.map.sigma[i]) {
      true_mask[i] = 1;
      ++true_count;
    }
  if (true_count == 0)
    throw std::invalid_argument("metrics: actual and reference maps are identical (no tumor region)");

  const double xi_tot = xi_error(delta_recon, delta_true, XiRegion::total, true_mask);
  const double xi_int = xi_error(delta_recon, delta_true, XiRegion::internal, true_mask);
  const double xi_ext = xi_error(delta_recon, delta_true, XiRegion::external, true_mask);

  // Optional run summary: echoes the surrogate bookkeeping into the report
  // and carries the descriptor the run converged to.
  int fullwave = -1;
  double eta = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd best_alpha;
  if (!summary_path.empty()) {
    std::ifstream in(summary_path);
    if (!in) throw std::runtime_error("metrics: cannot read " + summary_path);
    std::string line;
    while (std::getline(in, line)) {
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key == "fullwave_evals") fullwave = parse_int(key, value);
      else if (key == "eta") eta = parse_double(key, value);
      else if (key == "best_alpha") best_alpha = parse_vector(key, value);
    }
  }

  // The localization error uses the descriptor barycenter (x_psi, y_psi)
  // when a run summary is at hand; the painted-cell centroid only stands in
  // for reconstructions arriving without one.
  constexpr double chi = 0.005;
  Detection det;
  Eigen::Vector2d recon_center = Eigen::Vector2d::Zero();
  int recon_count = 0;
  for (int i = 0; i < grid.cell_count(); ++i)
    if (recon.map.eps_r[i] != reference.map.eps_r[i] ||
        recon.map.sigma[i] != reference.map.sigma[i]) {
      recon_center += grid.cell_center(i);
      ++recon_count;
    }
  if (best_alpha.size() >= 4) {
    det = zeta_and_detect({best_alpha[2], best_alpha[3]},
                          {truth.tumor_x, truth.tumor_y}, truth.tumor_radius, chi);
  } else if (recon_count > 0) {
    recon_center /= recon_count;
    det = zeta_and_detect(recon_center, {truth.tumor_x, truth.tumor_y}, truth.tumor_radius,
                          chi);
  } else {
    det.zeta = std::numeric_limits<double>::infinity();
    det.detected = false;
  }

  const std::string metrics_path = join_path(cfg.out_dir, "metrics.txt");
  std::ofstream out(metrics_path);
  if (!out) throw std::runtime_error("metrics: cannot write " + metrics_path);
  out << "xi_tot = " << format17(xi_tot) << "\n";
  out << "xi_int = " << format17(xi_int) << "\n";
  out << "xi_ext = " << format17(xi_ext) << "\n";
  out << "zeta_m = " << format17(det.zeta) << "\n";
  out << "rho_true_m = " << format17(truth.tumor_radius) << "\n";
  out << "chi_m = " << format17(chi) << "\n";
  out << "detected = " << (det.detected ? "yes" : "no") << "\n";
  if (fullwave >= 0) out << "fullwave_evals = " << fullwave << "\n";
  if (std::isfinite(eta)) out << "eta = " << format17(eta) << "\n";
  return {metrics_path};
}

std::vector<std::string> cmd_export_csv(const std::string& gridmap_path,
                                        const std::string& out_prefix) {
  const GridMapData data = read_gridmap(gridmap_path);
  const int n = data.map.grid.n_per_side;
  const std::string eps_path = out_prefix + "_eps.csv";
  const std::string sigma_path = out_prefix + "_sigma.csv";

  const auto write_matrix = [n](const std::string& path, const Eigen::VectorXd& values) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export: cannot write " + path);
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) {
        if (ix) out << ',';
        out << format17(values[iy * n + ix]);
      }
      out << "\n";
    }
  };
  write_matrix(eps_path, data.map.eps_r);
  write_matrix(sigma_path, data.map.sigma);
  return {eps_path, sigma_path};
}

}  // namespace mwi
