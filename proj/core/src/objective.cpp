#include "mwi/objective.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mwi {

double MeasurementSet::norm_sq() const {
  double s = 0.0;
  for (const auto& d : d_meas) s += d.squaredNorm();
  return s;
}

EvalContext make_eval_context(const PermittivityMap& reference, const ImagingSetup& setup,
                              MeasurementSet meas) {
  if (meas.d_meas.size() != static_cast<std::size_t>(setup.n_views))
    throw std::invalid_argument("make_eval_context: measurement view count mismatch");
  for (const auto& d : meas.d_meas)
    if (d.size() != setup.n_receivers())
      throw std::invalid_argument("make_eval_context: measurement length mismatch");
  if (!(meas.norm_sq() > 0.0))
    throw std::invalid_argument("make_eval_context: zero differential data");

  EvalContext ctx;
  ctx.setup = setup;
  ctx.grid = reference.grid;
  ctx.reference = reference;
  ctx.support = breast_support(reference, setup.eps_b, setup.sigma_b);
  ctx.kappa_b = background_wavenumber(setup);
  ctx.tau_n = contrast(reference, setup);
  ctx.ops = build_green_operators(reference, setup);
  ctx.e_inc.reserve(setup.n_views);
  for (int v = 0; v < setup.n_views; ++v)
    ctx.e_inc.push_back(incident_field(ctx.grid, setup, v, ctx.kappa_b));
  ctx.meas = std::move(meas);
  return ctx;
}

std::vector<Eigen::VectorXcd> differential_currents(const EvalContext& ctx,
                                                    const Eigen::VectorXcd& tau_candidate) {
  const int n = ctx.grid.cell_count();
  if (tau_candidate.size() != n)
    throw std::invalid_argument("differential_currents: contrast length mismatch");

  Eigen::MatrixXcd system = Eigen::MatrixXcd::Identity(n, n);
  system.noalias() -= ctx.ops.gb_internal * tau_candidate.asDiagonal();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(system);
  const double rcond = lu.rcond();
  if (!(rcond > 0.0) || 1.0 / rcond > kMaxInverseRcond)
    throw IllConditionedError(rcond > 0.0 ? 1.0 / rcond
                                          : std::numeric_limits<double>::infinity());

  const Eigen::VectorXcd tau_delta = tau_candidate - ctx.tau_n;
  std::vector<Eigen::VectorXcd> j_delta;
  j_delta.reserve(ctx.e_inc.size());
  for (const auto& e_inc : ctx.e_inc) {
    const Eigen::VectorXcd e_tot = lu.solve(e_inc);
    j_delta.push_back(tau_delta.cwiseProduct(e_tot));
  }
  return j_delta;
}

CostEval evaluate_cost(const EvalContext& ctx, const TumorDescriptor& desc) {
  const RasterResult raster = rasterize_tumor(desc, ctx.grid, ctx.samples_per_arc);
  if (!raster.valid) return {ctx.phi_penalty, false};

  const PermittivityMap candidate = decode_map(desc, ctx.reference, ctx.support, raster);
  std::vector<Eigen::VectorXcd> j_delta;
  try {
    j_delta = differential_currents(ctx, contrast(candidate, ctx.setup));
  } catch (const IllConditionedError&) {
    return {ctx.phi_penalty, false};
  }
  const std::vector<Eigen::VectorXcd> d = differential_field_data(ctx.ops, j_delta);

  double num = 0.0;
  for (std::size_t v = 0; v < d.size(); ++v) num += (d[v] - ctx.meas.d_meas[v]).squaredNorm();
  return {num / ctx.meas.norm_sq(), true};
}

double xi_error(const Eigen::VectorXcd& tau_delta, const Eigen::VectorXcd& tau_delta_true,
                XiRegion region, const std::vector<std::uint8_t>& true_mask) {
  if (tau_delta.size() != tau_delta_true.size() ||
      true_mask.size() != static_cast<std::size_t>(tau_delta.size()))
    throw std::invalid_argument("xi_error: size mismatch");

  double sum = 0.0;
  int count = 0;
  for (Eigen::Index i = 0; i < tau_delta.size(); ++i) {
    const bool in_tumor = true_mask[i] != 0;
    if (region == XiRegion::internal && !in_tumor) continue;
    if (region == XiRegion::external && in_tumor) continue;
    sum += std::abs(tau_delta[i] - tau_delta_true[i]) / std::abs(tau_delta_true[i] + 1.0);
    ++count;
  }
  if (count == 0) throw std::invalid_argument("xi_error: empty region");
  return sum / count;
}

Detection zeta_and_detect(const Eigen::Vector2d& reconstructed_barycenter,
                          const Eigen::Vector2d& true_barycenter, double rho_true,
                          double chi) {
  Detection det;
  det.zeta = (reconstructed_barycenter - true_barycenter).norm();
  det.detected = det.zeta <= rho_true + chi;
  return det;
}

double eta_saving(int full_wave_count, int swarm, int iterations) {
  const double budget = static_cast<double>(swarm) * iterations;
  if (budget <= 0.0)
    throw std::invalid_argument("eta_saving: zero plain-run budget");
  return 1.0 - full_wave_count / budget;
}

}  // namespace mwi
