#include "mwi/fields.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mwi/special.hpp"

namespace mwi {

namespace {
using cd = std::complex<double>;
constexpr cd kJ{0.0, 1.0};

cd line_source(cd kappa, double distance) {
  return -kJ * (kappa * kappa / 4.0) * special::hankel2_0(kappa * distance);
}
}  // namespace

Eigen::VectorXcd incident_field(const Grid& grid, const ImagingSetup& setup, int view,
                                std::complex<double> kappa) {
  validate(setup, grid);
  const Eigen::Vector2d src = setup.antenna_position(view);
  const int n = grid.cell_count();
  Eigen::VectorXcd e(n);
  for (int i = 0; i < n; ++i)
    e[i] = line_source(kappa, (grid.cell_center(i) - src).norm());
  return e;
}

Eigen::VectorXcd incident_field_at_receivers(const ImagingSetup& setup, int view,
                                             std::complex<double> kappa) {
  const Eigen::Vector2d src = setup.antenna_position(view);
  const int m = setup.n_receivers();
  Eigen::VectorXcd e(m);
  for (int r = 0; r < m; ++r) {
    const Eigen::Vector2d pos = setup.antenna_position(setup.receiver_antenna(view, r));
    e[r] = line_source(kappa, (pos - src).norm());
  }
  return e;
}

FieldSet forward_solve(const PermittivityMap& map, const ImagingSetup& setup) {
  validate(setup, map.grid);
  const cd kappa = background_wavenumber(setup);
  const Eigen::VectorXcd tau = contrast(map, setup);
  const int n = map.grid.cell_count();

  const Eigen::MatrixXcd gb = green_b_internal(map.grid, kappa);
  Eigen::MatrixXcd system = Eigen::MatrixXcd::Identity(n, n);
  system.noalias() -= gb * tau.asDiagonal();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(system);
  const double rcond = lu.rcond();
  if (!(rcond > 0.0) || 1.0 / rcond > kMaxInverseRcond)
    throw IllConditionedError(rcond > 0.0 ? 1.0 / rcond
                                          : std::numeric_limits<double>::infinity());

  FieldSet fields;
  fields.incident.reserve(setup.n_views);
  fields.total.reserve(setup.n_views);
  fields.scattered_at_receivers.reserve(setup.n_views);
  for (int v = 0; v < setup.n_views; ++v) {
    Eigen::VectorXcd e_inc = incident_field(map.grid, setup, v, kappa);
    Eigen::VectorXcd e_tot = lu.solve(e_inc);
    const Eigen::MatrixXcd gb_ext = green_b_external(map.grid, setup, v, kappa);
    Eigen::VectorXcd s = gb_ext * tau.cwiseProduct(e_tot);
    fields.incident.push_back(std::move(e_inc));
    fields.total.push_back(std::move(e_tot));
    fields.scattered_at_receivers.push_back(std::move(s));
  }
  return fields;
}

std::vector<Eigen::VectorXcd> differential_field_data(
    const GreenOperators& ops, const std::vector<Eigen::VectorXcd>& j_delta) {
  if (j_delta.size() != ops.gn_external.size())
    throw std::invalid_argument("differential_field_data: view count mismatch");
  std::vector<Eigen::VectorXcd> d;
  d.reserve(j_delta.size());
  for (std::size_t v = 0; v < j_delta.size(); ++v) {
    if (j_delta[v].size() != ops.gn_external[v].cols())
      throw std::invalid_argument("differential_field_data: current length mismatch");
    d.push_back(ops.gn_external[v] * j_delta[v]);
  }
  return d;
}

std::vector<Eigen::VectorXcd> add_awgn(const std::vector<Eigen::VectorXcd>& fields,
                                       double snr_db, Rng& rng) {
  if (!std::isfinite(snr_db)) return fields;

  double power = 0.0;
  std::size_t count = 0;
  for (const auto& f : fields) {
    power += f.squaredNorm();
    count += f.size();
  }
  if (count == 0) return fields;
  power /= static_cast<double>(count);

  const double noise_power = power * std::pow(10.0, -snr_db / 10.0);
  const double sigma_component = std::sqrt(noise_power / 2.0);

  std::vector<Eigen::VectorXcd> noisy = fields;
  for (auto& f : noisy)
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      f[i] += cd{sigma_component * re, sigma_component * im};
    }
  return noisy;
}

}  // namespace mwi
