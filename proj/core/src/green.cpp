#include "mwi/green.hpp"

#include <cmath>
#include <numbers>

#include "mwi/special.hpp"

namespace mwi {

namespace {
using cd = std::complex<double>;
constexpr cd kJ{0.0, 1.0};
constexpr double kPi = std::numbers::pi_v<double>;

double equal_area_radius(double cell_size) { return cell_size / std::sqrt(kPi); }
}  // namespace

IllConditionedError::IllConditionedError(double inv_rcond)
    : std::runtime_error("linear system ill conditioned, 1/rcond ~ " +
                         std::to_string(inv_rcond)),
      inverse_rcond(inv_rcond) {}

std::complex<double> richmond_offdiag(std::complex<double> kappa, double cell_size,
                                      double distance) {
  const double a = equal_area_radius(cell_size);
  return -kJ * (kPi * kappa * a / 2.0) * special::bessel_j1(kappa * a) *
         special::hankel2_0(kappa * distance);
}

std::complex<double> richmond_self(std::complex<double> kappa, double cell_size) {
  const double a = equal_area_radius(cell_size);
  return -kJ * (kPi * kappa * a / 2.0) * special::hankel2_1(kappa * a) - 1.0;
}

Eigen::MatrixXcd green_b_internal(const Grid& grid, std::complex<double> kappa) {
  const int n = grid.cell_count();
  const double h = grid.cell_size();
  const double a = equal_area_radius(h);
  const cd j1_factor = -kJ * (kPi * kappa * a / 2.0) * special::bessel_j1(kappa * a);
  const cd self = richmond_self(kappa, h);

  Eigen::MatrixXcd g(n, n);
  for (int r = 0; r < n; ++r) {
    g(r, r) = self;
    const Eigen::Vector2d pr = grid.cell_center(r);
    for (int s = r + 1; s < n; ++s) {
      const double d = (grid.cell_center(s) - pr).norm();
      const cd entry = j1_factor * special::hankel2_0(kappa * d);
      g(r, s) = entry;
      g(s, r) = entry;
    }
  }
  return g;
}

Eigen::MatrixXcd green_b_external(const Grid& grid, const ImagingSetup& setup, int view,
                                  std::complex<double> kappa) {
  validate(setup, grid);
  const int n = grid.cell_count();
  const int m = setup.n_receivers();
  const double h = grid.cell_size();
  const double a = equal_area_radius(h);
  const cd j1_factor = -kJ * (kPi * kappa * a / 2.0) * special::bessel_j1(kappa * a);

  Eigen::MatrixXcd g(m, n);
  for (int r = 0; r < m; ++r) {
    const Eigen::Vector2d pr = setup.antenna_position(setup.receiver_antenna(view, r));
    for (int s = 0; s < n; ++s) {
      const double d = (grid.cell_center(s) - pr).norm();
      g(r, s) = j1_factor * special::hankel2_0(kappa * d);
    }
  }
  return g;
}

Eigen::MatrixXcd green_n_internal(const Eigen::MatrixXcd& gb_internal,
                                  const Eigen::VectorXcd& tau_n) {
  const int n = static_cast<int>(gb_internal.rows());
  Eigen::MatrixXcd bracket = Eigen::MatrixXcd::Identity(n, n);
  bracket.noalias() -= gb_internal * tau_n.asDiagonal();

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(bracket);
  const double rcond = lu.rcond();
  if (!(rcond > 0.0) || 1.0 / rcond > kMaxInverseRcond)
    throw IllConditionedError(rcond > 0.0 ? 1.0 / rcond
                                          : std::numeric_limits<double>::infinity());
  return lu.solve(gb_internal);
}

Eigen::MatrixXcd green_n_external(const Eigen::MatrixXcd& gb_external,
                                  const Eigen::VectorXcd& tau_n,
                                  const Eigen::MatrixXcd& gn_internal) {
  if (gb_external.cols() != gn_internal.rows())
    throw std::invalid_argument("green_n_external: dimension mismatch");
  Eigen::MatrixXcd result = gb_external;
  result.noalias() += gb_external * (tau_n.asDiagonal() * gn_internal);
  return result;
}

GreenOperators build_green_operators(const PermittivityMap& reference,
                                     const ImagingSetup& setup) {
  validate(setup, reference.grid);
  const cd kappa = background_wavenumber(setup);

  GreenOperators ops;
  ops.reference_contrast = contrast(reference, setup);
  ops.gb_internal = green_b_internal(reference.grid, kappa);
  ops.gn_internal = green_n_internal(ops.gb_internal, ops.reference_contrast);

  // Defining-identity residual, relative to ||G_B||.
  const Eigen::MatrixXcd bracket =
      Eigen::MatrixXcd::Identity(ops.gb_internal.rows(), ops.gb_internal.cols()) -
      ops.gb_internal * ops.reference_contrast.asDiagonal();
  const double residual =
      (bracket * ops.gn_internal - ops.gb_internal).norm() / ops.gb_internal.norm();
  if (residual > 1e-10)
    throw IllConditionedError(residual / 1e-16);

  ops.gb_external.reserve(setup.n_views);
  ops.gn_external.reserve(setup.n_views);
  for (int v = 0; v < setup.n_views; ++v) {
    ops.gb_external.push_back(green_b_external(reference.grid, setup, v, kappa));
    ops.gn_external.push_back(
        green_n_external(ops.gb_external[v], ops.reference_contrast, ops.gn_internal));
  }
  return ops;
}

}  // namespace mwi
