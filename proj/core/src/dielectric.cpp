#include "mwi/dielectric.hpp"

#include <cmath>
#include <numbers>

namespace mwi {

std::complex<double> complex_permittivity(double eps_r, double sigma, double frequency) {
  const double omega = 2.0 * std::numbers::pi_v<double> * frequency;
  return {eps_r, -sigma / (omega * eps0)};
}

std::complex<double> background_wavenumber(const ImagingSetup& setup) {
  const double k0 = 2.0 * std::numbers::pi_v<double> * setup.frequency / c0;
  return k0 * std::sqrt(complex_permittivity(setup.eps_b, setup.sigma_b, setup.frequency));
}

PermittivityMap uniform_map(const Grid& grid, double eps_r, double sigma) {
  PermittivityMap map;
  map.grid = grid;
  map.eps_r = Eigen::VectorXd::Constant(grid.cell_count(), eps_r);
  map.sigma = Eigen::VectorXd::Constant(grid.cell_count(), sigma);
  return map;
}

Eigen::VectorXcd contrast(const PermittivityMap& map, const ImagingSetup& setup) {
  const std::complex<double> eps_bg =
      complex_permittivity(setup.eps_b, setup.sigma_b, setup.frequency);
  const int n = map.grid.cell_count();
  Eigen::VectorXcd tau(n);
  for (int i = 0; i < n; ++i)
    tau[i] = complex_permittivity(map.eps_r[i], map.sigma[i], setup.frequency) / eps_bg - 1.0;
  return tau;
}

std::vector<std::uint8_t> breast_support(const PermittivityMap& reference, double eps_b,
                                         double sigma_b) {
  const int n = reference.grid.cell_count();
  std::vector<std::uint8_t> mask(n, 0);
  const double eps_tol = 1e-12 * std::max(1.0, std::abs(eps_b));
  const double sig_tol = 1e-12 * std::max(1.0, std::abs(sigma_b));
  for (int i = 0; i < n; ++i)
    mask[i] = std::abs(reference.eps_r[i] - eps_b) > eps_tol ||
              std::abs(reference.sigma[i] - sigma_b) > sig_tol;
  return mask;
}

double min_wavelength(const PermittivityMap& map, double frequency) {
  const double eps_max = map.eps_r.maxCoeff();
  return c0 / (frequency * std::sqrt(eps_max));
}

}  // namespace mwi
