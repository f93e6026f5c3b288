#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "mwi/geometry.hpp"

namespace mwi {

inline constexpr double c0 = 299792458.0;          // [m/s]
inline constexpr double eps0 = 8.8541878128e-12;   // [F/m]

// Relative complex permittivity eps_r - j*sigma/(2*pi*f*eps0) for the
// exp(+j*2*pi*f*t) time convention (lossy media have negative imaginary
// part). The eps0 factor cancels in every contrast ratio, so the relative
// form is used throughout.
std::complex<double> complex_permittivity(double eps_r, double sigma, double frequency);

// Background wavenumber kappa_B = (2*pi*f/c0) * sqrt(eps_tilde_rel,B),
// principal square root, so Im(kappa_B) <= 0 for a lossy background.
std::complex<double> background_wavenumber(const ImagingSetup& setup);

// Per-cell dielectric profile on a grid: relative permittivity and
// conductivity, row-major cell order. Serves as actual, reference, and
// reconstructed map alike.
struct PermittivityMap {
  Grid grid;
  Eigen::VectorXd eps_r;
  Eigen::VectorXd sigma;

  bool same_shape(const PermittivityMap& other) const {
    return grid.n_per_side == other.grid.n_per_side &&
           grid.side_length == other.grid.side_length;
  }
};

PermittivityMap uniform_map(const Grid& grid, double eps_r, double sigma);

// Contrast tau_n = eps_tilde(n)/eps_tilde_B - 1 per cell.
Eigen::VectorXcd contrast(const PermittivityMap& map, const ImagingSetup& setup);

// Breast support Lambda: cells where the reference differs from the
// background medium (relative tolerance 1e-12).
std::vector<std::uint8_t> breast_support(const PermittivityMap& reference,
                                         double eps_b, double sigma_b);

// Wavelength in the highest-permittivity tissue of the map (lossless
// approximation: uses eps_r only).
double min_wavelength(const PermittivityMap& map, double frequency);

}  // namespace mwi
