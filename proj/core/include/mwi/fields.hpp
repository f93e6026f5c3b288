#pragma once

#include <complex>
#include <vector>

#include "mwi/dielectric.hpp"
#include "mwi/geometry.hpp"
#include "mwi/green.hpp"
#include "mwi/rng.hpp"

namespace mwi {

// Line-current incident field in kernel form,
//   E_inc^v(r) = -j(kappa^2/4) H0^(2)(kappa ||r - r^v||).
// The source amplitude is arbitrary (the data-mismatch cost is a ratio and
// cancels it); the kernel normalization keeps field magnitudes O(1).
Eigen::VectorXcd incident_field(const Grid& grid, const ImagingSetup& setup, int view,
                                std::complex<double> kappa);

// Incident field sampled at the receiver ring positions of a view.
Eigen::VectorXcd incident_field_at_receivers(const ImagingSetup& setup, int view,
                                             std::complex<double> kappa);

// Method-of-moments solution of the State and Data equations for one map:
//   E^v = [I - G_B^Omega tau]^{-1} E_inc^v
//   S^v = G_B^{Theta,v} (tau E^v)
struct FieldSet {
  std::vector<Eigen::VectorXcd> incident;                // V vectors, length N
  std::vector<Eigen::VectorXcd> total;                   // V vectors, length N
  std::vector<Eigen::VectorXcd> scattered_at_receivers;  // V vectors, length M
};

FieldSet forward_solve(const PermittivityMap& map, const ImagingSetup& setup);

// Differential data radiated by per-view currents through the reference
// scenario: D^{Theta,v} = G_N^{Theta,v} J_Delta^v.
std::vector<Eigen::VectorXcd> differential_field_data(
    const GreenOperators& ops, const std::vector<Eigen::VectorXcd>& j_delta);

// Additive white complex Gaussian noise at the requested SNR, measured
// against the mean power of the input samples across all views. A
// non-finite snr_db (e.g. +infinity) is the no-noise sentinel. Splitting
// the per-sample draws: per view, per receiver, real part then imaginary.
std::vector<Eigen::VectorXcd> add_awgn(const std::vector<Eigen::VectorXcd>& fields,
                                       double snr_db, Rng& rng);

}  // namespace mwi
