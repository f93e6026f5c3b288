#pragma once

#include <complex>
#include <vector>

#include "mwi/dielectric.hpp"
#include "mwi/geometry.hpp"

namespace mwi {

// Discrete Green matrices for the method-of-moments discretization.
//
// Cell integrals of the background kernel -j(kappa^2/4) H0^(2)(kappa r)
// use the Richmond equal-area-circle closed forms with a = cell_side/sqrt(pi):
//   off-diagonal: -j(pi*kappa*a/2) J1(kappa*a) H0^(2)(kappa*d)
//   self term:    -j(pi*kappa*a/2) H1^(2)(kappa*a) - 1
// The sign makes the State equation E_inc = [I - G_B tau]E reproduce the
// physical scattered field (outgoing-wave Green function for the
// exp(+j*2*pi*f*t) convention); the static limit of the State diagonal is 1.

std::complex<double> richmond_offdiag(std::complex<double> kappa, double cell_size,
                                      double distance);
std::complex<double> richmond_self(std::complex<double> kappa, double cell_size);

// Internal homogeneous Green matrix G_B^Omega (N x N, symmetric).
Eigen::MatrixXcd green_b_internal(const Grid& grid, std::complex<double> kappa);

// External homogeneous Green matrix G_B^{Theta,v} (M x N) for view v,
// rows ordered by ascending receiver antenna index (transmitter skipped).
Eigen::MatrixXcd green_b_external(const Grid& grid, const ImagingSetup& setup,
                                  int view, std::complex<double> kappa);

// Internal inhomogeneous Green matrix G_N^Omega = [I - G_B tau_N]^{-1} G_B.
// Throws IllConditionedError when 1/rcond of the bracket exceeds 1e12; the
// defining-identity residual is checked to 1e-10 relative.
Eigen::MatrixXcd green_n_internal(const Eigen::MatrixXcd& gb_internal,
                                  const Eigen::VectorXcd& tau_n);

// External inhomogeneous Green matrix G_N^{Theta,v} = G_B^{Theta,v} [I + tau_N G_N^Omega].
Eigen::MatrixXcd green_n_external(const Eigen::MatrixXcd& gb_external,
                                  const Eigen::VectorXcd& tau_n,
                                  const Eigen::MatrixXcd& gn_internal);

struct IllConditionedError : std::runtime_error {
  double inverse_rcond;
  explicit IllConditionedError(double inv_rcond);
};

inline constexpr double kMaxInverseRcond = 1e12;

// All Green matrices of a reference scenario, computed once per prior.
struct GreenOperators {
  Eigen::MatrixXcd gb_internal;               // N x N
  std::vector<Eigen::MatrixXcd> gb_external;  // V matrices, M x N
  Eigen::MatrixXcd gn_internal;               // N x N
  std::vector<Eigen::MatrixXcd> gn_external;  // V matrices, M x N
  Eigen::VectorXcd reference_contrast;        // tau_N
};

GreenOperators build_green_operators(const PermittivityMap& reference,
                                     const ImagingSetup& setup);

}  // namespace mwi
