#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "mwi/fields.hpp"
#include "mwi/green.hpp"
#include "mwi/tumor.hpp"

namespace mwi {

// Measured differential data D_meas^{Theta,v}, one length-M vector per view.
struct MeasurementSet {
  std::vector<Eigen::VectorXcd> d_meas;
  double norm_sq() const;  // sum over views of ||D_meas||^2
};

// Everything precomputed once per reference scenario; immutable afterwards.
struct EvalContext {
  ImagingSetup setup;
  Grid grid;
  PermittivityMap reference;
  std::vector<std::uint8_t> support;   // Lambda
  Eigen::VectorXcd tau_n;
  GreenOperators ops;
  std::vector<Eigen::VectorXcd> e_inc;  // per view, length N
  MeasurementSet meas;
  std::complex<double> kappa_b;
  double phi_penalty = 10.0;
  int samples_per_arc = 32;
};

EvalContext make_eval_context(const PermittivityMap& reference, const ImagingSetup& setup,
                              MeasurementSet meas);

// Differential equivalent currents of a candidate map:
//   J_Delta^v = tau_Delta [I - G_B^Omega tau]^{-1} E_inc^v.
std::vector<Eigen::VectorXcd> differential_currents(const EvalContext& ctx,
                                                    const Eigen::VectorXcd& tau_candidate);

struct CostEval {
  double phi = 0.0;
  bool valid = true;  // false: penalized candidate (self-intersection, bad solve)
};

// Differential data-mismatch cost
//   Phi = sum_v ||D^{Theta,v}(alpha) - D_meas^{Theta,v}||^2 / sum_v ||D_meas^{Theta,v}||^2
// with D(alpha) radiated through the reference-scenario operators. Invalid
// candidates receive phi_penalty.
CostEval evaluate_cost(const EvalContext& ctx, const TumorDescriptor& desc);

// Mean normalized contrast error over a region: regions are the whole grid,
// the true tumor mask, or its complement.
enum class XiRegion { total, internal, external };

double xi_error(const Eigen::VectorXcd& tau_delta, const Eigen::VectorXcd& tau_delta_true,
                XiRegion region, const std::vector<std::uint8_t>& true_mask);

// Localization error and the detection rule zeta <= rho_true + chi.
struct Detection {
  double zeta = 0.0;
  bool detected = false;
};

Detection zeta_and_detect(const Eigen::Vector2d& reconstructed_barycenter,
                          const Eigen::Vector2d& true_barycenter, double rho_true,
                          double chi);

// Fraction of full-wave evaluations saved relative to a plain run of T = P*I.
double eta_saving(int full_wave_count, int swarm, int iterations);

}  // namespace mwi
