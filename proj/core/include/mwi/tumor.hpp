#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "mwi/dielectric.hpp"
#include "mwi/geometry.hpp"

namespace mwi {

// Low-dimensional tumor descriptor alpha = {eps_psi, sigma_psi, x_psi,
// y_psi, d_1..d_C}; K = 4 + C scalars. The boundary is the union of C
// quadratic arcs blending consecutive control points
//   r_c = r_psi + d_c * [cos(phi_c), sin(phi_c)],  phi_c = 2*pi*(c-1)/C
// with wraparound r_0 = r_C and r_{C+1} = r_1.
struct TumorDescriptor {
  double eps_psi = 0.0;
  double sigma_psi = 0.0;
  double x_psi = 0.0;
  double y_psi = 0.0;
  std::vector<double> d;  // C radial distances [m]

  int n_control() const { return static_cast<int>(d.size()); }
  int dim() const { return 4 + n_control(); }
  Eigen::Vector2d barycenter() const { return {x_psi, y_psi}; }
};

Eigen::VectorXd encode(const TumorDescriptor& desc);
TumorDescriptor decode(const Eigen::VectorXd& alpha);

// Per-dimension box bounds in descriptor order.
struct SearchSpace {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int dim() const { return static_cast<int>(lower.size()); }
  Eigen::VectorXd normalize(const Eigen::VectorXd& alpha) const;
  Eigen::VectorXd denormalize(const Eigen::VectorXd& unit) const;
};

// Default bounds for a breast support disc: barycenter within the support
// bounding box, d_c in [0.2, 2.0] cm, eps in [30, 80], sigma in
// [0.5, 3.0] S/m. All overridable through RunConfig.
SearchSpace default_search_space(int n_control, const Eigen::Vector2d& support_center,
                                 double support_radius);

// Closed polyline sampling the boundary: samples_per_arc points per arc,
// arc c sampled at l = 0, 1/s, ..., (s-1)/s (each arc's endpoint is the
// next arc's start). First vertex equals the blend of arc 1 at l = 0.
std::vector<Eigen::Vector2d> contour_points(const TumorDescriptor& desc,
                                            int samples_per_arc);

// Point on arc c (1-based) at parameter l in [0, 1].
Eigen::Vector2d contour_arc_point(const TumorDescriptor& desc, int c, double l);

struct RasterResult {
  std::vector<std::uint8_t> mask;  // 1 = cell center inside the contour
  bool valid = true;               // false: self-intersecting contour or d_c <= 0
};

// Even-odd rule at cell centers; samples_per_arc defaults to 32 everywhere.
RasterResult rasterize_tumor(const TumorDescriptor& desc, const Grid& grid,
                             int samples_per_arc = 32);

// Decoding rule: tumor cells take (eps_psi, sigma_psi); cells of the
// support outside the tumor keep the reference; cells outside the support
// keep the reference (background) untouched, i.e. the tumor mask is
// intersected with the support.
PermittivityMap decode_map(const TumorDescriptor& desc, const PermittivityMap& reference,
                           const std::vector<std::uint8_t>& support,
                           const RasterResult& raster);

// Homogeneous circular phantom: tissue disc of breast_radius centered at
// the grid center, background elsewhere.
PermittivityMap ideal_phantom(const Grid& grid, const ImagingSetup& setup,
                              double breast_radius, double eps_n, double sigma_n);

// Adds a concentric disc of different tissue (builds segmented-style
// phantoms: adipose outer disc + fibroglandular inner region, etc.).
void paint_disc(PermittivityMap& map, const Eigen::Vector2d& center, double radius,
                double eps_r, double sigma);

// Tumor-tissue perturbation: eps_tilde(delta) = (1 + delta) * eps_tilde_nom,
// applied to the complex permittivity at the given frequency and mapped
// back to (eps_r, sigma).
std::pair<double, double> perturb_tissue(double eps_r, double sigma, double delta,
                                         double frequency);

}  // namespace mwi
