#include "mwi/tumor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mwi {

namespace {

Eigen::Vector2d control_point(const TumorDescriptor& desc, int c) {
  // 1-based with wraparound: r_0 = r_C, r_{C+1} = r_1.
  const int n = desc.n_control();
  int idx = c;
  if (idx < 1) idx += n;
  if (idx > n) idx -= n;
  const double phi = 2.0 * std::numbers::pi * (idx - 1) / n;
  return desc.barycenter() + desc.d[idx - 1] * Eigen::Vector2d{std::cos(phi), std::sin(phi)};
}

// Proper segment intersection (shared endpoints of consecutive segments do
// not count). Used to reject self-intersecting contours.
bool segments_cross(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                    const Eigen::Vector2d& q1, const Eigen::Vector2d& q2) {
  const auto orient = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                         const Eigen::Vector2d& c) {
    const double v = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
  };
  const int o1 = orient(p1, p2, q1);
  const int o2 = orient(p1, p2, q2);
  const int o3 = orient(q1, q2, p1);
  const int o4 = orient(q1, q2, p2);
  return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

bool polyline_self_intersects(const std::vector<Eigen::Vector2d>& pts) {
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d& a1 = pts[i];
    const Eigen::Vector2d& a2 = pts[(i + 1) % n];
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // closing segment shares a vertex
      if (segments_cross(a1, a2, pts[j], pts[(j + 1) % n])) return true;
    }
  }
  return false;
}

bool point_inside_even_odd(const Eigen::Vector2d& p, const std::vector<Eigen::Vector2d>& pts) {
  bool inside = false;
  const int n = static_cast<int>(pts.size());
  for (int i = 0, j = n - 1; i < n; j = i++) {
    const Eigen::Vector2d& a = pts[i];
    const Eigen::Vector2d& b = pts[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x_cross = (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x();
      if (p.x() < x_cross) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

Eigen::VectorXd encode(const TumorDescriptor& desc) {
  Eigen::VectorXd alpha(desc.dim());
  alpha[0] = desc.eps_psi;
  alpha[1] = desc.sigma_psi;
  alpha[2] = desc.x_psi;
  alpha[3] = desc.y_psi;
  for (int c = 0; c < desc.n_control(); ++c) alpha[4 + c] = desc.d[c];
  return alpha;
}

TumorDescriptor decode(const Eigen::VectorXd& alpha) {
  if (alpha.size() < 5) throw std::invalid_argument("decode: need at least 5 entries");
  TumorDescriptor desc;
  desc.eps_psi = alpha[0];
  desc.sigma_psi = alpha[1];
  desc.x_psi = alpha[2];
  desc.y_psi = alpha[3];
  desc.d.assign(alpha.data() + 4, alpha.data() + alpha.size());
  return desc;
}

Eigen::VectorXd SearchSpace::normalize(const Eigen::VectorXd& alpha) const {
  return (alpha - lower).cwiseQuotient(upper - lower);
}

Eigen::VectorXd SearchSpace::denormalize(const Eigen::VectorXd& unit) const {
  return lower + unit.cwiseProduct(upper - lower);
}

SearchSpace default_search_space(int n_control, const Eigen::Vector2d& support_center,
                                 double support_radius) {
  if (n_control < 3) throw std::invalid_argument("default_search_space: need >= 3 arcs");
  const int dim = 4 + n_control;
  SearchSpace space;
  space.lower.resize(dim);
  space.upper.resize(dim);
  space.lower[0] = 30.0;
  space.upper[0] = 80.0;
  space.lower[1] = 0.5;
  space.upper[1] = 3.0;
  for (int k = 0; k < 2; ++k) {
    space.lower[2 + k] = support_center[k] - support_radius;
    space.upper[2 + k] = support_center[k] + support_radius;
  }
  for (int c = 0; c < n_control; ++c) {
    space.lower[4 + c] = 0.002;
    space.upper[4 + c] = 0.020;
  }
  return space;
}

Eigen::Vector2d contour_arc_point(const TumorDescriptor& desc, int c, double l) {
  if (desc.n_control() < 3)
    throw std::invalid_argument("contour_arc_point: need >= 3 control points");
  if (c < 1 || c > desc.n_control())
    throw std::invalid_argument("contour_arc_point: arc index out of range");
  const Eigen::Vector2d prev = control_point(desc, c - 1);
  const Eigen::Vector2d cur = control_point(desc, c);
  const Eigen::Vector2d next = control_point(desc, c + 1);
  const double w_cur = 0.5 + l - l * l;
  const double w_prev = 0.5 - l + 0.5 * l * l;
  const double w_next = 0.5 * l * l;
  return w_cur * cur + w_prev * prev + w_next * next;
}

std::vector<Eigen::Vector2d> contour_points(const TumorDescriptor& desc,
                                            int samples_per_arc) {
  if (samples_per_arc < 1) throw std::invalid_argument("contour_points: need >= 1 sample");
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(static_cast<std::size_t>(desc.n_control()) * samples_per_arc);
  for (int c = 1; c <= desc.n_control(); ++c)
    for (int s = 0; s < samples_per_arc; ++s)
      pts.push_back(contour_arc_point(desc, c, static_cast<double>(s) / samples_per_arc));
  return pts;
}

RasterResult rasterize_tumor(const TumorDescriptor& desc, const Grid& grid,
                             int samples_per_arc) {
  RasterResult out;
  out.mask.assign(grid.cell_count(), 0);
  if (desc.n_control() < 3) {
    out.valid = false;
    return out;
  }
  for (double dc : desc.d)
    if (!(dc > 0.0)) {
      out.valid = false;
      return out;
    }
  const std::vector<Eigen::Vector2d> pts = contour_points(desc, samples_per_arc);
  if (polyline_self_intersects(pts)) {
    out.valid = false;
    return out;
  }
  for (int i = 0; i < grid.cell_count(); ++i)
    if (point_inside_even_odd(grid.cell_center(i), pts)) out.mask[i] = 1;
  return out;
}

PermittivityMap decode_map(const TumorDescriptor& desc, const PermittivityMap& reference,
                           const std::vector<std::uint8_t>& support,
                           const RasterResult& raster) {
  if (support.size() != static_cast<std::size_t>(reference.grid.cell_count()) ||
      raster.mask.size() != support.size())
    throw std::invalid_argument("decode_map: mask size mismatch");
  PermittivityMap map = reference;
  for (int i = 0; i < map.grid.cell_count(); ++i)
    if (raster.mask[i] && support[i]) {
      map.eps_r[i] = desc.eps_psi;
      map.sigma[i] = desc.sigma_psi;
    }
  return map;
}

PermittivityMap ideal_phantom(const Grid& grid, const ImagingSetup& setup,
                              double breast_radius, double eps_n, double sigma_n) {
  if (2.0 * breast_radius > grid.side_length)
    throw std::invalid_argument("ideal_phantom: breast disc exceeds the grid");
  PermittivityMap map = uniform_map(grid, setup.eps_b, setup.sigma_b);
  paint_disc(map, grid.center, breast_radius, eps_n, sigma_n);
  return map;
}

void paint_disc(PermittivityMap& map, const Eigen::Vector2d& center, double radius,
                double eps_r, double sigma) {
  for (int i = 0; i < map.grid.cell_count(); ++i)
    if ((map.grid.cell_center(i) - center).norm() <= radius) {
      map.eps_r[i] = eps_r;
      map.sigma[i] = sigma;
    }
}

std::pair<double, double> perturb_tissue(double eps_r, double sigma, double delta,
                                         double frequency) {
  const double omega = 2.0 * std::numbers::pi * frequency;
  const std::complex<double> tilde =
      (1.0 + delta) * std::complex<double>{eps_r, -sigma / (omega * eps0)};
  return {tilde.real(), -tilde.imag() * omega * eps0};
}

}  // namespace mwi
