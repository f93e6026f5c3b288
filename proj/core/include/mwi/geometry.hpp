#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mwi {

// Square imaging domain, n_per_side x n_per_side equal square cells,
// centered at `center`. Cells are indexed row-major from the lower-left
// corner: idx = iy * n_per_side + ix, x increasing with ix, y with iy.
struct Grid {
  double side_length = 0.0;  // L [m]
  int n_per_side = 0;        // n
  Eigen::Vector2d center{0.0, 0.0};

  int cell_count() const { return n_per_side * n_per_side; }
  double cell_size() const { return side_length / n_per_side; }
  double cell_area() const { return cell_size() * cell_size(); }

  Eigen::Vector2d cell_center(int idx) const {
    const int ix = idx % n_per_side;
    const int iy = idx / n_per_side;
    const double h = cell_size();
    return {center.x() - 0.5 * side_length + (ix + 0.5) * h,
            center.y() - 0.5 * side_length + (iy + 0.5) * h};
  }

  // Radius of the circle through the domain corners.
  double circumscribed_radius() const {
    return 0.5 * side_length * std::numbers::sqrt2_v<double>;
  }
};

// Multi-view/multi-static ring of V antennas around the grid. Antenna v
// (0-based) sits at angle 2*pi*v/V on a circle of radius ring_radius about
// `center`. For view v the M = V-1 receivers are the remaining antennas in
// ascending index order.
struct ImagingSetup {
  double frequency = 0.0;    // f [Hz]
  double eps_b = 1.0;        // background relative permittivity
  double sigma_b = 0.0;      // background conductivity [S/m]
  int n_views = 0;           // V
  double ring_radius = 0.0;  // rho_Theta [m]
  Eigen::Vector2d center{0.0, 0.0};

  int n_receivers() const { return n_views - 1; }

  Eigen::Vector2d antenna_position(int v) const {
    const double phi = 2.0 * std::numbers::pi_v<double> * v / n_views;
    return {center.x() + ring_radius * std::cos(phi),
            center.y() + ring_radius * std::sin(phi)};
  }

  // Antenna index of the m-th receiver (0-based) for transmitting view v.
  int receiver_antenna(int v, int m) const { return m < v ? m : m + 1; }
};

// Throws std::invalid_argument when the ring does not enclose the grid
// (Theta and Omega must not intersect) or basic counts are out of range.
void validate(const ImagingSetup& setup, const Grid& grid);

}  // namespace mwi
