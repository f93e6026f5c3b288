#include "mwi/geometry.hpp"

namespace mwi {

void validate(const ImagingSetup& setup, const Grid& grid) {
  if (grid.n_per_side < 1 || grid.side_length <= 0.0)
    throw std::invalid_argument("grid must have n >= 1 cells and positive side length");
  if (setup.n_views < 2)
    throw std::invalid_argument("setup needs at least 2 antennas");
  if (!(setup.frequency > 0.0))
    throw std::invalid_argument("frequency must be positive");
  if (setup.eps_b < 1.0 || setup.sigma_b < 0.0)
    throw std::invalid_argument("background must have eps_r >= 1 and sigma >= 0");
  const double offset = (setup.center - grid.center).norm();
  if (setup.ring_radius - offset <= grid.circumscribed_radius())
    throw std::invalid_argument(
        "antenna ring must lie strictly outside the grid (Theta and Omega intersect)");
}

}  // namespace mwi
