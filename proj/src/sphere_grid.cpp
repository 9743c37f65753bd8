#include "rlab/sphere_grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rlab/errors.hpp"

namespace rlab {

PointSet projective_grid(int n, int density) {
  if (density < 1) throw InvalidArgument("grid density must be positive");
  std::vector<double> coords;
  if (n == 1) {
    coords.reserve(2 * static_cast<std::size_t>(density));
    for (int k = 0; k < density; ++k) {
      const double theta = std::numbers::pi * k / density;
      coords.push_back(std::cos(theta));
      coords.push_back(std::sin(theta));
    }
    return {2, std::move(coords)};
  }
  if (n == 2) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    coords.reserve(3 * static_cast<std::size_t>(density));
    for (int k = 0; k < density; ++k) {
      const double z = (k + 0.5) / density;
      const double r = std::sqrt(1.0 - z * z);
      const double phi = golden * k;
      coords.push_back(r * std::cos(phi));
      coords.push_back(r * std::sin(phi));
      coords.push_back(z);
    }
    return {3, std::move(coords)};
  }
  throw InvalidArgument("sphere grids are implemented for n in {1,2}, got n = " + std::to_string(n));
}

int default_grid_density(int n, int d) {
  if (n == 1) return 64 * d;
  if (n == 2) return 16 * d * d;
  throw InvalidArgument("no default grid density for n = " + std::to_string(n));
}

double grid_spacing(int n, int density) {
  if (n == 1) return std::numbers::pi / density;
  return std::sqrt(2.0 * std::numbers::pi / density);
}

}  // namespace rlab
