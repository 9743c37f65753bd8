#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rlab {

/// Points of the unit sphere S^n stored row-major, one point per row.
class PointSet {
 public:
  PointSet(int dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {}

  int dim() const { return dim_; }
  std::size_t size() const { return coords_.size() / static_cast<std::size_t>(dim_); }
  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }

 private:
  int dim_;
  std::vector<double> coords_;
};

/// Quasi-uniform grid of RP^n with antipodes identified: uniform angles on
/// [0, pi) for n = 1, a Fibonacci lattice on the open upper hemisphere for n = 2.
PointSet projective_grid(int n, int density);

/// Default density: 64 d points for n = 1, 16 d^2 for n = 2.
int default_grid_density(int n, int d);

/// Typical spacing between neighbouring grid points, in radians.
double grid_spacing(int n, int density);

}  // namespace rlab
