#pragma once

// Certified topology of real zero sets on RP^1 and RP^2.

#include <array>
#include <string>
#include <vector>

#include "rlab/poly_core.hpp"

namespace rlab {

struct RootCount {
  int degree = 0;
  int real_roots = 0;  ///< distinct projective real zeros
  bool certified = false;
};

/// Sturm-sequence count of the real projective zeros of a binary form.
RootCount count_real_roots(const HomogeneousPolynomial& s);

struct CurveTopology {
  int degree = 0;
  int b0 = 0;
  int ovals = 0;
  int pseudolines = 0;
  /// For each oval, the index of the oval immediately enclosing it, or -1.
  std::vector<int> nest_parent;
  /// Nest depth of each oval (outermost ovals have depth 1).
  std::vector<int> oval_depth;
  int max_nest_depth = 0;
  bool certified = false;
  int harnack_bound = 0;
  bool maximal = false;

  /// Components of the lift to S^2 (= 2 ovals + pseudolines when certified).
  int sphere_components = 0;
  std::size_t leaves = 0;
  int deepest_level = 0;
  /// Why certification failed; empty when certified.
  std::string failure;
  /// Traced curve as unit-sphere segments, filled when requested.
  std::vector<std::array<double, 6>> trace;
};

struct TopologyOptions {
  /// Subdivision depth cap per cube face (cells of width 2^{1-depth}).
  int max_depth = 12;
  int initial_depth = 2;
  bool keep_trace = false;
};

inline constexpr int kDefaultResolution = 12;

/// Adaptive, interval-certified subdivision of the cube sphere. `resolution`
/// is the subdivision depth cap. Uncertified results carry no counts.
CurveTopology curve_topology(const HomogeneousPolynomial& s, int resolution = kDefaultResolution);
CurveTopology curve_topology(const HomogeneousPolynomial& s, const TopologyOptions& options);

/// (d-1)(d-2)/2 + 1
int harnack_bound(int d);

/// Total Betti number of the smooth complex zero locus: d for n = 1,
/// d^2 - 3d + 4 for n = 2.
long long complex_total_betti(int n, int d);

/// b0 == harnack bound for curves, all roots real for binary forms.
/// Throws UncertifiedError on uncertified input.
bool maximality_verdict(const CurveTopology& topology);
bool maximality_verdict(const RootCount& roots);

/// SVG of a traced curve, orthographic views of the two hemispheres.
std::string curve_svg(const CurveTopology& topology);

}  // namespace rlab
