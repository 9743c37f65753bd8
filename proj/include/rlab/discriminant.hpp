#pragma once

// Distance from a section to the real discriminant.
//
// For a point x of the sphere, the sections singular at x form the linear
// subspace {b : M b = 0}, where M is the (n+1) x N_d jet frame (basis values
// and tangential derivatives at x). The L^2 distance of s = sum a_i s_i to it
// is sqrt(a^T M^T A^{-1} M a) with A = M M^T; the distance to the discriminant
// is the minimum of this over the real locus.

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "rlab/poly_core.hpp"

namespace rlab {

struct JetFrame {
  std::vector<double> point;
  Eigen::MatrixXd M;  ///< (n+1) x N_d
  Eigen::MatrixXd A;  ///< M M^T
};

JetFrame make_jet_frame(const KostlanBasis& basis, std::span<const double> x);

/// L^2 distance from s to the sections singular at x. Uses a Cholesky solve.
/// Throws GramDegeneracyError if A is numerically singular.
double point_distance(const HomogeneousPolynomial& s, std::span<const double> x);

/// Volume convention used to turn Kostlan coordinates into pointwise norms
/// inside the asymptotic estimate. The Kostlan weights are orthonormal for
/// unit total volume ("probability"); the Bergman-kernel asymptotics behind
/// the pi^{n/2} constant hold for the Fubini-Study volume pi^n/n!, which
/// rescales pointwise values by sqrt(n!/pi^n).
enum class VolumeNormalization { FubiniStudy, Probability };

struct AsymptoticConvention {
  VolumeNormalization normalization = VolumeNormalization::FubiniStudy;
  /// Uniform rescaling of the tangential gradient (metric normalization).
  double grad_scale = 1.0;

  double pointwise_scale(int n) const;
};

struct DistanceResult {
  double exact = 0.0;
  double asymptotic = 0.0;
  std::vector<double> argmin_point;
  int grid_density = 0;
  bool refined = false;
  /// Largest Gram condition number met over the evaluated points.
  double gram_condition = 0.0;
  std::size_t evaluations = 0;
};

/// Minimizes the point distance over a projective grid (density 0 selects the
/// default), optionally followed by golden-section refinement around the best
/// grid point. `asymptotic` is pi^{n/2} times the minimum of
/// sqrt(|s(x)|^2/d^n + |grad s(x)|^2/d^{n+1}) over the same evaluated points.
DistanceResult distance_to_discriminant(const HomogeneousPolynomial& s, int grid_density = 0,
                                        bool refine = true,
                                        const AsymptoticConvention& convention = {});

/// Degree of the discriminant of degree-d forms on P^n: (n+1)(d-1)^n.
long long discriminant_degree(int n, int d);

/// True iff dist.exact <= r |coeffs(s)|.
bool tube_event(const HomogeneousPolynomial& s, double r, const DistanceResult& dist);

}  // namespace rlab
