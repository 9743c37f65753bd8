#pragma once

// Orthogonal splitting of a section against the sigma^ell-divisible subspace.
//
// sigma = x_0^2 + ... + x_n^2 has no real zeros, so a section divisible by
// sigma^ell has the same real zero locus as its quotient. split() writes
// s = s_zero + s_perp with s_zero = sigma^ell * quotient in the image of
// multiplication by sigma^ell and s_perp orthogonal to it.

#include <Eigen/Dense>
#include <memory>

#include "rlab/discriminant.hpp"
#include "rlab/poly_core.hpp"

namespace rlab {

struct SigmaSection {
  HomogeneousPolynomial poly;
  int k = 2;
};

/// sigma = sum x_i^2 in degree-2 Kostlan coordinates.
SigmaSection build_sigma(int n);

/// Multiplication by sigma^ell as a matrix from degree-(d-2 ell) to degree-d
/// Kostlan coordinates, with a cached orthonormal basis of its image.
class SubspaceMap {
 public:
  SubspaceMap(const KostlanBasis& basis_d, const SigmaSection& sigma, int ell);

  int ell() const { return ell_; }
  const BasisPtr& source_basis() const { return source_; }
  const BasisPtr& target_basis() const { return target_; }
  /// N_d x N_{d-2 ell}
  const Eigen::MatrixXd& matrix() const { return T_; }
  /// N_d x N_{d-2 ell}, orthonormal columns spanning image(T).
  const Eigen::MatrixXd& orthonormal_image() const { return Q_; }
  /// Numerical rank of T (column-pivoted QR, relative threshold 1e-10).
  Eigen::Index rank() const { return rank_; }

  /// Orthogonal projection of Kostlan coordinates onto image(T).
  Eigen::VectorXd project(const Eigen::VectorXd& a) const;
  /// Least-squares preimage under T.
  Eigen::VectorXd preimage(const Eigen::VectorXd& b) const;

 private:
  int ell_;
  BasisPtr source_;
  BasisPtr target_;
  Eigen::MatrixXd T_;
  Eigen::MatrixXd Q_;
  Eigen::MatrixXd R_;
  Eigen::Index rank_ = 0;
};

/// Shared map for sigma = sum x_i^2 on (n, d, ell); built once per key.
std::shared_ptr<const SubspaceMap> subspace_map(int n, int d, int ell);

struct C1Norm {
  double value = 0.0;  ///< max |s| + max |grad s| over the grid
  double max_value = 0.0;
  double max_gradient = 0.0;
  int grid_density = 0;
};

/// Grid estimate of the C^1 norm on the real locus; density 0 selects the default.
C1Norm c1_norm(const HomogeneousPolynomial& s, int grid_density = 0);

struct ProjectionSplit {
  HomogeneousPolynomial s_zero;
  HomogeneousPolynomial s_perp;
  HomogeneousPolynomial quotient;
  int ell = 0;
  double c1_perp = 0.0;
  int c1_grid_density = 0;
};

ProjectionSplit split(const HomogeneousPolynomial& s, const SigmaSection& sigma, int ell,
                      int c1_grid_density = 0);
ProjectionSplit split(const HomogeneousPolynomial& s, const SubspaceMap& map,
                      int c1_grid_density = 0);

struct ApproximationResult {
  bool criterion_holds = false;
  HomogeneousPolynomial s_prime;
  /// d^{n/2} / (4 pi^{n/2}) * dist - c1_perp
  double margin = 0.0;
  double threshold = 0.0;
  double c1_perp = 0.0;
};

/// Isotopy criterion c1_perp < d^{n/2}/(4 pi^{n/2}) dist_exact; s_prime is the quotient.
ApproximationResult approx_pipeline(const HomogeneousPolynomial& s, const SigmaSection& sigma,
                                    int ell, const DistanceResult& dist);
ApproximationResult approx_pipeline(const ProjectionSplit& split, const DistanceResult& dist);

}  // namespace rlab
