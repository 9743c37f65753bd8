#pragma once

// Independent reference computations used only by the tests. None of these
// share code paths with the library beyond polynomial evaluation.

#include <complex>
#include <random>
#include <vector>

#include "rlab/poly_core.hpp"

namespace oracle {

/// Hermitian Gram matrix of the basis for n = 1 by quadrature over the unit
/// sphere of C^2 with unit total mass.
std::vector<std::vector<double>> complex_sphere_gram(const rlab::KostlanBasis& basis, int nodes = 4000);

/// Tangential gradient along each frame vector by central differences along
/// great circles.
std::vector<double> geodesic_gradient(const rlab::HomogeneousPolynomial& p, const std::vector<double>& x,
                                      const std::vector<std::vector<double>>& frame, double h = 1e-5);

/// min |b| subject to (s+b)(x) = 0 and grad_T (s+b)(x) = 0, via a complete
/// orthogonal decomposition of the constraint matrix.
double constrained_distance(const rlab::HomogeneousPolynomial& s, const std::vector<double>& x);

/// Minimum of constrained_distance over `points` uniform angles of RP^1.
double dense_grid_distance(const rlab::HomogeneousPolynomial& s, int points = 10000);

struct EigenRoots {
  int real_roots = 0;
  bool clear = true;  ///< false when an eigenvalue is too close to the real axis to classify
};

/// Real projective roots of a binary form from companion-matrix eigenvalues.
EigenRoots companion_real_roots(const rlab::HomogeneousPolynomial& s);

struct GridTopology {
  int sphere_components = 0;
  int b0 = 0;
};

/// Marching squares with the asymptotic decider on an N x N grid per cube
/// face, crossings glued across faces by union-find.
GridTopology marching_topology(const rlab::HomogeneousPolynomial& s, int N);

/// Random point of the complex quadric sum z_i^2 = 0, unit Hermitian norm.
std::vector<std::complex<double>> quadric_point(int n, std::mt19937_64& rng);

std::complex<double> eval_complex(const rlab::HomogeneousPolynomial& p,
                                  const std::vector<std::complex<double>>& z);

std::vector<double> random_unit(int dim, std::mt19937_64& rng);

}  // namespace oracle
