#pragma once

// Real homogeneous polynomials on RP^n in Kostlan-orthonormal coordinates.
//
// A degree-d form in n+1 variables is stored as the coefficient vector a of
//   s = sum_alpha a_alpha * w_alpha * x^alpha,
//   w_alpha = sqrt((n+d)! / (n! alpha_0! ... alpha_n!)),
// with exponents laid out in graded-lex order (alpha_0 descending first).
// With these weights the monomials are orthonormal for the L^2 product over
// the unit sphere of C^{n+1} with unit total mass (the Fubini-Study product of
// sections), so ||s||_{L^2} = |a|_2.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "rlab/rng.hpp"

namespace rlab {

inline constexpr std::size_t kDefaultMaxDimension = 5000;

/// Number of degree-d monomials in n+1 variables, binomial(n+d, n).
std::size_t monomial_count(int n, int d);

class KostlanBasis {
 public:
  KostlanBasis(int n, int d, std::size_t max_dimension = kDefaultMaxDimension);

  int n() const { return n_; }
  int d() const { return d_; }
  std::size_t dimension() const { return weights_.size(); }
  int variables() const { return n_ + 1; }

  /// Exponent vector of the i-th basis element (length n+1).
  std::span<const int> exponent(std::size_t i) const {
    return {exponents_.data() + i * static_cast<std::size_t>(n_ + 1),
            static_cast<std::size_t>(n_ + 1)};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }

  /// Position of an exponent vector in the coefficient layout.
  std::size_t index_of(std::span<const int> alpha) const;

  bool same_space(const KostlanBasis& other) const {
    return n_ == other.n_ && d_ == other.d_;
  }

 private:
  int n_;
  int d_;
  std::vector<int> exponents_;
  std::vector<double> weights_;
};

using BasisPtr = std::shared_ptr<const KostlanBasis>;

/// Shared, cached basis for (n, d). Throws DimensionError above the cap.
BasisPtr make_basis(int n, int d, std::size_t max_dimension = kDefaultMaxDimension);

class HomogeneousPolynomial {
 public:
  HomogeneousPolynomial(BasisPtr basis, std::vector<double> coeffs);
  /// The zero polynomial of the given space.
  explicit HomogeneousPolynomial(BasisPtr basis);

  /// Builds from coefficients in the plain monomial basis (same layout).
  static HomogeneousPolynomial from_monomials(BasisPtr basis,
                                              std::span<const double> monomials);

  const KostlanBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  int n() const { return basis_->n(); }
  int degree() const { return basis_->d(); }
  std::span<const double> coeffs() const { return coeffs_; }

  /// Plain monomial coefficients c_alpha = a_alpha * w_alpha.
  std::vector<double> monomial_coefficients() const;

  /// Euclidean norm of the Kostlan coordinates (= L^2 norm of the section).
  double norm() const;

  HomogeneousPolynomial scaled(double lambda) const;
  HomogeneousPolynomial operator+(const HomogeneousPolynomial& other) const;
  HomogeneousPolynomial operator-(const HomogeneousPolynomial& other) const;

  /// Value at an arbitrary point of R^{n+1}.
  double operator()(std::span<const double> x) const;

  /// Value and full Euclidean gradient (length n+1) at x.
  double value_and_gradient(std::span<const double> x, std::span<double> gradient) const;

 private:
  BasisPtr basis_;
  std::vector<double> coeffs_;
};

/// Value and covariant derivative of a section at a point of the unit sphere,
/// in the unit-norm real frame (the derivative is the Euclidean directional
/// derivative along an orthonormal frame of the tangent space x^perp).
struct SphereEvalJet {
  std::vector<double> point;
  double value = 0.0;
  std::vector<double> tangential_gradient;

  double gradient_norm() const;
};

/// Deterministic orthonormal frame of x^perp; rows are the n frame vectors.
std::vector<std::vector<double>> tangent_frame(std::span<const double> x);

inline constexpr double kUnitTolerance = 1e-9;

/// Throws InvalidArgument if |x| differs from 1 by more than kUnitTolerance.
SphereEvalJet eval_jet(const HomogeneousPolynomial& p, std::span<const double> x);
/// Same, with a caller-supplied orthonormal tangent frame.
SphereEvalJet eval_jet(const HomogeneousPolynomial& p, std::span<const double> x,
                       const std::vector<std::vector<double>>& frame);

/// Draws independent standard normal Kostlan coordinates.
HomogeneousPolynomial sample_gaussian(const BasisPtr& basis, const RngStream& stream);

/// Exact product, re-expressed in the degree-(d1+d2) Kostlan coordinates.
HomogeneousPolynomial multiply(const HomogeneousPolynomial& p, const HomogeneousPolynomial& q);

/// x^alpha for every basis element, scaled by the weight: row 0 of the jet frame.
void basis_values(const KostlanBasis& basis, std::span<const double> x, std::span<double> out);

}  // namespace rlab
