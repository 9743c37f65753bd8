#pragma once

#include <array>
#include <utility>
#include <vector>

#include "rlab/poly_core.hpp"

namespace testing {

/// Builds a form from (exponent, monomial coefficient) pairs.
template <std::size_t V>
rlab::HomogeneousPolynomial monomials(int d, const std::vector<std::pair<std::array<int, V>, double>>& terms) {
  auto basis = rlab::make_basis(static_cast<int>(V) - 1, d);
  std::vector<double> m(basis->dimension(), 0.0);
  for (const auto& [alpha, c] : terms) m[basis->index_of(alpha)] += c;
  return rlab::HomogeneousPolynomial::from_monomials(basis, m);
}

inline rlab::HomogeneousPolynomial sample(int n, int d, std::uint64_t seed, std::uint64_t index) {
  return rlab::sample_gaussian(rlab::make_basis(n, d), rlab::sample_stream(seed, d, index));
}

}  // namespace testing
