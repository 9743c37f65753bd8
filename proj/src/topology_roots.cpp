#include <algorithm>
#include <cmath>
#include <vector>

#include "rlab/errors.hpp"
#include "rlab/topology.hpp"

namespace rlab {

namespace {

using Real = long double;
using Poly = std::vector<Real>;  // ascending powers

constexpr Real kPivotTolerance = 1e-12L;
// Chart split point: roots with |x1/x0| < tau are counted in the first chart,
// the rest in the second. Chosen away from 0, 1 and other simple ratios.
constexpr Real kChartSplit = 1.0737L;

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0.0L) p.pop_back();
}

Real max_abs(const Poly& p) {
  Real m = 0.0L;
  for (Real c : p) m = std::max(m, std::abs(c));
  return m;
}

void normalize(Poly& p) {
  const Real m = max_abs(p);
  if (m > 0.0L) {
    for (Real& c : p) c /= m;
  }
}

Real eval(const Poly& p, Real x) {
  Real v = 0.0L;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
  return v;
}

Real eval_abs(const Poly& p, Real x) {
  Real v = 0.0L;
  const Real ax = std::abs(x);
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * ax + std::abs(*it);
  return v;
}

Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(static_cast<Real>(i) * p[i]);
  return d;
}

// Remainder of a divided by b (deg b >= 0, b nonzero leading coefficient).
Poly remainder(Poly a, const Poly& b) {
  const std::size_t db = b.size() - 1;
  while (a.size() >= b.size()) {
    const Real q = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i <= db; ++i) a[shift + i] -= q * b[i];
    a.pop_back();
  }
  return a;
}

int sign_variations(const std::vector<Poly>& seq, Real x) {
  int count = 0;
  int last = 0;
  for (const auto& p : seq) {
    const Real v = eval(p, x);
    const int s = (v > 0.0L) - (v < 0.0L);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

struct IntervalCount {
  int roots = 0;
  bool certified = true;
};

// Distinct real roots of p in the open interval (lo, hi), endpoints non-roots.
IntervalCount sturm_count(Poly p, Real lo, Real hi) {
  IntervalCount out;
  trim(p);
  if (p.empty()) {
    out.certified = false;  // identically zero
    return out;
  }
  if (p.size() == 1) return out;
  normalize(p);
  for (Real x : {lo, hi}) {
    if (std::abs(eval(p, x)) <= kPivotTolerance * eval_abs(p, x)) out.certified = false;
  }

  std::vector<Poly> seq;
  seq.push_back(p);
  Poly d = derivative(p);
  normalize(d);
  seq.push_back(d);
  while (seq.back().size() > 1) {
    Poly r = remainder(seq[seq.size() - 2], seq.back());
    for (Real& c : r) c = -c;
    const Real size = max_abs(r);
    if (size <= kPivotTolerance) {
      // Numerically nontrivial gcd: a (near-)repeated root.
      out.certified = false;
      break;
    }
    // Leading coefficient of the remainder is the pivot of the next division.
    std::size_t deg = r.size();
    while (deg > 0 && std::abs(r[deg - 1]) <= kPivotTolerance * size) --deg;
    if (deg != r.size()) {
      out.certified = false;
      r.resize(deg);
    }
    normalize(r);
    seq.push_back(std::move(r));
  }
  out.roots = sign_variations(seq, lo) - sign_variations(seq, hi);
  if (out.roots < 0) {
    out.roots = 0;
    out.certified = false;
  }
  return out;
}

}  // namespace

RootCount count_real_roots(const HomogeneousPolynomial& s) {
  if (s.n() != 1) throw InvalidArgument("count_real_roots requires a binary form (n = 1)");
  const int d = s.degree();
  RootCount out;
  out.degree = d;
  out.certified = true;
  if (d == 0) return out;

  // Monomial coefficient k multiplies x0^{d-k} x1^k.
  const auto c = s.monomial_coefficients();
  Poly in_t(static_cast<std::size_t>(d) + 1), in_u(static_cast<std::size_t>(d) + 1);
  for (int k = 0; k <= d; ++k) {
    in_t[k] = c[k];      // x0 = 1, t = x1
    in_u[d - k] = c[k];  // x1 = 1, u = x0
  }
  // |t| < tau in the first chart; |u| <= 1/tau (i.e. |t| >= tau, or t = inf) in the second.
  const IntervalCount first = sturm_count(in_t, -kChartSplit, kChartSplit);
  const Real inv = 1.0L / kChartSplit;
  IntervalCount second = sturm_count(in_u, -inv, inv);
  out.real_roots = first.roots + second.roots;
  out.certified = first.certified && second.certified;
  if (out.real_roots > d) out.certified = false;
  return out;
}

}  // namespace rlab
