#include "rlab/poly_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <utility>

#include "rlab/errors.hpp"

namespace rlab {

namespace {

// Compositions of m into k non-negative parts.
std::size_t compositions(int m, int k) {
  if (k <= 0) return m == 0 ? 1 : 0;
  return monomial_count(k - 1, m);
}

void enumerate(int vars_left, int remaining, std::vector<int>& prefix, std::vector<int>& out) {
  if (vars_left == 1) {
    prefix.push_back(remaining);
    out.insert(out.end(), prefix.begin(), prefix.end());
    prefix.pop_back();
    return;
  }
  for (int a = remaining; a >= 0; --a) {
    prefix.push_back(a);
    enumerate(vars_left - 1, remaining - a, prefix, out);
    prefix.pop_back();
  }
}

void power_table(std::span<const double> x, int d, std::vector<double>& table) {
  const std::size_t stride = static_cast<std::size_t>(d) + 1;
  table.assign(x.size() * stride, 1.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (int k = 1; k <= d; ++k) table[i * stride + k] = table[i * stride + k - 1] * x[i];
  }
}

}  // namespace

std::size_t monomial_count(int n, int d) {
  if (n < 0 || d < 0) return 0;
  // binomial(n+d, n) with saturation.
  const int k = std::min(n, d);
  long double acc = 1.0L;
  for (int i = 1; i <= k; ++i) {
    acc = acc * static_cast<long double>(n + d - k + i) / static_cast<long double>(i);
  }
  if (acc > static_cast<long double>(std::numeric_limits<std::size_t>::max() / 2)) {
    return std::numeric_limits<std::size_t>::max() / 2;
  }
  return static_cast<std::size_t>(std::llround(acc));
}

KostlanBasis::KostlanBasis(int n, int d, std::size_t max_dimension) : n_(n), d_(d) {
  if (n < 1) throw InvalidArgument("basis requires n >= 1, got " + std::to_string(n));
  if (d < 0) throw InvalidArgument("basis requires d >= 0, got " + std::to_string(d));
  const std::size_t count = monomial_count(n, d);
  if (count > max_dimension) {
    throw DimensionError("dimension binomial(" + std::to_string(n + d) + "," + std::to_string(n) +
                         ") = " + std::to_string(count) + " exceeds cap " +
                         std::to_string(max_dimension));
  }
  exponents_.reserve(count * static_cast<std::size_t>(n + 1));
  std::vector<int> prefix;
  enumerate(n + 1, d, prefix, exponents_);

  weights_.resize(count);
  const double head = std::lgamma(n + d + 1.0) - std::lgamma(n + 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    double log_w2 = head;
    for (int a : exponent(i)) log_w2 -= std::lgamma(a + 1.0);
    weights_[i] = std::exp(0.5 * log_w2);
  }
}

std::size_t KostlanBasis::index_of(std::span<const int> alpha) const {
  if (alpha.size() != static_cast<std::size_t>(n_ + 1)) {
    throw InvalidArgument("exponent has wrong length");
  }
  std::size_t rank = 0;
  int remaining = d_;
  for (int i = 0; i < n_; ++i) {
    const int parts = n_ - i;
    for (int v = remaining; v > alpha[i]; --v) rank += compositions(remaining - v, parts);
    remaining -= alpha[i];
  }
  if (remaining != alpha[n_]) throw InvalidArgument("exponent does not sum to the degree");
  return rank;
}

BasisPtr make_basis(int n, int d, std::size_t max_dimension) {
  if (n >= 1 && d >= 0 && monomial_count(n, d) > max_dimension) {
    throw DimensionError("dimension binomial(" + std::to_string(n + d) + "," + std::to_string(n) +
                         ") exceeds cap " + std::to_string(max_dimension));
  }
  static std::mutex mutex;
  static std::map<std::pair<int, int>, BasisPtr> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, d}];
  if (!slot) slot = std::make_shared<const KostlanBasis>(n, d, max_dimension);
  return slot;
}

HomogeneousPolynomial::HomogeneousPolynomial(BasisPtr basis, std::vector<double> coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
  if (!basis_) throw InvalidArgument("null basis");
  if (coeffs_.size() != basis_->dimension()) {
    throw DimensionError("coefficient vector has length " + std::to_string(coeffs_.size()) +
                         ", expected " + std::to_string(basis_->dimension()));
  }
}

HomogeneousPolynomial::HomogeneousPolynomial(BasisPtr basis)
    : HomogeneousPolynomial(basis, std::vector<double>(basis ? basis->dimension() : 0, 0.0)) {}

HomogeneousPolynomial HomogeneousPolynomial::from_monomials(BasisPtr basis,
                                                            std::span<const double> monomials) {
  if (monomials.size() != basis->dimension()) {
    throw DimensionError("monomial vector has wrong length");
  }
  std::vector<double> a(monomials.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = monomials[i] / basis->weight(i);
  return {std::move(basis), std::move(a)};
}

std::vector<double> HomogeneousPolynomial::monomial_coefficients() const {
  std::vector<double> c(coeffs_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = coeffs_[i] * basis_->weight(i);
  return c;
}

double HomogeneousPolynomial::norm() const {
  double s = 0.0;
  for (double a : coeffs_) s += a * a;
  return std::sqrt(s);
}

HomogeneousPolynomial HomogeneousPolynomial::scaled(double lambda) const {
  std::vector<double> c(coeffs_);
  for (double& v : c) v *= lambda;
  return {basis_, std::move(c)};
}

HomogeneousPolynomial HomogeneousPolynomial::operator+(const HomogeneousPolynomial& other) const {
  if (!basis_->same_space(other.basis())) throw DimensionError("adding polynomials of different spaces");
  std::vector<double> c(coeffs_);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += other.coeffs_[i];
  return {basis_, std::move(c)};
}

HomogeneousPolynomial HomogeneousPolynomial::operator-(const HomogeneousPolynomial& other) const {
  return *this + other.scaled(-1.0);
}

double HomogeneousPolynomial::operator()(std::span<const double> x) const {
  const int nv = basis_->variables();
  if (x.size() != static_cast<std::size_t>(nv)) throw InvalidArgument("point has wrong dimension");
  const int d = degree();
  const std::size_t stride = static_cast<std::size_t>(d) + 1;
  std::vector<double> pw;
  power_table(x, d, pw);
  double value = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const auto alpha = basis_->exponent(i);
    double term = coeffs_[i] * basis_->weight(i);
    for (int v = 0; v < nv; ++v) term *= pw[v * stride + alpha[v]];
    value += term;
  }
  return value;
}

double HomogeneousPolynomial::value_and_gradient(std::span<const double> x,
                                                 std::span<double> gradient) const {
  const int nv = basis_->variables();
  if (x.size() != static_cast<std::size_t>(nv) || gradient.size() != x.size()) {
    throw InvalidArgument("point has wrong dimension");
  }
  const int d = degree();
  const std::size_t stride = static_cast<std::size_t>(d) + 1;
  std::vector<double> pw;
  power_table(x, d, pw);
  std::fill(gradient.begin(), gradient.end(), 0.0);
  double value = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const auto alpha = basis_->exponent(i);
    const double c = coeffs_[i] * basis_->weight(i);
    double term = c;
    for (int v = 0; v < nv; ++v) term *= pw[v * stride + alpha[v]];
    value += term;
    for (int j = 0; j < nv; ++j) {
      if (alpha[j] == 0) continue;
      double t = c * alpha[j] * pw[j * stride + alpha[j] - 1];
      for (int v = 0; v < nv; ++v) {
        if (v != j) t *= pw[v * stride + alpha[v]];
      }
      gradient[j] += t;
    }
  }
  return value;
}

double SphereEvalJet::gradient_norm() const {
  double s = 0.0;
  for (double g : tangential_gradient) s += g * g;
  return std::sqrt(s);
}

std::vector<std::vector<double>> tangent_frame(std::span<const double> x) {
  const std::size_t m = x.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(x[a]) < std::abs(x[b]); });
  std::vector<std::vector<double>> basis;
  basis.emplace_back(x.begin(), x.end());
  std::vector<std::vector<double>> frame;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    std::vector<double> v(m, 0.0);
    v[order[k]] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : basis) {
        double dot = 0.0;
        for (std::size_t i = 0; i < m; ++i) dot += v[i] * u[i];
        for (std::size_t i = 0; i < m; ++i) v[i] -= dot * u[i];
      }
    }
    double nv = 0.0;
    for (double c : v) nv += c * c;
    nv = std::sqrt(nv);
    for (double& c : v) c /= nv;
    basis.push_back(v);
    frame.push_back(std::move(v));
  }
  return frame;
}

SphereEvalJet eval_jet(const HomogeneousPolynomial& p, std::span<const double> x) {
  return eval_jet(p, x, tangent_frame(x));
}

SphereEvalJet eval_jet(const HomogeneousPolynomial& p, std::span<const double> x,
                       const std::vector<std::vector<double>>& frame) {
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  if (std::abs(std::sqrt(r2) - 1.0) > kUnitTolerance) {
    throw InvalidArgument("eval_jet requires a unit vector, |x| = " + std::to_string(std::sqrt(r2)));
  }
  if (frame.size() != static_cast<std::size_t>(p.n())) {
    throw InvalidArgument("tangent frame must have n vectors");
  }
  SphereEvalJet jet;
  jet.point.assign(x.begin(), x.end());
  std::vector<double> grad(x.size());
  jet.value = p.value_and_gradient(x, grad);
  jet.tangential_gradient.resize(frame.size());
  for (std::size_t j = 0; j < frame.size(); ++j) {
    double g = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) g += frame[j][i] * grad[i];
    jet.tangential_gradient[j] = g;
  }
  return jet;
}

HomogeneousPolynomial sample_gaussian(const BasisPtr& basis, const RngStream& stream) {
  auto engine = stream.engine();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> a(basis->dimension());
  for (double& v : a) v = normal(engine);
  return {basis, std::move(a)};
}

HomogeneousPolynomial multiply(const HomogeneousPolynomial& p, const HomogeneousPolynomial& q) {
  if (p.n() != q.n()) throw DimensionError("multiplying polynomials in different numbers of variables");
  const int n = p.n();
  auto basis = make_basis(n, p.degree() + q.degree(), std::numeric_limits<std::size_t>::max());
  const auto cp = p.monomial_coefficients();
  const auto cq = q.monomial_coefficients();
  std::vector<double> prod(basis->dimension(), 0.0);
  std::vector<int> gamma(static_cast<std::size_t>(n + 1));
  for (std::size_t i = 0; i < cp.size(); ++i) {
    if (cp[i] == 0.0) continue;
    const auto a = p.basis().exponent(i);
    for (std::size_t j = 0; j < cq.size(); ++j) {
      if (cq[j] == 0.0) continue;
      const auto b = q.basis().exponent(j);
      for (int v = 0; v <= n; ++v) gamma[v] = a[v] + b[v];
      prod[basis->index_of(gamma)] += cp[i] * cq[j];
    }
  }
  return HomogeneousPolynomial::from_monomials(basis, prod);
}

void basis_values(const KostlanBasis& basis, std::span<const double> x, std::span<double> out) {
  const int nv = basis.variables();
  const int d = basis.d();
  const std::size_t stride = static_cast<std::size_t>(d) + 1;
  std::vector<double> pw;
  power_table(x, d, pw);
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const auto alpha = basis.exponent(i);
    double term = basis.weight(i);
    for (int v = 0; v < nv; ++v) term *= pw[v * stride + alpha[v]];
    out[i] = term;
  }
}

}  // namespace rlab
