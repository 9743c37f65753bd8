#include "rlab/projection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "rlab/errors.hpp"
#include "rlab/sphere_grid.hpp"

namespace rlab {

SigmaSection build_sigma(int n) {
  if (n < 1) throw InvalidArgument("sigma requires n >= 1");
  auto basis = make_basis(n, 2);
  std::vector<double> mono(basis->dimension(), 0.0);
  std::vector<int> alpha(static_cast<std::size_t>(n + 1), 0);
  for (int i = 0; i <= n; ++i) {
    alpha[i] = 2;
    mono[basis->index_of(alpha)] = 1.0;
    alpha[i] = 0;
  }
  SigmaSection sigma{HomogeneousPolynomial::from_monomials(basis, mono), 2};
  // sigma(x) = |x|^2 on the whole space.
  std::vector<double> e(static_cast<std::size_t>(n + 1), 0.0);
  for (int i = 0; i <= n; ++i) {
    e[i] = 1.0;
    if (std::abs(sigma.poly(e) - 1.0) > 1e-12) throw Error("sigma construction failed");
    e[i] = 0.0;
  }
  return sigma;
}

SubspaceMap::SubspaceMap(const KostlanBasis& basis_d, const SigmaSection& sigma, int ell)
    : ell_(ell) {
  const int n = basis_d.n();
  const int d = basis_d.d();
  if (ell < 0) throw DimensionError("ell must be non-negative");
  if (d - sigma.k * ell < 0) {
    throw DimensionError("d - 2 ell must be non-negative (d = " + std::to_string(d) +
                         ", ell = " + std::to_string(ell) + ")");
  }
  if (sigma.poly.n() != n) throw DimensionError("sigma lives in a different projective space");
  target_ = make_basis(n, d);
  source_ = make_basis(n, d - sigma.k * ell);

  const auto Nd = static_cast<Eigen::Index>(target_->dimension());
  const auto Ns = static_cast<Eigen::Index>(source_->dimension());
  T_.setZero(Nd, Ns);
  if (ell == 0) {
    T_.setIdentity();
  } else {
    HomogeneousPolynomial power = sigma.poly;
    for (int i = 1; i < ell; ++i) power = multiply(power, sigma.poly);
    std::vector<double> unit(static_cast<std::size_t>(Ns), 0.0);
    for (Eigen::Index j = 0; j < Ns; ++j) {
      unit[static_cast<std::size_t>(j)] = 1.0;
      const auto column = multiply(power, HomogeneousPolynomial(source_, unit));
      unit[static_cast<std::size_t>(j)] = 0.0;
      for (Eigen::Index i = 0; i < Nd; ++i) T_(i, j) = column.coeffs()[static_cast<std::size_t>(i)];
    }
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> pivoted(T_);
  pivoted.setThreshold(1e-10);
  rank_ = pivoted.rank();

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(T_);
  Q_ = qr.householderQ() * Eigen::MatrixXd::Identity(Nd, Ns);
  R_ = qr.matrixQR().topRows(Ns).triangularView<Eigen::Upper>();
}

Eigen::VectorXd SubspaceMap::project(const Eigen::VectorXd& a) const {
  return Q_ * (Q_.transpose() * a);
}

Eigen::VectorXd SubspaceMap::preimage(const Eigen::VectorXd& b) const {
  return R_.triangularView<Eigen::Upper>().solve(Q_.transpose() * b);
}

std::shared_ptr<const SubspaceMap> subspace_map(int n, int d, int ell) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, std::shared_ptr<const SubspaceMap>> cache;
  {
    std::lock_guard lock(mutex);
    auto it = cache.find({n, d, ell});
    if (it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const SubspaceMap>(*make_basis(n, d), build_sigma(n), ell);
  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.emplace(std::make_tuple(n, d, ell), std::move(built));
  return it->second;
}

C1Norm c1_norm(const HomogeneousPolynomial& s, int grid_density) {
  const int n = s.n();
  if (grid_density == 0) grid_density = default_grid_density(n, std::max(s.degree(), 1));
  if (grid_density < 8) throw InvalidArgument("grid density must be at least 8");
  const PointSet grid = projective_grid(n, grid_density);
  C1Norm out;
  out.grid_density = grid_density;
  std::vector<double> grad(static_cast<std::size_t>(n + 1));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = grid[i];
    const double v = s.value_and_gradient(x, grad);
    double full = 0.0, radial = 0.0;
    for (int j = 0; j <= n; ++j) {
      full += grad[j] * grad[j];
      radial += grad[j] * x[j];
    }
    // |tangential|^2 = |grad|^2 - (x . grad)^2 for unit x.
    const double tangential = std::sqrt(std::max(0.0, full - radial * radial));
    out.max_value = std::max(out.max_value, std::abs(v));
    out.max_gradient = std::max(out.max_gradient, tangential);
  }
  out.value = out.max_value + out.max_gradient;
  return out;
}

ProjectionSplit split(const HomogeneousPolynomial& s, const SigmaSection& sigma, int ell,
                      int c1_grid_density) {
  const int d = s.degree();
  if (d - sigma.k * ell < 0 || ell < 0) {
    throw DimensionError("d - 2 ell must be non-negative (d = " + std::to_string(d) +
                         ", ell = " + std::to_string(ell) + ")");
  }
  if (sigma.poly.n() == s.n() &&
      std::ranges::equal(sigma.poly.coeffs(), build_sigma(s.n()).poly.coeffs())) {
    return split(s, *subspace_map(s.n(), d, ell), c1_grid_density);
  }
  return split(s, SubspaceMap(s.basis(), sigma, ell), c1_grid_density);
}

ProjectionSplit split(const HomogeneousPolynomial& s, const SubspaceMap& map,
                      int c1_grid_density) {
  if (!map.target_basis()->same_space(s.basis())) {
    throw DimensionError("subspace map does not match the polynomial's space");
  }
  const Eigen::Map<const Eigen::VectorXd> a(s.coeffs().data(),
                                            static_cast<Eigen::Index>(s.coeffs().size()));
  const Eigen::VectorXd zero = map.project(a);
  const Eigen::VectorXd perp = a - zero;
  const Eigen::VectorXd q = map.preimage(zero);

  auto to_poly = [](const BasisPtr& basis, const Eigen::VectorXd& v) {
    return HomogeneousPolynomial(basis, std::vector<double>(v.data(), v.data() + v.size()));
  };
  ProjectionSplit out{to_poly(map.target_basis(), zero), to_poly(map.target_basis(), perp),
                      to_poly(map.source_basis(), q), map.ell(), 0.0, 0};
  const C1Norm c1 = c1_norm(out.s_perp, c1_grid_density);
  out.c1_perp = c1.value;
  out.c1_grid_density = c1.grid_density;
  return out;
}

ApproximationResult approx_pipeline(const ProjectionSplit& sp, const DistanceResult& dist) {
  const int n = sp.s_zero.n();
  const double d = sp.s_zero.degree();
  const double threshold =
      std::pow(d, 0.5 * n) / (4.0 * std::pow(std::numbers::pi, 0.5 * n)) * dist.exact;
  return ApproximationResult{sp.c1_perp < threshold, sp.quotient, threshold - sp.c1_perp,
                             threshold, sp.c1_perp};
}

ApproximationResult approx_pipeline(const HomogeneousPolynomial& s, const SigmaSection& sigma,
                                    int ell, const DistanceResult& dist) {
  return approx_pipeline(split(s, sigma, ell), dist);
}

}  // namespace rlab
