#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../oracles/oracles.hpp"
#include "helpers.hpp"
#include "rlab/discriminant.hpp"
#include "rlab/errors.hpp"
#include "rlab/sphere_grid.hpp"

using namespace rlab;

namespace {

// (x0 - x1)^2 (x0^2 + x1^2)^k: a double real root at (1, 1)/sqrt 2.
HomogeneousPolynomial double_root(int k) {
  auto p = testing::monomials<2>(2, {{{2, 0}, 1.0}, {{1, 1}, -2.0}, {{0, 2}, 1.0}});
  const auto q = testing::monomials<2>(2, {{{2, 0}, 1.0}, {{0, 2}, 1.0}});
  for (int i = 0; i < k; ++i) p = multiply(p, q);
  return p;
}

}  // namespace

TEST_CASE("jet frame") {
  std::mt19937_64 rng(1);
  for (int n : {1, 2}) {
    auto basis = make_basis(n, 6);
    const auto x = oracle::random_unit(n + 1, rng);
    const JetFrame f = make_jet_frame(*basis, x);
    CHECK(f.M.rows() == n + 1);
    CHECK(static_cast<std::size_t>(f.M.cols()) == basis->dimension());
    CHECK((f.A - f.A.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * f.A.cwiseAbs().maxCoeff());
    CHECK(Eigen::LLT<Eigen::MatrixXd>(f.A).info() == Eigen::Success);
    std::vector<double> values(basis->dimension());
    basis_values(*basis, x, values);
    for (std::size_t i = 0; i < values.size(); ++i) {
      CHECK(std::abs(f.M(0, static_cast<Eigen::Index>(i)) - values[i]) <= 1e-12 * std::max(1.0, std::abs(values[i])));
    }
  }
}

TEST_CASE("point distance") {
  const double r = 1.0 / std::sqrt(2.0);
  const std::vector<double> star = {r, r};
  CHECK(point_distance(double_root(0), star) <= 1e-9);
  CHECK(point_distance(double_root(2), star) <= 1e-9);

  const auto circle = testing::monomials<2>(2, {{{2, 0}, 1.0}, {{0, 2}, 1.0}});
  for (double t : {0.0, 0.4, 1.3}) {
    const std::vector<double> x = {std::cos(t), std::sin(t)};
    const double got = point_distance(circle, x);
    CHECK(got > 0.0);
    CHECK(got == doctest::Approx(oracle::constrained_distance(circle, x)).epsilon(1e-8));
  }

  std::mt19937_64 rng(2);
  for (int n : {1, 2}) {
    const auto s = testing::sample(n, 7, 3, 0);
    const auto x = oracle::random_unit(n + 1, rng);
    CHECK(point_distance(s, x) == doctest::Approx(oracle::constrained_distance(s, x)).epsilon(1e-8));
    for (double lambda : {-3.0, 0.25, 10.0}) {
      CHECK(point_distance(s.scaled(lambda), x) ==
            doctest::Approx(std::abs(lambda) * point_distance(s, x)).epsilon(1e-10));
    }
  }
}

TEST_CASE("distance to the discriminant") {
  CHECK(distance_to_discriminant(double_root(3)).exact <= 1e-6);

  // Min-dominance over the evaluated grid.
  for (int n : {1, 2}) {
    const auto s = testing::sample(n, 5, 4, 1);
    const int density = default_grid_density(n, 5);
    const auto result = distance_to_discriminant(s, density, false);
    const auto grid = projective_grid(n, density);
    double min_seen = INFINITY;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double v = point_distance(s, grid[i]);
      CHECK(result.exact <= v * (1.0 + 1e-12));
      min_seen = std::min(min_seen, v);
    }
    CHECK(result.exact == doctest::Approx(min_seen).epsilon(1e-12));
    CHECK(distance_to_discriminant(s, density, true).exact <= result.exact);
  }

  CHECK_THROWS_AS(distance_to_discriminant(testing::sample(1, 4, 0, 0), 4), InvalidArgument);
}

TEST_CASE("distance agrees with the dense constrained least-squares oracle") {
  for (std::uint64_t i = 0; i < 8; ++i) {
    const auto s = testing::sample(1, 10, 5, i);
    const double oracle_value = oracle::dense_grid_distance(s, 10000);
    CHECK(distance_to_discriminant(s).exact == doctest::Approx(oracle_value).epsilon(0.01));
  }
}

TEST_CASE("asymptotic estimate uses the same evaluated points") {
  const auto s = testing::sample(1, 20, 6, 0);
  const auto r = distance_to_discriminant(s);
  CHECK(r.asymptotic > 0.0);
  CHECK(r.exact / r.asymptotic == doctest::Approx(std::sqrt(20.0 / 21.0)).epsilon(1e-9));
  CHECK(r.gram_condition >= 1.0);
  CHECK(r.argmin_point.size() == 2);
}

TEST_CASE("discriminant degree") {
  CHECK(discriminant_degree(1, 2) == 2);
  CHECK(discriminant_degree(2, 2) == 3);
  CHECK(discriminant_degree(2, 3) == 12);
  CHECK_THROWS(discriminant_degree(1, 1));
  for (int n : {1, 2}) {
    double previous = INFINITY;
    for (int d : {10, 100, 1000}) {
      const double gap = std::abs(static_cast<double>(discriminant_degree(n, d)) / std::pow(d, n) - (n + 1));
      CHECK(gap < previous);
      previous = gap;
    }
    CHECK(previous < 0.01 * (n + 1));
  }
}

TEST_CASE("tube event") {
  const auto s = testing::sample(1, 6, 7, 0);
  const auto dist = distance_to_discriminant(s);
  CHECK(dist.exact > 0.0);
  CHECK_FALSE(tube_event(s, 0.0, dist));
  CHECK(tube_event(s, 10.0, dist));

  const auto singular = double_root(2);
  CHECK(tube_event(singular, 1e-6, distance_to_discriminant(singular)));

  std::vector<double> rel;
  for (std::uint64_t i = 0; i < 300; ++i) {
    const auto t = testing::sample(1, 6, 8, i);
    rel.push_back(distance_to_discriminant(t).exact / t.norm());
  }
  int previous = -1;
  for (double r : {1e-4, 1e-3, 1e-2, 1e-1}) {
    const int count = static_cast<int>(std::ranges::count_if(rel, [&](double v) { return v <= r; }));
    CHECK(count >= previous);
    previous = count;
  }
}
