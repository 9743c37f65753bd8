#include "rlab/discriminant.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "rlab/errors.hpp"
#include "rlab/sphere_grid.hpp"

namespace rlab {

namespace {

void fill_jet_matrix(const KostlanBasis& basis, std::span<const double> x,
                     const std::vector<std::vector<double>>& frame, Eigen::MatrixXd& M) {
  const int nv = basis.variables();
  const int d = basis.d();
  const std::size_t N = basis.dimension();
  const std::size_t stride = static_cast<std::size_t>(d) + 1;
  std::vector<double> pw(static_cast<std::size_t>(nv) * stride, 1.0);
  for (int i = 0; i < nv; ++i) {
    for (int k = 1; k <= d; ++k) pw[i * stride + k] = pw[i * stride + k - 1] * x[i];
  }
  M.resize(nv, static_cast<Eigen::Index>(N));
  std::vector<double> grad(static_cast<std::size_t>(nv));
  for (std::size_t col = 0; col < N; ++col) {
    const auto alpha = basis.exponent(col);
    const double w = basis.weight(col);
    double value = w;
    for (int v = 0; v < nv; ++v) value *= pw[v * stride + alpha[v]];
    for (int j = 0; j < nv; ++j) {
      if (alpha[j] == 0) {
        grad[j] = 0.0;
        continue;
      }
      double t = w * alpha[j] * pw[j * stride + alpha[j] - 1];
      for (int v = 0; v < nv; ++v) {
        if (v != j) t *= pw[v * stride + alpha[v]];
      }
      grad[j] = t;
    }
    M(0, static_cast<Eigen::Index>(col)) = value;
    for (std::size_t k = 0; k < frame.size(); ++k) {
      double g = 0.0;
      for (int j = 0; j < nv; ++j) g += frame[k][j] * grad[j];
      M(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(col)) = g;
    }
  }
}

struct PointEval {
  double exact = 0.0;
  double asym_core = 0.0;  // sqrt(f^2/d^n + gs^2 |g|^2 / d^{n+1})
  double condition = 0.0;
};

class PointEvaluator {
 public:
  PointEvaluator(const HomogeneousPolynomial& s, double grad_scale)
      : s_(s), grad_scale_(grad_scale),
        a_(Eigen::Map<const Eigen::VectorXd>(s.coeffs().data(),
                                             static_cast<Eigen::Index>(s.coeffs().size()))) {}

  PointEval operator()(std::span<const double> x) {
    const auto frame = tangent_frame(x);
    fill_jet_matrix(s_.basis(), x, frame, M_);
    const Eigen::MatrixXd A = M_ * M_.transpose();
    const Eigen::VectorXd jet = M_ * a_;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) {
      throw GramDegeneracyError("jet-frame Gram matrix is not positive definite");
    }
    const Eigen::VectorXd y = llt.matrixL().solve(jet);
    const double lmin = llt.matrixL().toDenseMatrix().diagonal().minCoeff();
    if (!(lmin > 0.0) || !std::isfinite(y.squaredNorm())) {
      throw GramDegeneracyError("jet-frame Gram matrix is numerically singular");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A, Eigen::EigenvaluesOnly);
    PointEval out;
    out.exact = y.norm();
    out.condition = eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff();
    const int n = s_.n();
    const double d = s_.degree();
    const double dn = std::pow(d, n);
    const double g2 = jet.tail(n).squaredNorm() * grad_scale_ * grad_scale_;
    out.asym_core = std::sqrt(jet(0) * jet(0) / dn + g2 / (dn * d));
    return out;
  }

 private:
  const HomogeneousPolynomial& s_;
  double grad_scale_;
  Eigen::Map<const Eigen::VectorXd> a_;
  Eigen::MatrixXd M_;
};

void check_unit(std::span<const double> x) {
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  if (std::abs(std::sqrt(r2) - 1.0) > kUnitTolerance) {
    throw InvalidArgument("point must be a unit vector");
  }
}

// Golden-section search for a minimum of f on [lo, hi].
void golden_section(const std::function<double(double)>& f, double lo, double hi, int iterations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double e = a + inv_phi * (b - a);
  double fc = f(c), fe = f(e);
  for (int it = 0; it < iterations; ++it) {
    if (fc < fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + inv_phi * (b - a);
      fe = f(e);
    }
  }
}

}  // namespace

JetFrame make_jet_frame(const KostlanBasis& basis, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(basis.variables())) {
    throw InvalidArgument("point has wrong dimension");
  }
  check_unit(x);
  JetFrame frame;
  frame.point.assign(x.begin(), x.end());
  fill_jet_matrix(basis, x, tangent_frame(x), frame.M);
  frame.A = frame.M * frame.M.transpose();
  return frame;
}

double point_distance(const HomogeneousPolynomial& s, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(s.basis().variables())) {
    throw InvalidArgument("point has wrong dimension");
  }
  check_unit(x);
  PointEvaluator eval(s, 1.0);
  return eval(x).exact;
}

double AsymptoticConvention::pointwise_scale(int n) const {
  if (normalization == VolumeNormalization::Probability) return 1.0;
  return std::sqrt(std::tgamma(n + 1.0) / std::pow(std::numbers::pi, n));
}

DistanceResult distance_to_discriminant(const HomogeneousPolynomial& s, int grid_density,
                                        bool refine, const AsymptoticConvention& convention) {
  const int n = s.n();
  if (grid_density == 0) grid_density = default_grid_density(n, s.degree());
  if (grid_density < 8) throw InvalidArgument("grid density must be at least 8");
  if (s.degree() < 1) throw InvalidArgument("distance to the discriminant needs d >= 1");

  const PointSet grid = projective_grid(n, grid_density);
  PointEvaluator eval(s, convention.grad_scale);

  DistanceResult result;
  result.grid_density = grid_density;
  result.refined = refine;
  double best_exact = std::numeric_limits<double>::infinity();
  double best_asym = std::numeric_limits<double>::infinity();

  auto visit = [&](std::span<const double> x) {
    const PointEval pe = eval(x);
    ++result.evaluations;
    result.gram_condition = std::max(result.gram_condition, pe.condition);
    best_asym = std::min(best_asym, pe.asym_core);
    if (pe.exact < best_exact) {
      best_exact = pe.exact;
      result.argmin_point.assign(x.begin(), x.end());
    }
    return pe.exact;
  };

  for (std::size_t i = 0; i < grid.size(); ++i) visit(grid[i]);

  if (refine) {
    constexpr int kIterations = 40;
    const double delta = grid_spacing(n, grid_density);
    const std::vector<double> center = result.argmin_point;
    if (n == 1) {
      const double theta0 = std::atan2(center[1], center[0]);
      golden_section(
          [&](double t) {
            const double p[2] = {std::cos(theta0 + t), std::sin(theta0 + t)};
            return visit(p);
          },
          -delta, delta, kIterations);
    } else {
      // Coordinate-wise search on the tangent chart at the best grid point.
      const auto frame = tangent_frame(center);
      std::vector<double> chart(frame.size(), 0.0);
      std::vector<double> p(center.size());
      auto point_at = [&](const std::vector<double>& c) {
        double r2 = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
          p[i] = center[i];
          for (std::size_t k = 0; k < frame.size(); ++k) p[i] += c[k] * frame[k][i];
          r2 += p[i] * p[i];
        }
        const double r = std::sqrt(r2);
        for (double& v : p) v /= r;
        return std::span<const double>(p);
      };
      for (int sweep = 0; sweep < 2; ++sweep) {
        for (std::size_t k = 0; k < chart.size(); ++k) {
          double best_t = chart[k];
          double best_v = std::numeric_limits<double>::infinity();
          const double base = chart[k];
          golden_section(
              [&](double t) {
                auto c = chart;
                c[k] = base + t;
                const double v = visit(point_at(c));
                if (v < best_v) {
                  best_v = v;
                  best_t = base + t;
                }
                return v;
              },
              -delta, delta, kIterations);
          auto c = chart;
          c[k] = best_t;
          if (best_v <= visit(point_at(chart))) chart = c;
        }
      }
    }
  }

  result.exact = best_exact;
  result.asymptotic =
      std::pow(std::numbers::pi, 0.5 * n) * convention.pointwise_scale(n) * best_asym;
  return result;
}

long long discriminant_degree(int n, int d) {
  if (n < 1 || d < 2) {
    throw InvalidArgument("discriminant_degree requires n >= 1 and d >= 2");
  }
  long long p = 1;
  for (int i = 0; i < n; ++i) p *= (d - 1);
  return (n + 1) * p;
}

bool tube_event(const HomogeneousPolynomial& s, double r, const DistanceResult& dist) {
  return dist.exact <= r * s.norm();
}

}  // namespace rlab
