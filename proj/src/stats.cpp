#include "rlab/stats.hpp"

#include <algorithm>
#include <cmath>

#include "rlab/errors.hpp"

namespace rlab {

Interval wilson_interval(long long k, long long n, double z) {
  if (n <= 0 || k < 0 || k > n) throw InvalidArgument("wilson_interval needs 0 <= k <= n, n > 0");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  // Clamp so the interval always contains p despite rounding at k = 0 or k = n.
  return {std::min(p, std::max(0.0, centre - half)), std::max(p, std::min(1.0, centre + half))};
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw InvalidArgument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

Quartiles quartiles(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  return {quantile(v, 0.25), quantile(v, 0.5), quantile(v, 0.75)};
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("least_squares needs >= 2 paired points");
  const double m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("least_squares needs distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

DecayFit fit_decay(std::span<const std::pair<int, double>> rows, std::string model) {
  DecayFit out;
  out.model = std::move(model);
  std::vector<double> x, y;
  for (const auto& [degree, freq] : rows) {
    if (freq > 0.0 && std::isfinite(freq)) {
      x.push_back(degree);
      y.push_back(std::log(freq));
    }
  }
  out.points = static_cast<int>(x.size());
  if (x.size() < 3) {
    out.reason = "fewer than 3 degrees with nonzero frequency";
    return out;
  }
  out.fit = least_squares(x, y);
  return out;
}

}  // namespace rlab
