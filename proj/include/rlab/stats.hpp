#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rlab {

inline constexpr double kWilsonZ95 = 1.959963984540054;

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Wilson score interval for k successes out of n trials; n must be positive.
Interval wilson_interval(long long k, long long n, double z = kWilsonZ95);

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double iqr() const { return q3 - q1; }
};

/// Linear-interpolation quantile (type 7) of unsorted data.
double quantile(std::vector<double> values, double p);
Quartiles quartiles(std::span<const double> values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope x + intercept. r^2 is 1 for a perfect
/// fit, including constant data.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

struct DecayFit {
  std::string model = "log-frequency vs d linear";
  std::optional<LinearFit> fit;  ///< empty when the fit is null
  std::string reason;            ///< why the fit is null
  int points = 0;
};

/// Fits log(frequency) against degree over the rows with positive frequency.
/// Fewer than three such rows yield a null fit.
DecayFit fit_decay(std::span<const std::pair<int, double>> rows,
                   std::string model = "log-frequency vs d linear");

}  // namespace rlab
