#pragma once

#include <cstdint>
#include <span>

namespace beg {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

// Ordinary least squares y = intercept + slope * x. Requires >= 2 points with
// distinct x; throws std::invalid_argument otherwise. r_squared is 1 when y is
// constant.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

// Mean and i.i.d. standard error from integer moment sums.
struct MomentSummary {
  double mean = 0.0;
  double std_error = 0.0;
  double variance = 0.0;  // unbiased sample variance
};
MomentSummary summarize_moments(std::int64_t sum, std::int64_t sum_squares, std::uint64_t n);

// Upper-tail quantiles.
double chi_square_critical(double degrees_of_freedom, double significance);
// Standard normal upper quantile z with P(Z > z) = p.
double normal_upper_quantile(double p);

}  // namespace beg
