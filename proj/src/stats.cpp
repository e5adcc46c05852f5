#include "beg/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace beg {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_line: x and y differ in length");
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("fit_line: need at least two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0) throw std::invalid_argument("fit_line: x values are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  f.points = n;
  return f;
}

MomentSummary summarize_moments(std::int64_t sum, std::int64_t sum_squares, std::uint64_t n) {
  MomentSummary m;
  if (n == 0) return m;
  const double dn = static_cast<double>(n);
  m.mean = static_cast<double>(sum) / dn;
  if (n > 1) {
    // (Q - S^2/n) / (n - 1), with the numerator formed exactly where possible.
    const long double centered =
        static_cast<long double>(sum_squares) -
        static_cast<long double>(sum) * static_cast<long double>(sum) / static_cast<long double>(n);
    m.variance = std::max(0.0, static_cast<double>(centered / (dn - 1.0)));
    m.std_error = std::sqrt(m.variance / dn);
  }
  return m;
}

double chi_square_critical(double dof, double significance) {
  boost::math::chi_squared dist(dof);
  return boost::math::quantile(boost::math::complement(dist, significance));
}

double normal_upper_quantile(double p) {
  boost::math::normal dist;
  return boost::math::quantile(boost::math::complement(dist, p));
}

}  // namespace beg
