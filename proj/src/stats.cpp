#include "strip/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace strip {

FitResult scaling_exponent_fit(
    const std::vector<std::pair<double, double>>& pairs) {
  const std::size_t n = pairs.size();
  if (n < 3)
    throw std::invalid_argument("scaling_exponent_fit: need at least 3 pairs");
  std::vector<double> X(n), Y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(pairs[i].first > 0.0) || !(pairs[i].second > 0.0))
      throw std::domain_error("scaling_exponent_fit: scales and values must "
                              "be positive");
    X[i] = std::log(pairs[i].first);
    Y[i] = std::log(pairs[i].second);
  }
  double xb = 0.0, yb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xb += X[i];
    yb += Y[i];
  }
  xb /= n;
  yb /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (X[i] - xb) * (X[i] - xb);
    sxy += (X[i] - xb) * (Y[i] - yb);
  }
  if (sxx == 0.0)
    throw std::domain_error("scaling_exponent_fit: degenerate scales");
  FitResult r;
  r.exponent = sxy / sxx;
  const double a = yb - r.exponent * xb;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = Y[i] - (a + r.exponent * X[i]);
    ss += e * e;
  }
  if (n > 2) {
    const double se = std::sqrt(ss / (n - 2) / sxx);
    r.half_width = 2.0 * se;
  }
  return r;
}

}  // namespace strip
