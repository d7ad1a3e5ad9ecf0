#pragma once

#include <utility>
#include <vector>

namespace strip {

struct FitResult {
  double exponent = 0.0;
  double half_width = 0.0;
};

/// Least-squares slope of log(value) against log(scale); half_width is twice
/// the standard error of the slope from the fit residuals. Requires >= 3
/// positive pairs.
FitResult scaling_exponent_fit(
    const std::vector<std::pair<double, double>>& pairs);

}  // namespace strip
