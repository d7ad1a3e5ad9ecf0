#pragma once

#include "strip/geometry.hpp"

namespace strip {

/// Concrete curvature function M(x) = 1 + chi(|x_per|/delta) * sum a_i |x_per,i|^{beta_i},
/// where x_per wraps the periodic z-coordinates to the nearest unit-lattice
/// image and chi is a smooth cutoff (== 1 on [0,1/2], == 0 on [1,inf)).
struct CurvatureModel {
  std::vector<double> a;     // length N
  std::vector<double> beta;  // length N
  double delta = 0.5;
  double kappa = 0.1;

  double beta_min() const;
  double beta_max() const;
  /// Indices (0-based) attaining beta_min.
  std::vector<int> min_set() const;
  double sum_a_over_J() const;
};

/// Model satisfying the spec examples: a = (1,..,1,-1,1,..), the -1 on the
/// first periodic coordinate with exponent 4.5, all others 4.75.
CurvatureModel default_model(const Geometry& g);

std::vector<std::string> validate_model(const CurvatureModel& m,
                                        const Geometry& g);

/// Smooth bump: 1 on t <= 1/2, 0 on t >= 1, C^inf in between.
double smooth_cutoff(double t);

double m_eval(const Point& x, const CurvatureModel& m, const Geometry& g);

/// M(x) - 1 computed without cancellation.
double m_minus_one(const Point& x, const CurvatureModel& m, const Geometry& g);

/// Lower bound on inf M derived from |a| and delta (positive for valid models).
double m_lower_bound(const CurvatureModel& m);

}  // namespace strip
