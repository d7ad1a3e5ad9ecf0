#pragma once

#include <functional>

#include "strip/bubble.hpp"
#include "strip/geometry.hpp"
#include "strip/model.hpp"

namespace strip {

struct QuadratureSpec {
  double rel_tol = 1e-8;
  int max_panel_doublings = 12;
  long long mc_samples = 1'000'000;
  std::uint64_t mc_seed = 12345;
};

/// Non-convergence after the doubling budget; carries the best estimate.
class ToleranceError : public std::runtime_error {
 public:
  ToleranceError(const std::string& what, double best, double err)
      : std::runtime_error(what), best_estimate(best), error_estimate(err) {}
  double best_estimate;
  double error_estimate;
};

enum class Weight { hardy, plain };

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int levels = 0;
};

/// Integral over R^N of a cylindrical function f(|y|, |z - zhat|), reduced to
/// the (r, s) quadrant: hardy absorbs the 1/|y| weight into r^{k-2}; plain
/// keeps r^{k-1}. Double-exponential nodes, level doubling until successive
/// refinements agree to rel_tol. r_scale/s_scale adapt the node map to the
/// integrand's core scale (use 1/lambda for bubbles at height lambda).
IntegralResult integrate_cylindrical(
    const std::function<double(double, double)>& f, const Geometry& g,
    Weight weight, const QuadratureSpec& spec, double r_scale = 1.0,
    double s_scale = 1.0);

/// Average of |theta_1|^beta over S^{d-1}: Gamma(d/2)Gamma((beta+1)/2) /
/// (sqrt(pi) Gamma((d+beta)/2)). Requires beta > -1.
double sphere_moment(double beta, int d);

/// Same moment by 1D quadrature in the polar angle (cross-check route).
double sphere_moment_quad(double beta, int d, const QuadratureSpec& spec);

struct McResult {
  double estimate = 0.0;
  double std_error = 0.0;
  long long samples = 0;
};

/// Importance-sampled integral of f over R^N (f carries any weights),
/// proposal multivariate Student-t(nu=1) centered at `center` with the given
/// scale. Deterministic under a fixed seed, independent of thread count.
McResult mc_oracle(const std::function<double(const Point&)>& f,
                   const Geometry& g, const QuadratureSpec& spec,
                   const Point* center = nullptr, double scale = 1.0);

/// B = int W_{0,1}^{2#-1} / |xi^1|.
double compute_B(const Geometry& g, const QuadratureSpec& spec);

/// D = -int W_{0,1}^{2#-2} psi_0 / |xi^1|.
double compute_D(const Geometry& g, const QuadratureSpec& spec);

enum class FRoute { psi0, scaling };

/// F = -int |xi_i|^beta W_{0,1}^{2#-1} psi_0 / |xi^1| with beta the model's
/// minimal exponent and i in the block containing J (i=1 or i=k+1).
/// FRoute::scaling evaluates the equivalent (beta/2#) int |xi_i|^beta W^{2#}
/// form instead. use_quad_moment swaps the closed-form sphere moment for its
/// quadrature route.
double compute_F(const Geometry& g, const CurvatureModel& m,
                 const QuadratureSpec& spec, FRoute route = FRoute::psi0,
                 bool use_quad_moment = false);

enum class BiRoute { direct, by_parts };

/// B_i = a_{k+i} beta_{k+i} int |xi_{k+i}|^{beta-2} xi_{k+i}
///       W^{2#-1}/|xi^1| dW/dxi_{k+i},  i = 1..h.
double compute_Bi(const Geometry& g, const CurvatureModel& m, int i,
                  const QuadratureSpec& spec, BiRoute route = BiRoute::direct);

struct GramMatrix {
  int h = 0;
  std::vector<double> entries;  // (h+1) x (h+1), row-major
  double at(int i, int j) const { return entries[i * (h + 1) + j]; }
};

/// Entries int W^{2#-2} Z_i Z_j / |xi^1|. Off-diagonals are exact zeros by
/// parity, asserted per index pair via an antisymmetry check of the integrand.
GramMatrix gram_matrix(const BubbleParams& p, const Geometry& g,
                       const QuadratureSpec& spec);

}  // namespace strip
