#pragma once

#include "strip/bubble.hpp"
#include "strip/geometry.hpp"
#include "strip/stats.hpp"

namespace strip {

struct ProjectionConfig {
  int lattice_radius = 20;
  long long complement_samples = 100'000;
  std::uint64_t seed = 777;
};

struct ProjectionValue {
  double value = 0.0;
  double stat_error = 0.0;
  double tail_bound = 0.0;
};

/// R_j(x) = int_{R^N \ Omega} Gamma(x + P_L^j, xi) W^{2#-1}(xi)/|xi^1| dxi:
/// the strip-complement piece of the Newtonian identity for translate j.
/// Importance-sampled; value >= 0 by construction.
std::pair<double, double> complement_correction(const Point& x,
                                                const BubbleParams& p,
                                                const Geometry& g,
                                                const LatticeOffset& j,
                                                const ProjectionConfig& cfg);

/// Projected bubble PW(x) = sum_{|m| <= R} [W(x + P_L^j) - R_j(x)], with a
/// certified bound for the omitted translates and the aggregated Monte Carlo
/// error of the corrections.
ProjectionValue pw_eval(const Point& x, const BubbleParams& p,
                        const Geometry& g, const ProjectionConfig& cfg);

/// phi(x) = W(x) - PW(x), assembled without cancellation:
/// -sum_{j != 0} W_j(x) + sum_j R_j(x).
ProjectionValue phi_eval(const Point& x, const BubbleParams& p,
                         const Geometry& g, const ProjectionConfig& cfg);

/// Term-by-term derivative of the translate representation; idx follows
/// DerivativeIndex (1..h: zhat_i, h+1: lambda).
ProjectionValue pw_derivative(const Point& x, const BubbleParams& p,
                              const Geometry& g, int idx,
                              const ProjectionConfig& cfg);

struct ExpansionRow {
  double L = 0.0;
  double max_abs_e = 0.0;
  double max_stat = 0.0;  // largest stat_error among the samples
};

struct ExpansionReport {
  std::vector<ExpansionRow> rows;
  double exponent = 0.0;
  double half_width = 0.0;
  bool inconclusive = false;
};

/// Residual E(x) = phi(x) + (B / lambda^{(N-2)/2}) sum_{j>=1} Gamma(x, x_hat
/// + P_L^j) over the sample set, per period L; fits the L-exponent of
/// max|E|. B is the Hardy mass constant (compute_B); the Gamma sum uses the
/// same translate set as pw_eval so truncation cancels.
ExpansionReport phi_expansion_residual(const BubbleParams& p,
                                       const Geometry& g_base,
                                       const ProjectionConfig& cfg,
                                       const std::vector<Point>& x_samples,
                                       const std::vector<double>& l_grid,
                                       double b_const);

}  // namespace strip
