#pragma once

#include "strip/bubble.hpp"
#include "strip/geometry.hpp"
#include "strip/model.hpp"
#include "strip/projection.hpp"
#include "strip/quad.hpp"

namespace strip {

struct ReducedCoefficients {
  double B = 0.0;
  double D = 0.0;
  double F = 0.0;
  std::vector<double> Bi;  // length h
  double S = 0.0;          // sum_{j>=1} Gamma(P^j, 0) over the unit lattice
  double two_sharp = 0.0;
};

ReducedCoefficients reduced_coefficients(const Geometry& g,
                                         const CurvatureModel& m,
                                         const QuadratureSpec& spec);

/// C0 = [ -F sum_{i in J} a_i / ((2#-1) B D S) ]^{1/(beta-(N-2))}.
/// Throws std::domain_error when sum_{i in J} a_i >= 0.
double c0_eval(const ReducedCoefficients& rc, const CurvatureModel& m,
               const Geometry& g);

struct ReducedSolution {
  std::vector<double> zhat0;  // leading-order concentration offset (zero)
  double lambda_L = 0.0;
  double C0 = 0.0;
  bool window_ok = false;
};

ReducedSolution solve_reduced(const ReducedCoefficients& rc,
                              const CurvatureModel& m, const Geometry& g);

enum class ConsistencyTarget { lambda, z_i };
enum class PhiMode { frozen, exact };

struct ConsistencyConfig {
  long long samples = 400'000;
  std::uint64_t seed = 4242;
  PhiMode phi_mode = PhiMode::frozen;
  int lattice_radius = 20;
  int z_index = 1;            // which zhat_i for ConsistencyTarget::z_i
  double lambda_zhat = 0.1;   // test offset lambda * zhat_i
};

struct ConsistencyReport {
  // phi-term: (2#-1) int_{B_1(xhat)} W^{2#-2} phi dW/dlambda / |xi^1|
  double phi_numeric = 0.0;
  double phi_closed = 0.0;
  double phi_ratio = 0.0;
  double phi_sigma = 0.0;  // MC std error of phi_numeric
  // curvature term: int_{B_1(xhat)} (M-1) W^{2#-1} d_i W / |xi^1|
  double m_numeric = 0.0;
  double m_closed = 0.0;
  double m_ratio = 0.0;
  double m_sigma = 0.0;
  bool inconclusive = false;  // MC noise above 20% of either closed form
};

/// Numerically evaluates both reduced-equation integrals over B_1(xhat) at
/// the given (lambda, L) and reports the numeric/closed-form ratio per term.
/// For ConsistencyTarget::z_i the curvature term is compared against the
/// leading B_i lambda zhat_i / lambda^{beta_{k+i}-1} balance at a test offset.
ConsistencyReport consistency_check(const BubbleParams& p, const Geometry& g,
                                    const CurvatureModel& m,
                                    const ReducedCoefficients& rc,
                                    ConsistencyTarget which,
                                    const ConsistencyConfig& cfg);

}  // namespace strip
