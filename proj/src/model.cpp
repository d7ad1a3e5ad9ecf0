#include "strip/model.hpp"

#include <cmath>
#include <limits>

namespace strip {

double CurvatureModel::beta_min() const {
  double b = std::numeric_limits<double>::infinity();
  for (double v : beta) b = std::min(b, v);
  return b;
}

double CurvatureModel::beta_max() const {
  double b = -std::numeric_limits<double>::infinity();
  for (double v : beta) b = std::max(b, v);
  return b;
}

std::vector<int> CurvatureModel::min_set() const {
  std::vector<int> J;
  const double b = beta_min();
  for (int i = 0; i < static_cast<int>(beta.size()); ++i)
    if (beta[i] == b) J.push_back(i);
  return J;
}

double CurvatureModel::sum_a_over_J() const {
  double s = 0.0;
  for (int j : min_set()) s += a[j];
  return s;
}

CurvatureModel default_model(const Geometry& g) {
  CurvatureModel m;
  m.a.assign(g.N, 1.0);
  m.beta.assign(g.N, 4.75);
  m.a[g.k] = -1.0;      // first periodic z-coordinate
  m.beta[g.k] = 4.5;
  m.delta = 0.5;
  m.kappa = 0.1;
  return m;
}

std::vector<std::string> validate_model(const CurvatureModel& m,
                                        const Geometry& g) {
  if (static_cast<int>(m.a.size()) != g.N ||
      static_cast<int>(m.beta.size()) != g.N)
    throw std::domain_error("validate_model: a and beta must have length N");
  std::vector<std::string> v;
  for (int i = 0; i < g.N; ++i) {
    if (m.a[i] == 0.0)
      v.push_back("a_i != 0 fails at i = " + std::to_string(i + 1));
    if (!(m.beta[i] > g.N - 2 && m.beta[i] < g.N - 1))
      v.push_back("beta_i in (N-2, N-1) fails at i = " + std::to_string(i + 1) +
                  ": " + std::to_string(m.beta[i]));
  }
  const double b = m.beta_min();
  const double bM = m.beta_max();
  if (!(bM <= b * (1.0 + 1.0 / (g.N - 2)) + 1e-15))
    v.push_back("beta_M <= beta (1 + 1/(N-2)) fails");
  const auto J = m.min_set();
  bool in_y = true, in_z = true;
  for (int j : J) {
    if (j >= g.k) in_y = false;
    if (j < g.k) in_z = false;
  }
  if (!in_y && !in_z) v.push_back("J spans both blocks {1..k} and {k+1..N}");
  if (!(m.sum_a_over_J() < 0.0)) v.push_back("sum_{j in J} a_j < 0 fails");
  if (!(m.delta > 0.0 && m.delta <= 0.5))
    v.push_back("delta in (0, 1/2] fails (wrap seam must stay outside the "
                "cutoff support)");
  if (!(m.kappa > 0.0)) v.push_back("kappa > 0 fails");
  if (!(m_lower_bound(m) > 0.0))
    v.push_back("positivity bound 1 - sum |a_i| delta^{beta_i} > 0 fails");
  return v;
}

double smooth_cutoff(double t) {
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  const double u = 2.0 * (t - 0.5);  // in (0,1)
  const double f1 = std::exp(-1.0 / (1.0 - u));
  const double f0 = std::exp(-1.0 / u);
  return f1 / (f1 + f0);
}

namespace {

// Full-coordinate view with the periodic z-coordinates wrapped to [-1/2,1/2).
double wrapped_coord(const Point& x, const Geometry& g, int i /*0-based*/) {
  double v = i < g.k ? x.y[i] : x.z[i - g.k];
  if (i >= g.k && i < g.k + g.kbar) v -= std::round(v);
  return v;
}

}  // namespace

double m_minus_one(const Point& x, const CurvatureModel& m, const Geometry& g) {
  double norm2 = 0.0;
  for (int i = 0; i < g.N; ++i) {
    const double v = wrapped_coord(x, g, i);
    norm2 += v * v;
  }
  const double chi = smooth_cutoff(std::sqrt(norm2) / m.delta);
  if (chi == 0.0) return 0.0;
  double s = 0.0;
  for (int i = 0; i < g.N; ++i)
    s += m.a[i] * std::pow(std::fabs(wrapped_coord(x, g, i)), m.beta[i]);
  return chi * s;
}

double m_lower_bound(const CurvatureModel& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.a.size(); ++i)
    s += std::fabs(m.a[i]) * std::pow(m.delta, m.beta[i]);
  return 1.0 - s;
}

double m_eval(const Point& x, const CurvatureModel& m, const Geometry& g) {
  const double val = 1.0 + m_minus_one(x, m, g);
  // Floor keeps M positive even for models that fail the positivity bound;
  // never active for validated ones.
  return std::max(val, 1e-8);
}

}  // namespace strip
