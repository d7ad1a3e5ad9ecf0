#include "strip/norms.hpp"

#include <cmath>

namespace strip {

std::vector<std::string> validate_norm_weights(const NormWeights& w,
                                               const Geometry& g) {
  std::vector<std::string> v;
  if (!(w.theta > 0.0 && w.theta < 0.1))
    v.push_back("theta in (0, 1/10) fails");
  if (!(w.tau(g) > g.kbar))
    v.push_back("tau > kbar fails (translate sums would not converge)");
  if (!(w.lambda > 0.0)) v.push_back("lambda > 0 fails");
  return v;
}

double sigma_eval(const Point& x, const NormWeights& w, const Geometry& g) {
  const double lam = w.lambda;
  const double t = 1.0 + lam * x.y_norm() + lam * x.z_dist(w.zhat);
  return std::min(1.0, std::pow(t / lam, w.tau(g)));
}

namespace {

template <typename F>
double translate_sum(const Point& x, const NormWeights& w, const Geometry& g,
                     const F& term) {
  // zhat_L^j = zhat - L * m; iterate all |m| <= lattice_radius incl. zero.
  const auto offsets =
      enumerate_lattice(g.kbar, w.lattice_radius, /*include_zero=*/true);
  double sum = 0.0;
  std::vector<double> zh = w.zhat;
  zh.resize(g.h, 0.0);
  for (const auto& off : offsets) {
    std::vector<double> zj = zh;
    for (std::size_t i = 0; i < off.size(); ++i) zj[i] -= g.L * off[i];
    sum += term(x.z_dist(zj));
  }
  return sum;
}

}  // namespace

double star_weight(const Point& x, const NormWeights& w, const Geometry& g) {
  const double lam = w.lambda;
  const double m = g.half_nm2();
  const double tau = w.tau(g);
  const double ry = x.y_norm();
  const double s = translate_sum(x, w, g, [&](double dz) {
    return std::pow(lam, m) *
           std::pow(1.0 + lam * ry + lam * dz, -(m + tau));
  });
  return sigma_eval(x, w, g) * s;
}

double starstar_weight(const Point& x, const NormWeights& w,
                       const Geometry& g) {
  const double lam = w.lambda;
  const double tau = w.tau(g);
  const double ry = x.y_norm();
  if (ry <= 0.0)
    throw std::domain_error("starstar_weight: singular on |y| = 0");
  const double s = translate_sum(x, w, g, [&](double dz) {
    return std::pow(lam, 0.5 * g.N) /
           (ry * std::pow(1.0 + lam * ry + lam * dz, 0.5 * g.N + tau));
  });
  return sigma_eval(x, w, g) * s;
}

SampleGrid make_sample_grid(const Geometry& g, const NormWeights& w,
                            int density) {
  SampleGrid grid;
  grid.description = "near-bubble shells + O(1) ring + slab boundary + far field";
  const double lam = w.lambda;
  std::vector<double> zh = w.zhat;
  zh.resize(g.h, 0.0);

  auto push = [&](double ry, const std::vector<double>& dz) {
    Point x;
    x.y.assign(g.k, 0.0);
    x.y[0] = ry;
    x.z = zh;
    for (std::size_t i = 0; i < dz.size() && i < x.z.size(); ++i)
      x.z[i] += dz[i];
    grid.points.push_back(std::move(x));
  };

  // Near-bubble shells: lambda * dist log-spaced in [1e-2, 1e2], three
  // direction mixes (pure y, pure z1, diagonal).
  const int shells = 16 * density;
  for (int i = 0; i < shells; ++i) {
    const double t = std::pow(10.0, -2.0 + 4.0 * i / (shells - 1.0));
    const double d = t / lam;
    push(d, std::vector<double>(g.h, 0.0));
    push(0.25 * d, {d});
    if (g.h >= 2) push(0.5 * d, {0.5 * d, 0.5 * d});
  }
  // O(1)-distance ring (these dominate the l-term norm at large lambda).
  for (double d : {0.3, 0.6, 1.0, 2.0}) {
    push(d, std::vector<double>(g.h, 0.0));
    push(0.3 * d, {d});
    if (g.h >= 2) push(0.4 * d, {0.3 * d, d});
  }
  // Slab boundary: z1 at +-L/2 with a small inward margin.
  const double zb = 0.5 * g.L * (1.0 - 1e-9);
  for (double ry : {0.2, 1.0, 5.0}) {
    push(ry, {zb - zh[0]});
    push(ry, {-zb - zh[0]});
  }
  // Far field in y and in the free z-directions.
  for (double d : {10.0, 40.0, 120.0}) {
    push(d, std::vector<double>(g.h, 0.0));
    if (g.h > g.kbar) {
      std::vector<double> dz(g.h, 0.0);
      dz[g.h - 1] = d;
      push(0.5, dz);
    }
  }
  return grid;
}

NormResult weighted_norm(const std::vector<double>& u_values,
                         const SampleGrid& grid, const NormWeights& w,
                         const Geometry& g, NormMode mode) {
  if (u_values.size() != grid.points.size())
    throw std::invalid_argument("weighted_norm: values/grid size mismatch");
  if (grid.points.empty())
    throw std::invalid_argument("weighted_norm: empty grid");
  NormResult res;
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    const Point& x = grid.points[i];
    if (mode == NormMode::starstar && x.y_norm() <= 0.0) {
      ++res.excluded;
      continue;
    }
    const double den = mode == NormMode::star ? star_weight(x, w, g)
                                              : starstar_weight(x, w, g);
    const double ratio = std::fabs(u_values[i]) / den;
    if (ratio > res.value) {
      res.value = ratio;
      res.argmax = static_cast<int>(i);
    }
  }
  return res;
}

double l_term_eval(const Point& x, const BubbleParams& p, const Geometry& g,
                   const CurvatureModel& m, const ProjectionConfig& cfg) {
  const double ry = x.y_norm();
  if (ry <= 0.0)
    throw std::domain_error("l_term_eval: singular weight at |y| = 0");
  const double p1 = g.two_sharp() - 1.0;
  const double w = w_eval(x, p, g);
  const double phi = phi_eval(x, p, g, cfg).value;
  const double u = phi / w;
  const double wp = std::pow(w, p1);
  // PW^{2#-1} = W^{2#-1} (1-u)^{2#-1}; both pieces of
  //   l = [(M-1) PW^{2#-1} + (PW^{2#-1} - W^{2#-1})]/|y|
  // stay accurate when u is far below double epsilon.
  double pw_pow, diff_pow;
  if (u < 1.0) {
    const double lg = p1 * std::log1p(-u);
    pw_pow = wp * std::exp(lg);
    diff_pow = wp * std::expm1(lg);
  } else {
    pw_pow = 0.0;
    diff_pow = -wp;
  }
  const double m1 = m_minus_one(x, m, g);
  return (m1 * pw_pow + diff_pow) / ry;
}

double nonlinear_remainder(const Point& x, double pw_value, double omega_value,
                           const CurvatureModel& m, const Geometry& g) {
  const double ry = x.y_norm();
  if (ry <= 0.0)
    throw std::domain_error("nonlinear_remainder: singular weight at |y| = 0");
  if (pw_value < 0.0)
    throw std::domain_error("nonlinear_remainder: needs pw_value >= 0");
  const double p1 = g.two_sharp() - 1.0;
  const double mv = m_eval(x, m, g);
  if (pw_value == 0.0)
    return mv * std::pow(std::max(omega_value, 0.0), p1) / ry;

  const double u = omega_value / pw_value;
  const double wp = std::pow(pw_value, p1);
  double bracket;
  if (std::fabs(u) < 0.5) {
    // (1+u)^p - 1 - p u via the binomial tail; avoids cancellation when the
    // quadratic term is tiny against 1.
    double term = p1 * u;
    double sum = 0.0;
    for (int n = 2; n <= 64; ++n) {
      term *= (p1 - (n - 1)) * u / n;
      sum += term;
      if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
    }
    bracket = wp * sum;
  } else {
    const double pos = 1.0 + u > 0.0 ? std::pow(1.0 + u, p1) : 0.0;
    bracket = wp * (pos - 1.0 - p1 * u);
  }
  return mv * bracket / ry;
}

}  // namespace strip
