#include "strip/quad.hpp"

#include <cmath>
#include <numbers>

#include "strip/parallel.hpp"
#include "strip/rng.hpp"

namespace strip {

namespace {

constexpr double kPiHalf = std::numbers::pi / 2.0;

// exp-sinh node for (0, inf): x = scale * exp(pi/2 sinh t),
// weight = scale * pi/2 cosh(t) * exp(pi/2 sinh t).
struct DeNode {
  double x;
  double w;
};

DeNode de_node(double t, double scale) {
  const double e = std::exp(kPiHalf * std::sinh(t));
  return {scale * e, scale * kPiHalf * std::cosh(t) * e};
}

// Outward trapezoid sweep from t = 0 at step h. term_at(t) gives the full
// node term (weight times integrand); a direction stops once several
// consecutive terms are negligible against the accumulated scale.
template <typename G>
double de_sweep(const G& term_at, double h) {
  constexpr double kTmax = 6.2;
  constexpr int kCalm = 4;
  double sum = term_at(0.0);
  double peak = std::fabs(sum);
  for (int dir : {+1, -1}) {
    int calm = 0;
    for (int i = 1;; ++i) {
      const double t = dir * i * h;
      if (std::fabs(t) > kTmax) break;
      const double term = term_at(t);
      sum += term;
      peak = std::max(peak, std::fabs(term));
      if (std::fabs(term) <= 1e-18 * (std::fabs(sum) + peak + 1e-300)) {
        if (++calm >= kCalm && std::fabs(t) >= 1.0) break;
      } else {
        calm = 0;
      }
    }
  }
  return sum;
}

template <typename F>
double de_sum_1d(const F& f, double h, double scale) {
  return de_sweep(
      [&](double t) {
        const DeNode n = de_node(t, scale);
        const double v = f(n.x);
        return std::isfinite(v) ? n.w * v : 0.0;
      },
      h);
}

// Full tensor sum at step h; each r-node carries an inner s-sweep.
double de_sum_2d(const std::function<double(double, double)>& f, double h,
                 double r_scale, double s_scale) {
  auto term = [&](double t) {
    const DeNode n = de_node(t, r_scale);
    const double row =
        de_sum_1d([&](double s) { return f(n.x, s); }, h, s_scale);
    return std::isfinite(row) ? n.w * row : 0.0;
  };
  return de_sweep(term, h) * h * h;
}

}  // namespace

IntegralResult integrate_cylindrical(
    const std::function<double(double, double)>& f, const Geometry& g,
    Weight weight, const QuadratureSpec& spec, double r_scale,
    double s_scale) {
  const int rpow = weight == Weight::hardy ? g.k - 2 : g.k - 1;
  const int spow = g.h - 1;
  const double front = surface_area(g.k) * surface_area(g.h);
  auto integrand = [&](double r, double s) {
    return f(r, s) * std::pow(r, rpow) * std::pow(s, spow);
  };

  IntegralResult res;
  double prev = 0.0;
  bool have_prev = false;
  double h = 1.0;
  for (int level = 1; level <= spec.max_panel_doublings; ++level) {
    h *= 0.5;
    const double cur = front * de_sum_2d(integrand, h, r_scale, s_scale);
    if (have_prev) {
      const double diff = std::fabs(cur - prev);
      res.value = cur;
      res.error_estimate = diff;
      res.levels = level;
      if (diff <= spec.rel_tol * std::fabs(cur) + 1e-300) return res;
    }
    prev = cur;
    have_prev = true;
  }
  throw ToleranceError("integrate_cylindrical: tolerance not reached after " +
                           std::to_string(spec.max_panel_doublings) +
                           " doublings",
                       res.value, res.error_estimate);
}

double sphere_moment(double beta, int d) {
  if (d < 1) throw std::domain_error("sphere_moment: dimension must be >= 1");
  if (beta <= -1.0)
    throw std::domain_error("sphere_moment: divergent for beta <= -1");
  if (beta == 0.0) return 1.0;
  if (d == 1) return 1.0;  // S^0 = {-1, +1}
  const double lg = std::lgamma(0.5 * d) + std::lgamma(0.5 * (beta + 1.0)) -
                    0.5 * std::log(std::numbers::pi) -
                    std::lgamma(0.5 * (d + beta));
  return std::exp(lg);
}

double sphere_moment_quad(double beta, int d, const QuadratureSpec&) {
  if (d < 2) return sphere_moment(beta, d);
  // mom = int_0^pi |cos|^beta sin^{d-2} dphi / int_0^pi sin^{d-2} dphi, both
  // symmetric about pi/2. Composite Simpson with cubic grading toward
  // phi = pi/2, where cos^beta has only algebraic smoothness.
  const int n = 1 << 13;
  const double h = 1.0 / n;
  double num = 0.0, den = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = i * h;
    const double omt = 1.0 - t;
    const double phi = kPiHalf * (1.0 - omt * omt * omt);
    const double jac = kPiHalf * 3.0 * omt * omt;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double sp = std::pow(std::sin(phi), d - 2) * jac;
    num += w * std::pow(std::cos(phi), beta) * sp;
    den += w * sp;
  }
  return num / den;
}

McResult mc_oracle(const std::function<double(const Point&)>& f,
                   const Geometry& g, const QuadratureSpec& spec,
                   const Point* center, double scale) {
  const int N = g.N;
  const double log_norm = std::lgamma(0.5 * (N + 1)) - std::lgamma(0.5) -
                          0.5 * N * std::log(std::numbers::pi) -
                          N * std::log(scale);
  Point c;
  c.y.assign(g.k, 0.0);
  c.z.assign(g.h, 0.0);
  if (center) c = *center;

  constexpr long long kChunk = 8192;
  const long long n = spec.mc_samples;
  const std::size_t chunks = static_cast<std::size_t>((n + kChunk - 1) / kChunk);
  struct Acc {
    double sum = 0.0;
    double sumsq = 0.0;
    long long cnt = 0;
  };
  auto worker = [&](std::size_t ci) {
    Rng rng(Rng::derive(spec.mc_seed, ci));
    Acc a;
    const long long lo = static_cast<long long>(ci) * kChunk;
    const long long hi = std::min(n, lo + kChunk);
    Point x = c;
    for (long long i = lo; i < hi; ++i) {
      double q2 = 0.0;
      double chi;
      do {
        chi = rng.normal();
      } while (chi == 0.0);
      const double inv = 1.0 / std::fabs(chi);
      for (int d = 0; d < g.k; ++d) {
        const double zd = rng.normal() * inv;
        x.y[d] = c.y[d] + scale * zd;
        q2 += zd * zd;
      }
      for (int d = 0; d < g.h; ++d) {
        const double zd = rng.normal() * inv;
        x.z[d] = c.z[d] + scale * zd;
        q2 += zd * zd;
      }
      const double log_p = log_norm - 0.5 * (N + 1) * std::log1p(q2);
      const double v = f(x) * std::exp(-log_p);
      if (std::isfinite(v)) {
        a.sum += v;
        a.sumsq += v * v;
        a.cnt += 1;
      }
    }
    return a;
  };
  const auto parts = run_chunks<Acc>(chunks, worker);
  double sum = 0.0, sumsq = 0.0;
  long long cnt = 0;
  for (const auto& a : parts) {
    sum += a.sum;
    sumsq += a.sumsq;
    cnt += a.cnt;
  }
  if (cnt == 0)
    throw std::runtime_error("mc_oracle: degenerate sampling, no usable draws");
  McResult r;
  r.samples = cnt;
  r.estimate = sum / cnt;
  const double var = std::max(0.0, sumsq / cnt - r.estimate * r.estimate);
  r.std_error = std::sqrt(var / cnt);
  return r;
}

double compute_B(const Geometry& g, const QuadratureSpec& spec) {
  const double p1 = g.two_sharp() - 1.0;
  auto f = [&](double r, double s) { return std::pow(w_rs(r, s, 1.0, g), p1); };
  return integrate_cylindrical(f, g, Weight::hardy, spec).value;
}

double compute_D(const Geometry& g, const QuadratureSpec& spec) {
  const double pm2 = g.two_sharp() - 2.0;
  auto f = [&](double r, double s) {
    return -std::pow(w_rs(r, s, 1.0, g), pm2) * psi0_rs(r, s, g);
  };
  return integrate_cylindrical(f, g, Weight::hardy, spec).value;
}

namespace {

// J is confined to one block; the representative coordinate is i = 1 for the
// y-block and i = k+1 for the z-block.
bool j_in_y_block(const CurvatureModel& m, const Geometry& g) {
  for (int j : m.min_set())
    if (j >= g.k) return false;
  return true;
}

}  // namespace

double compute_F(const Geometry& g, const CurvatureModel& m,
                 const QuadratureSpec& spec, FRoute route,
                 bool use_quad_moment) {
  const double beta = m.beta_min();
  const bool yblock = j_in_y_block(m, g);
  const int d = yblock ? g.k : g.h;
  const double mom = use_quad_moment ? sphere_moment_quad(beta, d, spec)
                                     : sphere_moment(beta, d);
  const double ts = g.two_sharp();
  if (route == FRoute::psi0) {
    auto f = [&](double r, double s) {
      const double w = std::pow(yblock ? r : s, beta);
      return -w * std::pow(w_rs(r, s, 1.0, g), ts - 1.0) * psi0_rs(r, s, g);
    };
    return mom * integrate_cylindrical(f, g, Weight::hardy, spec).value;
  }
  auto f = [&](double r, double s) {
    const double w = std::pow(yblock ? r : s, beta);
    return w * std::pow(w_rs(r, s, 1.0, g), ts);
  };
  return beta / ts * mom *
         integrate_cylindrical(f, g, Weight::hardy, spec).value;
}

double compute_Bi(const Geometry& g, const CurvatureModel& m, int i,
                  const QuadratureSpec& spec, BiRoute route) {
  if (i < 1 || i > g.h) throw std::domain_error("compute_Bi: i out of 1..h");
  const double a = m.a[g.k + i - 1];
  const double beta = m.beta[g.k + i - 1];
  if (!(beta > 2.0))
    throw std::domain_error("compute_Bi: needs beta_{k+i} > 2");
  const double ts = g.two_sharp();
  if (route == BiRoute::direct) {
    const double mom = sphere_moment(beta, g.h);
    auto f = [&](double r, double s) {
      return std::pow(s, beta - 1.0) *
             std::pow(w_rs(r, s, 1.0, g), ts - 1.0) * w_ds_rs(r, s, 1.0, g);
    };
    return a * beta * mom *
           integrate_cylindrical(f, g, Weight::hardy, spec).value;
  }
  const double mom = sphere_moment(beta - 2.0, g.h);
  auto f = [&](double r, double s) {
    return std::pow(s, beta - 2.0) * std::pow(w_rs(r, s, 1.0, g), ts);
  };
  return -a * beta * (beta - 1.0) / ts * mom *
         integrate_cylindrical(f, g, Weight::hardy, spec).value;
}

namespace {

// Pointwise Gram integrand W^{2#-2} Z_i Z_j / |y| for the parity assertion.
double gram_integrand_at(const Point& x, const BubbleParams& p,
                         const Geometry& g, int i, int j) {
  const double w = w_eval(x, p, g);
  return std::pow(w, g.two_sharp() - 2.0) * w_derivative(x, p, g, i) *
         w_derivative(x, p, g, j) / x.y_norm();
}

}  // namespace

GramMatrix gram_matrix(const BubbleParams& p, const Geometry& g,
                       const QuadratureSpec& spec) {
  GramMatrix gm;
  gm.h = g.h;
  const int n = g.h + 1;
  gm.entries.assign(n * n, 0.0);
  const double pm2 = g.two_sharp() - 2.0;
  const double lam = p.lambda;
  const double scale = 1.0 / lam;

  for (int i = 1; i <= g.h; ++i) {
    auto f = [&](double r, double s) {
      const double ds = w_ds_rs(r, s, lam, g);
      return std::pow(w_rs(r, s, lam, g), pm2) * ds * ds / g.h;
    };
    gm.entries[(i - 1) * n + (i - 1)] =
        integrate_cylindrical(f, g, Weight::hardy, spec, scale, scale).value;
  }
  auto fl = [&](double r, double s) {
    const double dl = w_dlambda_rs(r, s, lam, g);
    return std::pow(w_rs(r, s, lam, g), pm2) * dl * dl;
  };
  gm.entries[g.h * n + g.h] =
      integrate_cylindrical(fl, g, Weight::hardy, spec, scale, scale).value;

  // Off-diagonals vanish by parity: for i != j the integrand is odd in
  // (z_i - zhat_i) (i <= h), and Z_{h+1} is even in every such coordinate.
  // Assert the antisymmetry at mirrored sample points before writing zeros.
  for (int i = 1; i <= g.h + 1; ++i) {
    for (int j = 1; j < i; ++j) {
      const int zc = (j <= g.h ? j : i) - 1;  // a z-coordinate that flips sign
      for (int sample = 0; sample < 4; ++sample) {
        Point x;
        x.y.assign(g.k, 0.0);
        x.z.assign(g.h, 0.0);
        x.y[0] = 0.3 + 0.4 * sample;
        for (int d = 0; d < g.h; ++d)
          x.z[d] = p.zhat.empty() ? 0.0 : p.zhat[d];
        x.z[zc] += (0.2 + 0.3 * sample) / lam;
        if (g.h >= 2) x.z[(zc + 1) % g.h] += 0.15 / lam;
        Point xm = x;
        xm.z[zc] = 2.0 * (p.zhat.empty() ? 0.0 : p.zhat[zc]) - x.z[zc];
        const double a = gram_integrand_at(x, p, g, i, j);
        const double b = gram_integrand_at(xm, p, g, i, j);
        const double scale_ab = std::max({std::fabs(a), std::fabs(b), 1e-300});
        if (std::fabs(a + b) > 1e-10 * scale_ab)
          throw std::logic_error(
              "gram_matrix: parity assertion failed for off-diagonal pair");
      }
      gm.entries[(i - 1) * n + (j - 1)] = 0.0;
      gm.entries[(j - 1) * n + (i - 1)] = 0.0;
    }
  }
  return gm;
}

}  // namespace strip
