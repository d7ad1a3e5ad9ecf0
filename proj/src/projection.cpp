#include "strip/projection.hpp"

#include <cmath>
#include <numbers>

#include "strip/parallel.hpp"
#include "strip/rng.hpp"

namespace strip {

namespace {

// Mixture proposal over the strip complement: Lomax tilt off each slab face,
// a Student-t transverse block, and a singular ball around each translate
// kernel point x_j = x + P_L^j (Gamma(x_j, .)^2 is not integrable near x_j,
// so plain face sampling would have infinite variance).
struct ComplementSampler {
  const Geometry& g;
  double face_alpha;
  double face_scale;
  double trans_scale;
  double ball_radius;
  double log_tnorm;  // mv-t normalisation for the transverse block

  struct Ball {
    Point center;
    double weight;
  };
  std::vector<Ball> balls;
  double w_face_total = 0.5;
  double w_face_each = 0.0;
  std::vector<double> cum;  // component selection thresholds
  Point that;               // (0, zhat): transverse block center

  ComplementSampler(const Point& x, const std::vector<double>& zhat,
                    const Geometry& gg,
                    const std::vector<LatticeOffset>& ball_offsets)
      : g(gg) {
    // The transverse-integrated mass beyond a face falls off like
    // (L/2 + u)^{-2} in the face-normal excess u; a heavy Lomax tail with
    // index 1.5 at scale L/2 keeps the weight ratios bounded.
    face_alpha = 1.5;
    face_scale = 0.5 * g.L;
    trans_scale = 0.5 * g.L;
    ball_radius = 0.25 * g.L;
    const int d = g.N - 1;
    log_tnorm = std::lgamma(0.5 * (d + 1)) - std::lgamma(0.5) -
                0.5 * d * std::log(std::numbers::pi) -
                d * std::log(trans_scale);
    that.y.assign(g.k, 0.0);
    that.z.assign(g.h, 0.0);
    for (std::size_t i = 0; i < zhat.size() && i < that.z.size(); ++i)
      that.z[i] = zhat[i];

    const double strip_gap = 0.5 * g.L - x.z1_abs_max(g.kbar);
    double wsum = 0.0;
    for (const auto& off : ball_offsets) {
      const double nrm = offset_norm(off);
      if (nrm == 0.0 && strip_gap > 0.5 * ball_radius) continue;
      Ball b;
      b.center = translate_point(x, off, g.L);
      b.weight = nrm == 0.0 ? 1.0 : std::pow(nrm, -(g.N - 2));
      wsum += b.weight;
      balls.push_back(b);
    }
    double w_ball_total = balls.empty() ? 0.0 : 0.5;
    w_face_total = 1.0 - w_ball_total;
    w_face_each = w_face_total / (2.0 * g.kbar);
    for (auto& b : balls) b.weight *= w_ball_total / wsum;

    cum.reserve(2 * g.kbar + balls.size());
    double acc = 0.0;
    for (int i = 0; i < 2 * g.kbar; ++i) cum.push_back(acc += w_face_each);
    for (const auto& b : balls) cum.push_back(acc += b.weight);
    cum.back() = 1.0;
  }

  // Transverse coordinates are every coordinate except z[dir].
  void sample_face(Rng& rng, int dir, double sign, Point& xi) const {
    const double u = rng.lomax(face_alpha, face_scale);
    double chi;
    do {
      chi = rng.normal();
    } while (chi == 0.0);
    const double inv = trans_scale / std::fabs(chi);
    for (int i = 0; i < g.k; ++i) xi.y[i] = that.y[i] + inv * rng.normal();
    for (int i = 0; i < g.h; ++i) {
      if (i == dir)
        xi.z[i] = sign * (0.5 * g.L + u);
      else
        xi.z[i] = that.z[i] + inv * rng.normal();
    }
  }

  void sample_ball(Rng& rng, const Ball& b, Point& xi) const {
    const double r = ball_radius * std::sqrt(rng.uniform());
    double nrm2 = 0.0;
    std::vector<double> dirv(g.N);
    for (int i = 0; i < g.N; ++i) {
      dirv[i] = rng.normal();
      nrm2 += dirv[i] * dirv[i];
    }
    const double sc = r / std::sqrt(std::max(nrm2, 1e-300));
    for (int i = 0; i < g.k; ++i) xi.y[i] = b.center.y[i] + sc * dirv[i];
    for (int i = 0; i < g.h; ++i)
      xi.z[i] = b.center.z[i] + sc * dirv[g.k + i];
  }

  void sample(Rng& rng, Point& xi) const {
    const double pick = rng.uniform();
    std::size_t c = 0;
    while (c + 1 < cum.size() && pick > cum[c]) ++c;
    if (c < static_cast<std::size_t>(2 * g.kbar)) {
      sample_face(rng, static_cast<int>(c / 2), c % 2 ? -1.0 : 1.0, xi);
    } else {
      sample_ball(rng, balls[c - 2 * g.kbar], xi);
    }
  }

  double face_density(const Point& xi, int dir, double sign) const {
    const double u = sign * xi.z[dir] - 0.5 * g.L;
    if (u <= 0.0) return 0.0;
    const double q_u = face_alpha / face_scale *
                       std::pow(1.0 + u / face_scale, -face_alpha - 1.0);
    double q2 = 0.0;
    for (int i = 0; i < g.k; ++i) {
      const double d = (xi.y[i] - that.y[i]) / trans_scale;
      q2 += d * d;
    }
    for (int i = 0; i < g.h; ++i) {
      if (i == dir) continue;
      const double d = (xi.z[i] - that.z[i]) / trans_scale;
      q2 += d * d;
    }
    return q_u * std::exp(log_tnorm - 0.5 * g.N * std::log1p(q2));
  }

  double ball_density(const Point& xi, const Ball& b) const {
    double d2 = 0.0;
    for (int i = 0; i < g.k; ++i) {
      const double d = xi.y[i] - b.center.y[i];
      d2 += d * d;
    }
    for (int i = 0; i < g.h; ++i) {
      const double d = xi.z[i] - b.center.z[i];
      d2 += d * d;
    }
    const double r = std::sqrt(d2);
    if (r >= ball_radius || r <= 0.0) return 0.0;
    return 2.0 / (surface_area(g.N) * ball_radius * ball_radius) *
           std::pow(r, 2 - g.N);
  }

  double density(const Point& xi) const {
    double q = 0.0;
    for (int dir = 0; dir < g.kbar; ++dir) {
      q += w_face_each * face_density(xi, dir, 1.0);
      q += w_face_each * face_density(xi, dir, -1.0);
    }
    for (const auto& b : balls) q += b.weight * ball_density(xi, b);
    return q;
  }
};

struct McTotals {
  std::vector<double> per_translate;      // means
  std::vector<double> per_translate_err;  // std errors
  double total = 0.0;
  double total_err = 0.0;
};

// idx = 0: integrate W^{2#-1}/|xi^1| against each translate kernel;
// idx = 1..h+1: the parameter derivative (2#-1) W^{2#-2} Z_idx / |xi^1|.
McTotals complement_mc(const Point& x, const BubbleParams& p,
                       const Geometry& g,
                       const std::vector<LatticeOffset>& offsets,
                       const ProjectionConfig& cfg, int idx) {
  ComplementSampler sampler(x, p.zhat, g, offsets);
  std::vector<Point> kernel_pts;
  kernel_pts.reserve(offsets.size());
  for (const auto& off : offsets)
    kernel_pts.push_back(translate_point(x, off, g.L));

  const double p1 = g.two_sharp() - 1.0;
  const std::size_t T = offsets.size();
  constexpr long long kChunk = 4096;
  const long long n = std::max<long long>(cfg.complement_samples, 1);
  const std::size_t chunks = static_cast<std::size_t>((n + kChunk - 1) / kChunk);

  struct Acc {
    std::vector<double> sum, sumsq;
    double tot = 0.0, totsq = 0.0;
    long long cnt = 0;
  };
  auto worker = [&](std::size_t ci) {
    Rng rng(Rng::derive(cfg.seed, ci));
    Acc a;
    a.sum.assign(T, 0.0);
    a.sumsq.assign(T, 0.0);
    Point xi;
    xi.y.assign(g.k, 0.0);
    xi.z.assign(g.h, 0.0);
    const long long lo = static_cast<long long>(ci) * kChunk;
    const long long hi = std::min(n, lo + kChunk);
    for (long long s = lo; s < hi; ++s) {
      sampler.sample(rng, xi);
      a.cnt += 1;
      if (xi.inside_strip(g)) {
        a.totsq += 0.0;
        continue;  // integrand supported on the complement only
      }
      const double q = sampler.density(xi);
      const double ry = std::max(xi.y_norm(), 1e-300);
      double base;
      if (idx == 0) {
        base = std::pow(w_eval(xi, p, g), p1) / (ry * q);
      } else {
        base = p1 * std::pow(w_eval(xi, p, g), p1 - 1.0) *
               w_derivative(xi, p, g, idx) / (ry * q);
      }
      double tot = 0.0;
      for (std::size_t t = 0; t < T; ++t) {
        double d2 = 0.0;
        for (int i = 0; i < g.k; ++i) {
          const double d = kernel_pts[t].y[i] - xi.y[i];
          d2 += d * d;
        }
        for (int i = 0; i < g.h; ++i) {
          const double d = kernel_pts[t].z[i] - xi.z[i];
          d2 += d * d;
        }
        const double dist = std::max(std::sqrt(d2), 1e-12 * g.L);
        const double v = gamma_kernel_dist(dist, g) * base;
        a.sum[t] += v;
        a.sumsq[t] += v * v;
        tot += v;
      }
      a.tot += tot;
      a.totsq += tot * tot;
    }
    return a;
  };

  const auto parts = run_chunks<Acc>(chunks, worker);
  Acc all;
  all.sum.assign(T, 0.0);
  all.sumsq.assign(T, 0.0);
  for (const auto& a : parts) {
    for (std::size_t t = 0; t < T; ++t) {
      all.sum[t] += a.sum[t];
      all.sumsq[t] += a.sumsq[t];
    }
    all.tot += a.tot;
    all.totsq += a.totsq;
    all.cnt += a.cnt;
  }
  McTotals out;
  out.per_translate.resize(T);
  out.per_translate_err.resize(T);
  const double cnt = static_cast<double>(all.cnt);
  for (std::size_t t = 0; t < T; ++t) {
    const double mean = all.sum[t] / cnt;
    out.per_translate[t] = mean;
    const double var = std::max(0.0, all.sumsq[t] / cnt - mean * mean);
    out.per_translate_err[t] = std::sqrt(var / cnt);
  }
  const double mean = all.tot / cnt;
  out.total = mean;
  const double var = std::max(0.0, all.totsq / cnt - mean * mean);
  out.total_err = std::sqrt(var / cnt);
  return out;
}

// Certified bound on sum_{|m| > R} W(x + P_L^j) via the nearest-image
// distance; d1 is the periodic-coordinate offset |(z - zhat)_{1..kbar}|.
double w_translate_tail(const Point& x, const BubbleParams& p,
                        const Geometry& g, double radius) {
  double d1 = 0.0;
  for (int i = 0; i < g.kbar; ++i) {
    const double d = x.z[i] - (i < static_cast<int>(p.zhat.size())
                                   ? p.zhat[i]
                                   : 0.0);
    d1 += d * d;
  }
  const double kap = std::sqrt(d1) / g.L;
  const double m = g.half_nm2();
  if (radius <= 2.0 * kap + 2.0 * std::sqrt(double(g.kbar)))
    throw std::domain_error("pw_eval: lattice radius too small for the tail");
  return c_nk(g) * std::pow(p.lambda, -m) *
         std::pow(1.0 - kap / radius, -(g.N - 2)) *
         std::pow(g.L, -(g.N - 2)) *
         lattice_tail_bound(g.N - 2, g.kbar, radius);
}

}  // namespace

std::pair<double, double> complement_correction(const Point& x,
                                                const BubbleParams& p,
                                                const Geometry& g,
                                                const LatticeOffset& j,
                                                const ProjectionConfig& cfg) {
  const std::vector<LatticeOffset> offsets{j};
  const auto mc = complement_mc(x, p, g, offsets, cfg, 0);
  return {mc.per_translate[0], mc.per_translate_err[0]};
}

ProjectionValue pw_eval(const Point& x, const BubbleParams& p,
                        const Geometry& g, const ProjectionConfig& cfg) {
  const auto offsets =
      enumerate_lattice(g.kbar, cfg.lattice_radius, /*include_zero=*/true);
  double wsum = 0.0;
  for (const auto& off : offsets)
    wsum += w_eval(translate_point(x, off, g.L), p, g);
  const auto mc = complement_mc(x, p, g, offsets, cfg, 0);
  ProjectionValue v;
  v.value = wsum - mc.total;
  v.stat_error = mc.total_err;
  v.tail_bound = w_translate_tail(x, p, g, cfg.lattice_radius);
  return v;
}

ProjectionValue phi_eval(const Point& x, const BubbleParams& p,
                         const Geometry& g, const ProjectionConfig& cfg) {
  const auto offsets =
      enumerate_lattice(g.kbar, cfg.lattice_radius, /*include_zero=*/true);
  double wsum = 0.0;
  for (const auto& off : offsets)
    if (offset_norm(off) > 0.0)
      wsum += w_eval(translate_point(x, off, g.L), p, g);
  const auto mc = complement_mc(x, p, g, offsets, cfg, 0);
  ProjectionValue v;
  v.value = -wsum + mc.total;
  v.stat_error = mc.total_err;
  v.tail_bound = w_translate_tail(x, p, g, cfg.lattice_radius);
  return v;
}

ProjectionValue pw_derivative(const Point& x, const BubbleParams& p,
                              const Geometry& g, int idx,
                              const ProjectionConfig& cfg) {
  alpha_sign(idx, g.h);
  const auto offsets =
      enumerate_lattice(g.kbar, cfg.lattice_radius, /*include_zero=*/true);
  double dsum = 0.0;
  for (const auto& off : offsets)
    dsum += w_derivative(translate_point(x, off, g.L), p, g, idx);
  const auto mc = complement_mc(x, p, g, offsets, cfg, idx);
  ProjectionValue v;
  v.value = dsum - mc.total;
  v.stat_error = mc.total_err;
  // |Z_i| <= (N-2) lambda W and |Z_{h+1}| <= (N-2)/(2 lambda) W pointwise,
  // for both the translate terms and the differentiated corrections.
  const double wt = w_translate_tail(x, p, g, cfg.lattice_radius);
  const double fac = idx <= g.h ? (g.N - 2) * p.lambda
                                : 0.5 * (g.N - 2) / p.lambda;
  v.tail_bound = (1.0 + g.two_sharp() - 1.0) * fac * wt;
  return v;
}

ExpansionReport phi_expansion_residual(const BubbleParams& p,
                                       const Geometry& g_base,
                                       const ProjectionConfig& cfg,
                                       const std::vector<Point>& x_samples,
                                       const std::vector<double>& l_grid,
                                       double b_const) {
  ExpansionReport rep;
  const double m = g_base.half_nm2();
  const auto offsets =
      enumerate_lattice(g_base.kbar, cfg.lattice_radius, /*include_zero=*/false);
  Point xhat;
  xhat.y.assign(g_base.k, 0.0);
  xhat.z = p.zhat;
  xhat.z.resize(g_base.h, 0.0);

  for (double L : l_grid) {
    Geometry g = g_base;
    g.L = L;
    ExpansionRow row;
    row.L = L;
    for (const auto& x : x_samples) {
      const auto phi = phi_eval(x, p, g, cfg);
      double gsum = 0.0;
      for (const auto& off : offsets)
        gsum += gamma_kernel(x, translate_point(xhat, off, g.L), g);
      const double e = phi.value + b_const * std::pow(p.lambda, -m) * gsum;
      row.max_abs_e = std::max(row.max_abs_e, std::fabs(e));
      row.max_stat = std::max(row.max_stat, phi.stat_error);
    }
    rep.rows.push_back(row);
  }

  std::vector<std::pair<double, double>> pairs;
  for (const auto& r : rep.rows) {
    pairs.emplace_back(r.L, r.max_abs_e);
    if (3.0 * r.max_stat > 0.5 * r.max_abs_e) rep.inconclusive = true;
  }
  const auto fit = scaling_exponent_fit(pairs);
  rep.exponent = fit.exponent;
  rep.half_width = fit.half_width;
  return rep;
}

}  // namespace strip
