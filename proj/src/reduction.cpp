#include "strip/reduction.hpp"

#include <cmath>
#include <numbers>

#include "strip/parallel.hpp"
#include "strip/rng.hpp"

namespace strip {

ReducedCoefficients reduced_coefficients(const Geometry& g,
                                         const CurvatureModel& m,
                                         const QuadratureSpec& spec) {
  ReducedCoefficients rc;
  rc.two_sharp = g.two_sharp();
  rc.B = compute_B(g, spec);
  rc.D = compute_D(g, spec);
  rc.F = compute_F(g, m, spec);
  rc.Bi.resize(g.h);
  for (int i = 1; i <= g.h; ++i) rc.Bi[i - 1] = compute_Bi(g, m, i, spec);
  rc.S = gamma_prefactor(g) * lattice_sum(g.N - 2, g.kbar).value;
  return rc;
}

double c0_eval(const ReducedCoefficients& rc, const CurvatureModel& m,
               const Geometry& g) {
  const double sumJ = m.sum_a_over_J();
  if (!(sumJ < 0.0))
    throw std::domain_error("c0_eval: requires sum_{i in J} a_i < 0");
  const double beta = m.beta_min();
  const double bracket =
      -rc.F * sumJ / ((rc.two_sharp - 1.0) * rc.B * rc.D * rc.S);
  return std::pow(bracket, 1.0 / (beta - (g.N - 2)));
}

ReducedSolution solve_reduced(const ReducedCoefficients& rc,
                              const CurvatureModel& m, const Geometry& g) {
  ReducedSolution sol;
  sol.C0 = c0_eval(rc, m, g);
  const double beta = m.beta_min();
  const double expo = (g.N - 2) / (beta - (g.N - 2));
  sol.lambda_L = sol.C0 * std::pow(g.L, expo);
  sol.zhat0.assign(g.h, 0.0);
  const double ratio = sol.lambda_L * std::pow(g.L, -expo);
  sol.window_ok = ratio >= 0.5 * sol.C0 && ratio <= 2.0 * sol.C0;
  return sol;
}

namespace {

// Monte Carlo over the ball |xi - xhat| <= 1 in the blown-up variable
// u = lambda (xi - xhat): proposal multivariate t(nu=1), antithetic pairs.
struct BallMc {
  double mean = 0.0;
  double sigma = 0.0;
};

template <typename F>
BallMc ball_mc(const Geometry& g, double lambda, const F& f_of_u,
               long long samples, std::uint64_t seed) {
  const int N = g.N;
  const double log_cn = std::lgamma(0.5 * (N + 1)) - std::lgamma(0.5) -
                        0.5 * N * std::log(std::numbers::pi);
  // Scale mixture of Student-t(nu=1) proposals: the narrow component covers
  // the unit core, the wide one the |u|^{beta}-weighted tail out to the
  // ball edge (variance would grow like sqrt(lambda) without it).
  const double wide = std::max(std::sqrt(lambda), 2.0);
  const double log_wide = std::log(wide);
  constexpr long long kChunk = 4096;
  const long long pairs = std::max<long long>(samples / 2, 1);
  const std::size_t chunks =
      static_cast<std::size_t>((pairs + kChunk - 1) / kChunk);
  struct Acc {
    double sum = 0.0, sumsq = 0.0;
    long long cnt = 0;
  };
  auto worker = [&](std::size_t ci) {
    Rng rng(Rng::derive(seed, ci));
    Acc a;
    std::vector<double> u(N);
    const long long lo = static_cast<long long>(ci) * kChunk;
    const long long hi = std::min(pairs, lo + kChunk);
    for (long long s = lo; s < hi; ++s) {
      double chi;
      do {
        chi = rng.normal();
      } while (chi == 0.0);
      const double scale = rng.uniform() < 0.5 ? 1.0 : wide;
      const double inv = scale / std::fabs(chi);
      double q2 = 0.0;
      for (int d = 0; d < N; ++d) {
        u[d] = rng.normal() * inv;
        q2 += u[d] * u[d];
      }
      double v = 0.0;
      if (q2 <= lambda * lambda) {
        const double lp1 = log_cn - 0.5 * (N + 1) * std::log1p(q2);
        const double lp2 = log_cn - N * log_wide -
                           0.5 * (N + 1) * std::log1p(q2 / (wide * wide));
        const double hi_p = std::max(lp1, lp2);
        const double p = 0.5 * std::exp(hi_p) *
                         (std::exp(lp1 - hi_p) + std::exp(lp2 - hi_p));
        double va = f_of_u(u);
        for (int d = 0; d < N; ++d) u[d] = -u[d];
        double vb = f_of_u(u);
        if (!std::isfinite(va)) va = 0.0;
        if (!std::isfinite(vb)) vb = 0.0;
        v = 0.5 * (va + vb) / p;
      }
      a.sum += v;
      a.sumsq += v * v;
      a.cnt += 1;
    }
    return a;
  };
  const auto parts = run_chunks<Acc>(chunks, worker);
  double sum = 0.0, sumsq = 0.0;
  long long cnt = 0;
  for (const auto& p : parts) {
    sum += p.sum;
    sumsq += p.sumsq;
    cnt += p.cnt;
  }
  BallMc r;
  r.mean = sum / cnt;
  const double var = std::max(0.0, sumsq / cnt - r.mean * r.mean);
  r.sigma = std::sqrt(var / cnt);
  return r;
}

double w01_u(const std::vector<double>& u, const Geometry& g) {
  double r2 = 0.0, s2 = 0.0;
  for (int i = 0; i < g.k; ++i) r2 += u[i] * u[i];
  for (int i = g.k; i < g.N; ++i) s2 += u[i] * u[i];
  return w_rs(std::sqrt(r2), std::sqrt(s2), 1.0, g);
}

double psi0_u(const std::vector<double>& u, const Geometry& g) {
  double r2 = 0.0, s2 = 0.0;
  for (int i = 0; i < g.k; ++i) r2 += u[i] * u[i];
  for (int i = g.k; i < g.N; ++i) s2 += u[i] * u[i];
  return psi0_rs(std::sqrt(r2), std::sqrt(s2), g);
}

double y_norm_u(const std::vector<double>& u, const Geometry& g) {
  double r2 = 0.0;
  for (int i = 0; i < g.k; ++i) r2 += u[i] * u[i];
  return std::sqrt(r2);
}

}  // namespace

ConsistencyReport consistency_check(const BubbleParams& p, const Geometry& g,
                                    const CurvatureModel& m,
                                    const ReducedCoefficients& rc,
                                    ConsistencyTarget which,
                                    const ConsistencyConfig& cfg) {
  ConsistencyReport rep;
  const double lam = p.lambda;
  const double ts = g.two_sharp();
  const double p1 = ts - 1.0;
  const double mhalf = g.half_nm2();
  const double beta = m.beta_min();

  Point xhat;
  xhat.y.assign(g.k, 0.0);
  xhat.z = p.zhat;
  xhat.z.resize(g.h, 0.0);

  const auto offsets =
      enumerate_lattice(g.kbar, cfg.lattice_radius, /*include_zero=*/false);
  // Gamma(xhat, xhat + P_L^j) sum; equals S_R / L^{N-2} exactly.
  double gsum = 0.0;
  for (const auto& off : offsets)
    gsum += gamma_kernel_dist(g.L * offset_norm(off), g);

  std::vector<Point> centers;
  if (cfg.phi_mode == PhiMode::exact) {
    for (const auto& off : offsets)
      centers.push_back(translate_point(xhat, off, g.L));
  }

  // phi evaluated at xi = xhat + u/lambda. The frozen mode uses the
  // kernel-sum approximant with the kernel pinned at xhat; the exact mode
  // sums the translate bubbles (complement corrections are O(1/lambda)
  // relatively and ignored here).
  auto phi_at = [&](const std::vector<double>& u) {
    if (cfg.phi_mode == PhiMode::frozen)
      return -rc.B * std::pow(lam, -mhalf) * gsum;
    double acc = 0.0;
    Point xi = xhat;
    for (int i = 0; i < g.k; ++i) xi.y[i] = u[i] / lam;
    for (int i = 0; i < g.h; ++i) xi.z[i] = xhat.z[i] + u[g.k + i] / lam;
    for (const auto& c : centers) {
      const double ry = xi.y_norm();
      double dz2 = 0.0;
      for (int i = 0; i < g.h; ++i) {
        const double d = xi.z[i] - c.z[i];
        dz2 += d * d;
      }
      acc -= w_rs(ry, std::sqrt(dz2), lam, g);
    }
    return acc;
  };

  // ---- discrepancy term, lambda direction ----
  {
    auto f = [&](const std::vector<double>& u) {
      const double w = w01_u(u, g);
      return std::pow(w, ts - 2.0) * phi_at(u) * psi0_u(u, g) /
             std::max(y_norm_u(u, g), 1e-300);
    };
    const auto mc = ball_mc(g, lam, f, cfg.samples, cfg.seed);
    const double scale = p1 * std::pow(lam, mhalf + 1.0 - g.N);
    rep.phi_numeric = scale * mc.mean;
    rep.phi_sigma = scale * mc.sigma;
    rep.phi_closed = p1 * rc.B * rc.D * rc.S /
                     (std::pow(lam, g.N - 1.0) * std::pow(g.L, g.N - 2.0));
    rep.phi_ratio = rep.phi_numeric / rep.phi_closed;
    if (rep.phi_sigma > 0.2 * std::fabs(rep.phi_closed)) rep.inconclusive = true;
  }

  // ---- curvature term ----
  if (which == ConsistencyTarget::lambda) {
    auto f = [&](const std::vector<double>& u) {
      Point xi = xhat;
      for (int i = 0; i < g.k; ++i) xi.y[i] = u[i] / lam;
      for (int i = 0; i < g.h; ++i) xi.z[i] = xhat.z[i] + u[g.k + i] / lam;
      const double w = w01_u(u, g);
      return m_minus_one(xi, m, g) * std::pow(w, p1) * psi0_u(u, g) /
             std::max(y_norm_u(u, g), 1e-300);
    };
    const auto mc = ball_mc(g, lam, f, cfg.samples, cfg.seed + 1);
    const double scale = std::pow(lam, -1.0);
    rep.m_numeric = scale * mc.mean;
    rep.m_sigma = scale * mc.sigma;
    rep.m_closed = -rc.F * m.sum_a_over_J() / std::pow(lam, beta + 1.0);
    rep.m_ratio = rep.m_numeric / rep.m_closed;
  } else {
    const int i = cfg.z_index;
    if (i < 1 || i > g.h)
      throw std::domain_error("consistency_check: z_index out of 1..h");
    const double beta_i = m.beta[g.k + i - 1];
    auto f = [&](const std::vector<double>& u) {
      Point xi = xhat;
      for (int d = 0; d < g.k; ++d) xi.y[d] = u[d] / lam;
      for (int d = 0; d < g.h; ++d) xi.z[d] = xhat.z[d] + u[g.k + d] / lam;
      const double w = w01_u(u, g);
      // Z_i in blown-up form: lambda^{m+1} * 2 m C u_{k+i} D^{-N/2};
      // the scale factor is applied outside.
      const double zi = 2.0 * mhalf * c_nk(g) * u[g.k + i - 1] *
                        std::pow(w / c_nk(g), double(g.N) / (g.N - 2));
      return m_minus_one(xi, m, g) * std::pow(w, p1) * zi /
             std::max(y_norm_u(u, g), 1e-300);
    };
    const auto mc = ball_mc(g, lam, f, cfg.samples, cfg.seed + 1);
    const double scale = lam;  // lambda^{N/2 + (m+1) + 1 - N} = lambda
    rep.m_numeric = scale * mc.mean;
    rep.m_sigma = scale * mc.sigma;
    const double lz = lam * (i - 1 < static_cast<int>(p.zhat.size())
                                 ? p.zhat[i - 1]
                                 : 0.0);
    rep.m_closed = -rc.Bi[i - 1] * lz / std::pow(lam, beta_i - 1.0);
    rep.m_ratio = rep.m_closed != 0.0 ? rep.m_numeric / rep.m_closed : 0.0;
  }
  if (rep.m_sigma > 0.2 * std::fabs(rep.m_closed) && rep.m_closed != 0.0)
    rep.inconclusive = true;
  return rep;
}

}  // namespace strip
