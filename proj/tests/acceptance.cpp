// Acceptance suite: one pass/fail line per criterion. Exit code equals the
// number of failed criteria. Usage: acceptance [--only N].
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include "strip/cli.hpp"
#include "strip/norms.hpp"
#include "strip/reduction.hpp"
#include "strip/rng.hpp"

using namespace strip;

namespace {

const Geometry kGeo{6, 4, 2, 1, 16.0};
const double kPi = std::numbers::pi;

Point pt(std::vector<double> y, std::vector<double> z) {
  Point p;
  p.y = std::move(y);
  p.y.resize(kGeo.k, 0.0);
  p.z = std::move(z);
  p.z.resize(kGeo.h, 0.0);
  return p;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// ---- 1. bubble PDE residual, analytic and finite-difference routes ----
Outcome criterion1() {
  BubbleParams p{std::vector<double>(kGeo.h, 0.0), 1.0};
  double worst_an = 0.0, worst_fd = 0.0;
  int count = 0;
  for (int i = 0; i < 25; ++i) {
    const double r = std::pow(10.0, -3.0 + 6.0 * i / 24.0);
    for (int j = 0; j < 8; ++j) {
      const double s = 0.9 * r * j / 7.0;
      const Point x = pt({r}, {s, 0.0});
      const double w = w_eval(x, p, kGeo);
      const double rhs = std::pow(w, 1.5) / r;
      worst_an = std::max(worst_an,
                          std::fabs(pde_residual(x, p, kGeo)) / rhs);

      // full-stencil finite-difference Laplacian with one Richardson step;
      // derivatives vary on scale r (the |y|-corner) and the far field
      // amplifies truncation by ~r, so the step tracks r
      const double c0 = w_eval(x, p, kGeo);
      auto stencil = [&](double step) {
        double lap = 0.0;
        for (int d = 0; d < kGeo.N; ++d) {
          Point a = x, b = x;
          if (d < kGeo.k) {
            a.y[d] += step;
            b.y[d] -= step;
          } else {
            a.z[d - kGeo.k] += step;
            b.z[d - kGeo.k] -= step;
          }
          lap += w_eval(a, p, kGeo) + w_eval(b, p, kGeo) - 2.0 * c0;
        }
        return lap / (step * step);
      };
      const double h = 8e-4 * r;
      const double lap = (4.0 * stencil(0.5 * h) - stencil(h)) / 3.0;
      worst_fd = std::max(worst_fd, std::fabs(-lap - rhs) / rhs);
      ++count;
    }
  }
  Outcome o;
  o.pass = worst_an <= 1e-8 && worst_fd <= 1e-4;
  std::ostringstream ss;
  ss << "max rel residual over " << count << " pts: analytic " << worst_an
     << " (tol 1e-8), finite-difference " << worst_fd << " (tol 1e-4)";
  o.detail = ss.str();
  return o;
}

// ---- 2. far-field mass identity for B ----
Outcome criterion2() {
  QuadratureSpec spec;
  spec.rel_tol = 1e-9;
  const double b = compute_B(kGeo, spec);
  const double mass = (kGeo.N - 2) * surface_area(kGeo.N) * c_nk(kGeo);
  const double rel = std::fabs(b / mass - 1.0);

  QuadratureSpec mc_spec;
  mc_spec.mc_samples = 1'000'000;
  auto f = [&](const Point& x) {
    const double ry = x.y_norm();
    if (ry <= 0.0) return 0.0;
    BubbleParams p{std::vector<double>(kGeo.h, 0.0), 1.0};
    return std::pow(w_eval(x, p, kGeo), 1.5) / ry;
  };
  const auto mc = mc_oracle(f, kGeo, mc_spec);
  const double zscore = std::fabs(mc.estimate - b) / mc.std_error;

  Outcome o;
  o.pass = rel <= 1e-6 && zscore <= 3.0;
  std::ostringstream ss;
  ss << "B = " << b << " vs 576 pi^3 = " << mass << " (rel " << rel
     << ", tol 1e-6); MC " << mc.estimate << " +/- " << mc.std_error << " ("
     << zscore << " sigma, tol 3)";
  o.detail = ss.str();
  return o;
}

// ---- 3. D identity ----
Outcome criterion3() {
  QuadratureSpec spec;
  spec.rel_tol = 1e-9;
  const double b = compute_B(kGeo, spec);
  const double d = compute_D(kGeo, spec);
  const double want = (kGeo.N - 2) * b / (2.0 * (kGeo.two_sharp() - 1.0));
  const double rel = std::fabs(d / want - 1.0);
  Outcome o;
  o.pass = rel <= 1e-6;
  std::ostringstream ss;
  ss << "D = " << d << " vs (N-2)B/(2(2#-1)) = " << want << " (rel " << rel
     << ", tol 1e-6)";
  o.detail = ss.str();
  return o;
}

// ---- 4. F two-route identity and within-block invariance ----
Outcome criterion4() {
  QuadratureSpec spec;
  spec.rel_tol = 1e-9;
  const auto m = default_model(kGeo);
  const double f1 = compute_F(kGeo, m, spec, FRoute::psi0);
  const double f2 = compute_F(kGeo, m, spec, FRoute::scaling);
  const double f3 = compute_F(kGeo, m, spec, FRoute::scaling, true);
  const double rel12 = std::fabs(f1 / f2 - 1.0);
  const double rel23 = std::fabs(f3 / f2 - 1.0);
  Outcome o;
  o.pass = rel12 <= 1e-5 && rel23 <= 1e-5 && f1 > 0.0;
  std::ostringstream ss;
  ss << "F = " << f1 << "; psi0 vs scaling route rel " << rel12
     << "; moment-route (block invariance) rel " << rel23 << " (tol 1e-5)";
  o.detail = ss.str();
  return o;
}

// ---- 5. B_i by-parts identity ----
Outcome criterion5() {
  QuadratureSpec spec;
  spec.rel_tol = 1e-9;
  const auto m = default_model(kGeo);
  Outcome o;
  o.pass = true;
  std::ostringstream ss;
  for (int i = 1; i <= kGeo.h; ++i) {
    const double bd = compute_Bi(kGeo, m, i, spec, BiRoute::direct);
    const double bp = compute_Bi(kGeo, m, i, spec, BiRoute::by_parts);
    const double rel = std::fabs(bd / bp - 1.0);
    o.pass = o.pass && rel <= 1e-5 && bp != 0.0;
    ss << "B_" << i << " = " << bd << " (by-parts rel " << rel << "); ";
  }
  ss << "tol 1e-5, all nonzero";
  o.detail = ss.str();
  return o;
}

// ---- 6. lattice sums ----
Outcome criterion6() {
  const auto r1 = lattice_sum(4.0, 1, 0.0, 1e-9);
  const double w1 = kPi * kPi * kPi * kPi / 45.0;
  const auto r2 = lattice_sum(4.0, 2, 0.0, 5e-7);
  const double w2 = 6.02681203969194;
  const double e1 = std::fabs(r1.value - w1);
  const double e2 = std::fabs(r2.value - w2);
  Outcome o;
  o.pass = e1 <= 1e-8 && e2 <= 1e-6 && e1 <= r1.tail_bound &&
           e2 <= r2.tail_bound;
  std::ostringstream ss;
  ss << "sum(4,1) err " << e1 << " (tol 1e-8, certified " << r1.tail_bound
     << "); sum(4,2) err " << e2 << " (tol 1e-6, certified " << r2.tail_bound
     << ")";
  o.detail = ss.str();
  return o;
}

// ---- 7. Gram structure ----
Outcome criterion7() {
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  BubbleParams p{std::vector<double>(kGeo.h, 0.0), 3.0};
  const auto g1 = gram_matrix(p, kGeo, spec);
  BubbleParams p2 = p;
  p2.lambda *= 2.0;
  const auto g2 = gram_matrix(p2, kGeo, spec);
  bool off_zero = true, diag_pos = true;
  double worst_ratio = 0.0;
  for (int i = 0; i <= kGeo.h; ++i) {
    diag_pos = diag_pos && g1.at(i, i) > 0.0;
    for (int j = 0; j <= kGeo.h; ++j)
      if (i != j) off_zero = off_zero && g1.at(i, j) == 0.0;
    const double want = std::pow(2.0, 2 * alpha_sign(i + 1, kGeo.h));
    worst_ratio = std::max(worst_ratio,
                           std::fabs(g2.at(i, i) / g1.at(i, i) / want - 1.0));
  }
  Outcome o;
  o.pass = off_zero && diag_pos && worst_ratio <= 1e-10;
  std::ostringstream ss;
  ss << "off-diagonals exact 0: " << (off_zero ? "yes" : "no")
     << "; diagonals positive: " << (diag_pos ? "yes" : "no")
     << "; lambda-scaling ratio dev " << worst_ratio << " (tol 1e-10)";
  o.detail = ss.str();
  return o;
}

// ---- 8. projected-bubble sandwich + periodicity ----
Outcome criterion8() {
  BubbleParams p{std::vector<double>(kGeo.h, 0.0), 50.0};
  ProjectionConfig pc;  // defaults: radius 20, 1e5 samples
  Rng rng(811);
  int checked = 0, violations = 0;
  for (int t = 0; t < 100; ++t) {
    // span core, mid-range, slab boundary and far field
    Point x;
    const int kind = t % 4;
    if (kind == 0)
      x = pt({(0.1 + rng.uniform()) / p.lambda},
             {rng.normal() / p.lambda, rng.normal() / p.lambda});
    else if (kind == 1)
      x = pt({0.05 + rng.uniform(), 0.5 * rng.normal()},
             {rng.normal(), rng.normal()});
    else if (kind == 2)
      x = pt({0.3 + rng.uniform()},
             {(rng.uniform() - 0.5) * 0.999 * kGeo.L, rng.normal()});
    else
      x = pt({5.0 + 20.0 * rng.uniform()}, {0.2, 10.0 * rng.normal()});
    if (!x.inside_strip(kGeo)) continue;
    const auto pw = pw_eval(x, p, kGeo, pc);
    double upper = 0.0;
    for (const auto& off :
         enumerate_lattice(kGeo.kbar, pc.lattice_radius, true))
      upper += w_eval(translate_point(x, off, kGeo.L), p, kGeo);
    const double slack = 3.0 * pw.stat_error + pw.tail_bound;
    ++checked;
    if (pw.value < -slack || pw.value > upper + slack) ++violations;
  }

  double resid = 0.0, allow = 0.0;
  {
    Point x = pt({0.4}, {-0.5 * kGeo.L, 0.3});
    const auto a = pw_eval(x, p, kGeo, pc);
    Point xs = x;
    xs.z[0] += kGeo.L;
    const auto b = pw_eval(xs, p, kGeo, pc);
    resid = std::fabs(a.value - b.value);
    allow = 2.0 * (a.tail_bound + b.tail_bound +
                   3.0 * (a.stat_error + b.stat_error));
  }
  Outcome o;
  o.pass = checked >= 100 - 8 && violations == 0 && resid <= allow;
  std::ostringstream ss;
  ss << "sandwich: " << violations << " violations over " << checked
     << " points; periodicity residual " << resid << " <= " << allow;
  o.detail = ss.str();
  return o;
}

// ---- 9. discrepancy-expansion residual scaling ----
Outcome criterion9() {
  QuadratureSpec qs;
  const double b_const = compute_B(kGeo, qs);
  BubbleParams p{std::vector<double>(kGeo.h, 0.0), 50.0};
  ProjectionConfig pc;
  std::vector<Point> samples;
  Rng rng(929);
  for (int i = 0; i < 20; ++i) {
    double c[6];
    double n2 = 0.0;
    for (auto& v : c) {
      v = rng.normal();
      n2 += v * v;
    }
    const double scale = 0.9 * rng.uniform() / std::sqrt(n2);
    for (auto& v : c) v *= scale;
    samples.push_back(pt({c[0] + 0.15, c[1], c[2], c[3]}, {c[4], c[5]}));
  }
  const std::vector<double> lgrid{8.0, 16.0, 32.0};
  const auto rep = phi_expansion_residual(p, kGeo, pc, samples, lgrid,
                                          b_const);
  const double lo = -(kGeo.N - 2) - 0.5, hi = -(kGeo.N - 2) + 0.5;
  Outcome o;
  o.pass = rep.exponent >= lo && rep.exponent <= hi && !rep.inconclusive;
  std::ostringstream ss;
  ss << "fitted exponent " << rep.exponent << " (window [" << lo << ", "
     << hi << "]), inconclusive=" << (rep.inconclusive ? "yes" : "no")
     << "; max|E| per L:";
  for (const auto& r : rep.rows) ss << " " << r.L << "->" << r.max_abs_e;
  o.detail = ss.str();
  return o;
}

// ---- 10. l-term weighted-norm scaling ----
Outcome criterion10() {
  QuadratureSpec qs;
  const auto model = default_model(kGeo);
  const auto rc = reduced_coefficients(kGeo, model, qs);
  const double c0 = c0_eval(rc, model, kGeo);
  const double expo = (kGeo.N - 2) / (model.beta_min() - (kGeo.N - 2));
  ProjectionConfig pc;
  std::vector<std::pair<double, double>> pairs;
  std::ostringstream table;
  for (double L : {8.0, 16.0, 32.0}) {
    Geometry g = kGeo;
    g.L = L;
    BubbleParams p{std::vector<double>(g.h, 0.0), c0 * std::pow(L, expo)};
    NormWeights w{0.05, p.lambda, p.zhat, pc.lattice_radius};
    const auto grid = make_sample_grid(g, w, 1);
    std::vector<double> lv(grid.points.size(), 0.0);
    for (std::size_t i = 0; i < lv.size(); ++i) {
      const Point& x = grid.points[i];
      if (x.y_norm() <= 0.0 || !x.inside_strip(g)) continue;
      lv[i] = l_term_eval(x, p, g, model, pc);
    }
    const auto nr = weighted_norm(lv, grid, w, g, NormMode::starstar);
    pairs.emplace_back(p.lambda, nr.value);
    table << " (lambda " << p.lambda << ", norm " << nr.value << ")";
  }
  const auto fit = scaling_exponent_fit(pairs);
  Outcome o;
  o.pass = fit.exponent <= -1.0;
  std::ostringstream ss;
  ss << "fitted lambda-exponent " << fit.exponent << " (threshold -1):"
     << table.str();
  o.detail = ss.str();
  return o;
}

// ---- 11. pointwise nonlinearity scaling ----
Outcome criterion11() {
  const auto model = default_model(kGeo);
  BubbleParams p{std::vector<double>(kGeo.h, 0.0), 50.0};
  NormWeights w{0.05, p.lambda, p.zhat, 20};
  ProjectionConfig pc;
  pc.complement_samples = 20'000;
  Rng rng(1117);
  double worst = 0.0;
  const double want = double(kGeo.N) / (kGeo.N - 2);
  for (int t = 0; t < 10; ++t) {
    const Point x = pt({40.0 + 120.0 * rng.uniform(), 15.0 * rng.uniform()},
                       {30.0 * (rng.uniform() - 0.5),
                        30.0 * (rng.uniform() - 0.5)});
    const double pw = std::max(pw_eval(x, p, kGeo, pc).value, 0.0);
    // Large-star-norm profile keeps t omega above PW across the whole
    // t-range; that is the regime the 2#-1 power describes.
    const double om = 1e7 * star_weight(x, w, kGeo);
    std::vector<std::pair<double, double>> tp;
    for (double t2 : {1e-2, 3.16e-2, 1e-1, 3.16e-1, 1.0})
      tp.emplace_back(t2, std::fabs(nonlinear_remainder(x, pw, t2 * om,
                                                        model, kGeo)));
    const auto fit = scaling_exponent_fit(tp);
    worst = std::max(worst, std::fabs(fit.exponent - want));
  }
  Outcome o;
  o.pass = worst <= 0.1;
  std::ostringstream ss;
  ss << "max |fitted t-exponent - " << want << "| = " << worst
     << " over 10 points (tol 0.1)";
  o.detail = ss.str();
  return o;
}

// ---- 12. reduction pipeline ----
Outcome criterion12() {
  QuadratureSpec qs;
  const auto model = default_model(kGeo);
  const auto rc = reduced_coefficients(kGeo, model, qs);
  std::ostringstream ss;
  bool ok = true;

  const auto sol = solve_reduced(rc, model, kGeo);
  const double expo = (kGeo.N - 2) / (model.beta_min() - (kGeo.N - 2));
  const bool lawok =
      std::fabs(sol.lambda_L / (sol.C0 * std::pow(kGeo.L, expo)) - 1.0) <
      1e-12;
  ok = ok && lawok && sol.window_ok;
  ss << "lambda_L = C0 L^" << expo << " with C0 = " << sol.C0
     << ", window_ok=" << (sol.window_ok ? "yes" : "no") << "; ";

  double dev16 = 0.0, dev32 = 0.0;
  bool noisy = false;
  ConsistencyReport rep32{};
  for (double L : {16.0, 32.0}) {
    Geometry g = kGeo;
    g.L = L;
    const auto s = solve_reduced(rc, model, g);
    BubbleParams p{std::vector<double>(g.h, 0.0), s.lambda_L};
    ConsistencyConfig cc;
    const auto rep =
        consistency_check(p, g, model, rc, ConsistencyTarget::lambda, cc);
    noisy = noisy || rep.inconclusive;
    const double dev = std::max(std::fabs(rep.phi_ratio - 1.0),
                                std::fabs(rep.m_ratio - 1.0));
    if (L == 16.0) dev16 = dev;
    if (L == 32.0) {
      dev32 = dev;
      rep32 = rep;
    }
    ss << "L=" << L << ": phi ratio " << rep.phi_ratio << ", M ratio "
       << rep.m_ratio << " (sigma " << rep.m_sigma / rep.m_closed << "); ";
  }
  const bool in_window = rep32.phi_ratio >= 0.8 && rep32.phi_ratio <= 1.2 &&
                         rep32.m_ratio >= 0.8 && rep32.m_ratio <= 1.2;
  const bool improving =
      dev32 <= dev16 + 3.0 * (rep32.m_sigma / rep32.m_closed + 0.01);
  ok = ok && in_window && improving && !noisy;
  ss << "ratios in [0.8,1.2] at L=32: " << (in_window ? "yes" : "no")
     << "; improving 16->32: " << (improving ? "yes" : "no");
  Outcome o;
  o.pass = ok;
  o.detail = ss.str();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc - 1; ++i)
    if (std::strcmp(argv[i], "--only") == 0) only = std::atoi(argv[i + 1]);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> all = {
      {"bubble PDE residual (analytic 1e-8, FD 1e-4)", criterion1},
      {"far-field mass identity for B (1e-6, MC 3 sigma)", criterion2},
      {"D identity (1e-6)", criterion3},
      {"F two-route + block invariance (1e-5)", criterion4},
      {"B_i by-parts identity (1e-5, nonzero)", criterion5},
      {"lattice sums vs zeta oracles (1e-8 / 1e-6)", criterion6},
      {"Gram structure (parity zeros, 2^{2a(i)} to 1e-10)", criterion7},
      {"projected-bubble sandwich + periodicity", criterion8},
      {"expansion residual L-scaling in [-4.5,-3.5]", criterion9},
      {"l-term norm scaling <= -1 on the coupled grid", criterion10},
      {"nonlinear remainder t-exponent within 0.1 of 1.5", criterion11},
      {"reduction pipeline + consistency ratios", criterion12},
  };

  int failures = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const int num = static_cast<int>(i) + 1;
    if (only != 0 && only != num) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = all[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << "criterion " << num
              << ": " << all[i].first << " — " << o.detail << " ["
              << secs << " s]\n";
    if (!o.pass) ++failures;
  }
  std::cout << (failures == 0 ? "ACCEPTANCE: all criteria passed\n"
                              : "ACCEPTANCE: " + std::to_string(failures) +
                                    " criteria failed\n");
  return failures;
}
