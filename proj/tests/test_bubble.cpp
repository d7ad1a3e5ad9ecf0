#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "strip/bubble.hpp"
#include "strip/rng.hpp"

using namespace strip;

namespace {

const Geometry g6{6, 4, 2, 1, 10.0};

Point pt(std::vector<double> y, std::vector<double> z) {
  Point p;
  p.y = std::move(y);
  p.y.resize(g6.k, 0.0);
  p.z = std::move(z);
  p.z.resize(g6.h, 0.0);
  return p;
}

BubbleParams bp(double lambda, std::vector<double> zhat = {}) {
  BubbleParams p;
  p.zhat = std::move(zhat);
  p.zhat.resize(g6.h, 0.0);
  p.lambda = lambda;
  return p;
}

// 2N+1-point stencil Laplacian on the full coordinates.
double fd_laplacian(const Point& x, const BubbleParams& p, double step) {
  double acc = 0.0;
  const double c0 = w_eval(x, p, g6);
  for (int i = 0; i < g6.N; ++i) {
    Point a = x, b = x;
    if (i < g6.k) {
      a.y[i] += step;
      b.y[i] -= step;
    } else {
      a.z[i - g6.k] += step;
      b.z[i - g6.k] -= step;
    }
    acc += w_eval(a, p, g6) + w_eval(b, p, g6) - 2.0 * c0;
  }
  return acc / (step * step);
}

}  // namespace

TEST_CASE("bubble values at pinned points") {
  CHECK(c_nk(g6) == doctest::Approx(144.0).epsilon(1e-15));
  CHECK(w_eval(pt({}, {}), bp(1.0), g6) == doctest::Approx(144.0));
  CHECK(w_eval(pt({1.0}, {}), bp(1.0), g6) == doctest::Approx(9.0));
  CHECK(w_eval(pt({}, {}), bp(10.0), g6) == doctest::Approx(14400.0));
}

TEST_CASE("exact lambda scaling and translation covariance") {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const double lam = std::exp(3.0 * (rng.uniform() - 0.3));
    Point x = pt({rng.normal(), rng.normal(), rng.normal(), rng.normal()},
                 {rng.normal(), rng.normal()});
    Point xs = x;
    for (auto& v : xs.y) v *= lam;
    for (auto& v : xs.z) v *= lam;
    const double lhs = w_eval(x, bp(lam), g6);
    const double rhs =
        std::pow(lam, g6.half_nm2()) * w_eval(xs, bp(1.0), g6);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

    const std::vector<double> zh{0.4, -1.2};
    Point xt = x;
    for (int i = 0; i < g6.h; ++i) xt.z[i] += zh[i];
    CHECK(w_eval(xt, bp(1.0, zh), g6) ==
          doctest::Approx(w_eval(x, bp(1.0), g6)).epsilon(1e-13));
  }
}

TEST_CASE("parameter derivatives: symmetry and pinned values") {
  CHECK(w_derivative(pt({0.7}, {}), bp(1.0), g6, 1) == 0.0);
  CHECK(w_derivative(pt({0.7}, {}), bp(1.0), g6, 2) == 0.0);
  // d/dlambda of 144 lambda^2 at the center.
  for (double lam : {1.0, 3.0, 10.0})
    CHECK(w_derivative(pt({}, {}), bp(lam), g6, g6.h + 1) ==
          doctest::Approx(288.0 * lam).epsilon(1e-13));
  CHECK_THROWS_AS(w_derivative(pt({}, {}), bp(1.0), g6, 0),
                  std::domain_error);
  CHECK_THROWS_AS(w_derivative(pt({}, {}), bp(1.0), g6, g6.h + 2),
                  std::domain_error);

  // Z_i odd in z_i - zhat_i, Z_{h+1} even.
  const Point a = pt({0.5}, {0.8, -0.3});
  Point b = a;
  b.z[0] = -b.z[0];
  CHECK(w_derivative(a, bp(2.0), g6, 1) ==
        doctest::Approx(-w_derivative(b, bp(2.0), g6, 1)));
  CHECK(w_derivative(a, bp(2.0), g6, g6.h + 1) ==
        doctest::Approx(w_derivative(b, bp(2.0), g6, g6.h + 1)));
}

TEST_CASE("derivatives match central finite differences") {
  Rng rng(13);
  for (int t = 0; t < 20; ++t) {
    const double lam = std::exp(2.0 * rng.uniform());
    Point x = pt({0.3 + rng.uniform(), rng.normal() * 0.5},
                 {rng.normal(), rng.normal()});
    BubbleParams p = bp(lam, {0.2, -0.1});
    for (int idx = 1; idx <= g6.h + 1; ++idx) {
      const double dist = x.y_norm() + x.z_dist(p.zhat);
      const double step = 1e-5 * (1.0 + lam * dist) / lam;
      BubbleParams pa = p, pb = p;
      if (idx <= g6.h) {
        pa.zhat[idx - 1] += step;
        pb.zhat[idx - 1] -= step;
      } else {
        pa.lambda += step;
        pb.lambda -= step;
      }
      const double fd = (w_eval(x, pa, g6) - w_eval(x, pb, g6)) / (2 * step);
      const double an = w_derivative(x, p, g6, idx);
      const double scale = std::max(std::fabs(an), std::fabs(fd)) + 1e-6;
      CHECK(std::fabs(an - fd) <= 1e-6 * scale);
    }
  }
}

TEST_CASE("psi functions") {
  CHECK(psi_eval(pt({}, {}), g6, 0) == doctest::Approx(288.0));
  CHECK(psi_eval(pt({0.9}, {}), g6, 1) == 0.0);
  const Point x = pt({0.4}, {0.6, -0.2});
  CHECK(psi_eval(x, g6, 0) ==
        doctest::Approx(w_derivative(x, bp(1.0), g6, g6.h + 1)));
  CHECK(psi_eval(x, g6, 2) == doctest::Approx(w_derivative(x, bp(1.0), g6, 2)));
  CHECK_THROWS_AS(psi_eval(x, g6, g6.h + 1), std::domain_error);
}

TEST_CASE("pde residual vanishes for the exact bubble") {
  for (double lam : {1.0, 17.0}) {
    const BubbleParams p = bp(lam, {0.3, 0.0});
    for (int i = 0; i < 40; ++i) {
      const double r = std::pow(10.0, -3.0 + 6.0 * i / 39.0) / lam;
      for (double sfrac : {0.0, 0.7}) {
        Point x = pt({r}, {0.3 + sfrac * r, 0.0});
        const double w = w_eval(x, p, g6);
        const double rhs = std::pow(w, 1.5) / r;
        CHECK(std::fabs(pde_residual(x, p, g6)) <= 1e-8 * rhs);
      }
    }
  }
  CHECK_THROWS_AS(pde_residual(pt({}, {0.5}), bp(1.0), g6),
                  std::domain_error);
}

TEST_CASE("scaled input breaks the balance with the expected sign") {
  const BubbleParams p = bp(1.0);
  const Point x = pt({0.8}, {0.5, 0.1});
  const double w = w_eval(x, p, g6);
  const double r = x.y_norm();
  // -Delta(1.1 W) - (1.1 W)^{3/2}/|y| = (1.1 - 1.1^{3/2}) W^{3/2}/|y| < 0.
  const double resid =
      -1.1 * w_laplacian(x, p, g6) - std::pow(1.1 * w, 1.5) / r;
  const double expect = (1.1 - std::pow(1.1, 1.5)) * std::pow(w, 1.5) / r;
  CHECK(resid == doctest::Approx(expect).epsilon(1e-9));
  CHECK(resid < 0.0);
}

TEST_CASE("odd dimension: residual still vanishes (N=7)") {
  const Geometry g7{7, 4, 3, 2, 12.0};
  CHECK(validate_geometry(g7).empty());
  BubbleParams p;
  p.zhat = {0.1, -0.2, 0.0};
  p.lambda = 3.0;
  Rng rng(23);
  for (int t = 0; t < 30; ++t) {
    Point x;
    x.y = {0.05 + rng.uniform(), 0.4 * rng.normal(), 0.0, 0.0};
    x.z = {rng.normal(), rng.normal(), rng.normal()};
    const double w = w_eval(x, p, g7);
    const double rhs = std::pow(w, double(g7.N) / (g7.N - 2)) / x.y_norm();
    CHECK(std::fabs(pde_residual(x, p, g7)) <= 1e-8 * rhs);
  }
}

TEST_CASE("analytic laplacian agrees with the stencil at O(step^2)") {
  const BubbleParams p = bp(1.0, {0.2, -0.4});
  const Point x = pt({0.6, 0.3}, {0.5, 0.2});
  const double exact = w_laplacian(x, p, g6);
  const double e1 = std::fabs(fd_laplacian(x, p, 1e-2) - exact);
  const double e2 = std::fabs(fd_laplacian(x, p, 5e-3) - exact);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.2));
  CHECK(std::fabs(fd_laplacian(x, p, 1e-4) - exact) <=
        1e-4 * std::fabs(exact));
}
