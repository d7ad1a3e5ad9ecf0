#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "strip/geometry.hpp"

using namespace strip;

namespace {
const double kPi = std::numbers::pi;

Point make_point(const Geometry& g, std::vector<double> y,
                 std::vector<double> z) {
  Point p;
  p.y = std::move(y);
  p.y.resize(g.k, 0.0);
  p.z = std::move(z);
  p.z.resize(g.h, 0.0);
  return p;
}
}  // namespace

TEST_CASE("geometry validation") {
  CHECK(validate_geometry(Geometry{6, 4, 2, 1, 10.0}).empty());

  const auto v1 = validate_geometry(Geometry{6, 4, 2, 2, 10.0});
  REQUIRE(v1.size() == 1);  // kbar <= h holds, only kbar < (N-2)/2 fails
  CHECK(v1[0].find("kbar < (N-2)/2") == 0);
  CHECK(v1[0].find("2 is not < 2") != std::string::npos);

  const auto v2 = validate_geometry(Geometry{6, 3, 3, 1, 10.0});
  REQUIRE(!v2.empty());
  CHECK(v2[0].find("h <= k-1") != std::string::npos);

  CHECK(!validate_geometry(Geometry{6, 4, 2, 1, -1.0}).empty());
  CHECK(!validate_geometry(Geometry{4, 3, 1, 1, 10.0}).empty());
}

TEST_CASE("surface area closed forms and recursion") {
  CHECK(surface_area(6) == doctest::Approx(kPi * kPi * kPi).epsilon(1e-14));
  CHECK(surface_area(2) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
  CHECK(surface_area(1) == doctest::Approx(2.0).epsilon(1e-14));
  for (int d = 1; d <= 8; ++d)
    CHECK(surface_area(d + 2) ==
          doctest::Approx(2.0 * kPi * surface_area(d) / d).epsilon(1e-14));
  CHECK_THROWS_AS(surface_area(0), std::domain_error);
}

TEST_CASE("newtonian kernel") {
  Geometry g{6, 4, 2, 1, 10.0};
  const Point o = make_point(g, {}, {});
  const Point e1 = make_point(g, {1.0}, {});
  const Point e2 = make_point(g, {2.0}, {});
  CHECK(gamma_kernel(o, e1, g) ==
        doctest::Approx(1.0 / (4.0 * kPi * kPi * kPi)).epsilon(1e-14));
  CHECK(gamma_kernel(o, e2, g) ==
        doctest::Approx(1.0 / (64.0 * kPi * kPi * kPi)).epsilon(1e-14));
  CHECK_THROWS_AS(gamma_kernel(o, o, g), std::domain_error);
}

TEST_CASE("lattice enumeration ordered by shells") {
  const auto l1 = enumerate_lattice(1, 2.0);
  REQUIRE(l1.size() == 4);
  CHECK(std::abs(l1[0][0]) == 1);
  CHECK(std::abs(l1[2][0]) == 2);

  const auto l2 = enumerate_lattice(2, 1.5);
  CHECK(l2.size() == 8);  // 4 axis neighbours + 4 diagonals
  for (std::size_t i = 1; i < l2.size(); ++i)
    CHECK(offset_norm(l2[i - 1]) <= offset_norm(l2[i]) + 1e-12);

  const auto l0 = enumerate_lattice(1, 2.0, /*include_zero=*/true);
  REQUIRE(l0.size() == 5);
  CHECK(l0[0][0] == 0);
}

TEST_CASE("lattice sums against zeta oracles") {
  // Oracle values: direct summation + integral tail (frozen from the
  // analytic zeta identities).
  const double two_zeta4 = kPi * kPi * kPi * kPi / 45.0;
  const auto r1 = lattice_sum(4.0, 1, 0.0, 1e-9);
  CHECK(std::fabs(r1.value - two_zeta4) <= r1.tail_bound);
  CHECK(r1.value == doctest::Approx(two_zeta4).epsilon(1e-8));

  const auto r2 = lattice_sum(4.0, 2, 0.0, 5e-7);
  CHECK(std::fabs(r2.value - 6.02681203969194) <= r2.tail_bound);
  CHECK(r2.value == doctest::Approx(6.02681203969194).epsilon(1e-6));

  CHECK_THROWS_AS(lattice_sum(1.0, 1), std::domain_error);
  CHECK_THROWS_AS(lattice_sum(2.0, 2), std::domain_error);
}

TEST_CASE("lattice sum monotone in radius, certified tail") {
  const auto a = lattice_sum(4.0, 2, 20.0);
  const auto b = lattice_sum(4.0, 2, 40.0);
  CHECK(b.value >= a.value);
  CHECK(b.terms_used > a.terms_used);
  // Everything gained by doubling the radius must sit inside the bound.
  CHECK(b.value - a.value <= a.tail_bound);
  const auto c = lattice_sum(3.5, 1, 50.0);
  const auto d = lattice_sum(3.5, 1, 100.0);
  CHECK(d.value - c.value <= c.tail_bound);
}

TEST_CASE("green function: periodic shift within certified tails") {
  Geometry g{6, 4, 2, 1, 8.0};
  const Point x = make_point(g, {0.6, -0.1}, {1.3, 0.4});
  const Point xi = make_point(g, {-0.2}, {-0.9, 1.1});
  const auto g1 = green_eval(x, xi, g, 30.0);
  Point xs = x;
  xs.z[0] += g.L;
  const auto g2 = green_eval(xs, xi, g, 30.0);
  CHECK(std::fabs(g1.value - g2.value) <= 2.0 * std::max(g1.tail_bound,
                                                         g2.tail_bound));
  CHECK(g1.value >= gamma_kernel(x, xi, g));
  CHECK(g1.tail_bound >= 0.0);
}

TEST_CASE("green function: large-L image bound") {
  Geometry g{6, 4, 2, 1, 64.0};
  const Point x = make_point(g, {0.5}, {0.2, -0.3});
  const Point xi = make_point(g, {-0.4}, {0.7, 0.6});
  const auto gr = green_eval(x, xi, g, 40.0);
  const double direct = gamma_kernel(x, xi, g);
  // Every image term is bounded by the nearest-image distance L|m| - |dz1|.
  const double dz1 = std::fabs(x.z[0] - xi.z[0]);
  const double prefac =
      gamma_prefactor(g) * std::pow(1.0 - dz1 / g.L, -(g.N - 2));
  const double cap = prefac * lattice_sum(g.N - 2, g.kbar).value /
                     std::pow(g.L, g.N - 2);
  CHECK(gr.value - direct <= cap + gr.tail_bound);
  CHECK(gr.value > direct);  // images only add mass
}

TEST_CASE("two periodic directions (N=7, kbar=2)") {
  Geometry g{7, 4, 3, 2, 6.0};
  CHECK(validate_geometry(g).empty());
  Point x, xi;
  x.y = {0.4, -0.1, 0.0, 0.0};
  x.z = {0.75, -1.25, 0.5};
  xi.y = {-0.3, 0.0, 0.0, 0.0};
  xi.z = {-0.5, 0.25, 1.0};
  const auto g1 = green_eval(x, xi, g, 16.0);
  for (int dir = 0; dir < g.kbar; ++dir) {
    Point xs = x;
    xs.z[dir] += g.L;
    const auto g2 = green_eval(xs, xi, g, 16.0);
    CHECK(std::fabs(g1.value - g2.value) <=
          2.0 * std::max(g1.tail_bound, g2.tail_bound));
  }
  // certified tail verified against doubling the radius
  const auto a = lattice_sum(5.0, 2, 12.0);
  const auto b = lattice_sum(5.0, 2, 24.0);
  CHECK(b.value - a.value <= a.tail_bound);
}

TEST_CASE("green function: singular coincidence") {
  Geometry g{6, 4, 2, 1, 8.0};
  const Point x = make_point(g, {0.5}, {0.2, 0.0});
  CHECK_THROWS_AS(green_eval(x, x, g, 20.0), std::domain_error);
  // Coincidence with a translate of xi is singular too.
  Point xi = x;
  xi.z[0] -= g.L;
  CHECK_THROWS_AS(green_eval(x, xi, g, 20.0), std::domain_error);
}
