#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace strip {

/// Dimensional data of the strip problem: R^N split as y in R^k, z in R^h,
/// with the first kbar z-coordinates periodic of period L.
struct Geometry {
  int N = 0;
  int k = 0;
  int h = 0;
  int kbar = 0;
  double L = 0.0;

  double two_sharp() const { return 2.0 * (N - 1) / double(N - 2); }
  double half_nm2() const { return 0.5 * (N - 2); }
};

/// A point x = (y, z); y.size() == k, z.size() == h. The first kbar entries
/// of z are the periodic coordinates z^1.
struct Point {
  std::vector<double> y;
  std::vector<double> z;

  double y_norm() const;
  double z_dist(const std::vector<double>& zhat) const;
  /// Max |z^1_i| over the periodic coordinates.
  double z1_abs_max(int kbar) const;
  bool inside_strip(const Geometry& g) const;
};

struct LatticeSumResult {
  double value = 0.0;
  double tail_bound = 0.0;
  std::int64_t terms_used = 0;
};

/// Nonzero lattice translate: the first kbar z-coordinates get shifted by
/// L * offset. offset == all-zero is the identity (j = 0).
using LatticeOffset = std::vector<int>;

/// Returns the violated constraints; empty means the geometry is admissible.
std::vector<std::string> validate_geometry(const Geometry& g);

/// Area of the unit sphere S^{d-1}: 2 pi^{d/2} / Gamma(d/2).
double surface_area(int d);

/// Newtonian kernel prefactor 1/((N-2) omega_{N-1}).
double gamma_prefactor(const Geometry& g);

/// Gamma(x, xi) = 1/((N-2) omega_{N-1} |x-xi|^{N-2}).
double gamma_kernel(const Point& x, const Point& xi, const Geometry& g);
double gamma_kernel_dist(double dist, const Geometry& g);

/// All integer points of Z^kbar with 0 < |m| <= radius, ordered by |m|
/// then lexicographically. With include_zero the origin is prepended.
std::vector<LatticeOffset> enumerate_lattice(int kbar, double radius,
                                             bool include_zero = false);

/// Certified bound on sum_{|m| > R} |m|^{-s} over Z^kbar, via cube-by-cube
/// comparison with the radial integral. Requires s > kbar and R > sqrt(kbar).
double lattice_tail_bound(double s, int kbar, double R);

/// Sum over all nonzero m in Z^kbar of |m|^{-s}, truncated at |m| <= radius
/// (chosen automatically from tol when radius <= 0), with a certified tail
/// bound for the omitted points. Throws std::domain_error when s <= kbar.
LatticeSumResult lattice_sum(double s, int kbar, double radius = 0.0,
                             double tol = 1e-7);

struct GreenResult {
  double value = 0.0;
  double tail_bound = 0.0;
  std::int64_t terms_used = 0;
};

/// Periodic Green's function G(x, xi) = sum_j Gamma(x, xi + P_L^j), summed
/// over lattice offsets |m| <= radius, with a certified tail bound.
GreenResult green_eval(const Point& x, const Point& xi, const Geometry& g,
                       double radius = 50.0);

/// x + P_L^j: adds L * offset to the periodic z-coordinates.
Point translate_point(const Point& x, const LatticeOffset& off, double L);

double offset_norm(const LatticeOffset& off);

}  // namespace strip
