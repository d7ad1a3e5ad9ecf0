#include "strip/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace strip {

double Point::y_norm() const {
  double s = 0.0;
  for (double v : y) s += v * v;
  return std::sqrt(s);
}

double Point::z_dist(const std::vector<double>& zhat) const {
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double d = z[i] - (i < zhat.size() ? zhat[i] : 0.0);
    s += d * d;
  }
  return std::sqrt(s);
}

double Point::z1_abs_max(int kbar) const {
  double m = 0.0;
  for (int i = 0; i < kbar && i < static_cast<int>(z.size()); ++i)
    m = std::max(m, std::fabs(z[i]));
  return m;
}

bool Point::inside_strip(const Geometry& g) const {
  return z1_abs_max(g.kbar) <= 0.5 * g.L;
}

std::vector<std::string> validate_geometry(const Geometry& g) {
  std::vector<std::string> v;
  if (g.N != g.k + g.h)
    v.push_back("N = k + h fails: " + std::to_string(g.N) +
                " != " + std::to_string(g.k) + " + " + std::to_string(g.h));
  if (g.N < 5) v.push_back("N >= 5 fails: N = " + std::to_string(g.N));
  if (!(g.h >= 1 && g.h <= g.k - 1))
    v.push_back("1 <= h <= k-1 fails: h = " + std::to_string(g.h) +
                ", k = " + std::to_string(g.k));
  if (g.kbar < 1 || g.kbar > g.h)
    v.push_back("1 <= kbar <= h fails: kbar = " + std::to_string(g.kbar));
  if (!(2 * g.kbar < g.N - 2))
    v.push_back("kbar < (N-2)/2 fails: " + std::to_string(g.kbar) +
                " is not < " + std::to_string(0.5 * (g.N - 2)));
  if (!(g.L > 0.0)) v.push_back("L > 0 fails");
  return v;
}

double surface_area(int d) {
  if (d < 1) throw std::domain_error("surface_area: dimension must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double gamma_prefactor(const Geometry& g) {
  return 1.0 / ((g.N - 2) * surface_area(g.N));
}

double gamma_kernel_dist(double dist, const Geometry& g) {
  if (dist <= 0.0)
    throw std::domain_error("gamma_kernel: evaluation at the singularity");
  return gamma_prefactor(g) * std::pow(dist, -(g.N - 2));
}

double gamma_kernel(const Point& x, const Point& xi, const Geometry& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.y.size(); ++i) {
    const double d = x.y[i] - xi.y[i];
    s += d * d;
  }
  for (std::size_t i = 0; i < x.z.size(); ++i) {
    const double d = x.z[i] - xi.z[i];
    s += d * d;
  }
  return gamma_kernel_dist(std::sqrt(s), g);
}

double offset_norm(const LatticeOffset& off) {
  double s = 0.0;
  for (int m : off) s += double(m) * double(m);
  return std::sqrt(s);
}

Point translate_point(const Point& x, const LatticeOffset& off, double L) {
  Point p = x;
  for (std::size_t i = 0; i < off.size() && i < p.z.size(); ++i)
    p.z[i] += L * off[i];
  return p;
}

namespace {

void enumerate_rec(int dim, int kbar, double r2, LatticeOffset& cur,
                   std::vector<LatticeOffset>& out) {
  if (dim == kbar) {
    for (int m : cur)
      if (m != 0) {
        out.push_back(cur);
        return;
      }
    return;  // skip the origin
  }
  double used = 0.0;
  for (int i = 0; i < dim; ++i) used += double(cur[i]) * cur[i];
  const int cap = static_cast<int>(std::floor(std::sqrt(std::max(0.0, r2 - used))));
  for (int m = -cap; m <= cap; ++m) {
    cur[dim] = m;
    enumerate_rec(dim + 1, kbar, r2, cur, out);
  }
}

}  // namespace

std::vector<LatticeOffset> enumerate_lattice(int kbar, double radius,
                                             bool include_zero) {
  if (kbar < 1) throw std::domain_error("enumerate_lattice: kbar must be >= 1");
  std::vector<LatticeOffset> pts;
  LatticeOffset cur(kbar, 0);
  enumerate_rec(0, kbar, radius * radius, cur, pts);
  std::sort(pts.begin(), pts.end(),
            [](const LatticeOffset& a, const LatticeOffset& b) {
              long long na = 0, nb = 0;
              for (int m : a) na += 1LL * m * m;
              for (int m : b) nb += 1LL * m * m;
              if (na != nb) return na < nb;
              return a < b;
            });
  if (include_zero) pts.insert(pts.begin(), LatticeOffset(kbar, 0));
  return pts;
}

double lattice_tail_bound(double s, int kbar, double R) {
  // Each lattice point m with |m| > R owns the unit cube m + [-1/2,1/2)^kbar;
  // on that cube |m| >= |x| - sqrt(kbar)/2, and the cubes lie in
  // {|x| > R - sqrt(kbar)/2}. Integrating the radial comparison function:
  //   tail <= A_kbar * int_U^inf u^{-s} (u + c)^{kbar-1} du,
  // with c = sqrt(kbar)/2, U = R - sqrt(kbar). Binomial expansion gives the
  // exact value of that integral.
  const double c = 0.5 * std::sqrt(double(kbar));
  const double U = R - 2.0 * c;
  if (U <= 0.0)
    throw std::domain_error("lattice_tail_bound: radius too small for bound");
  const double A = surface_area(kbar);
  double total = 0.0;
  double binom = 1.0;
  for (int i = 0; i <= kbar - 1; ++i) {
    if (i > 0) binom = binom * (kbar - i) / i;
    const double expo = s - kbar + i;  // > 0 since s > kbar
    total += binom * std::pow(c, i) * std::pow(U, -expo) / expo;
  }
  return A * total;
}

LatticeSumResult lattice_sum(double s, int kbar, double radius, double tol) {
  if (s <= kbar)
    throw std::domain_error("lattice_sum: divergent, requires s > kbar");
  double R = radius;
  if (R <= 0.0) {
    // Choose R so the certified bound c * R^{kbar-s} falls below tol.
    R = 4.0 * std::sqrt(double(kbar)) + 4.0;
    while (lattice_tail_bound(s, kbar, R) > tol && R < 2.0e5) R *= 1.5;
  }
  LatticeSumResult res;
  res.tail_bound = lattice_tail_bound(s, kbar, R);

  // Direct accumulation over the integer ball, Kahan-compensated. The shell
  // ordering used elsewhere is immaterial here: all summands are positive.
  const double r2 = R * R;
  double sum = 0.0, comp = 0.0;
  std::int64_t count = 0;
  LatticeOffset cur(kbar, 0);
  // Iterative odometer over [-cap, cap]^kbar with radius pruning.
  std::vector<int> caps(kbar, static_cast<int>(std::floor(R)));
  std::vector<int> idx(kbar);
  for (int i = 0; i < kbar; ++i) idx[i] = -caps[i];
  while (true) {
    double n2 = 0.0;
    for (int i = 0; i < kbar; ++i) n2 += double(idx[i]) * idx[i];
    if (n2 > 0.0 && n2 <= r2) {
      const double term = std::pow(n2, -0.5 * s);
      const double t = sum + term;
      if (std::fabs(sum) >= std::fabs(term))
        comp += (sum - t) + term;
      else
        comp += (term - t) + sum;
      sum = t;
      ++count;
    }
    int d = 0;
    while (d < kbar && ++idx[d] > caps[d]) {
      idx[d] = -caps[d];
      ++d;
    }
    if (d == kbar) break;
  }
  res.value = sum + comp;
  res.terms_used = count;
  return res;
}

GreenResult green_eval(const Point& x, const Point& xi, const Geometry& g,
                       double radius) {
  GreenResult res;
  const auto offsets = enumerate_lattice(g.kbar, radius, /*include_zero=*/true);
  double sum = 0.0;
  for (const auto& off : offsets) {
    const Point sh = translate_point(xi, off, g.L);
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.y.size(); ++i) {
      const double d = x.y[i] - sh.y[i];
      d2 += d * d;
    }
    for (std::size_t i = 0; i < x.z.size(); ++i) {
      const double d = x.z[i] - sh.z[i];
      d2 += d * d;
    }
    const double dist = std::sqrt(d2);
    if (dist <= 1e-12 * g.L)
      throw std::domain_error(
          "green_eval: singular coincidence with a lattice translate");
    sum += gamma_kernel_dist(dist, g);
  }
  res.value = sum;
  res.terms_used = static_cast<std::int64_t>(offsets.size());

  // Omitted translates: |x - xi - P_L^j| >= L|m| - |d_{z1}|, so the tail is
  // controlled by the lattice tail at exponent N-2 with a nearest-image
  // inflation factor (1 - kap/R)^{-(N-2)}.
  double dz1 = 0.0;
  for (int i = 0; i < g.kbar; ++i) {
    const double d = x.z[i] - xi.z[i];
    dz1 += d * d;
  }
  const double kap = std::sqrt(dz1) / g.L;
  if (radius <= 2.0 * kap + 2.0 * std::sqrt(double(g.kbar)))
    throw std::domain_error("green_eval: truncation radius too small");
  const double inflate = std::pow(1.0 - kap / radius, -(g.N - 2));
  res.tail_bound = gamma_prefactor(g) * inflate *
                   std::pow(g.L, -(g.N - 2)) *
                   lattice_tail_bound(g.N - 2, g.kbar, radius);
  return res;
}

}  // namespace strip
