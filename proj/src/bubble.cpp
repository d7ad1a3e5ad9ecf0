#include "strip/bubble.hpp"

#include <cmath>
#include <stdexcept>

namespace strip {

int alpha_sign(int idx, int h) {
  if (idx < 1 || idx > h + 1)
    throw std::domain_error("derivative index out of range 1..h+1");
  return idx <= h ? 1 : -1;
}

double c_nk(const Geometry& g) {
  return std::pow(double((g.N - 2) * (g.k - 1)), g.half_nm2());
}

namespace {
// Denominator D(r,s) = (1 + lambda r)^2 + lambda^2 s^2 and its powers.
inline double denom(double r, double s, double lambda) {
  const double a = 1.0 + lambda * r;
  return a * a + lambda * lambda * s * s;
}
}  // namespace

double w_rs(double r, double s, double lambda, const Geometry& g) {
  const double m = g.half_nm2();
  return c_nk(g) * std::pow(lambda, m) * std::pow(denom(r, s, lambda), -m);
}

double w_eval(const Point& x, const BubbleParams& p, const Geometry& g) {
  return w_rs(x.y_norm(), x.z_dist(p.zhat), p.lambda, g);
}

double w_dlambda_rs(double r, double s, double lambda, const Geometry& g) {
  const double m = g.half_nm2();
  const double rho2 = r * r + s * s;
  return m * c_nk(g) * std::pow(lambda, m - 1.0) *
         (1.0 - lambda * lambda * rho2) *
         std::pow(denom(r, s, lambda), -0.5 * g.N);
}

double w_ds_rs(double r, double s, double lambda, const Geometry& g) {
  const double m = g.half_nm2();
  return -2.0 * m * c_nk(g) * std::pow(lambda, m + 2.0) * s *
         std::pow(denom(r, s, lambda), -0.5 * g.N);
}

double w_derivative(const Point& x, const BubbleParams& p, const Geometry& g,
                    int idx) {
  alpha_sign(idx, g.h);  // range check
  const double r = x.y_norm();
  const double s = x.z_dist(p.zhat);
  if (idx == g.h + 1) return w_dlambda_rs(r, s, p.lambda, g);
  // d/dzhat_i = -(z_i - zhat_i)/s * dW/ds, with the s->0 limit equal to 0.
  const double zi = x.z[idx - 1] - (idx - 1 < static_cast<int>(p.zhat.size())
                                        ? p.zhat[idx - 1]
                                        : 0.0);
  const double m = g.half_nm2();
  return 2.0 * m * c_nk(g) * std::pow(p.lambda, m + 2.0) * zi *
         std::pow(denom(r, s, p.lambda), -0.5 * g.N);
}

double psi0_rs(double r, double s, const Geometry& g) {
  return w_dlambda_rs(r, s, 1.0, g);
}

double psi_eval(const Point& x, const Geometry& g, int which) {
  if (which < 0 || which > g.h)
    throw std::domain_error("psi index out of range 0..h");
  BubbleParams p;
  p.zhat.assign(g.h, 0.0);
  p.lambda = 1.0;
  if (which == 0) return w_derivative(x, p, g, g.h + 1);
  return w_derivative(x, p, g, which);
}

double w_laplacian(const Point& x, const BubbleParams& p, const Geometry& g) {
  const double r = x.y_norm();
  const double s = x.z_dist(p.zhat);
  const double lam = p.lambda;
  const double m = g.half_nm2();
  const double C = c_nk(g);
  const double D = denom(r, s, lam);
  const double a = 1.0 + lam * r;
  const double lm = std::pow(lam, m);
  const double Dm1 = std::pow(D, -m - 1.0);
  const double Dm2 = Dm1 / D;

  const double w_r = -2.0 * m * C * lm * lam * a * Dm1;
  const double w_rr = -2.0 * m * C * lm * lam * lam * Dm2 *
                      (D - 2.0 * (m + 1.0) * a * a);
  const double w_ss = -2.0 * m * C * lm * lam * lam * Dm2 *
                      (D - 2.0 * (m + 1.0) * lam * lam * s * s);
  if (r <= 0.0)
    throw std::domain_error("w_laplacian: needs |y| > 0 for the radial term");
  double lap = w_rr + (g.k - 1) * w_r / r + w_ss;
  if (s > 0.0) {
    const double w_s = -2.0 * m * C * lm * lam * lam * s * Dm1;
    lap += (g.h - 1) * w_s / s;
  } else {
    // s = 0 axis: (h-1)/s d_s tends to (h-1) d_ss.
    lap += (g.h - 1) * (-2.0 * m * C * lm * lam * lam * Dm1);
  }
  return lap;
}

double pde_residual(const Point& x, const BubbleParams& p, const Geometry& g) {
  const double r = x.y_norm();
  if (r <= 0.0)
    throw std::domain_error("pde_residual: singular weight at |y| = 0");
  const double w = w_eval(x, p, g);
  const double rhs = std::pow(w, double(g.N) / (g.N - 2)) / r;
  return -w_laplacian(x, p, g) - rhs;
}

}  // namespace strip
