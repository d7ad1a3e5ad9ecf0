#pragma once

#include "strip/geometry.hpp"

namespace strip {

/// Concentration data of the bubble: x_hat = (0, zhat), height lambda.
struct BubbleParams {
  std::vector<double> zhat;  // length h
  double lambda = 1.0;
};

/// Parameter-derivative index: 1..h are the zhat_i directions, h+1 is lambda.
int alpha_sign(int idx, int h);

double c_nk(const Geometry& g);

/// W as a function of the cylindrical radii r = |y|, s = |z - zhat|.
double w_rs(double r, double s, double lambda, const Geometry& g);

double w_eval(const Point& x, const BubbleParams& p, const Geometry& g);

/// Closed-form Z_idx = dW/dzhat_idx (idx <= h) or dW/dlambda (idx = h+1).
double w_derivative(const Point& x, const BubbleParams& p, const Geometry& g,
                    int idx);

/// dW/dlambda in cylindrical form.
double w_dlambda_rs(double r, double s, double lambda, const Geometry& g);
/// dW/ds in cylindrical form (s = |z - zhat|).
double w_ds_rs(double r, double s, double lambda, const Geometry& g);

/// psi_0 = dW_{0,lambda}/dlambda at lambda=1 (which = 0), or
/// psi_i = dW_{0,1}/dzhat_i (which = 1..h), both at x_hat = 0.
double psi_eval(const Point& x, const Geometry& g, int which);
double psi0_rs(double r, double s, const Geometry& g);

/// Analytic Laplacian of W, assembled from the radial derivative pieces
/// Delta = d_rr + (k-1)/r d_r + d_ss + (h-1)/s d_s (limit form on s = 0).
double w_laplacian(const Point& x, const BubbleParams& p, const Geometry& g);

/// -Delta W - W^{2#-1}/|y|; vanishes for the exact bubble. Requires |y| > 0.
double pde_residual(const Point& x, const BubbleParams& p, const Geometry& g);

}  // namespace strip
