#pragma once
#include <cmath>
#include <functional>
#include <vector>

namespace corner {

// Quintic smoothstep S(s) = 6s^5 - 15s^4 + 10s^3 clamped to [0,1]; C^2 across
// the ends. smoothstep_d gives d^k/ds^k for k = 0..3.
double smoothstep(double s);
double smoothstep_d(double s, int k);

// Radial cutoff built from the smoothstep: 1 for r <= r0, 0 for r >= r1,
// monotone in between. deriv() is with respect to r.
struct cutoff1d {
  double r0, r1;
  double operator()(double r) const;
  double deriv(double r, int k) const;
};

// C-infinity step: 0 for s <= 0, 1 for s >= 1, flat to all orders at both
// ends (the exp(-1/s) construction), so cut-off data keep spectrally small
// transform tails.
double cinf_step(double s);

// Radial cutoff with the C-infinity profile: 1 for r <= r0, 0 for r >= r1.
// deriv() covers k <= 2.
struct cutoff_cinf {
  double r0, r1;
  double operator()(double r) const;
  double deriv(double r, int k) const;
};

std::vector<double> linspace(double a, double b, int n);

// Composite rules on uniform grids; f has n samples on [a,b].
double trapezoid(const std::vector<double>& f, double h);
double simpson(const std::vector<double>& f, double h);

// Gauss-Legendre nodes/weights on [-1,1], computed by Newton iteration on the
// Legendre polynomial; accurate to machine precision for n up to a few hundred.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// Gauss-Legendre quadrature of f over [a,b].
double gl_integrate(const std::function<double(double)>& f, double a, double b, int n);

// Central finite-difference weights for derivative k on a uniform grid,
// using one-sided stencils near the ends. Differentiates the whole sample
// vector at once; order is 2 or 4.
std::vector<double> fd_derivative(const std::vector<double>& f, double h, int k, int order = 4);

// Weights for d^k/dx^k at x0 given arbitrary nodes (Fornberg's recursion).
std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int k);

// Simple helpers.
inline double sqr(double x) { return x * x; }

// Newton with bisection fallback on a bracket [a,b] with f(a), f(b) of
// opposite sign. Tolerance is on |x_step|.
double newton_bisect(const std::function<double(double)>& f,
                     const std::function<double(double)>& df,
                     double a, double b, double tol = 1e-13);

}  // namespace corner
