#pragma once
#include <complex>
#include <vector>

namespace corner {

using cplx = std::complex<double>;

// Vertical integration line Re lambda = -beta with a uniform, symmetric
// grid in tau = Im lambda. Odd n_tau keeps tau = 0 on the grid.
struct contour {
  double beta = 0.0;
  double tau_max = 0.0;
  std::vector<double> tau;

  int n() const { return static_cast<int>(tau.size()); }
  double dtau() const { return tau[1] - tau[0]; }
  cplx lambda(int k) const { return {-beta, tau[k]}; }
};

contour make_contour(double beta, double tau_max, int n_tau);

// Axial transform w(t) -> integral e^{-lambda t} w(t) dt over the truncated
// axis. The samples are interpolated by a cubic spline and each cell is
// integrated against the exponential in closed form, so strongly oscillatory
// lambda values lose no accuracy to quadrature.
// Requires e^{beta t} w(t) to be negligible at both ends of the grid.
std::vector<cplx> laplace_forward(const std::vector<double>& tg,
                                  const std::vector<double>& w, const contour& ct,
                                  double decay_tol = 1e-6);
std::vector<cplx> laplace_forward_c(const std::vector<double>& tg,
                                    const std::vector<cplx>& w, const contour& ct,
                                    double decay_tol = 1e-6);

// Single-point transform value at one lambda.
cplx laplace_at(const std::vector<double>& tg, const std::vector<double>& w, cplx lambda);

// Inverse line integral (1/2 pi i) int e^{lambda t} wh dlambda by trapezoid
// in tau. For conjugate-symmetric data the imaginary part is roundoff; its
// largest value is reported through imag_residue when given.
std::vector<double> laplace_inverse(const contour& ct, const std::vector<cplx>& wh,
                                    const std::vector<double>& tg_out,
                                    double* imag_residue = nullptr);
std::vector<cplx> laplace_inverse_c(const contour& ct, const std::vector<cplx>& wh,
                                    const std::vector<double>& tg_out);

// Relative gap between int e^{2 beta t} |w|^2 dt and its contour-side value
// (1/2 pi) int |wh|^2 dtau.
double parseval_gap(const std::vector<double>& tg, const std::vector<double>& w,
                    const contour& ct);

// Largest deviation from wh(-tau) = conj(wh(tau)), relative to max |wh|.
double conjugate_defect(const contour& ct, const std::vector<cplx>& wh);

// Angular field sampled along a contour: one complex angular profile per tau
// node, over a shared theta grid.
struct spectral_field {
  contour ct;
  std::vector<double> theta;
  std::vector<std::vector<cplx>> vals;  // vals[k][j] at (tau_k, theta_j)

  void init_zero();
};

// Parameter Sobolev norm (||v||_{H^l}^2 + |lambda|^{2l} ||v||_{L2}^2)^{1/2}
// of an angular profile.
double param_norm(const std::vector<double>& theta, const std::vector<cplx>& v, int l,
                  cplx lambda);

// Ratio of the parameter norm at the contour ends to its maximum over the
// contour; the truncation is adequate once this is small.
double tail_ratio(const spectral_field& sf, int l);

}  // namespace corner
