#pragma once
#include <complex>
#include <functional>
#include <vector>

#include "corner/eigensystem.hpp"
#include "corner/laplace.hpp"

namespace corner {

// Right-hand side of the angular problem
//   lambda^2 phi + phi'' = F   on I = (-omega2, omega1)
// with boundary data per pair:
//   mixed      phi(omega1) = a,        -phi'(-omega2) = b
//   dirichlet  phi(omega1) = a,         phi(-omega2) = b
//   neumann    phi'(omega1) = a,       -phi'(-omega2) = b
struct pencil_rhs {
  std::function<cplx(double)> F;  // volume term; empty means zero
  cplx a{0.0, 0.0};
  cplx b{0.0, 0.0};
};

// Closed-form resolvent: homogeneous trig modes plus a variation-of-
// parameters particular solution (Gauss-Legendre in theta, split at the
// kernel kink). All exponentials are kept non-growing, so the solve stays
// accurate for |Im lambda| in the thousands. Throws when lambda is within
// 1e-8 of a pencil eigenvalue.
std::vector<cplx> solve_pencil(cplx lambda, const pencil_rhs& rhs, const eigen_system& sys,
                               const std::vector<double>& theta);

// Homogeneous solution alone (F = 0), with the same stable evaluation; used
// where the volume part is handled separately and only the boundary lift is
// needed.
std::vector<cplx> pencil_homogeneous(cplx lambda, cplx a, cplx b, const eigen_system& sys,
                                     const std::vector<double>& theta);

// Finite-difference check of the ODE and the boundary rows on the sampled
// solution; returns the largest relative defect.
double pencil_residual(cplx lambda, const pencil_rhs& rhs, const eigen_system& sys,
                       const std::vector<double>& theta, const std::vector<cplx>& phi);

// Parameter-elliptic estimate
//   ||phi||_{H^l(I,lambda)} <= C ( ||F||_{H^{l-2}(I,lambda)}
//                                  + (1+|lambda|^{l-1/2}) |a|
//                                  + (1+|lambda|^{l-3/2}) |b| )
// evaluated on one sample; fitted_c is the observed ratio.
struct resolvent_check {
  double lhs = 0.0;
  double rhs_bound = 0.0;
  double fitted_c = 0.0;
  bool pass = false;
};

resolvent_check resolvent_norm_check(cplx lambda, const pencil_rhs& rhs,
                                     const std::vector<cplx>& phi, const eigen_system& sys,
                                     const std::vector<double>& theta, int l,
                                     double c_allow = 100.0);

}  // namespace corner
