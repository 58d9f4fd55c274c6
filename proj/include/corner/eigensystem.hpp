#pragma once
#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace corner {

// Spectrum of the angular pencil lambda^2 + d^2/dtheta^2 on I = (-omega2,
// omega1) for one of the three boundary-condition pairs (top, bottom):
//   mixed      Dirichlet on top, Neumann flux on bottom; lambda_m = (m+1/2) pi / omega
//   dirichlet  values on both sides;                     lambda_m = m pi / omega, m != 0
//   neumann    fluxes on both sides;                     lambda_m = m pi / omega, m in Z
// All eigenvalues are real and simple; the eigenfunctions are single trig
// modes in theta + omega2.
struct eigen_entry {
  int m = 0;
  double lambda = 0.0;
};

struct eigen_system {
  std::string bc_pair;
  double omega1 = 0.0, omega2 = 0.0, omega = 0.0;
  std::vector<eigen_entry> entries;  // sorted by lambda

  // Closed-form eigenfunction of entries[idx] at angle theta.
  double eigenfunction(int idx, double theta) const;
};

// Builds the closed-form spectrum for |m| <= m_max and cross-validates each
// entry against a numeric root of the pencil determinant (cos(lambda omega)
// for the mixed pair, sin(lambda omega) otherwise) to 1e-10.
eigen_system make_eigensystem(const std::string& bc_pair, double omega1, double omega2,
                              int m_max = 8);

// Distance from lambda to the nearest pencil eigenvalue, using the lattice
// formula directly so the answer is not clipped by m_max.
double nearest_eigen_distance(const eigen_system& sys, std::complex<double> lambda);

// Open beta-intervals inside (beta_lo, beta_hi) for which the contour line
// Re lambda = -beta + l - 1 avoids every eigenvalue. The Dirichlet pair also
// excludes the lambda = 0 line even though m = 0 carries no eigenfunction.
std::vector<std::pair<double, double>> admissible_weight_lines(const eigen_system& sys,
                                                               int l, double beta_lo,
                                                               double beta_hi);

// CSV dump (m, lambda, bc_pair, omega).
std::string eigen_csv(const eigen_system& sys);

}  // namespace corner
