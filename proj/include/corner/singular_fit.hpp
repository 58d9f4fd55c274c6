#pragma once
#include <string>
#include <vector>

#include "corner/eigensystem.hpp"
#include "corner/grid_function.hpp"

namespace corner {

// One fitted corner term c r^lambda phi_m(theta).
struct singular_term {
  int m = 0;               // lattice index of the angular mode
  double lambda_hat = 0.0; // fitted exponent (log-log slope)
  double c_hat = 0.0;      // fitted coefficient, signed
  double fit_r_lo = 0.0;   // radial window actually used for this term
  double fit_r_hi = 0.0;
  bool monotone = true;    // annulus magnitudes consistent with the slope sign
};

struct singular_decomposition {
  std::vector<singular_term> terms; // sorted by lambda_hat
  double remainder_norm = 0.0;      // L2 over the fit window after subtraction
  bool unstable = false;            // set when a kept term is nonmonotone
};

// Extracts corner exponents from a cone-chart sample. v(r, .) is projected
// onto the angular eigenfunctions row by row; for each mode the log of the
// projection magnitude is regressed against ln r over the dyadic annuli
// r in [2^{-k-1} delta, 2^{-k} delta], k = 1..6. Modes whose projections
// clear the noise floor on at least 3 annuli are fitted; the n_terms with
// the smallest exponents are returned.
singular_decomposition fit_singular_exponents(const grid_function& v,
                                              const eigen_system& sys, int n_terms,
                                              double delta = 0.5);

// r^{lambda_m} phi_m(theta) cut off between r_half and r_one, sampled on the
// same chart as `like`.
grid_function singular_function(const eigen_system& sys, int idx, double r_half,
                                double r_one, const grid_function& like);

// CSV rows (m, lambda_hat, c_hat, fit_r_lo, fit_r_hi, remainder_norm).
std::string singular_csv(const singular_decomposition& d);

}  // namespace corner
