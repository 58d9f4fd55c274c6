#pragma once
#include <vector>

#include "corner/numerics.hpp"
#include "corner/profile.hpp"
#include "corner/regularized.hpp"
#include "corner/wedge_solver.hpp"

namespace corner {

// Corner cutoff pair: chi_c falls from 1 to 0 between delta/2 and delta, and
// chi_bar covers it (chi_bar chi_c = chi_c) while staying inside the corner
// chart's validity region. chi_env is the coefficient envelope used by the
// patch solver: identically 1 out past supp chi_bar, then decaying over a
// log-width of order one so that grid derivatives resolve it. Any envelope
// that equals 1 on a neighbourhood of the data support yields the same
// solution, so the wide transition costs nothing.
struct cutoff_spec {
  double delta = 0.5;
  cutoff1d chi_c;
  cutoff1d chi_bar;
  cutoff_cinf chi_env;
};

cutoff_spec make_cutoff(double delta);

struct patch_options {
  wedge_options wedge;  // grid and contour controls for the iteration path
  int max_iter = 30;
  double fp_tol = 1e-8;   // successive-difference target in the weighted norm
  int direct_nt = 640;    // chart fem elements for the direct path
  int direct_ntheta = 48;
  double direct_t_lo = -12.0;
  double direct_t_margin = 6.5;  // Dirichlet truncation this far above ln(delta)
  double cross_tol = 1e-4;       // iteration vs direct disagreement gate
  bool run_direct = true;        // cross-validate even when the iteration converged
  bool use_regularized = false;  // coefficients through the smoothed map
};

struct patch_solution {
  grid_function w;  // cone chart (t = ln r, theta)
  double beta = 0.0;
  int iterations = 0;
  std::vector<double> step_sizes;  // successive-difference norms per iteration
  double contraction = 0.0;        // largest ratio of successive steps
  bool used_direct = false;
  double cross_check = -1.0;  // relative sup gap between the two paths
};

// Variable-coefficient corner solve. The coefficient is Id + chi_env (P_c - Id)
// (with the smoothed-map coefficient when requested), which agrees with P_c on
// the patch where the data live. Primary path: perturbation iteration
//   v^{n+1} = solve_wedge(h - div((P_c - Id) grad v^n), f, g - flux defect),
// stopped when the successive difference drops below fp_tol. A direct
// log-polar fem solve of the same problem cross-validates the result and
// takes over if the iteration stalls or the two disagree beyond cross_tol.
// Data in d are physical cone-side data as for solve_wedge.
patch_solution solve_cone_patch(const surface_profile& p, const eigen_system& sys,
                                const wedge_data& d, double beta,
                                const cutoff_spec& cut, const patch_options& opt = {},
                                const regularized_map* rm = nullptr);

}  // namespace corner
