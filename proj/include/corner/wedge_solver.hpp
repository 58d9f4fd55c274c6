#pragma once
#include <functional>
#include <vector>

#include "corner/eigensystem.hpp"
#include "corner/grid_function.hpp"
#include "corner/laplace.hpp"

namespace corner {

// Data of the model problem Delta u = h on the infinite wedge
// {r > 0, -omega2 < theta < omega1}, with the pair of ray conditions chosen
// by the eigen_system: top datum f(r) and bottom datum g(r) are values on
// Dirichlet sides and outward conormal derivatives on flux sides. Any entry
// may be left empty for zero. All data must vanish (to decay_tol) outside
// the t = ln r window of the options.
struct wedge_data {
  std::function<double(double, double)> h;  // (r, theta)
  std::function<double(double)> f;          // along theta = omega1
  std::function<double(double)> g;          // along theta = -omega2
};

struct wedge_options {
  double t_min = -16.0, t_max = 1.5;  // axial window in t = ln r
  int n_t = 256, n_theta = 64;        // output cells (nodes are +1)
  double tau_switch = 40.0;           // contour solves below, series above
  double tau_start = 256.0;           // initial half-length of the contour
  double tau_cap = 4096.0;            // growth limit while chasing tail_tol
  double tail_tol = 1e-8;             // target spectral tail at l = 2
  double decay_tol = 1e-6;            // window decay precondition
  int parallel = 0;                   // worker threads; 0 = hardware
};

struct wedge_solution {
  grid_function w;      // cone chart: w(t, theta) = u(e^t, theta)
  double beta = 0.0;    // integration line Re lambda = -beta
  double tau_max = 0.0; // achieved half-length
  int n_tau = 0;
  double tail = 0.0;    // achieved tail ratio at l = 2
  double imag_residue = 0.0;
  // Below the data support the field is an exact finite mode sum; it is
  // refitted there because the trapezoid sum only returns cancellation noise
  // scaled by e^{-beta t}.
  int modes_used = 0;
  double mode_fit_residual = 0.0;
};

// Axial-transform solve: each line value lambda = -beta + i tau turns the
// wedge problem into the angular pencil problem, solved in closed form for
// moderate tau and by a 1/lambda^2 series plus boundary lift beyond
// tau_switch. The contour length doubles until the spectral tail is below
// tail_tol or tau_cap is reached.
wedge_solution solve_wedge(const eigen_system& sys, const wedge_data& d, double beta,
                           const wedge_options& opt = {});

// Same data solved on two integration lines. Eigenvalues strictly between
// them each contribute a power mode c r^{lambda_m} phi_m(theta) to the
// difference from - to, so `from` decomposes as `to` plus the listed modes;
// the residues are fitted over the t window and sup_diff is the leftover
// after removing them (the plain sup difference when none crossed).
struct contour_shift {
  wedge_solution from, to;
  std::vector<eigen_entry> crossed;
  std::vector<double> residues;
  double sup_diff = 0.0;
  double fit_rel_residual = 0.0;  // leftover / sup of the difference
};

contour_shift shift_contour(const eigen_system& sys, const wedge_data& d,
                            double beta_from, double beta_to, const wedge_options& opt = {},
                            double t_window_lo = -6.0, double t_window_hi = 0.0);

// The power mode r^{lambda_m} phi_m(theta) of one spectrum entry, cut off
// smoothly between r_half and r_one.
std::function<double(double, double)> singular_mode(const eigen_system& sys, int idx,
                                                    double r_half, double r_one);

}  // namespace corner
