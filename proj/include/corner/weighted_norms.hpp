#pragma once
#include <string>

#include "corner/grid_function.hpp"

namespace corner {

struct norm_report {
  std::string family;  // V_cone, V_domain, W_strip, H_strip, trace
  double order = 0.0;  // l, or l - 1/2 for traces
  double beta = 0.0;
  std::string carrier;
  double value = 0.0;
  int n1 = 0, n2 = 0;
};

// Corner-weighted norm on the cone chart (t = ln r, theta):
//   value^2 = sum_{|alpha| <= l} binom * integral r^{2(beta - l + |alpha|)} |D^alpha f|^2 dX,
// with Cartesian derivatives from log-polar stencils and dX = e^{2t} dt dtheta.
double vnorm_cone(const grid_function& f, int l, double beta);

// Plain H^l of a flat-chart grid function.
double hnorm_flat(const grid_function& f, int l);

// Domain norm: cone part in the weighted norm plus strip part in H^l.
double vnorm_domain(const grid_function& v_c, const grid_function& v_R, int l, double beta);

// Axial-weighted Sobolev norm on the strip chart: ||e^{beta t} w||_{H^l}.
double wnorm_strip(const grid_function& w, int l, double beta);

// Checkable form of the compact-support embedding: for f supported in r <= delta,
//   ||f||_{l1,beta1} <= delta^{(l2-beta2)-(l1-beta1)} ||f||_{l2,beta2}
// requires l2 >= l1 and l2 - beta2 >= l1 - beta1.
struct check_result {
  double lhs = 0.0, rhs = 0.0, fitted_c = 0.0;
  bool pass = false;
};
check_result embed_check(const grid_function& f, int l1, double beta1, int l2,
                         double beta2, double delta, double tol = 1e-9);

// Conversions between weighted and plain Sobolev norms for fields compactly
// supported in r <= delta. Directions: "H2_to_V22", "L2_to_V02" (cone grids),
// "H32_to_V32", "V32_to_H32", "V12_to_H12" (boundary rays on a t-grid).
check_result sobolev_weighted_convert(const grid_function& f, const std::string& direction,
                                      double delta, double c_allow);
check_result sobolev_weighted_convert_ray(const std::vector<double>& tg,
                                          const std::vector<double>& f,
                                          const std::string& direction, double delta,
                                          double c_allow);

// Dirichlet extension by angular blending: w(t, theta) = f(t) psi1(theta) + g(t) psi2(theta)
// with psi1 = 1 on the top edge and 0 on the bottom, psi2 mirrored, psi1 + psi2 = 1.
grid_function extend_trace(const std::vector<double>& tg, const std::vector<double>& f,
                           const std::vector<double>& g, double omega1, double omega2,
                           int n_theta);

norm_report make_report(const std::string& family, double order, double beta,
                        const std::string& carrier, double value, int n1, int n2);

}  // namespace corner
