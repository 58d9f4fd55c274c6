#pragma once
#include <string>
#include <vector>

namespace corner {

// Upper surface of the corner geometry. The fluid region is
//   l(x) < z < eta(x), x >= 0,  with flat bottom l(x) = -gamma x,
// so the two boundaries meet at the origin with opening
//   omega = omega1 + omega2, omega1 = atan(eta'(0)), omega2 = atan(gamma).
//
// eta comes from a closed-form descriptor so that derivatives are exact:
//   kind "poly":        eta(x) = params[0] x + params[1] x^2 + ...
//   kind "scaled_tanh": eta(x) = params[0] * tanh(params[1] x)
struct surface_profile {
  std::string kind = "poly";
  std::vector<double> params = {1.0};
  double gamma = 1.0;
  double x0 = 2.0;    // bottom is the straight ray at least out to x0
  double H = 50.0;    // admissible depth bound, checked over the work window
  double delta = 0.5; // corner patch radius, kept at x0/4 by default

  double eta(double x) const { return eta_d(x, 0); }
  double eta_d(double x, int k) const;  // d^k eta/dx^k for k = 0..3
  double l(double x) const { return -gamma * x; }

  // etabar(x) = eta(x) + gamma x is the slanted-edge height; it must be
  // strictly increasing for the straightening maps to exist.
  double etabar(double x) const { return eta(x) + gamma * x; }
  double etabar_d(double x, int k) const;
  double etabar_inv(double s) const;

  // d(s) = 1 - 1/(eta'(etabar_inv(s)) + gamma); the single scalar function
  // carrying all the surface dependence of the straightening Jacobians.
  double d_of(double s) const;

  double omega1() const;
  double omega2() const;
  double omega() const { return omega1() + omega2(); }
};

// Derived corner data with the validation applied.
struct domain_info {
  double omega1, omega2, omega;
  double delta;
  double x_delta;    // flat-strip chart starts here
  double depth_min, depth_max;  // of eta - l over the checked window
  double x_window;   // extent over which the profile was validated
};

// Checks the profile invariants (eta(0) = 0, eta'(0) + gamma > 0, gamma > 0,
// positive bounded depth, etabar strictly increasing) and computes the
// derived quantities. Throws a precondition error on violation.
domain_info build_domain(const surface_profile& p);

// Opening-angle admissibility per problem type: "mixed" requires
// omega in (0, pi/2), "dirichlet" and "neumann" require omega in (0, pi).
void check_omega(const surface_profile& p, const std::string& problem_kind);

}  // namespace corner
