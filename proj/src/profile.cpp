#include "corner/profile.hpp"

#include <algorithm>
#include <cmath>

#include "corner/errors.hpp"
#include "corner/numerics.hpp"

namespace corner {

double surface_profile::eta_d(double x, int k) const {
  if (kind == "poly") {
    // eta = sum_j params[j] x^(j+1)
    double v = 0.0;
    int n = static_cast<int>(params.size());
    for (int j = 0; j < n; ++j) {
      int p = j + 1;
      if (p < k) continue;
      double c = params[j];
      for (int m = 0; m < k; ++m) c *= (p - m);
      v += c * std::pow(x, p - k);
    }
    return v;
  }
  if (kind == "scaled_tanh") {
    require(params.size() >= 2, "scaled_tanh profile needs two parameters");
    double a = params[0], b = params[1];
    double th = std::tanh(b * x);
    double sech2 = 1.0 - th * th;
    switch (k) {
      case 0: return a * th;
      case 1: return a * b * sech2;
      case 2: return -2.0 * a * b * b * sech2 * th;
      case 3: return 2.0 * a * b * b * b * sech2 * (3.0 * th * th - 1.0);
      default: break;
    }
    fail_pre("eta_d: derivative order must be 0..3");
  }
  fail_pre("unknown surface kind: " + kind);
}

double surface_profile::etabar_d(double x, int k) const {
  double v = eta_d(x, k);
  if (k == 0) return v + gamma * x;
  if (k == 1) return v + gamma;
  return v;
}

double surface_profile::etabar_inv(double s) const {
  if (s == 0.0) return 0.0;
  require(s > 0.0, "etabar_inv: argument must be nonnegative");
  // Bracket by doubling, then Newton with bisection fallback.
  double hi = std::max(s / gamma, 1e-3);
  for (int it = 0; it < 200 && etabar(hi) < s; ++it) hi *= 2.0;
  require(etabar(hi) >= s, "etabar_inv: failed to bracket");
  return newton_bisect([&](double x) { return etabar(x) - s; },
                       [&](double x) { return etabar_d(x, 1); }, 0.0, hi, 1e-13);
}

double surface_profile::d_of(double s) const {
  double x = etabar_inv(s);
  return 1.0 - 1.0 / (eta_d(x, 1) + gamma);
}

double surface_profile::omega1() const { return std::atan(eta_d(0.0, 1)); }
double surface_profile::omega2() const { return std::atan(gamma); }

domain_info build_domain(const surface_profile& p) {
  require(p.gamma > 0.0, "profile: gamma must be positive");
  require(p.H > 0.0 && p.delta > 0.0 && p.x0 > 0.0, "profile: H, delta, x0 must be positive");
  require(std::abs(p.eta(0.0)) < 1e-12, "profile: eta(0) must vanish");
  double slope0 = p.eta_d(0.0, 1);
  require(slope0 + p.gamma > 0.0, "profile: eta'(0) + gamma must be positive");

  domain_info d{};
  d.omega1 = p.omega1();
  d.omega2 = p.omega2();
  d.omega = d.omega1 + d.omega2;
  d.delta = p.delta;
  // Start the strip chart where the cone cutoff is already identically one
  // across the vertical fluid column; shrink slightly for safety.
  double msl = std::max(p.gamma, std::abs(slope0));
  d.x_delta = 0.9 * p.delta / (2.0 * std::sqrt(1.0 + msl * msl));
  // Validation covers the corner region only: the straightening maps, the
  // cutoffs, and the smoothed extension all live inside a few delta of the
  // corner, plus the user's declared straight-bottom extent x0. Solvers that
  // mesh farther out re-check the depth over their own range.
  d.x_window = std::max(p.x0, 4.0 * p.delta);

  d.depth_min = 1e300;
  d.depth_max = 0.0;
  int n = 2000;
  for (int i = 1; i <= n; ++i) {
    double x = d.x_window * i / n;
    double depth = p.eta(x) - p.l(x);
    d.depth_min = std::min(d.depth_min, depth);
    d.depth_max = std::max(d.depth_max, depth);
    require(p.etabar_d(x, 1) > 0.0, "profile: etabar must be strictly increasing");
  }
  require(d.depth_min > 0.0, "profile: depth eta - l must stay positive");
  require(d.depth_max <= p.H, "profile: depth exceeds the bound H");
  return d;
}

void check_omega(const surface_profile& p, const std::string& problem_kind) {
  double w = p.omega();
  if (problem_kind == "mixed") {
    require(w > 0.0 && w < M_PI / 2.0, "mixed problem needs omega in (0, pi/2)");
  } else if (problem_kind == "dirichlet" || problem_kind == "neumann") {
    require(w > 0.0 && w < M_PI, problem_kind + " problem needs omega in (0, pi)");
  } else {
    fail_pre("unknown problem kind: " + problem_kind);
  }
}

}  // namespace corner
