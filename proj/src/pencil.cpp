#include "corner/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "corner/errors.hpp"
#include "corner/numerics.hpp"

namespace corner {

namespace {

// sin(lambda p) / lambda with the removable singularity expanded.
cplx qsinc(cplx lambda, double p) {
  cplx z = lambda * p;
  if (std::abs(z) < 1e-3) {
    cplx z2 = z * z;
    return p * (1.0 - z2 / 6.0 + z2 * z2 / 120.0);
  }
  return std::sin(z) / lambda;
}

// Trig ratios normalized so that no intermediate grows with |Im lambda|.
// For 0 <= p <= q every ex() argument is >= 0 and |ex| <= 1; the direct
// branch is used while cosh(Im lambda * 2q) still fits comfortably in a
// double.
struct stable_trig {
  cplx lambda;
  double s;  // sign of Im lambda (+1 at 0)
  bool far;

  stable_trig(cplx l, double two_q) : lambda(l) {
    s = (l.imag() >= 0.0) ? 1.0 : -1.0;
    far = std::abs(l.imag()) * two_q >= 30.0;
  }

  cplx ex(double c) const { return std::exp(cplx(0.0, s) * lambda * c); }

  cplx cc(double p, double q) const {  // cos(lambda p)/cos(lambda q)
    if (!far) return std::cos(lambda * p) / std::cos(lambda * q);
    return (ex(q + p) + ex(q - p)) / (1.0 + ex(2.0 * q));
  }
  cplx ss(double p, double q) const {  // sin(lambda p)/sin(lambda q)
    if (!far) return qsinc(lambda, p) / qsinc(lambda, q);
    return (ex(q - p) - ex(q + p)) / (1.0 - ex(2.0 * q));
  }
  cplx sc(double p, double q) const {  // sin(lambda p)/cos(lambda q)
    if (!far) return std::sin(lambda * p) / std::cos(lambda * q);
    return cplx(0.0, -s) * (ex(q + p) - ex(q - p)) / (1.0 + ex(2.0 * q));
  }
  cplx cs(double p, double q) const {  // cos(lambda p)/sin(lambda q)
    if (!far) return std::cos(lambda * p) / (lambda * qsinc(lambda, q));
    return cplx(0.0, s) * (ex(q + p) + ex(q - p)) / (ex(2.0 * q) - 1.0);
  }
};

enum class pair_kind { mixed, dirichlet, neumann };

pair_kind kind_of(const eigen_system& sys) {
  if (sys.bc_pair == "mixed") return pair_kind::mixed;
  if (sys.bc_pair == "dirichlet") return pair_kind::dirichlet;
  return pair_kind::neumann;
}

// Green kernel of the angular problem at separation coordinates
// a1 = theta_< + omega2, b1 = omega1 - theta_>, both >= 0, a1 + b1 <= omega.
// Built from u1 (homogeneous at the bottom) and u2 (homogeneous at the top)
// over the Wronskian; product-to-sum on the far branch so the decay
// e^{-|Im lambda| |theta - theta'|} is explicit.
cplx green_kernel(const stable_trig& st, pair_kind kind, double omega, double a1, double b1) {
  cplx lam = st.lambda;
  if (!st.far) {
    switch (kind) {
      case pair_kind::mixed:
        return -std::cos(lam * a1) * qsinc(lam, b1) / std::cos(lam * omega);
      case pair_kind::dirichlet:
        return -qsinc(lam, a1) * qsinc(lam, b1) / qsinc(lam, omega);
      case pair_kind::neumann:
        return std::cos(lam * a1) * std::cos(lam * b1) / (lam * lam * qsinc(lam, omega));
    }
  }
  double dp = std::abs(a1 - b1);
  double sg = (a1 > b1) ? 1.0 : (a1 < b1 ? -1.0 : 0.0);
  switch (kind) {
    case pair_kind::mixed:
      return -(0.5 / lam) * (st.sc(a1 + b1, omega) - sg * st.sc(dp, omega));
    case pair_kind::dirichlet:
      return -(0.5 / lam) * (st.cs(dp, omega) - st.cs(a1 + b1, omega));
    case pair_kind::neumann:
      return (0.5 / lam) * (st.cs(dp, omega) + st.cs(a1 + b1, omega));
  }
  return {};
}

// Homogeneous part carrying the boundary data a (top) and b (bottom).
cplx homogeneous_part(const stable_trig& st, pair_kind kind, const eigen_system& sys,
                      double theta, cplx a, cplx b) {
  cplx lam = st.lambda;
  double p1 = theta + sys.omega2;  // distance from the bottom side
  double p2 = sys.omega1 - theta;  // distance from the top side
  double w = sys.omega;
  if (!st.far) {
    switch (kind) {
      case pair_kind::mixed:
        return (a * std::cos(lam * p1) + b * qsinc(lam, p2)) / std::cos(lam * w);
      case pair_kind::dirichlet:
        return (a * qsinc(lam, p1) + b * qsinc(lam, p2)) / qsinc(lam, w);
      case pair_kind::neumann:
        return -(a * std::cos(lam * p1) + b * std::cos(lam * p2)) /
               (lam * lam * qsinc(lam, w));
    }
  }
  switch (kind) {
    case pair_kind::mixed:
      return a * st.cc(p1, w) + (b / lam) * st.sc(p2, w);
    case pair_kind::dirichlet:
      return a * st.ss(p1, w) + b * st.ss(p2, w);
    case pair_kind::neumann:
      return -(a / lam) * st.cs(p1, w) - (b / lam) * st.cs(p2, w);
  }
  return {};
}

}  // namespace

std::vector<cplx> solve_pencil(cplx lambda, const pencil_rhs& rhs, const eigen_system& sys,
                               const std::vector<double>& theta) {
  require(!theta.empty(), "solve_pencil: empty theta grid");
  double dist = nearest_eigen_distance(sys, lambda);
  if (dist < 1e-8) {
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "solve_pencil: lambda within %.3e of a pencil eigenvalue", dist);
    fail_solver(msg);
  }

  stable_trig st(lambda, 2.0 * sys.omega);
  pair_kind kind = kind_of(sys);

  static thread_local std::vector<double> gx, gw;
  if (gx.empty()) gauss_legendre(64, gx, gw);

  std::vector<cplx> phi(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    double th = theta[j];
    cplx val = homogeneous_part(st, kind, sys, th, rhs.a, rhs.b);
    if (rhs.F) {
      // Particular part: integrate the Green kernel against F, one panel on
      // each side of the kink at theta' = theta.
      cplx acc = 0.0;
      auto panel = [&](double lo, double hi, bool source_below) {
        if (hi - lo < 1e-14) return;
        double mid = 0.5 * (lo + hi), rad = 0.5 * (hi - lo);
        for (int q = 0; q < 64; ++q) {
          double tp = mid + rad * gx[q];
          double a1 = (source_below ? tp : th) + sys.omega2;
          double b1 = sys.omega1 - (source_below ? th : tp);
          acc += rad * gw[q] * green_kernel(st, kind, sys.omega, a1, b1) * rhs.F(tp);
        }
      };
      panel(-sys.omega2, th, true);
      panel(th, sys.omega1, false);
      val += acc;
    }
    phi[j] = val;
  }
  return phi;
}

std::vector<cplx> pencil_homogeneous(cplx lambda, cplx a, cplx b, const eigen_system& sys,
                                     const std::vector<double>& theta) {
  stable_trig st(lambda, 2.0 * sys.omega);
  pair_kind kind = kind_of(sys);
  std::vector<cplx> phi(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j)
    phi[j] = homogeneous_part(st, kind, sys, theta[j], a, b);
  return phi;
}

double pencil_residual(cplx lambda, const pencil_rhs& rhs, const eigen_system& sys,
                       const std::vector<double>& theta, const std::vector<cplx>& phi) {
  require(theta.size() == phi.size() && theta.size() >= 7, "pencil_residual: bad sizes");
  int n = static_cast<int>(theta.size());
  double h = theta[1] - theta[0];
  std::vector<double> re(n), im(n);
  for (int i = 0; i < n; ++i) {
    re[i] = phi[i].real();
    im[i] = phi[i].imag();
  }
  auto d1re = fd_derivative(re, h, 1, 4), d1im = fd_derivative(im, h, 1, 4);
  auto d2re = fd_derivative(re, h, 2, 4), d2im = fd_derivative(im, h, 2, 4);

  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < n; ++i) {
    cplx Fi = rhs.F ? rhs.F(theta[i]) : cplx(0.0, 0.0);
    cplx d2(d2re[i], d2im[i]);
    cplx r = lambda * lambda * phi[i] + d2 - Fi;
    worst = std::max(worst, std::abs(r));
    scale = std::max({scale, std::abs(lambda * lambda * phi[i]), std::abs(d2), std::abs(Fi)});
  }
  double ode = (scale > 0.0) ? worst / scale : worst;

  // Boundary rows, relative to the data scale.
  cplx dtop(d1re[n - 1], d1im[n - 1]), dbot(d1re[0], d1im[0]);
  cplx rt, rb;
  if (sys.bc_pair == "mixed") {
    rt = phi[n - 1] - rhs.a;
    rb = -dbot - rhs.b;
  } else if (sys.bc_pair == "dirichlet") {
    rt = phi[n - 1] - rhs.a;
    rb = phi[0] - rhs.b;
  } else {
    rt = dtop - rhs.a;
    rb = -dbot - rhs.b;
  }
  double bscale = std::max({std::abs(rhs.a), std::abs(rhs.b), scale, 1e-300});
  return std::max(ode, std::max(std::abs(rt), std::abs(rb)) / bscale);
}

resolvent_check resolvent_norm_check(cplx lambda, const pencil_rhs& rhs,
                                     const std::vector<cplx>& phi, const eigen_system&,
                                     const std::vector<double>& theta, int l,
                                     double c_allow) {
  require(l >= 2, "resolvent_norm_check: need l >= 2");
  resolvent_check out;
  out.lhs = param_norm(theta, phi, l, lambda);

  double fterm = 0.0;
  if (rhs.F) {
    std::vector<cplx> fs(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) fs[i] = rhs.F(theta[i]);
    fterm = param_norm(theta, fs, l - 2, lambda);
  }
  double al = std::abs(lambda);
  out.rhs_bound = fterm + (1.0 + std::pow(al, l - 0.5)) * std::abs(rhs.a) +
                  (1.0 + std::pow(al, l - 1.5)) * std::abs(rhs.b);
  out.fitted_c = out.lhs / std::max(out.rhs_bound, 1e-300);
  out.pass = out.lhs <= c_allow * out.rhs_bound + 1e-300;
  return out;
}

}  // namespace corner
