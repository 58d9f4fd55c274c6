#include "corner/bvp_full.hpp"

#include <algorithm>
#include <cmath>

#include "corner/eigensystem.hpp"
#include "corner/errors.hpp"
#include "corner/numerics.hpp"
#include "corner/spline.hpp"
#include "corner/transforms.hpp"

namespace corner {

namespace {

vec2 chart_fwd(const surface_profile& p, const regularized_map* rm, vec2 X) {
  return rm ? rm->map_Tc_reg(X) : map_Tc(p, X);
}

// Arclength stretch of the chart along a fixed ray, |d Xb / d r|.
double ray_stretch(const surface_profile& p, const regularized_map* rm,
                   double r, double theta) {
  double hr = 1e-6 * r;
  double c = std::cos(theta), s = std::sin(theta);
  vec2 a = chart_fwd(p, rm, {(r + hr) * c, (r + hr) * s});
  vec2 b = chart_fwd(p, rm, {(r - hr) * c, (r - hr) * s});
  return std::hypot(a.x - b.x, a.z - b.z) / (2.0 * hr);
}

}  // namespace

split_data localize(const surface_profile& p, const bvp_data& d,
                    const cutoff_spec& cut, const approx_field& u,
                    const regularized_map* rm) {
  require(u.u && u.grad,
          "localize: approximate field must provide value and gradient");
  const cutoff1d chi = cut.chi_c;
  double om1 = p.omega1(), om2 = p.omega2();
  bool nvp = d.kind == "neumann";
  bool dvp = d.kind == "dirichlet";

  // Corner piece on the chart. The interior term is
  //   chi h + (chi'' + chi'/rho) u + 2 chi' (Xhat . grad u),
  // sampled at the physical image of each chart node and interpolated from
  // the table afterwards, which keeps the per-solve cost independent of how
  // densely the transform resamples it.
  int nt = 1101, nth = 97;
  std::vector<double> ttab =
      linspace(std::log(cut.delta) - 9.0, std::log(1.35 * cut.delta), nt);
  std::vector<double> thtab = linspace(-om2, om1, nth);
  std::vector<double> htab(static_cast<std::size_t>(nt) * nth, 0.0);
  std::vector<double> ftab(nt, 0.0), gtab(nt, 0.0);
  for (int i = 0; i < nt; ++i) {
    double r = std::exp(ttab[i]);
    for (int j = 0; j < nth; ++j) {
      vec2 Xb = chart_fwd(p, rm, {r * std::cos(thtab[j]), r * std::sin(thtab[j])});
      double rho = std::hypot(Xb.x, Xb.z);
      double c = chi(rho);
      double val = (c > 0.0 && d.h) ? c * d.h(Xb.x, Xb.z) : 0.0;
      double cd = chi.deriv(rho, 1);
      if (cd != 0.0) {
        vec2 gr = u.grad(Xb.x, Xb.z);
        val += (chi.deriv(rho, 2) + cd / rho) * u.u(Xb.x, Xb.z) +
               2.0 * cd * (Xb.x * gr.x + Xb.z * gr.z) / rho;
      }
      htab[static_cast<std::size_t>(i) * nth + j] = val;
    }

    // top edge datum (surface side)
    {
      vec2 Xb = chart_fwd(p, rm, {r * std::cos(om1), r * std::sin(om1)});
      double rho = std::hypot(Xb.x, Xb.z);
      double c = chi(rho);
      double fv = d.f ? d.f(Xb.x) : 0.0;
      if (!nvp) {
        ftab[i] = c * fv;
      } else if (c > 0.0 || chi.deriv(rho, 1) != 0.0) {
        double base = c * fv;
        double cd = chi.deriv(rho, 1);
        if (cd != 0.0) {
          double ed = p.eta_d(Xb.x, 1);
          base += cd * (Xb.z - Xb.x * ed) /
                  (rho * std::sqrt(1.0 + ed * ed)) * u.u(Xb.x, Xb.z);
        }
        ftab[i] = base * ray_stretch(p, rm, r, om1);
      }
    }
    // bottom edge datum; the cutoff is radial and the bottom is a ray through
    // the corner, so no flux commutator appears there
    {
      vec2 Xb = chart_fwd(p, rm, {r * std::cos(om2), -r * std::sin(om2)});
      double rho = std::hypot(Xb.x, Xb.z);
      double c = chi(rho);
      double gv = d.g ? d.g(Xb.x) : 0.0;
      if (dvp)
        gtab[i] = c * gv;
      else if (c > 0.0)
        gtab[i] = c * gv * ray_stretch(p, rm, r, -om2);
    }
  }

  split_data out;
  double t_lo = ttab.front(), t_hi = ttab.back();
  bicubic hsp(ttab, thtab, htab);
  out.cone.h = [hsp, t_lo, t_hi](double r, double th) {
    double t = std::log(r);
    return (t < t_lo || t > t_hi) ? 0.0 : hsp.eval(t, th);
  };
  spline fsp(ttab, ftab), gsp(ttab, gtab);
  out.cone.f = [fsp, t_lo, t_hi](double r) {
    double t = std::log(r);
    return (t < t_lo || t > t_hi) ? 0.0 : fsp.eval(t);
  };
  out.cone.g = [gsp, t_lo, t_hi](double r) {
    double t = std::log(r);
    return (t < t_lo || t > t_hi) ? 0.0 : gsp.eval(t);
  };

  // Strip piece: the complement weight on the data and the commutators with
  // the opposite sign, all in physical coordinates.
  out.strip.kind = d.kind;
  auto h0 = d.h;
  auto uu = u.u;
  auto ugr = u.grad;
  out.strip.h = [h0, uu, ugr, chi](double xb, double zb) {
    double rho = std::hypot(xb, zb);
    double c = chi(rho);
    double val = (c < 1.0 && h0) ? (1.0 - c) * h0(xb, zb) : 0.0;
    double cd = chi.deriv(rho, 1);
    if (cd != 0.0) {
      vec2 gr = ugr(xb, zb);
      val -= (chi.deriv(rho, 2) + cd / rho) * uu(xb, zb) +
             2.0 * cd * (xb * gr.x + zb * gr.z) / rho;
    }
    return val;
  };
  auto f0 = d.f;
  auto g0 = d.g;
  surface_profile pc = p;
  out.strip.f = [f0, uu, chi, pc, nvp](double x) {
    double zt = pc.eta(x);
    double rho = std::hypot(x, zt);
    double base = f0 ? (1.0 - chi(rho)) * f0(x) : 0.0;
    if (nvp) {
      double cd = chi.deriv(rho, 1);
      if (cd != 0.0) {
        double ed = pc.eta_d(x, 1);
        base -= cd * (zt - x * ed) / (rho * std::sqrt(1.0 + ed * ed)) * uu(x, zt);
      }
    }
    return base;
  };
  out.strip.g = [g0, chi, pc](double x) {
    if (!g0) return 0.0;
    double rho = x * std::sqrt(1.0 + pc.gamma * pc.gamma);
    return (1.0 - chi(rho)) * g0(x);
  };
  return out;
}

double flux_balance(const surface_profile& p, const bvp_data& d, double x_max) {
  int nx = 4001, nz = 161;
  double hx = x_max / (nx - 1);
  std::vector<double> slab(nx, 0.0);
  if (d.h) {
    std::vector<double> col(nz);
    for (int i = 0; i < nx; ++i) {
      double x = i * hx;
      double lo = p.l(x), depth = p.eta(x) - lo;
      for (int j = 0; j < nz; ++j)
        col[j] = d.h(x, lo + depth * j / (nz - 1.0));
      slab[i] = simpson(col, depth / (nz - 1.0));
    }
  }
  double mass = simpson(slab, hx);
  std::vector<double> bd(nx, 0.0);
  for (int i = 0; i < nx; ++i) {
    double x = i * hx;
    double ed = p.eta_d(x, 1);
    if (d.f) bd[i] += d.f(x) * std::sqrt(1.0 + ed * ed);
    if (d.g) bd[i] += d.g(x) * std::sqrt(1.0 + p.gamma * p.gamma);
  }
  return mass - simpson(bd, hx);
}

double full_solution::eval(double xb, double zb) const {
  double val = xb > 0.0 ? strip.eval_phys(xb, zb) : 0.0;
  double rho = std::hypot(xb, zb);
  // The corner field carries the cutoff already and vanishes identically past
  // its outer edge, so it is added unweighted inside that radius.
  if (rho > 0.0 && rho < cut.chi_c.r1) {
    vec2 X = rmap ? rmap->map_Tc_reg_inv({xb, zb}) : map_Tc_inv(prof, {xb, zb});
    double r = std::hypot(X.x, X.z);
    if (r > 0.0) {
      double t = std::max(std::log(r), cone_t_lo);
      double th = std::clamp(std::atan2(X.z, X.x), -prof.omega2(), prof.omega1());
      if (t <= cone_t_hi) val += cone_w.eval(t, th);
    }
  }
  return val;
}

vec2 full_solution::eval_grad(double xb, double zb) const {
  double h = 1e-5 * std::max(std::hypot(xb, zb), 0.01 * cut.delta);
  // Keep every stencil point inside the domain: the chart inverse only exists
  // above the bottom ray, x <= 0 is outside the strip chart, and past the top
  // surface the corner interpolant clamps the angle and goes flat.
  auto ok = [&](double x, double z) {
    return x > 0.0 && prof.gamma * x + z >= 0.0 && z <= prof.eta_d(x, 0);
  };
  auto d1 = [&](double ux, double uz) {
    double f0 = eval(xb, zb);
    if (ok(xb - h * ux, zb - h * uz) && ok(xb + h * ux, zb + h * uz))
      return (eval(xb + h * ux, zb + h * uz) - eval(xb - h * ux, zb - h * uz)) /
             (2.0 * h);
    double s = ok(xb + h * ux, zb + h * uz) ? 1.0 : -1.0;
    return s *
           (-3.0 * f0 + 4.0 * eval(xb + s * h * ux, zb + s * h * uz) -
            eval(xb + 2.0 * s * h * ux, zb + 2.0 * s * h * uz)) /
           (2.0 * h);
  };
  return {d1(1.0, 0.0), d1(0.0, 1.0)};
}

full_solution solve_full(const surface_profile& p, const bvp_data& d, int l,
                         double beta, const full_options& opt) {
  require(l >= 2, "solve_full: derivative order must be at least 2");
  check_omega(p, d.kind);
  domain_info dom = build_domain(p);
  double x_max = opt.mono.x_max > 0.0 ? opt.mono.x_max : dom.x_delta + 10.0;

  if (d.kind == "dirichlet") {
    double fv = d.f ? d.f(0.0) : 0.0, gv = d.g ? d.g(0.0) : 0.0;
    require(std::fabs(fv - gv) <= 1e-8 * (1.0 + std::fabs(fv)),
            "solve_full: Dirichlet data disagree at the corner");
  }
  if (d.kind == "neumann") {
    double bal = flux_balance(p, d, x_max);
    double scale = 1.0;
    if (d.h) scale += std::fabs(flux_balance(p, {d.kind, d.h, {}, {}}, x_max));
    require(std::fabs(bal) <= 1e-6 * scale,
            "solve_full: Neumann data violate the flux balance");
  }

  full_solution out;
  out.kind = d.kind;
  out.l = l;
  out.beta = beta;
  out.prof = p;
  out.cut = make_cutoff(p.delta);
  out.beta_contour = d.kind == "mixed" ? 1.0 - beta : -beta;

  std::shared_ptr<regularized_map> rmp;
  if (opt.use_regularized) {
    rmp = std::make_shared<regularized_map>(build_regularized_map(p, {}));
    out.rmap = rmp;
  }
  const regularized_map* rmr = rmp.get();

  eigen_system sys = make_eigensystem(d.kind, dom.omega1, dom.omega2, 12);

  strip_options mopt = opt.mono;
  mopt.x_max = x_max;
  strip_options sopt = opt.strip;
  sopt.x_max = x_max;
  // The complement piece owns the far end outright (the cutoff is long dead
  // there), so it inherits the far trace unless the caller overrides it.
  if (!sopt.far_value) sopt.far_value = mopt.far_value;

  out.mono = solve_strip(p, {d.kind, d.h, d.f, d.g}, mopt);

  // Subtract the corner value of the solution before splitting, so every
  // localized datum decays into the corner; it is added back on evaluation.
  // Value pairings pin it exactly; the all-flux pairing takes the seed's
  // corner value, good enough since the leftover is re-pinned below.
  if (d.kind != "neumann")
    out.corner_value = d.f ? d.f(0.0) : 0.0;
  else
    out.corner_value = out.mono.eval_phys(1e-3 * p.delta, 0.0);
  const double u0 = out.corner_value;
  bvp_data dd = d;
  if (u0 != 0.0 && d.kind != "neumann") {
    auto f0 = d.f;
    dd.f = [f0, u0](double x) { return f0(x) - u0; };
    if (d.kind == "dirichlet") {
      auto g0 = d.g;
      if (g0)
        dd.g = [g0, u0](double x) { return g0(x) - u0; };
      else
        dd.g = [u0](double) { return -u0; };
    }
  }
  if (u0 != 0.0) {
    auto fv = sopt.far_value;
    if (fv)
      sopt.far_value = [fv, u0](double z) { return fv(z) - u0; };
    else
      sopt.far_value = [u0](double) { return -u0; };
  }

  patch_options popt = opt.patch;
  popt.use_regularized = opt.use_regularized;
  int np = std::max(1, opt.passes);
  for (int pass = 1; pass <= np; ++pass) {
    approx_field af;
    if (pass == 1) {
      auto seed = std::make_shared<strip_solution>(out.mono);
      af.u = [seed, u0](double x, double z) {
        return seed->eval_phys(x, z) - u0;
      };
      af.grad = [seed](double x, double z) { return seed->eval_phys_grad(x, z); };
    } else {
      auto prev = std::make_shared<full_solution>(out);
      af.u = [prev, u0](double x, double z) { return prev->eval(x, z) - u0; };
      af.grad = [prev](double x, double z) { return prev->eval_grad(x, z); };
    }
    split_data sd = localize(p, dd, out.cut, af, rmr);
    out.cone = solve_cone_patch(p, sys, sd.cone, out.beta_contour, out.cut,
                                popt, rmr);
    if (d.kind == "neumann") {
      // The all-flux wedge solve fixes its free constant by the decay class;
      // the localized field instead vanishes outside the cutoff. Re-pin it on
      // the band past the cutoff where the exact field is dead.
      double m = 0.0;
      int cnt = 0;
      for (std::size_t i = 0; i < out.cone.w.x1.size(); ++i) {
        double r = std::exp(out.cone.w.x1[i]);
        if (r < 1.5 * out.cut.delta || r > 2.5 * out.cut.delta) continue;
        for (std::size_t j = 0; j < out.cone.w.x2.size(); ++j) {
          m += out.cone.w.at(i, j);
          ++cnt;
        }
      }
      if (cnt > 0) {
        m /= cnt;
        for (double& v : out.cone.w.values) v -= m;
      }
    }
    out.strip = solve_strip(p, sd.strip, sopt);
    out.cone_w = out.cone.w.interp();
    out.cone_t_lo = out.cone.w.x1.front();
    out.cone_t_hi = out.cone.w.x1.back();
  }

  // Decomposition vs the single-grid solve on the matching annulus, where
  // both carry the full field and neither cutoff is degenerate.
  double sup = 0.0, ref = 0.0;
  for (int a = 0; a < 32; ++a) {
    double r = 0.45 * out.cut.delta *
               std::pow(1.05 / 0.45, a / 31.0);
    for (int b = 0; b < 24; ++b) {
      double th = -dom.omega2 + (dom.omega1 + dom.omega2) * (b + 0.5) / 24.0;
      vec2 Xb = chart_fwd(p, rmr, {r * std::cos(th), r * std::sin(th)});
      double rho = std::hypot(Xb.x, Xb.z);
      double c = out.cut.chi_c(rho);
      if (c < 0.3 || c > 0.7) continue;
      double va = out.eval(Xb.x, Xb.z);
      double vm = out.mono.eval_phys(Xb.x, Xb.z);
      sup = std::max(sup, std::fabs(va - vm));
      ref = std::max(ref, std::fabs(vm));
    }
  }
  out.overlap_mismatch = sup / std::max(ref, 1e-12);
  return out;
}

}  // namespace corner
