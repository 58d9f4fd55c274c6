#include "corner/cone_patch.hpp"

#include <algorithm>
#include <cmath>

#include "corner/coefficients.hpp"
#include "corner/errors.hpp"
#include "corner/fem2d.hpp"
#include "corner/weighted_norms.hpp"

namespace corner {

cutoff_spec make_cutoff(double delta) {
  require(delta > 0.0, "make_cutoff: delta must be positive");
  cutoff_spec c;
  c.delta = delta;
  c.chi_c = {0.5 * delta, delta};
  c.chi_bar = {delta, 1.2 * delta};
  c.chi_env = {1.3 * delta, 3.0 * delta};
  return c;
}

namespace {

// Enveloped coefficient perturbation on the chart: B = chi_env (P_w - Id),
// vanishing at the corner (P_c is the identity there) and past the envelope.
// bare() exposes the un-enveloped matrix so the divergence can carry the
// envelope derivative analytically instead of differencing across it.
struct pert_coeff {
  const surface_profile* p;
  const regularized_map* rm;
  cutoff_cinf env;

  mat2 bare(double t, double theta) const {
    mat2 P = rm ? field_Pw_reg(*rm, t, theta) : field_Pw(*p, t, theta);
    return P - mat2::identity();
  }
  mat2 operator()(double t, double theta) const {
    double w = env(std::exp(t));
    if (w == 0.0) return {};
    return bare(t, theta) * w;
  }
};

struct pert_source {
  grid_function s_chart;         // div(B grad v) in chart units
  std::vector<double> top_def;   // flux defect rows (chart units)
  std::vector<double> bot_def;
};

// div(B grad v) with B = chi_env M, M = P_w - Id, written as
//   chi_env div(M grad v) + (d/dt chi_env(e^t)) (M grad v)_t
// so the envelope is never finite-differenced (its log-width is order one but
// its high derivatives are large; M itself varies on profile scales and
// differences cleanly). The bare flux is evaluated a couple of stencils past
// the envelope support and zeroed beyond, which keeps the chart maps inside
// their validity window.
pert_source make_pert(const grid_function& v, const pert_coeff& B) {
  grid_function vt = v.diff1(1), vth = v.diff2(1);
  grid_function q1 = v.same_shape(), q2 = v.same_shape();
  double r_eval = B.env.r1 * std::exp(2.5 * v.h1());
  for (int i = 0; i < v.n1(); ++i) {
    if (std::exp(v.x1[i]) > r_eval) continue;  // rows preset to zero
    for (int j = 0; j < v.n2(); ++j) {
      mat2 m = B.bare(v.x1[i], v.x2[j]);
      q1.at(i, j) = m.a00 * vt.at(i, j) + m.a01 * vth.at(i, j);
      q2.at(i, j) = m.a10 * vt.at(i, j) + m.a11 * vth.at(i, j);
    }
  }
  pert_source out;
  grid_function d1 = q1.diff1(1), d2 = q2.diff2(1);
  out.s_chart = v.same_shape();
  out.bot_def.resize(v.n1());
  out.top_def.resize(v.n1());
  for (int i = 0; i < v.n1(); ++i) {
    double r = std::exp(v.x1[i]);
    double e = B.env(r), ed = B.env.deriv(r, 1) * r;
    for (int j = 0; j < v.n2(); ++j)
      out.s_chart.at(i, j) =
          e * (d1.at(i, j) + d2.at(i, j)) + ed * q1.at(i, j);
    out.bot_def[i] = -e * q2.at(i, 0);          // outward chart normal (0,-1)
    out.top_def[i] = e * q2.at(i, v.n2() - 1);  // outward chart normal (0, 1)
  }
  return out;
}

grid_function direct_chart_solve(const eigen_system& sys,
                                 const wedge_data& d, const pert_coeff& B,
                                 const patch_options& opt, const cutoff_spec& cut,
                                 double t_hi) {
  fem_problem pb;
  pb.xb = uniform_breaks(opt.direct_t_lo, t_hi, opt.direct_nt);
  pb.yb = uniform_breaks(-sys.omega2, sys.omega1, opt.direct_ntheta);
  pb.degree = 2;
  pb.A = [B](double t, double theta) { return mat2::identity() + B(t, theta); };
  if (d.h) {
    auto h = d.h;
    pb.source = [h](double t, double theta) {
      return std::exp(2.0 * t) * h(std::exp(t), theta);
    };
  }
  auto f = d.f ? d.f : [](double) { return 0.0; };
  auto g = d.g ? d.g : [](double) { return 0.0; };
  bool top_flux = sys.bc_pair == "neumann";
  bool bottom_value = sys.bc_pair == "dirichlet";
  if (top_flux)
    pb.top = {"flux", [f](double t) { return std::exp(t) * f(std::exp(t)); }};
  else
    pb.top = {"dirichlet", [f](double t) { return f(std::exp(t)); }};
  if (bottom_value)
    pb.bottom = {"dirichlet", [g](double t) { return g(std::exp(t)); }};
  else
    pb.bottom = {"flux", [g](double t) { return std::exp(t) * g(std::exp(t)); }};
  pb.left = {"dirichlet", [](double) { return 0.0; }};
  pb.right = {"dirichlet", [](double) { return 0.0; }};

  fem_solution fs = fem_solve(pb);

  // Resample onto the wedge grid; below the fem window continue with the
  // leading decay rate so the weighted norms see no artificial jump.
  grid_function out = make_cone_grid(opt.wedge.t_min, opt.wedge.t_max,
                                     opt.wedge.n_t + 1, sys.omega1, sys.omega2,
                                     opt.wedge.n_theta + 1);
  double lam0 = 1e300;
  for (const eigen_entry& e : sys.entries)
    if (e.lambda > 1e-12) lam0 = std::min(lam0, e.lambda);
  if (lam0 == 1e300) lam0 = 1.0;
  for (int i = 0; i < out.n1(); ++i) {
    double t = out.x1[i];
    for (int j = 0; j < out.n2(); ++j) {
      double th = out.x2[j];
      if (t >= opt.direct_t_lo)
        out.at(i, j) = t <= t_hi ? fs.eval(t, th) : 0.0;
      else
        out.at(i, j) = fs.eval(opt.direct_t_lo, th) *
                       std::exp(lam0 * (t - opt.direct_t_lo));
    }
  }
  (void)cut;
  return out;
}

}  // namespace

patch_solution solve_cone_patch(const surface_profile& p, const eigen_system& sys,
                                const wedge_data& d, double beta,
                                const cutoff_spec& cut, const patch_options& opt,
                                const regularized_map* rm) {
  require(std::fabs(sys.omega1 - p.omega1()) < 1e-10 &&
              std::fabs(sys.omega2 - p.omega2()) < 1e-10,
          "solve_cone_patch: eigensystem angles do not match the profile");
  require(!opt.use_regularized || rm != nullptr,
          "solve_cone_patch: regularized coefficients need the smoothed map");
  require(1.2 * cut.chi_env.r1 <= p.x0,
          "solve_cone_patch: coefficient envelope exceeds the profile window");

  pert_coeff B{&p, opt.use_regularized ? rm : nullptr, cut.chi_env};

  patch_solution out;
  out.beta = beta;
  double beta_norm = beta + 1.0;  // weight paired with the contour at l = 2

  wedge_solution cur = solve_wedge(sys, d, beta, opt.wedge);
  bool converged = false, stalled = false;
  int grew = 0;
  double prev_step = -1.0;
  for (int it = 1; it <= opt.max_iter && !converged && !stalled; ++it) {
    pert_source ps = make_pert(cur.w, B);
    bicubic sp(cur.w.x1, cur.w.x2, ps.s_chart.v);
    spline bot(cur.w.x1, ps.bot_def), top(cur.w.x1, ps.top_def);
    double t_lo = cur.w.x1.front(), t_hi_grid = cur.w.x1.back();

    wedge_data de;
    auto h0 = d.h;
    de.h = [sp, h0, t_lo, t_hi_grid](double r, double th) {
      double base = h0 ? h0(r, th) : 0.0;
      double t = std::log(r);
      if (t < t_lo || t > t_hi_grid) return base;
      return base - sp.eval(t, th) * std::exp(-2.0 * t);
    };
    bool top_flux = sys.bc_pair == "neumann";
    bool bottom_value = sys.bc_pair == "dirichlet";
    de.f = d.f;
    de.g = d.g;
    if (top_flux) {
      auto f0 = d.f;
      de.f = [top, f0, t_lo, t_hi_grid](double r) {
        double base = f0 ? f0(r) : 0.0;
        double t = std::log(r);
        if (t < t_lo || t > t_hi_grid) return base;
        return base - top.eval(t) / r;
      };
    }
    if (!bottom_value) {
      auto g0 = d.g;
      de.g = [bot, g0, t_lo, t_hi_grid](double r) {
        double base = g0 ? g0(r) : 0.0;
        double t = std::log(r);
        if (t < t_lo || t > t_hi_grid) return base;
        return base - bot.eval(t) / r;
      };
    }

    wedge_solution nxt = solve_wedge(sys, de, beta, opt.wedge);
    grid_function diff = nxt.w.same_shape();
    for (std::size_t k = 0; k < diff.v.size(); ++k)
      diff.v[k] = nxt.w.v[k] - cur.w.v[k];
    double step = vnorm_cone(diff, 2, beta_norm);
    out.step_sizes.push_back(step);
    out.iterations = it;
    double scale = std::max(1.0, vnorm_cone(nxt.w, 2, beta_norm));
    if (prev_step > 0.0 && step > prev_step) {
      if (++grew >= 2 && step > 10.0 * opt.fp_tol * scale) stalled = true;
    } else {
      grew = 0;
    }
    if (prev_step > 0.0 && prev_step > 1e-300)
      out.contraction = std::max(out.contraction, step / prev_step);
    prev_step = step;
    cur = std::move(nxt);
    if (step < opt.fp_tol * scale) converged = true;
  }

  // Independent direct solve on the log-polar chart for validation, and as
  // the answer when the iteration did not settle.
  if (opt.run_direct || !converged) {
    double t_hi = std::log(1.2 * cut.delta) + opt.direct_t_margin;
    grid_function direct = direct_chart_solve(sys, d, B, opt, cut, t_hi);

    double wmax = cur.w.max_abs(), gap = 0.0;
    double cmp_hi = std::min(cur.w.x1.back(), std::log(cut.delta));
    for (int i = 0; i < cur.w.n1(); ++i) {
      double t = cur.w.x1[i];
      if (t < opt.direct_t_lo + 0.5 || t > cmp_hi) continue;
      for (int j = 0; j < cur.w.n2(); ++j)
        gap = std::max(gap, std::fabs(cur.w.at(i, j) - direct.at(i, j)));
    }
    out.cross_check = gap / std::max(wmax, 1e-300);

    if (!converged || out.cross_check > opt.cross_tol) {
      out.used_direct = true;
      out.w = std::move(direct);
      return out;
    }
  }
  out.w = std::move(cur.w);
  return out;
}

}  // namespace corner
