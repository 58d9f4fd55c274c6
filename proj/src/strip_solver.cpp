#include "corner/strip_solver.hpp"

#include <cmath>

#include "corner/errors.hpp"

namespace corner {

double strip_solution::eval_phys(double xb, double zb) const {
  double depth = prof.eta(xb) - prof.l(xb);
  require(depth > 0.0, "eval_phys: point is at or left of the corner");
  double z = (zb - prof.l(xb)) / depth;
  return fem.eval(xb, z);
}

vec2 strip_solution::eval_phys_grad(double xb, double zb) const {
  double depth = prof.eta(xb) - prof.l(xb);
  require(depth > 0.0, "eval_phys_grad: point is at or left of the corner");
  double z = (zb - prof.l(xb)) / depth;
  double ux = fem.eval_dx(xb, z), uz = fem.eval_dy(xb, z);
  // z = (zbar - l) / (eta - l): dz/dxbar = (gamma - z (eta' + gamma)) / D.
  double dzdx = (prof.gamma - z * (prof.eta_d(xb, 1) + prof.gamma)) / depth;
  return {ux + uz * dzdx, uz / depth};
}

strip_solution solve_strip(const surface_profile& p, const strip_data& d,
                           const strip_options& opt) {
  require(d.kind == "mixed" || d.kind == "dirichlet" || d.kind == "neumann",
          "solve_strip: kind must be mixed, dirichlet, or neumann");
  require(opt.n_x >= 4 && opt.n_z >= 2, "solve_strip: grid too small");

  domain_info dom = build_domain(p);
  double x_max = opt.x_max > 0.0 ? opt.x_max : dom.x_delta + 10.0;
  require(x_max > dom.x_delta, "solve_strip: x_max inside the corner patch");

  fem_problem pb;
  pb.xb = opt.grade > 1.0 ? graded_breaks(0.0, x_max, opt.n_x, opt.grade)
                          : uniform_breaks(0.0, x_max, opt.n_x);
  pb.yb = uniform_breaks(0.0, 1.0, opt.n_z);
  pb.degree = opt.degree;

  surface_profile prof = p;  // owned copy for the lambdas
  // Divergence-form coefficient of the pulled-back Laplacian, premultiplied
  // by the depth so every entry stays integrable at the collapsed edge:
  //   A = [ D, -E ; -E, (1 + E^2)/D ],  E = eta' z + l' (1 - z), D = eta - l.
  pb.A = [prof](double x, double z) {
    double D = prof.eta(x) - prof.l(x);
    double E = prof.eta_d(x, 1) * z + (-prof.gamma) * (1.0 - z);
    mat2 A;
    A.a00 = D;
    A.a01 = A.a10 = -E;
    A.a11 = (1.0 + E * E) / D;
    return A;
  };
  if (d.h) {
    auto h = d.h;
    pb.source = [prof, h](double x, double z) {
      double D = prof.eta(x) - prof.l(x);
      double zb = prof.eta(x) * z + prof.l(x) * (1.0 - z);
      return D * h(x, zb);
    };
  }

  auto f = d.f ? d.f : [](double) { return 0.0; };
  auto g = d.g ? d.g : [](double) { return 0.0; };
  bool top_dirichlet = d.kind != "neumann";
  bool bottom_dirichlet = d.kind == "dirichlet";

  if (top_dirichlet) {
    pb.top = {"dirichlet", f};
  } else {
    // Conormal datum on the curved top edge; arclength factor from the
    // x parametrization.
    pb.top = {"flux", [prof, f](double x) {
                double ed = prof.eta_d(x, 1);
                return std::sqrt(1.0 + ed * ed) * f(x);
              }};
  }
  if (bottom_dirichlet) {
    pb.bottom = {"dirichlet", g};
  } else {
    double lg = std::sqrt(1.0 + p.gamma * p.gamma);
    pb.bottom = {"flux", [lg, g](double x) { return lg * g(x); }};
  }

  // Far end: truncation by a homogeneous Dirichlet condition, or a supplied
  // trace when testing against closed forms.
  if (opt.far_value) {
    auto fv = opt.far_value;
    pb.right = {"dirichlet", fv};
  } else {
    pb.right = {"dirichlet", [](double) { return 0.0; }};
  }

  // The left edge collapses to the corner point. With a Dirichlet top the
  // trace value there is determined by continuity; otherwise leave it
  // natural and let the 1/D weight enforce constancy in z.
  if (top_dirichlet) {
    double corner_value = f(0.0);
    pb.left = {"dirichlet", [corner_value](double) { return corner_value; }};
  } else {
    pb.left = {"none", {}};
  }
  pb.pin_if_floating = false;  // the far end always pins the solution

  strip_solution out;
  out.fem = fem_solve(pb);
  out.prof = p;
  out.x_max = x_max;
  return out;
}

}  // namespace corner
