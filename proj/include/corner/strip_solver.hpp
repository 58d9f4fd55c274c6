#pragma once
#include <functional>
#include <string>

#include "corner/fem2d.hpp"
#include "corner/profile.hpp"

namespace corner {

// Data for the flat-strip problem: the divergence-form image of the physical
// Laplace problem under the graph map (x, z) -> (x, eta(x) z + l(x)(1 - z)).
// h is sampled at physical points; f and g run along the top and bottom
// edges indexed by x. For the top, "mixed"/"dirichlet" take values and
// "neumann" takes the outward conormal; the bottom takes the conormal except
// under "dirichlet".
struct strip_data {
  std::string kind = "mixed";  // mixed | dirichlet | neumann
  std::function<double(double, double)> h;
  std::function<double(double)> f, g;
};

struct strip_options {
  int n_x = 128, n_z = 32;
  int degree = 2;
  double x_max = 0.0;                       // 0: x_delta + 10
  double grade = 1.0;                       // x-breakpoint grading toward the corner
  std::function<double(double)> far_value;  // far-end trace (of z); default 0
};

struct strip_solution {
  fem_solution fem;
  surface_profile prof;
  double x_max = 0.0;

  double eval_strip(double x, double z) const { return fem.eval(x, z); }
  // Physical point (xbar, zbar) strictly inside the domain.
  double eval_phys(double xb, double zb) const;
  // Physical gradient (d/dxbar, d/dzbar) through the graph map's chain rule.
  vec2 eval_phys_grad(double xb, double zb) const;
};

// Solves div(D P_R grad v) = D h with the boundary pair of `kind`, a
// homogeneous (or supplied) Dirichlet far end, and the collapsed corner edge
// pinned to the top value when the top is Dirichlet.
strip_solution solve_strip(const surface_profile& p, const strip_data& d,
                           const strip_options& opt = {});

}  // namespace corner
