#pragma once
#include <functional>
#include <string>
#include <vector>

#include "corner/transforms.hpp"

namespace corner {

// Boundary condition on one side of the rectangle. "dirichlet" pins the
// nodal values, "flux" adds the prescribed outward conormal (A grad u).n as
// a boundary load, "none" is the natural zero-flux condition.
struct fem_bc {
  std::string kind = "none";
  std::function<double(double)> value;  // of the running boundary coordinate
};

// Tensor Lagrange finite elements (degree 1 or 2) for the divergence-form
// problem div(A grad u) = s on a rectangle with per-side conditions. The
// breakpoints may be graded; 3x3 Gauss quadrature per element keeps variable
// coefficients accurate through degree 2.
struct fem_problem {
  std::vector<double> xb, yb;  // element breakpoints, strictly increasing
  int degree = 1;
  std::function<mat2(double, double)> A;
  std::function<double(double, double)> source;  // may be empty (zero)
  fem_bc left, right, bottom, top;
  bool pin_if_floating = false;  // pure-flux problems: zero-mean gauge
};

struct fem_solution {
  std::vector<double> xn, yn;  // node lines
  std::vector<double> u;       // row-major u[i * yn.size() + j]
  std::vector<double> xb, yb;
  int degree = 1;
  double residual = 0.0;  // relative linear-solve residual

  double at(int i, int j) const { return u[static_cast<std::size_t>(i) * yn.size() + j]; }
  double eval(double x, double y) const;
  double eval_dx(double x, double y) const;
  double eval_dy(double x, double y) const;
};

fem_solution fem_solve(const fem_problem& pb);

// Convenience: uniform breakpoints.
std::vector<double> uniform_breaks(double a, double b, int n_elem);
// Power-graded breakpoints clustering toward a.
std::vector<double> graded_breaks(double a, double b, int n_elem, double grade);

}  // namespace corner
