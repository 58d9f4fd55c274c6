#pragma once
#include <functional>
#include <string>
#include <vector>

#include "corner/spline.hpp"

namespace corner {

// Sampled field on a uniform tensor grid. Charts in use:
//   "cone"  log-polar (t = ln r, theta), t in [T_min, T_max], theta in [-omega2, omega1]
//   "strip" flat coordinates (x, z in [0,1])
//   generic rectangles for intermediate computations
struct grid_function {
  std::string chart = "cone";
  std::vector<double> x1, x2;  // grid lines, uniform spacing per axis
  std::vector<double> v;       // row-major: v[i * n2() + j]
  int stencil_order = 4;

  int n1() const { return static_cast<int>(x1.size()); }
  int n2() const { return static_cast<int>(x2.size()); }
  double h1() const { return x1[1] - x1[0]; }
  double h2() const { return x2[1] - x2[0]; }
  double& at(int i, int j) { return v[static_cast<std::size_t>(i) * x2.size() + j]; }
  double at(int i, int j) const { return v[static_cast<std::size_t>(i) * x2.size() + j]; }

  void fill(const std::function<double(double, double)>& f);
  grid_function same_shape() const;

  // k-th finite-difference derivative along an axis, one-sided at the ends.
  grid_function diff1(int k = 1) const;
  grid_function diff2(int k = 1) const;

  double max_abs() const;
  bicubic interp() const;
};

grid_function make_grid(const std::string& chart, double a1, double b1, int n1,
                        double a2, double b2, int n2);

// Cone chart over t in [T_min, T_max], theta in [-omega2, omega1].
grid_function make_cone_grid(double T_min, double T_max, int n_t, double omega1,
                             double omega2, int n_theta);

// Cartesian derivative table on a chart. cart[k][a] holds
// d^k f / dx^(k-a) dz^a; on the cone chart the log-polar chain rule
//   d_x = e^{-t}(cos th d_t - sin th d_th), d_z = e^{-t}(sin th d_t + cos th d_th)
// is applied recursively, on flat charts the axes are already Cartesian.
std::vector<std::vector<grid_function>> cartesian_derivs(const grid_function& w, int l);

// Integrates the sample grid by composite Simpson per axis when the point
// count is odd, trapezoid otherwise.
double integrate_grid(const grid_function& g);

}  // namespace corner
