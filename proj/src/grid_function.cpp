#include "corner/grid_function.hpp"

#include <cmath>

#include "corner/errors.hpp"
#include "corner/numerics.hpp"

namespace corner {

void grid_function::fill(const std::function<double(double, double)>& f) {
  v.resize(static_cast<std::size_t>(n1()) * n2());
  for (int i = 0; i < n1(); ++i)
    for (int j = 0; j < n2(); ++j) at(i, j) = f(x1[i], x2[j]);
}

grid_function grid_function::same_shape() const {
  grid_function g = *this;
  g.v.assign(v.size(), 0.0);
  return g;
}

grid_function grid_function::diff1(int k) const {
  grid_function g = same_shape();
  std::vector<double> col(n1());
  for (int j = 0; j < n2(); ++j) {
    for (int i = 0; i < n1(); ++i) col[i] = at(i, j);
    auto d = fd_derivative(col, h1(), k, stencil_order);
    for (int i = 0; i < n1(); ++i) g.at(i, j) = d[i];
  }
  return g;
}

grid_function grid_function::diff2(int k) const {
  grid_function g = same_shape();
  std::vector<double> row(n2());
  for (int i = 0; i < n1(); ++i) {
    for (int j = 0; j < n2(); ++j) row[j] = at(i, j);
    auto d = fd_derivative(row, h2(), k, stencil_order);
    for (int j = 0; j < n2(); ++j) g.at(i, j) = d[j];
  }
  return g;
}

double grid_function::max_abs() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bicubic grid_function::interp() const { return bicubic(x1, x2, v); }

grid_function make_grid(const std::string& chart, double a1, double b1, int n1,
                        double a2, double b2, int n2) {
  grid_function g;
  g.chart = chart;
  g.x1 = linspace(a1, b1, n1);
  g.x2 = linspace(a2, b2, n2);
  g.v.assign(static_cast<std::size_t>(n1) * n2, 0.0);
  return g;
}

grid_function make_cone_grid(double T_min, double T_max, int n_t, double omega1,
                             double omega2, int n_theta) {
  return make_grid("cone", T_min, T_max, n_t, -omega2, omega1, n_theta);
}

std::vector<std::vector<grid_function>> cartesian_derivs(const grid_function& w, int l) {
  require(w.n1() >= l + 2 && w.n2() >= l + 2, "cartesian_derivs: grid too small for order");
  bool cone = (w.chart == "cone");
  auto dx = [&](const grid_function& g) {
    grid_function gt = g.diff1(), gh = g.diff2();
    grid_function out = g.same_shape();
    if (!cone) return gt;
    for (int i = 0; i < g.n1(); ++i) {
      double emt = std::exp(-g.x1[i]);
      for (int j = 0; j < g.n2(); ++j) {
        double th = g.x2[j];
        out.at(i, j) = emt * (std::cos(th) * gt.at(i, j) - std::sin(th) * gh.at(i, j));
      }
    }
    return out;
  };
  auto dz = [&](const grid_function& g) {
    grid_function gt = g.diff1(), gh = g.diff2();
    grid_function out = g.same_shape();
    if (!cone) return gh;
    for (int i = 0; i < g.n1(); ++i) {
      double emt = std::exp(-g.x1[i]);
      for (int j = 0; j < g.n2(); ++j) {
        double th = g.x2[j];
        out.at(i, j) = emt * (std::sin(th) * gt.at(i, j) + std::cos(th) * gh.at(i, j));
      }
    }
    return out;
  };

  std::vector<std::vector<grid_function>> cart(l + 1);
  cart[0] = {w};
  for (int k = 0; k < l; ++k) {
    cart[k + 1].reserve(k + 2);
    for (int a = 0; a <= k; ++a) cart[k + 1].push_back(dx(cart[k][a]));
    cart[k + 1].push_back(dz(cart[k][k]));
  }
  return cart;
}

double integrate_grid(const grid_function& g) {
  std::vector<double> rows(g.n1());
  std::vector<double> tmp(g.n2());
  for (int i = 0; i < g.n1(); ++i) {
    for (int j = 0; j < g.n2(); ++j) tmp[j] = g.at(i, j);
    rows[i] = (g.n2() % 2 == 1 && g.n2() >= 3) ? simpson(tmp, g.h2()) : trapezoid(tmp, g.h2());
  }
  return (g.n1() % 2 == 1 && g.n1() >= 3) ? simpson(rows, g.h1()) : trapezoid(rows, g.h1());
}

}  // namespace corner
