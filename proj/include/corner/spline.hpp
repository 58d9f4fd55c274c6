#pragma once
#include <algorithm>
#include <array>
#include <complex>
#include <vector>

#include "corner/errors.hpp"

namespace corner {

// Not-a-knot cubic spline over strictly increasing knots, solved for the
// nodal slopes (tridiagonal, Thomas). Values may be real or complex; the
// matrix depends only on the knots. Evaluation outside the knot range
// extrapolates with the end polynomial.
template <class T>
struct cubic_spline {
  std::vector<double> x;
  std::vector<T> a, b, c, d;  // piece i: a + b u + c u^2 + d u^3, u = xq - x[i]

  cubic_spline() = default;
  cubic_spline(const std::vector<double>& xs, const std::vector<T>& ys) { build(xs, ys); }

  void build(const std::vector<double>& xs, const std::vector<T>& ys) {
    int n = static_cast<int>(xs.size());
    require(n >= 2 && ys.size() == xs.size(), "cubic_spline: need matching sizes >= 2");
    for (int i = 0; i + 1 < n; ++i)
      require(xs[i + 1] > xs[i], "cubic_spline: knots must be strictly increasing");
    x = xs;
    std::vector<double> h(n - 1);
    std::vector<T> slope(n - 1);
    for (int i = 0; i < n - 1; ++i) {
      h[i] = xs[i + 1] - xs[i];
      slope[i] = (ys[i + 1] - ys[i]) / h[i];
    }
    std::vector<T> s(n);
    if (n == 2) {
      s[0] = s[1] = slope[0];
    } else if (n == 3) {
      // Single parabola through the three points.
      T q = (slope[1] - slope[0]) / (h[0] + h[1]);
      s[0] = slope[0] - q * h[0];
      s[1] = slope[0] + q * h[0];
      s[2] = slope[1] + q * h[1];
    } else {
      std::vector<double> sub(n, 0.0), diag(n, 0.0), sup(n, 0.0);
      std::vector<T> rhs(n);
      diag[0] = h[1];
      sup[0] = h[0] + h[1];
      rhs[0] = ((h[0] + 2.0 * sup[0]) * h[1] * slope[0] + h[0] * h[0] * slope[1]) / sup[0];
      for (int i = 1; i < n - 1; ++i) {
        sub[i] = h[i];
        diag[i] = 2.0 * (h[i - 1] + h[i]);
        sup[i] = h[i - 1];
        rhs[i] = 3.0 * (h[i] * slope[i - 1] + h[i - 1] * slope[i]);
      }
      double hn2 = h[n - 2], hn3 = h[n - 3];
      sub[n - 1] = hn3 + hn2;
      diag[n - 1] = hn3;
      rhs[n - 1] = (hn2 * hn2 * slope[n - 3] + (2.0 * sub[n - 1] + hn2) * hn3 * slope[n - 2]) / sub[n - 1];
      // Thomas sweep; the system is quasi-diagonally dominant for the grids
      // used here, guard the pivot anyway.
      for (int i = 1; i < n; ++i) {
        if (diag[i - 1] == 0.0) fail_solver("cubic_spline: zero pivot");
        double m = sub[i] / diag[i - 1];
        diag[i] -= m * sup[i - 1];
        rhs[i] -= m * rhs[i - 1];
      }
      if (diag[n - 1] == 0.0) fail_solver("cubic_spline: zero pivot");
      s[n - 1] = rhs[n - 1] / diag[n - 1];
      for (int i = n - 2; i >= 0; --i) s[i] = (rhs[i] - sup[i] * s[i + 1]) / diag[i];
    }
    a.assign(n - 1, T{});
    b.assign(n - 1, T{});
    c.assign(n - 1, T{});
    d.assign(n - 1, T{});
    for (int i = 0; i < n - 1; ++i) {
      a[i] = ys[i];
      b[i] = s[i];
      c[i] = (3.0 * slope[i] - 2.0 * s[i] - s[i + 1]) / h[i];
      d[i] = (s[i] + s[i + 1] - 2.0 * slope[i]) / (h[i] * h[i]);
    }
  }

  int find_piece(double xq) const {
    int i = static_cast<int>(std::upper_bound(x.begin(), x.end(), xq) - x.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(x.size()) - 2);
  }

  T eval(double xq) const {
    int i = find_piece(xq);
    double u = xq - x[i];
    return a[i] + u * (b[i] + u * (c[i] + u * d[i]));
  }

  T deriv(double xq, int k = 1) const {
    int i = find_piece(xq);
    double u = xq - x[i];
    switch (k) {
      case 0: return a[i] + u * (b[i] + u * (c[i] + u * d[i]));
      case 1: return b[i] + u * (2.0 * c[i] + 3.0 * u * d[i]);
      case 2: return 2.0 * c[i] + 6.0 * u * d[i];
      case 3: return 6.0 * d[i];
      default: return T{};
    }
  }
};

using spline = cubic_spline<double>;
using zspline = cubic_spline<std::complex<double>>;

// Bicubic interpolation of values on a tensor grid. Nodal derivatives come
// from not-a-knot splines along rows and columns, then each cell stores the
// 16 monomial coefficients of the Hermite patch. C^1 across cell edges.
struct bicubic {
  std::vector<double> xs, ys;
  int nx = 0, ny = 0;
  std::vector<std::array<double, 16>> cells;  // (m,n) -> coeff of u^m v^n

  bicubic() = default;
  // f is row-major: f[i*ny + j] = value at (xs[i], ys[j]).
  bicubic(const std::vector<double>& gx, const std::vector<double>& gy,
          const std::vector<double>& f) {
    build(gx, gy, f);
  }
  void build(const std::vector<double>& gx, const std::vector<double>& gy,
             const std::vector<double>& f);

  double eval(double xq, double yq) const { return deriv(xq, yq, 0, 0); }
  double deriv(double xq, double yq, int kx, int ky) const;
};

}  // namespace corner
