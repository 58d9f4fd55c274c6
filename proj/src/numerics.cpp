#include "corner/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "corner/errors.hpp"

namespace corner {

double cinf_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  double a = std::exp(-1.0 / s), b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

double cutoff_cinf::operator()(double r) const {
  return 1.0 - cinf_step((r - r0) / (r1 - r0));
}

double cutoff_cinf::deriv(double r, int k) const {
  if (k == 0) return (*this)(r);
  require(k <= 2, "cutoff_cinf: derivative order must be <= 2");
  double L = r1 - r0, s = (r - r0) / L;
  if (s <= 0.0 || s >= 1.0) return 0.0;
  double u = 1.0 / s, v = 1.0 / (1.0 - s);
  // e^{-u} terms vanish faster than any power of u grows; zero them once the
  // exponential underflows so no 0 * inf slips through.
  double a = 0.0, ap = 0.0, app = 0.0;
  if (u < 700.0) {
    a = std::exp(-u);
    ap = a * u * u;
    app = a * u * u * u * (u - 2.0);
  }
  double b = 0.0, bp = 0.0, bpp = 0.0;
  if (v < 700.0) {
    b = std::exp(-v);
    bp = -b * v * v;
    bpp = b * v * v * v * (v - 2.0);
  }
  double g = a + b, gp = ap + bp;
  double N = ap * b - a * bp;
  if (k == 1) return -(N / (g * g)) / L;
  double Np = app * b - a * bpp;
  double xi2 = Np / (g * g) - 2.0 * N * gp / (g * g * g);
  return -xi2 / (L * L);
}

double smoothstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double smoothstep_d(double s, int k) {
  if (k == 0) return smoothstep(s);
  if (s <= 0.0 || s >= 1.0) return 0.0;
  switch (k) {
    case 1: return s * s * (30.0 + s * (-60.0 + 30.0 * s));
    case 2: return s * (60.0 + s * (-180.0 + 120.0 * s));
    case 3: return 60.0 + s * (-360.0 + 360.0 * s);
    default: fail_pre("smoothstep_d: derivative order must be 0..3");
  }
}

double cutoff1d::operator()(double r) const {
  return 1.0 - smoothstep((r - r0) / (r1 - r0));
}

double cutoff1d::deriv(double r, int k) const {
  if (k == 0) return (*this)(r);
  double w = r1 - r0;
  return -smoothstep_d((r - r0) / w, k) / std::pow(w, k);
}

std::vector<double> linspace(double a, double b, int n) {
  require(n >= 2, "linspace: need at least two points");
  std::vector<double> x(n);
  double h = (b - a) / (n - 1);
  for (int i = 0; i < n; ++i) x[i] = a + h * i;
  x.back() = b;
  return x;
}

double trapezoid(const std::vector<double>& f, double h) {
  require(f.size() >= 2, "trapezoid: need at least two samples");
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * h;
}

double simpson(const std::vector<double>& f, double h) {
  std::size_t n = f.size();
  require(n >= 3 && n % 2 == 1, "simpson: need an odd sample count >= 3");
  double s = f.front() + f.back();
  for (std::size_t i = 1; i + 1 < n; ++i) s += f[i] * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  require(n >= 1, "gauss_legendre: need n >= 1");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

double gl_integrate(const std::function<double(double)>& f, double a, double b, int n) {
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += w[i] * f(mid + half * x[i]);
  return s * half;
}

std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int k) {
  // Fornberg's algorithm for weights of the k-th derivative at x0. The new
  // row has to be formed from the previous row before the inner loop rewrites
  // it, so the two updates are interleaved exactly as in the recursion.
  int n = static_cast<int>(nodes.size());
  require(k < n, "fd_weights: need more nodes than the derivative order");
  std::vector<std::vector<double>> c(n, std::vector<double>(k + 1, 0.0));
  c[0][0] = 1.0;
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  for (int i = 1; i < n; ++i) {
    int mn = std::min(i, k);
    double c2 = 1.0;
    double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int m = mn; m >= 1; --m)
          c[i][m] = c1 * (m * c[i - 1][m - 1] - c5 * c[i - 1][m]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int m = mn; m >= 1; --m) c[j][m] = (c4 * c[j][m] - m * c[j][m - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][k];
  return w;
}

std::vector<double> fd_derivative(const std::vector<double>& f, double h, int k, int order) {
  int n = static_cast<int>(f.size());
  require(order == 2 || order == 4, "fd_derivative: order must be 2 or 4");
  int width = k + order;            // stencil size giving the requested order
  if ((width - k) % 2 != 0) ++width;
  require(n >= width, "fd_derivative: grid too small for stencil");
  std::vector<double> out(n, 0.0);
  std::vector<double> nodes(width);
  for (int i = 0; i < n; ++i) {
    // Center the stencil where possible, clamp at the ends.
    int start = std::clamp(i - width / 2, 0, n - width);
    for (int j = 0; j < width; ++j) nodes[j] = (start + j - i) * h;
    auto w = fd_weights(0.0, nodes, k);
    double s = 0.0;
    for (int j = 0; j < width; ++j) s += w[j] * f[start + j];
    out[i] = s;
  }
  return out;
}

double newton_bisect(const std::function<double(double)>& f,
                     const std::function<double(double)>& df,
                     double a, double b, double tol) {
  double fa = f(a), fb = f(b);
  require(fa == 0.0 || fb == 0.0 || (fa < 0) != (fb < 0),
          "newton_bisect: endpoints do not bracket a root");
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  double x = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    double fx = f(x), dfx = df(x);
    double step = (dfx != 0.0) ? fx / dfx : 2.0 * (b - a);
    double xn = x - step;
    if (!(xn > a && xn < b)) {
      // Newton left the bracket; bisect instead.
      if ((fx < 0) == (fa < 0)) { a = x; fa = fx; } else { b = x; fb = fx; }
      xn = 0.5 * (a + b);
      step = xn - x;
    } else {
      if ((fx < 0) == (fa < 0)) { a = x; fa = fx; } else { b = x; fb = fx; }
    }
    x = xn;
    if (std::abs(step) < tol) return x;
  }
  return x;
}

}  // namespace corner
