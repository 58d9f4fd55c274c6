#include "corner/trace_norm.hpp"

#include <cmath>

#include "corner/errors.hpp"
#include "corner/numerics.hpp"

namespace corner {

namespace {

// Composite weights: Simpson for odd counts, trapezoid otherwise.
std::vector<double> quad_weights(int n, double h) {
  std::vector<double> w(n, h);
  if (n % 2 == 1 && n >= 3) {
    for (int i = 0; i < n; ++i) w[i] = (i % 2 ? 4.0 : 2.0) * h / 3.0;
    w[0] = w[n - 1] = h / 3.0;
  } else {
    w[0] = w[n - 1] = 0.5 * h;
  }
  return w;
}

// True radial derivative e^{-t} df/dt on the t-grid.
std::vector<double> radial_deriv(const std::vector<double>& tg, const std::vector<double>& f) {
  auto d = fd_derivative(f, tg[1] - tg[0], 1, 4);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] *= std::exp(-tg[i]);
  return d;
}

}  // namespace

double ray_weighted_l2(const std::vector<double>& tg, const std::vector<double>& f, double p) {
  require(tg.size() == f.size() && tg.size() >= 3, "ray norm: bad sample sizes");
  double h = tg[1] - tg[0];
  std::vector<double> integrand(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    integrand[i] = std::exp((p + 1.0) * tg[i]) * f[i] * f[i];
  return (f.size() % 2 == 1) ? simpson(integrand, h) : trapezoid(integrand, h);
}

double ray_frac_seminorm(const std::vector<double>& tg, const std::vector<double>& f,
                         double p, bool symmetric) {
  require(tg.size() == f.size() && tg.size() >= 5, "frac seminorm: bad sample sizes");
  int n = static_cast<int>(tg.size());
  double h = tg[1] - tg[0];
  auto w = quad_weights(n, h);
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) r[i] = std::exp(tg[i]);

  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    double wi = symmetric ? std::pow(r[i], p / 2.0) : std::pow(r[i], p);
    for (int j = 0; j < n; ++j) {
      if (std::abs(i - j) <= 1) continue;
      double W = symmetric ? wi * std::pow(r[j], p / 2.0) : wi;
      double df = f[i] - f[j];
      s += w[i] * w[j] * W * df * df / sqr(r[i] - r[j]) * r[i] * r[j];
    }
  }
  // Midpoint estimate of the excluded band: integrand tends to |f'(r)|^2
  // there, over a rho-window of width about 3h r.
  auto fp = radial_deriv(tg, f);
  for (int i = 0; i < n; ++i)
    s += 3.0 * h * w[i] * std::pow(r[i], p) * fp[i] * fp[i] * r[i] * r[i];
  return s;
}

double trace_norm(const std::vector<double>& tg, const std::vector<double>& f, int l,
                  double beta, bool symmetric) {
  require(l >= 1, "trace_norm: order l must be >= 1");
  double h = tg[1] - tg[0];
  double s = 0.0;
  std::vector<double> fj = f;
  for (int j = 0; j <= l - 1; ++j) {
    if (j > 0) fj = fd_derivative(f, h, j, 4);  // (r d/dr)^j = d^j/dt^j
    s += ray_weighted_l2(tg, fj, 2.0 * (beta - l) + 1.0);
    s += ray_frac_seminorm(tg, fj, 2.0 * (beta - l) + 2.0, symmetric);
  }
  return std::sqrt(s);
}

double ray_sobolev_half(const std::vector<double>& tg, const std::vector<double>& f, int l) {
  require(l == 1 || l == 2, "ray_sobolev_half: l must be 1 or 2");
  double s = ray_weighted_l2(tg, f, 0.0);
  if (l == 1) {
    s += ray_frac_seminorm(tg, f, 0.0);
  } else {
    auto fp = radial_deriv(tg, f);
    s += ray_weighted_l2(tg, fp, 0.0);
    s += ray_frac_seminorm(tg, fp, 0.0);
  }
  return std::sqrt(s);
}

double wnorm_ray(const std::vector<double>& tg, const std::vector<double>& f, int l,
                 double beta) {
  require(l >= 1 && tg.size() >= 5, "wnorm_ray: bad arguments");
  int n = static_cast<int>(tg.size());
  double h = tg[1] - tg[0];
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = std::exp(beta * tg[i]) * f[i];

  auto w = quad_weights(n, h);
  double s = 0.0;
  std::vector<double> gj = g;
  for (int j = 0; j <= l - 1; ++j) {
    if (j > 0) gj = fd_derivative(g, h, j, 4);
    std::vector<double> sq(n);
    for (int i = 0; i < n; ++i) sq[i] = gj[i] * gj[i];
    s += (n % 2 == 1) ? simpson(sq, h) : trapezoid(sq, h);
  }
  // Fractional part of the top derivative, flat measure in t.
  std::vector<double> top = (l > 1) ? fd_derivative(g, h, l - 1, 4) : g;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (std::abs(i - j) <= 1) continue;
      double d = top[i] - top[j];
      s += w[i] * w[j] * d * d / sqr(tg[i] - tg[j]);
    }
  auto tp = fd_derivative(top, h, 1, 4);
  for (int i = 0; i < n; ++i) s += 3.0 * h * w[i] * tp[i] * tp[i];
  return std::sqrt(s);
}

}  // namespace corner
