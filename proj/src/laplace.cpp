#include "corner/laplace.hpp"

#include <algorithm>
#include <cmath>

#include "corner/errors.hpp"
#include "corner/numerics.hpp"
#include "corner/spline.hpp"

namespace corner {

namespace {

// Moments M_k = int_0^h s^k e^{-lambda s} ds, k = 0..3. Forward recursion
// M_k = (k M_{k-1} - h^k e^{-lambda h}) / lambda is stable for moderate
// |lambda| h; below that a short series avoids the cancellation.
void cell_moments(cplx lambda, double h, cplx M[4]) {
  double ah = std::abs(lambda) * h;
  if (ah < 0.5) {
    for (int k = 0; k < 4; ++k) {
      cplx sum = 0.0, term = 1.0;
      for (int j = 0; j < 14; ++j) {
        sum += term / double(k + j + 1);
        term *= -lambda * h / double(j + 1);
      }
      M[k] = sum * std::pow(h, k + 1);
    }
    return;
  }
  cplx eh = std::exp(-lambda * h);
  M[0] = (1.0 - eh) / lambda;
  double hk = 1.0;
  for (int k = 1; k < 4; ++k) {
    hk *= h;
    M[k] = (double(k) * M[k - 1] - hk * eh) / lambda;
  }
}

template <typename T>
std::vector<cplx> forward_impl(const std::vector<double>& tg, const std::vector<T>& w,
                               const contour& ct, double decay_tol) {
  require(tg.size() == w.size() && tg.size() >= 4, "laplace_forward: bad sample sizes");
  int n = static_cast<int>(tg.size());
  double h = tg[1] - tg[0];

  double interior = 0.0, ends = 0.0;
  for (int i = 0; i < n; ++i) {
    double m = std::abs(cplx(w[i])) * std::exp(ct.beta * tg[i]);
    interior = std::max(interior, m);
    if (i < 2 || i >= n - 2) ends = std::max(ends, m);
  }
  require(interior == 0.0 || ends <= decay_tol * interior,
          "laplace_forward: samples do not decay at the truncation ends");

  // Cubic pieces of the data; complex data splits into two real splines.
  std::vector<double> re(n), im(n);
  for (int i = 0; i < n; ++i) {
    cplx z(w[i]);
    re[i] = z.real();
    im[i] = z.imag();
  }
  cubic_spline<double> sre(tg, re);
  bool has_im = std::any_of(im.begin(), im.end(), [](double v) { return v != 0.0; });
  cubic_spline<double> sim;
  if (has_im) sim = cubic_spline<double>(tg, im);

  std::vector<cplx> out(ct.n());
  for (int k = 0; k < ct.n(); ++k) {
    cplx lambda = ct.lambda(k);
    cplx M[4];
    cell_moments(lambda, h, M);
    cplx step = std::exp(-lambda * h);
    cplx phase = std::exp(-lambda * tg[0]);
    cplx acc = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
      if (i % 64 == 0) phase = std::exp(-lambda * tg[i]);
      cplx cell = 0.0;
      cell += cplx(sre.a[i], has_im ? sim.a[i] : 0.0) * M[0];
      cell += cplx(sre.b[i], has_im ? sim.b[i] : 0.0) * M[1];
      cell += cplx(sre.c[i], has_im ? sim.c[i] : 0.0) * M[2];
      cell += cplx(sre.d[i], has_im ? sim.d[i] : 0.0) * M[3];
      acc += phase * cell;
      phase *= step;
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace

contour make_contour(double beta, double tau_max, int n_tau) {
  require(tau_max > 0.0 && n_tau >= 3 && n_tau % 2 == 1,
          "make_contour: need tau_max > 0 and an odd n_tau >= 3");
  contour ct;
  ct.beta = beta;
  ct.tau_max = tau_max;
  ct.tau = linspace(-tau_max, tau_max, n_tau);
  ct.tau[(n_tau - 1) / 2] = 0.0;
  return ct;
}

std::vector<cplx> laplace_forward(const std::vector<double>& tg, const std::vector<double>& w,
                                  const contour& ct, double decay_tol) {
  return forward_impl(tg, w, ct, decay_tol);
}

std::vector<cplx> laplace_forward_c(const std::vector<double>& tg, const std::vector<cplx>& w,
                                    const contour& ct, double decay_tol) {
  return forward_impl(tg, w, ct, decay_tol);
}

cplx laplace_at(const std::vector<double>& tg, const std::vector<double>& w, cplx lambda) {
  contour ct;
  ct.beta = -lambda.real();
  ct.tau_max = std::max(1.0, std::abs(lambda.imag()));
  ct.tau = {lambda.imag(), lambda.imag(), lambda.imag()};
  return forward_impl(tg, w, ct, 1e-6)[0];
}

std::vector<cplx> laplace_inverse_c(const contour& ct, const std::vector<cplx>& wh,
                                    const std::vector<double>& tg_out) {
  require(static_cast<int>(wh.size()) == ct.n(), "laplace_inverse: size mismatch");
  double dt = ct.dtau();
  std::vector<cplx> out(tg_out.size(), 0.0);
  for (std::size_t i = 0; i < tg_out.size(); ++i) {
    cplx acc = 0.0;
    for (int k = 0; k < ct.n(); ++k) {
      double wq = (k == 0 || k == ct.n() - 1) ? 0.5 : 1.0;
      acc += wq * std::exp(ct.lambda(k) * tg_out[i]) * wh[k];
    }
    // dlambda = i dtau along the vertical line.
    out[i] = acc * dt / (2.0 * M_PI);
  }
  return out;
}

std::vector<double> laplace_inverse(const contour& ct, const std::vector<cplx>& wh,
                                    const std::vector<double>& tg_out, double* imag_residue) {
  auto z = laplace_inverse_c(ct, wh, tg_out);
  std::vector<double> out(z.size());
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = z[i].real();
    worst = std::max(worst, std::abs(z[i].imag()));
    scale = std::max(scale, std::abs(z[i].real()));
  }
  if (imag_residue) *imag_residue = (scale > 0.0) ? worst / scale : worst;
  return out;
}

double parseval_gap(const std::vector<double>& tg, const std::vector<double>& w,
                    const contour& ct) {
  auto wh = laplace_forward(tg, w, ct);
  std::vector<double> lhs_i(w.size()), rhs_i(wh.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    lhs_i[i] = std::exp(2.0 * ct.beta * tg[i]) * w[i] * w[i];
  for (std::size_t k = 0; k < wh.size(); ++k) rhs_i[k] = std::norm(wh[k]);
  double h = tg[1] - tg[0];
  double lhs = (w.size() % 2 == 1) ? simpson(lhs_i, h) : trapezoid(lhs_i, h);
  double rhs = trapezoid(rhs_i, ct.dtau()) / (2.0 * M_PI);
  return std::abs(lhs - rhs) / std::max(lhs, rhs);
}

double conjugate_defect(const contour& ct, const std::vector<cplx>& wh) {
  double worst = 0.0, scale = 0.0;
  int n = ct.n();
  for (int k = 0; k < n; ++k) {
    scale = std::max(scale, std::abs(wh[k]));
    worst = std::max(worst, std::abs(wh[k] - std::conj(wh[n - 1 - k])));
  }
  return (scale > 0.0) ? worst / scale : 0.0;
}

void spectral_field::init_zero() {
  vals.assign(ct.n(), std::vector<cplx>(theta.size(), cplx(0.0, 0.0)));
}

double param_norm(const std::vector<double>& theta, const std::vector<cplx>& v, int l,
                  cplx lambda) {
  require(theta.size() == v.size() && theta.size() >= 5, "param_norm: bad sizes");
  int n = static_cast<int>(theta.size());
  double h = theta[1] - theta[0];
  std::vector<double> re(n), im(n);
  for (int i = 0; i < n; ++i) {
    re[i] = v[i].real();
    im[i] = v[i].imag();
  }
  auto l2sq = [&](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> sq(n);
    for (int i = 0; i < n; ++i) sq[i] = a[i] * a[i] + b[i] * b[i];
    return (n % 2 == 1) ? simpson(sq, h) : trapezoid(sq, h);
  };
  double s = 0.0;
  std::vector<double> dre = re, dim = im;
  for (int j = 0; j <= l; ++j) {
    if (j > 0) {
      dre = fd_derivative(re, h, j, 4);
      dim = fd_derivative(im, h, j, 4);
    }
    s += l2sq(dre, dim);
  }
  s += std::pow(std::abs(lambda), 2.0 * l) * l2sq(re, im);
  return std::sqrt(s);
}

double tail_ratio(const spectral_field& sf, int l) {
  double peak = 0.0, ends = 0.0;
  for (int k = 0; k < sf.ct.n(); ++k) {
    double v = param_norm(sf.theta, sf.vals[k], l, sf.ct.lambda(k));
    peak = std::max(peak, v);
    if (k == 0 || k == sf.ct.n() - 1) ends = std::max(ends, v);
  }
  return (peak > 0.0) ? ends / peak : 0.0;
}

}  // namespace corner
