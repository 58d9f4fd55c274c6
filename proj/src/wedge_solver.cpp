#include "corner/wedge_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <thread>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "corner/errors.hpp"
#include "corner/numerics.hpp"
#include "corner/pencil.hpp"
#include "corner/spline.hpp"

namespace corner {

namespace {

constexpr double kPi = 3.14159265358979323846;
// t-period of the discrete contour; its images sit this far outside the work
// window, beyond the decay margins enforced on the data.
constexpr double kPeriod = 32.0;

std::vector<cplx> row_deriv(const std::vector<cplx>& v, double h, int k) {
  int n = static_cast<int>(v.size());
  std::vector<double> re(n), im(n);
  for (int i = 0; i < n; ++i) {
    re[i] = v[i].real();
    im[i] = v[i].imag();
  }
  auto dre = fd_derivative(re, h, k, 4);
  auto dim = fd_derivative(im, h, k, 4);
  std::vector<cplx> out(n);
  for (int i = 0; i < n; ++i) out[i] = {dre[i], dim[i]};
  return out;
}

// Runs fn(k) for k in [lo, hi] on a small pool. Each k writes only its own
// slot, so the result does not depend on the sharding.
template <class Fn>
void for_bins(int lo, int hi, int workers, Fn&& fn) {
  int n = hi - lo + 1;
  if (n <= 0) return;
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int k = lo; k <= hi; ++k) fn(k);
    return;
  }
  std::vector<std::future<void>> fut;
  int chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    int a = lo + w * chunk, b = std::min(hi, a + chunk - 1);
    if (a > b) break;
    fut.push_back(std::async(std::launch::async, [a, b, &fn]() {
      for (int k = a; k <= b; ++k) fn(k);
    }));
  }
  for (auto& f : fut) f.get();
}

}  // namespace

wedge_solution solve_wedge(const eigen_system& sys, const wedge_data& d, double beta,
                           const wedge_options& opt) {
  double span = opt.t_max - opt.t_min;
  require(span >= 4.0 && span <= kPeriod - 4.0,
          "solve_wedge: t window must span between 4 and 28");
  require(opt.n_t >= 16 && opt.n_theta >= 16, "solve_wedge: output grid too small");
  require(opt.tau_start >= opt.tau_switch + 1.0 && opt.tau_cap >= opt.tau_start,
          "solve_wedge: contour parameters out of order");

  // The integration line has to stay clear of the pencil spectrum.
  double line_dist = nearest_eigen_distance(sys, cplx(-beta, 0.0));
  if (line_dist < 1e-6) {
    double best = 1e300;
    eigen_entry who{};
    for (const auto& e : sys.entries)
      if (std::abs(e.lambda + beta) < best) {
        best = std::abs(e.lambda + beta);
        who = e;
      }
    char msg[200];
    std::snprintf(msg, sizeof(msg),
                  "solve_wedge: line Re lambda = %.6g passes within %.3e of pencil "
                  "eigenvalue %.12g (m = %d)",
                  -beta, line_dist, who.lambda, who.m);
    fail_pre(msg);
  }

  double dtau = 2.0 * kPi / kPeriod;
  int n_pad = 4096;
  while (static_cast<double>(n_pad) < kPeriod * opt.tau_cap / kPi) n_pad <<= 1;
  double hs = kPeriod / n_pad;
  int K_cap = std::min(static_cast<int>(std::floor(opt.tau_cap / dtau)), n_pad / 2 - 1);
  int K_sw = std::min(static_cast<int>(std::floor(opt.tau_switch / dtau)), K_cap);
  int K0 = std::min(K_cap, std::max(K_sw + 1, static_cast<int>(std::ceil(opt.tau_start / dtau))));
  int n_data = static_cast<int>(std::floor(span / hs)) + 1;
  int n_bins = 2 * K_cap + 1;

  int n_th = opt.n_theta + 1;
  std::vector<double> theta = linspace(-sys.omega2, sys.omega1, n_th);
  double h_th = theta[1] - theta[0];

  bool top_flux = (sys.bc_pair == "neumann");
  bool bottom_value = (sys.bc_pair == "dirichlet");
  bool has_src = static_cast<bool>(d.h);

  // Axial transforms of every data row at the contour bins tau_k = k dtau.
  // The sampling step is far below the Nyquist length of the largest bin, so
  // the plain FFT sum carries no visible aliasing; tau = 0 is bin k = 0.
  Eigen::FFT<double> fft;
  std::vector<cplx> buf(n_pad), spec(n_pad);
  auto bin_transforms = [&](const std::vector<double>& q) {
    std::fill(buf.begin(), buf.end(), cplx(0.0, 0.0));
    for (int j = 0; j < n_data; ++j) buf[j] = q[j];
    fft.fwd(spec, buf);
    std::vector<cplx> out(n_bins);
    for (int k = -K_cap; k <= K_cap; ++k) {
      int m = k >= 0 ? k : n_pad + k;
      double tau = k * dtau;
      out[k + K_cap] = hs * std::exp(cplx(0.0, -tau * opt.t_min)) * spec[m];
    }
    return out;
  };
  auto check_decay = [&](const std::vector<double>& q, const char* label) {
    double interior = 0.0, ends = 0.0;
    for (int j = 0; j < n_data; ++j) {
      double m = std::fabs(q[j]);
      interior = std::max(interior, m);
      if (j < 2 || j >= n_data - 2) ends = std::max(ends, m);
    }
    if (interior > 0.0 && ends > opt.decay_tol * interior) {
      char msg[160];
      std::snprintf(msg, sizeof(msg),
                    "solve_wedge: %s does not vanish at the ends of the t window", label);
      fail_pre(msg);
    }
  };
  double t_supp = 1e300;  // lower edge of the union of the data supports
  auto note_support = [&](const std::vector<double>& q) {
    double rowmax = 0.0;
    for (double v : q) rowmax = std::max(rowmax, std::fabs(v));
    if (rowmax == 0.0) return;
    for (int i = 0; i < n_data; ++i)
      if (std::fabs(q[i]) > 1e-12 * rowmax) {
        t_supp = std::min(t_supp, opt.t_min + i * hs);
        return;
      }
  };
  auto sample_ray = [&](const std::function<double(double)>& f, bool flux) {
    std::vector<double> q(n_data, 0.0);
    if (!f) return q;
    for (int j = 0; j < n_data; ++j) {
      double t = opt.t_min + j * hs, r = std::exp(t);
      q[j] = std::exp(beta * t) * (flux ? r : 1.0) * f(r);
    }
    return q;
  };

  std::vector<cplx> aT, bT;
  {
    auto q = sample_ray(d.f, top_flux);
    check_decay(q, "top datum");
    note_support(q);
    aT = bin_transforms(q);
  }
  {
    auto q = sample_ray(d.g, !bottom_value);
    check_decay(q, "bottom datum");
    note_support(q);
    bT = bin_transforms(q);
  }
  std::vector<std::vector<cplx>> srcT;
  if (has_src) {
    srcT.assign(n_bins, std::vector<cplx>(n_th, cplx(0.0, 0.0)));
    std::vector<double> q(n_data);
    for (int j = 0; j < n_th; ++j) {
      for (int i = 0; i < n_data; ++i) {
        double t = opt.t_min + i * hs;
        q[i] = std::exp((beta + 2.0) * t) * d.h(std::exp(t), theta[j]);
      }
      check_decay(q, "volume datum");
      note_support(q);
      auto col = bin_transforms(q);
      for (int kk = 0; kk < n_bins; ++kk) srcT[kk][j] = col[kk];
    }
  }

  // Angular solve per bin: closed-form resolvent with the quadrature
  // particular part at moderate tau; beyond tau_switch the resolvent is
  // boundary-layer dominated and the 1/lambda^2 series plus an exact lift of
  // the leftover boundary defect is both cheaper and free of quadrature
  // noise that the l = 2 tail weights would amplify.
  std::vector<std::vector<cplx>> rows(n_bins);
  auto solve_bin = [&](int k) {
    int kk = k + K_cap;
    cplx lam(-beta, k * dtau);
    if (std::abs(k) <= K_sw) {
      pencil_rhs rhs;
      rhs.a = aT[kk];
      rhs.b = bT[kk];
      if (has_src) {
        zspline Fsp(theta, srcT[kk]);
        rhs.F = [Fsp](double th) { return Fsp.eval(th); };
      }
      rows[kk] = solve_pencil(lam, rhs, sys, theta);
      return;
    }
    std::vector<cplx> wrow(n_th, cplx(0.0, 0.0));
    cplx adef = aT[kk], bdef = bT[kk];
    if (has_src) {
      const auto& F = srcT[kk];
      auto F2 = row_deriv(F, h_th, 2);
      auto F4 = row_deriv(F2, h_th, 2);
      cplx il2 = 1.0 / (lam * lam);
      for (int j = 0; j < n_th; ++j)
        wrow[j] = il2 * (F[j] - il2 * (F2[j] - il2 * F4[j]));
      auto w1 = row_deriv(wrow, h_th, 1);
      if (top_flux)
        adef -= w1[n_th - 1];
      else
        adef -= wrow[n_th - 1];
      if (bottom_value)
        bdef -= wrow[0];
      else
        bdef += w1[0];
    }
    auto hom = pencil_homogeneous(lam, adef, bdef, sys, theta);
    for (int j = 0; j < n_th; ++j) wrow[j] += hom[j];
    rows[kk] = std::move(wrow);
  };

  int K_cur = K0;
  for_bins(-K_cur, K_cur, opt.parallel, solve_bin);
  double tail = 0.0;
  while (true) {
    spectral_field sf;
    sf.ct = make_contour(beta, K_cur * dtau, 2 * K_cur + 1);
    sf.theta = theta;
    sf.vals.assign(sf.ct.n(), {});
    for (int k = -K_cur; k <= K_cur; ++k) sf.vals[k + K_cur] = rows[k + K_cap];
    tail = tail_ratio(sf, 2);
    if (tail <= opt.tail_tol || K_cur >= K_cap) break;
    int K_new = std::min(K_cap, 2 * K_cur);
    for_bins(K_cur + 1, K_new, opt.parallel, solve_bin);
    for_bins(-K_new, -K_cur - 1, opt.parallel, solve_bin);
    K_cur = K_new;
  }

  // Trapezoid inversion, one phase recursion per output t with periodic
  // renormalization so the rotation never drifts.
  grid_function w =
      make_cone_grid(opt.t_min, opt.t_max, opt.n_t + 1, sys.omega1, sys.omega2, n_th);
  double scale = dtau / (2.0 * kPi);
  int K = K_cur;
  std::vector<double> col_re(n_th, 0.0), col_im(n_th, 0.0);
  auto invert_col = [&](int j) {
    for (int i = 0; i < w.n1(); ++i) {
      double t = w.x1[i];
      cplx step = std::exp(cplx(0.0, dtau * t));
      cplx ph = 1.0;
      cplx acc = 0.0;
      for (int kidx = 0; kidx <= 2 * K; ++kidx) {
        if (kidx % 256 == 0) ph = std::exp(cplx(0.0, (kidx - K) * dtau * t));
        double cw = (kidx == 0 || kidx == 2 * K) ? 0.5 : 1.0;
        acc += cw * rows[kidx - K + K_cap][j] * ph;
        ph *= step;
      }
      cplx val = std::exp(-beta * t) * scale * acc;
      w.at(i, j) = val.real();
      col_re[j] = std::max(col_re[j], std::fabs(val.real()));
      col_im[j] = std::max(col_im[j], std::fabs(val.imag()));
    }
  };
  for_bins(0, n_th - 1, opt.parallel, invert_col);
  double max_re = 0.0, max_im = 0.0;
  for (int j = 0; j < n_th; ++j) {
    max_re = std::max(max_re, col_re[j]);
    max_im = std::max(max_im, col_im[j]);
  }

  wedge_solution out;
  out.beta = beta;
  out.tau_max = K_cur * dtau;
  out.n_tau = 2 * K_cur + 1;
  out.tail = tail;
  out.imag_residue = (max_re > 0.0) ? max_im / max_re : 0.0;

  // Mode continuation under the data support. There the field is exactly
  // sum c_m e^{lambda_m t} phi_m over the eigenvalues right of the line, so
  // fit those on a band just under the support and continue them downward;
  // the raw rows there only hold trapezoid cancellation noise times
  // e^{-beta t}, which the low-beta weighted norms would amplify.
  if (t_supp < 1e299 && t_supp - opt.t_min >= 4.0 && max_re > 0.0) {
    double band_hi = t_supp - 0.5;
    double band_lo = std::max(t_supp - 2.5, opt.t_min + 0.5);
    std::vector<int> bi;
    for (int i = 0; i < w.n1(); ++i)
      if (w.x1[i] >= band_lo - 1e-12 && w.x1[i] <= band_hi + 1e-12) bi.push_back(i);
    std::vector<int> midx;
    for (int i = 0; i < static_cast<int>(sys.entries.size()); ++i) {
      double lam = sys.entries[i].lambda;
      if (lam > -beta + 1e-9 && lam <= 40.0) midx.push_back(i);
    }
    if (bi.size() >= 6 && !midx.empty()) {
      int nb = static_cast<int>(bi.size()), nm = static_cast<int>(midx.size());
      int npts = nb * n_th;
      Eigen::MatrixXd M(npts, nm);
      Eigen::VectorXd rhsv(npts), colmax(nm);
      double band_scale = 0.0;
      for (int a = 0; a < nb; ++a)
        for (int j = 0; j < n_th; ++j) {
          double v = w.at(bi[a], j);
          rhsv[a * n_th + j] = v;
          band_scale = std::max(band_scale, std::fabs(v));
        }
      for (int c = 0; c < nm; ++c) {
        double lam = sys.entries[midx[c]].lambda;
        double cm = 0.0;
        for (int a = 0; a < nb; ++a) {
          double et = std::exp(lam * w.x1[bi[a]]);
          for (int j = 0; j < n_th; ++j) {
            double v = et * sys.eigenfunction(midx[c], w.x2[j]);
            M(a * n_th + j, c) = v;
            cm = std::max(cm, std::fabs(v));
          }
        }
        colmax[c] = std::max(cm, 1e-300);
        M.col(c) /= colmax[c];
      }
      if (band_scale > 0.0) {
        Eigen::VectorXd cs = M.colPivHouseholderQr().solve(rhsv);
        out.modes_used = nm;
        out.mode_fit_residual =
            (M * cs - rhsv).cwiseAbs().maxCoeff() / band_scale;
        // A mode growing toward the corner whose band weight is at the fit
        // noise level is not evidence of an actual r^lambda component, and
        // continuing it would blow the noise up by e^{|lambda| span}.
        for (int c = 0; c < nm; ++c)
          if (sys.entries[midx[c]].lambda < 0.0 &&
              std::fabs(cs[c]) < 10.0 * out.mode_fit_residual * band_scale)
            cs[c] = 0.0;
        for (int c = 0; c < nm; ++c) cs[c] /= colmax[c];
        for (int i = 0; i < w.n1(); ++i) {
          if (w.x1[i] >= band_lo - 1e-12) continue;
          for (int j = 0; j < n_th; ++j) {
            double acc = 0.0;
            for (int c = 0; c < nm; ++c)
              acc += cs[c] * std::exp(sys.entries[midx[c]].lambda * w.x1[i]) *
                     sys.eigenfunction(midx[c], w.x2[j]);
            w.at(i, j) = acc;
          }
        }
      }
    }
  }

  out.w = std::move(w);
  return out;
}

contour_shift shift_contour(const eigen_system& sys, const wedge_data& d, double beta_from,
                            double beta_to, const wedge_options& opt, double t_window_lo,
                            double t_window_hi) {
  contour_shift cs;
  cs.from = solve_wedge(sys, d, beta_from, opt);
  cs.to = solve_wedge(sys, d, beta_to, opt);

  std::vector<int> cidx;
  double lo = std::min(-beta_from, -beta_to), hi = std::max(-beta_from, -beta_to);
  for (int i = 0; i < static_cast<int>(sys.entries.size()); ++i) {
    double lam = sys.entries[i].lambda;
    if (lam > lo + 1e-12 && lam < hi - 1e-12) {
      cs.crossed.push_back(sys.entries[i]);
      cidx.push_back(i);
    }
  }

  const grid_function& A = cs.from.w;
  const grid_function& B = cs.to.w;
  std::vector<int> ti;
  for (int i = 0; i < A.n1(); ++i)
    if (A.x1[i] >= t_window_lo - 1e-12 && A.x1[i] <= t_window_hi + 1e-12) ti.push_back(i);
  require(ti.size() >= 4, "shift_contour: t window holds too few grid lines");

  int nth = A.n2();
  int npts = static_cast<int>(ti.size()) * nth;
  Eigen::VectorXd diff(npts);
  for (int a = 0; a < static_cast<int>(ti.size()); ++a)
    for (int j = 0; j < nth; ++j)
      diff[a * nth + j] = A.at(ti[a], j) - B.at(ti[a], j);
  double sup_raw = diff.cwiseAbs().maxCoeff();

  if (cidx.empty()) {
    cs.sup_diff = sup_raw;
    return cs;
  }

  // The crossed eigenvalues contribute power modes; fit their residues over
  // the window and report what is left.
  int ncr = static_cast<int>(cidx.size());
  Eigen::MatrixXd M(npts, ncr);
  for (int c = 0; c < ncr; ++c) {
    double lam = sys.entries[cidx[c]].lambda;
    for (int a = 0; a < static_cast<int>(ti.size()); ++a) {
      double et = std::exp(lam * A.x1[ti[a]]);
      for (int j = 0; j < nth; ++j)
        M(a * nth + j, c) = et * sys.eigenfunction(cidx[c], A.x2[j]);
    }
  }
  Eigen::VectorXd c = M.colPivHouseholderQr().solve(diff);
  cs.residues.assign(c.data(), c.data() + ncr);
  cs.sup_diff = (M * c - diff).cwiseAbs().maxCoeff();
  cs.fit_rel_residual = cs.sup_diff / std::max(sup_raw, 1e-300);
  return cs;
}

std::function<double(double, double)> singular_mode(const eigen_system& sys, int idx,
                                                    double r_half, double r_one) {
  require(idx >= 0 && idx < static_cast<int>(sys.entries.size()), "singular_mode: bad index");
  require(0.0 < r_half && r_half < r_one, "singular_mode: bad cutoff radii");
  double lam = sys.entries[idx].lambda;
  cutoff_cinf cut{r_half, r_one};
  eigen_system s = sys;
  return [s, idx, lam, cut](double r, double th) {
    double c = cut(r);
    return c > 0.0 ? std::pow(r, lam) * s.eigenfunction(idx, th) * c : 0.0;
  };
}

}  // namespace corner
