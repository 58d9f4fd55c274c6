#include "corner/singular_fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "corner/csv.hpp"
#include "corner/errors.hpp"
#include "corner/numerics.hpp"
#include "corner/wedge_solver.hpp"

namespace corner {

namespace {

constexpr int kAnnuli = 6;   // dyadic annuli k = 1..6 below delta
constexpr double kLn2 = 0.6931471805599453;

struct mode_fit {
  int idx = 0;
  double lambda_hat = 0.0, c_hat = 0.0;
  double r_lo = 0.0, r_hi = 0.0;
  bool monotone = true;
  int informative = 0;
  double peak = 0.0;  // largest annulus RMS, for the significance filter
};

// Least squares line y = s x + b.
void fit_line(const std::vector<double>& x, const std::vector<double>& y, double& s,
              double& b) {
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double det = n * sxx - sx * sx;
  s = (n * sxy - sx * sy) / det;
  b = (sxx * sy - sx * sxy) / det;
}

}  // namespace

singular_decomposition fit_singular_exponents(const grid_function& v,
                                              const eigen_system& sys, int n_terms,
                                              double delta) {
  require(v.chart == "cone", "fit_singular_exponents: expects a cone-chart sample");
  require(n_terms >= 1, "fit_singular_exponents: n_terms must be >= 1");
  require(delta > 0.0, "fit_singular_exponents: delta must be positive");

  double t_hi = std::log(delta) - kLn2;              // outer edge of annulus k = 1
  double t_lo = std::log(delta) - (kAnnuli + 1) * kLn2;
  require(v.x1.front() <= t_lo + 1e-12 && v.x1.back() >= t_hi - 1e-12,
          "fit_singular_exponents: sample does not cover the 6 dyadic fit annuli");

  // Rows inside the fit window, tagged with their annulus.
  std::vector<int> rows;
  std::vector<int> annulus_of;
  for (int i = 0; i < v.n1(); ++i) {
    double t = v.x1[i];
    if (t < t_lo - 1e-12 || t > t_hi + 1e-12) continue;
    int k = 1 + static_cast<int>(std::floor((t_hi - t) / kLn2 - 1e-12));
    k = std::min(std::max(k, 1), kAnnuli);
    rows.push_back(i);
    annulus_of.push_back(k);
  }
  require(static_cast<int>(rows.size()) >= 2 * kAnnuli,
          "fit_singular_exponents: fewer than 2 grid rows per dyadic annulus");

  singular_decomposition out;
  double vmax = 0.0;
  for (int i : rows)
    for (int j = 0; j < v.n2(); ++j) vmax = std::max(vmax, std::fabs(v.at(i, j)));
  if (vmax == 0.0) return out;  // identically zero sample: nothing to fit
  double floor = 1e-12 * vmax;

  // Angular projections p_m(r) = <v(r,.), phi_m> / <phi_m, phi_m> by
  // trapezoid on the grid's theta nodes.
  int nth = v.n2();
  double hth = v.h2();
  std::vector<mode_fit> fits;
  for (int idx = 0; idx < static_cast<int>(sys.entries.size()); ++idx) {
    if (sys.entries[idx].lambda < -1e-12) continue;  // corner-growing modes are not fit
    std::vector<double> phi(nth);
    double phi2 = 0.0;
    for (int j = 0; j < nth; ++j) {
      phi[j] = sys.eigenfunction(idx, v.x2[j]);
      double cw = (j == 0 || j == nth - 1) ? 0.5 : 1.0;
      phi2 += cw * phi[j] * phi[j] * hth;
    }
    std::vector<double> proj(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      double acc = 0.0;
      for (int j = 0; j < nth; ++j) {
        double cw = (j == 0 || j == nth - 1) ? 0.5 : 1.0;
        acc += cw * v.at(rows[r], j) * phi[j] * hth;
      }
      proj[r] = acc / phi2;
    }

    // Per-annulus RMS magnitude, for the informative count and the
    // monotonicity check.
    std::vector<double> mag(kAnnuli + 1, 0.0);
    std::vector<int> cnt(kAnnuli + 1, 0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      mag[annulus_of[r]] += proj[r] * proj[r];
      cnt[annulus_of[r]]++;
    }
    mode_fit mf;
    mf.idx = idx;
    std::vector<bool> informative(kAnnuli + 1, false);
    for (int k = 1; k <= kAnnuli; ++k) {
      mag[k] = std::sqrt(mag[k] / std::max(cnt[k], 1));
      mf.peak = std::max(mf.peak, mag[k]);
      if (mag[k] > floor) {
        informative[k] = true;
        mf.informative++;
      }
    }
    if (mf.informative < 3) continue;  // not enough signal for a slope

    // Regress over the 3 innermost informative annuli: contamination from
    // the next power decays toward the corner, so the slope and intercept
    // read off the leading term there.
    std::vector<bool> in_fit(kAnnuli + 1, false);
    for (int k = kAnnuli, kept = 0; k >= 1 && kept < 3; --k)
      if (informative[k]) {
        in_fit[k] = true;
        kept++;
      }

    std::vector<double> lx, ly;
    double r_lo = 1e300, r_hi = -1e300, outer_sign = 0.0, outer_t = -1e300;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!in_fit[annulus_of[r]]) continue;
      if (std::fabs(proj[r]) <= floor) continue;
      double t = v.x1[rows[r]];
      lx.push_back(t);
      ly.push_back(std::log(std::fabs(proj[r])));
      r_lo = std::min(r_lo, std::exp(t));
      r_hi = std::max(r_hi, std::exp(t));
      if (t > outer_t) {
        outer_t = t;
        outer_sign = proj[r] > 0.0 ? 1.0 : -1.0;
      }
    }
    if (lx.size() < 4) continue;
    double slope, intercept;
    fit_line(lx, ly, slope, intercept);
    mf.lambda_hat = slope;
    mf.c_hat = outer_sign * std::exp(intercept);
    mf.r_lo = r_lo;
    mf.r_hi = r_hi;

    // When the slope lands on this mode's own lattice eigenvalue, read the
    // coefficient against the exact exponent on the innermost informative
    // annulus. The regression intercept extrapolates to r = 1 through the
    // slope, so any slope bias from a contaminating higher power gets
    // amplified by |ln r| there; the lattice exponent removes that lever.
    double lam_lat = sys.entries[idx].lambda;
    if (std::fabs(slope - lam_lat) < 0.08) {
      int k_in = 0;
      for (int k = kAnnuli; k >= 1; --k)
        if (informative[k]) {
          k_in = k;
          break;
        }
      double acc = 0.0;
      int cnt_in = 0;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (annulus_of[r] != k_in || std::fabs(proj[r]) <= floor) continue;
        acc += std::log(std::fabs(proj[r])) - lam_lat * v.x1[rows[r]];
        cnt_in++;
      }
      if (cnt_in > 0) mf.c_hat = outer_sign * std::exp(acc / cnt_in);
    }

    // A genuine power law has magnitudes ordered by the slope sign across
    // the annuli; allow 1.5x slack per dyadic step for contamination.
    for (int k = 1; k < kAnnuli; ++k) {
      if (!informative[k] || !informative[k + 1]) continue;
      if (slope >= 0.0 && mag[k + 1] > 1.5 * mag[k]) mf.monotone = false;
      if (slope < 0.0 && mag[k + 1] < mag[k] / 1.5) mf.monotone = false;
    }
    fits.push_back(mf);
  }

  if (fits.empty())
    fail_solver("fit_singular_exponents: no mode clears the noise floor on 3 annuli");

  // Projections that barely clear the floor regress to random small slopes
  // that would crowd out real terms in the exponent ordering; keep only
  // modes within 1e-6 of the strongest one.
  double peak = 0.0;
  for (const mode_fit& mf : fits) peak = std::max(peak, mf.peak);
  std::erase_if(fits, [&](const mode_fit& mf) { return mf.peak < 1e-6 * peak; });

  std::sort(fits.begin(), fits.end(), [](const mode_fit& a, const mode_fit& b) {
    if (std::fabs(a.lambda_hat - b.lambda_hat) > 1e-9) return a.lambda_hat < b.lambda_hat;
    return std::fabs(a.c_hat) > std::fabs(b.c_hat);
  });
  if (static_cast<int>(fits.size()) > n_terms) fits.resize(n_terms);

  for (const mode_fit& mf : fits) {
    singular_term st;
    st.m = sys.entries[mf.idx].m;
    st.lambda_hat = mf.lambda_hat;
    st.c_hat = mf.c_hat;
    st.fit_r_lo = mf.r_lo;
    st.fit_r_hi = mf.r_hi;
    st.monotone = mf.monotone;
    if (!mf.monotone) out.unstable = true;
    out.terms.push_back(st);
  }

  // Remainder over the fit window after subtracting the fitted terms,
  // measured in L2 with the physical r dr dtheta area element.
  double acc = 0.0;
  double ht = v.h1();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    int i = rows[r];
    double t = v.x1[i];
    double rr = std::exp(t);
    double cwt = (r == 0 || r + 1 == rows.size()) ? 0.5 : 1.0;
    for (int j = 0; j < nth; ++j) {
      double fitval = 0.0;
      for (std::size_t q = 0; q < fits.size(); ++q)
        fitval += out.terms[q].c_hat * std::pow(rr, out.terms[q].lambda_hat) *
                  sys.eigenfunction(fits[q].idx, v.x2[j]);
      double e = v.at(i, j) - fitval;
      double cw = (j == 0 || j == nth - 1) ? 0.5 : 1.0;
      acc += cwt * cw * e * e * std::exp(2.0 * t) * ht * hth;
    }
  }
  out.remainder_norm = std::sqrt(acc);
  return out;
}

grid_function singular_function(const eigen_system& sys, int idx, double r_half,
                                double r_one, const grid_function& like) {
  auto mode = singular_mode(sys, idx, r_half, r_one);
  grid_function g = like.same_shape();
  if (g.chart == "cone")
    g.fill([&](double t, double th) { return mode(std::exp(t), th); });
  else
    g.fill(mode);
  return g;
}

std::string singular_csv(const singular_decomposition& d) {
  csv_writer w({"m", "lambda_hat", "c_hat", "fit_r_lo", "fit_r_hi", "remainder_norm"});
  for (const singular_term& t : d.terms)
    w.add_row({static_cast<double>(t.m), t.lambda_hat, t.c_hat, t.fit_r_lo, t.fit_r_hi,
               d.remainder_norm});
  return w.str();
}

}  // namespace corner
