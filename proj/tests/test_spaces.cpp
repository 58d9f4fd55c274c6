#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "corner/errors.hpp"
#include "corner/grid_function.hpp"
#include "corner/numerics.hpp"
#include "corner/rng.hpp"
#include "corner/trace_norm.hpp"
#include "corner/weighted_norms.hpp"

using namespace corner;

namespace {

std::vector<double> tgrid(double a, double b, int n) { return linspace(a, b, n); }

// Gaussian bump in log-polar coordinates, decayed well inside the grid box.
struct bump2d {
  double a, t0, wt, th0, wth;
  double operator()(double t, double th) const {
    return a * std::exp(-sqr((t - t0) / wt) - sqr((th - th0) / wth));
  }
};

bump2d random_bump(lcg& rng, double t_lo, double t_hi, double th_lo, double th_hi) {
  bump2d b;
  b.a = rng.uniform(0.5, 2.0);
  b.t0 = rng.uniform(t_lo + 1.5, t_hi - 1.5);
  b.wt = rng.uniform(0.35, 0.7);
  double margin = 0.3 * (th_hi - th_lo);
  b.th0 = rng.uniform(th_lo + margin, th_hi - margin);
  b.wth = rng.uniform(0.15, 0.22) * (th_hi - th_lo);
  return b;
}

// Reference value for the restricted-square fractional seminorm
//   int_a^b int_a^b W(r, rho) |f(r)-f(rho)|^2 / (r-rho)^2 drho dr.
// The integrand is bounded (difference quotients of a smooth function), and
// distinct tensor Gauss-Legendre nodes never collide with the diagonal, so
// panel quadrature converges fast without any band surgery.
double frac_reference(double a, double b, const std::vector<double>& cuts,
                      const std::function<double(double)>& f,
                      const std::function<double(double)>& fp,
                      const std::function<double(double, double)>& W) {
  std::vector<double> xg, wg;
  gauss_legendre(48, xg, wg);
  std::vector<double> edges{a};
  for (double c : cuts) edges.push_back(c);
  edges.push_back(b);

  double total = 0.0;
  for (std::size_t pi = 0; pi + 1 < edges.size(); ++pi) {
    for (std::size_t pj = 0; pj + 1 < edges.size(); ++pj) {
      double am = 0.5 * (edges[pi + 1] - edges[pi]), am0 = 0.5 * (edges[pi + 1] + edges[pi]);
      double bm = 0.5 * (edges[pj + 1] - edges[pj]), bm0 = 0.5 * (edges[pj + 1] + edges[pj]);
      for (int i = 0; i < 48; ++i) {
        double r = am0 + am * xg[i];
        for (int j = 0; j < 48; ++j) {
          double rho = bm0 + bm * xg[j];
          // Coincident tensor nodes on the diagonal take the limit value f'.
          double q = (r == rho) ? fp(r) : (f(r) - f(rho)) / (r - rho);
          total += am * bm * wg[i] * wg[j] * W(r, rho) * q * q;
        }
      }
    }
  }
  return total;
}

}  // namespace

TEST_CASE("stencils and quadrature building blocks") {
  std::vector<double> nodes{-1.0, 0.0, 1.0};
  auto w = fd_weights(0.0, nodes, 1);
  CHECK(w[0] == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(w[2] == doctest::Approx(0.5).epsilon(1e-14));

  int n = 401;
  auto xs = tgrid(0.0, 2.0 * M_PI, n);
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) f[i] = std::sin(xs[i]);
  auto d = fd_derivative(f, xs[1] - xs[0], 1, 4);
  double err = 0.0;
  for (int i = 0; i < n; ++i) err = std::max(err, std::abs(d[i] - std::cos(xs[i])));
  CHECK(err < 1e-7);

  CHECK(gl_integrate([](double x) { return std::pow(x, 20.0); }, 0.0, 1.0, 16) ==
        doctest::Approx(1.0 / 21.0).epsilon(1e-14));
  std::vector<double> e(201);
  auto tg = tgrid(0.0, 1.0, 201);
  for (int i = 0; i < 201; ++i) e[i] = std::exp(tg[i]);
  CHECK(simpson(e, tg[1] - tg[0]) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-10));
}

TEST_CASE("weighted cone norm of the radial coordinate") {
  // On the sector of opening pi/3 truncated at r = 1, the squared L2 norm of
  // f = r is the area moment int r^2 dX = pi/12; the tail below the grid
  // floor is e^{-24}/4 per unit angle.
  double om = M_PI / 3.0;
  auto g = make_cone_grid(-6.0, 0.0, 601, om, 0.0, 41);
  g.fill([](double t, double) { return std::exp(t); });
  double v0 = vnorm_cone(g, 0, 0.0);
  CHECK(v0 * v0 == doctest::Approx(M_PI / 12.0).epsilon(1e-6));
  // One more radial weight: int r^2 * r^2 dX = omega / 6.
  double v1 = vnorm_cone(g, 0, 1.0);
  CHECK(v1 * v1 == doctest::Approx(om / 6.0).epsilon(1e-6));

  grid_function g2 = g;
  for (double& x : g2.v) x *= 2.0;
  CHECK(vnorm_cone(g2, 0, 0.0) == doctest::Approx(2.0 * v0).epsilon(1e-14));
}

TEST_CASE("dilation scaling of the weighted norms is exact") {
  // Sampling f(e X) on a t-grid equals sampling f on the grid shifted by one,
  // and the norm must scale by the single power e^{l - beta - 1} across every
  // derivative order at once.
  bump2d b{1.3, -3.5, 0.5, 0.25, 0.18};
  auto g1 = make_cone_grid(-7.0, 0.0, 281, 0.9, 0.4, 41);
  auto g2 = make_cone_grid(-6.0, 1.0, 281, 0.9, 0.4, 41);
  g1.fill([&](double t, double th) { return b(t + 1.0, th); });
  g2.fill([&](double t, double th) { return b(t, th); });
  for (int l : {0, 1, 2}) {
    for (double beta : {0.0, 1.3, 2.0}) {
      double lhs = vnorm_cone(g1, l, beta);
      double rhs = std::exp(l - beta - 1.0) * vnorm_cone(g2, l, beta);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  }

  // Ray version: shifting the grid by c multiplies the trace norm by
  // e^{(beta - l + 1) c} and the axial norm by e^{beta c}.
  int n = 701;
  auto tg = tgrid(-6.0, 1.0, n);
  auto tgs = tg;
  for (double& t : tgs) t += 1.0;
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) f[i] = std::exp(-sqr((tg[i] + 2.0) / 0.5));
  for (int l : {1, 2}) {
    double beta = 0.7;
    double ratio = trace_norm(tgs, f, l, beta) / trace_norm(tg, f, l, beta);
    CHECK(ratio == doctest::Approx(std::exp(beta - l + 1.0)).epsilon(1e-10));
    double wr = wnorm_ray(tgs, f, l, beta) / wnorm_ray(tg, f, l, beta);
    CHECK(wr == doctest::Approx(std::exp(beta)).epsilon(1e-10));
  }
}

TEST_CASE("flat Sobolev norm against a separable oracle") {
  auto g = make_grid("strip", 0.0, 1.0, 201, 0.0, 1.0, 201);
  g.fill([](double x, double z) { return std::sin(M_PI * x) * std::sin(M_PI * z); });
  double h0 = hnorm_flat(g, 0);
  CHECK(h0 * h0 == doctest::Approx(0.25).epsilon(1e-8));
  double h1 = hnorm_flat(g, 1);
  CHECK(h1 * h1 == doctest::Approx(0.25 + M_PI * M_PI / 2.0).epsilon(1e-7));
  double h2 = hnorm_flat(g, 2);
  double p4 = std::pow(M_PI, 4.0);
  CHECK(h2 * h2 == doctest::Approx(0.25 + M_PI * M_PI / 2.0 + p4).epsilon(1e-6));
}

TEST_CASE("cone and cylinder pictures of the weighted norm") {
  double om1 = 0.9, om2 = 0.4;
  auto g = make_cone_grid(-8.0, 0.0, 321, om1, om2, 49);

  // At order zero the two norms are the same weighted integral on the nose.
  lcg rng(41);
  for (double beta : {0.0, 0.7, 2.0}) {
    auto b = random_bump(rng, -8.0, 0.0, -om2, om1);
    g.fill([&](double t, double th) { return b(t, th); });
    CHECK(vnorm_cone(g, 0, beta) ==
          doctest::Approx(wnorm_strip(g, 0, beta + 1.0)).epsilon(1e-12));
  }

  // At higher order they are equivalent with moderate constants; the ratio
  // over a spread of bumps must stay in a narrow band.
  for (int l : {1, 2}) {
    for (double beta : {0.0, 1.0, 2.0}) {
      double lo = 1e300, hi = 0.0;
      for (int k = 0; k < 12; ++k) {
        auto b = random_bump(rng, -8.0, 0.0, -om2, om1);
        g.fill([&](double t, double th) { return b(t, th); });
        double ratio = vnorm_cone(g, l, beta) / wnorm_strip(g, l, beta - l + 1.0);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      CHECK(hi / lo < 10.0);
      CHECK(lo > 0.05);
      CHECK(hi < 20.0);
    }
  }
}

TEST_CASE("patch-size embedding between weighted orders") {
  double delta = 0.5;
  double lg2 = std::log(2.0);
  // Grid step an exact eighth of ln 2, so halving the support radius is a
  // pure index shift and the scale invariance of the bound is visible.
  int n = 113;
  auto g = make_cone_grid(-15.0 * lg2, -lg2, n, 0.8, 0.5, 41);
  bump2d b{1.0, -lg2 - 2.5, 0.5, 0.1, 0.2};
  g.fill([&](double t, double th) { return b(t, th); });

  auto r1 = embed_check(g, 1, 0.5, 2, 1.0, delta);
  CHECK(r1.pass);
  CHECK(r1.fitted_c > 0.02);
  CHECK(r1.fitted_c <= 1.0);
  auto r2 = embed_check(g, 1, 1.0, 2, 2.0, delta);
  CHECK(r2.pass);
  auto r0 = embed_check(g, 0, 0.0, 2, 2.0, delta);
  CHECK(r0.pass);

  grid_function gh = g;
  gh.fill([&](double t, double th) { return b(t + lg2, th); });
  auto rh = embed_check(gh, 1, 0.5, 2, 1.0, delta / 2.0);
  CHECK(rh.pass);
  CHECK(rh.fitted_c == doctest::Approx(r1.fitted_c).epsilon(1e-10));

  CHECK_THROWS_AS(embed_check(g, 2, 0.0, 1, 1.0, delta), error);
  CHECK_THROWS_AS(embed_check(g, 1, 0.0, 2, 1.5, delta), error);
}

TEST_CASE("weighted versus plain Sobolev conversions") {
  double delta = 0.5;
  auto g = make_cone_grid(-10.0, std::log(delta), 301, 0.8, 0.5, 41);
  bump2d b{1.0, std::log(delta) - 2.5, 0.5, 0.1, 0.2};
  g.fill([&](double t, double th) { return b(t, th); });

  // Support inside r <= delta <= 1 makes the extra radial weights pointwise
  // contractions, so the fitted constant sits below one.
  auto c1 = sobolev_weighted_convert(g, "H2_to_V22", delta, 1.0);
  CHECK(c1.pass);
  CHECK(c1.fitted_c > 1e-4);
  CHECK(c1.fitted_c <= 1.0);
  auto c2 = sobolev_weighted_convert(g, "L2_to_V02", delta, 1.0);
  CHECK(c2.pass);
  CHECK(c2.fitted_c < delta * delta * 1.0001);
  CHECK_THROWS_AS(sobolev_weighted_convert(g, "bogus", delta, 1.0), error);

  int n = 401;
  auto tg = tgrid(-10.0, std::log(delta), n);
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) f[i] = std::exp(-sqr((tg[i] - std::log(delta) + 2.5) / 0.5));
  for (const char* dir : {"H32_to_V32", "V32_to_H32", "V12_to_H12"}) {
    auto cr = sobolev_weighted_convert_ray(tg, f, dir, delta, 10.0);
    CHECK(cr.pass);
    CHECK(cr.fitted_c > 1e-3);
  }
}

TEST_CASE("ray norms against closed forms") {
  // Gaussian profile in r; both power moments have elementary values.
  double c = 3.0, w = 0.5;
  int n = 1101;
  auto tg = tgrid(-3.0, 2.5, n);
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) f[i] = std::exp(-sqr((std::exp(tg[i]) - c) / w));
  double m0 = w * std::sqrt(M_PI / 2.0);
  CHECK(ray_weighted_l2(tg, f, 0.0) == doctest::Approx(m0).epsilon(1e-6));
  CHECK(ray_weighted_l2(tg, f, 2.0) ==
        doctest::Approx(m0 * (c * c + w * w / 4.0)).epsilon(1e-6));

  auto fr = [&](double r) { return std::exp(-sqr((r - c) / w)); };
  auto fpr = [&](double r) { return -2.0 * (r - c) / (w * w) * fr(r); };
  double a = std::exp(tg.front()), bnd = std::exp(tg.back());
  std::vector<double> cuts{1.5, 4.5};

  double ref0 = frac_reference(a, bnd, cuts, fr, fpr, [](double, double) { return 1.0; });
  CHECK(ray_frac_seminorm(tg, f, 0.0) == doctest::Approx(ref0).epsilon(0.03));

  double ref2 = frac_reference(a, bnd, cuts, fr, fpr,
                               [](double r, double) { return r * r; });
  CHECK(ray_frac_seminorm(tg, f, 2.0) == doctest::Approx(ref2).epsilon(0.03));

  double ref2s = frac_reference(a, bnd, cuts, fr, fpr,
                                [](double r, double rho) { return r * rho; });
  CHECK(ray_frac_seminorm(tg, f, 2.0, true) == doctest::Approx(ref2s).epsilon(0.03));

  // The band estimator converges: at half the step the defect shrinks.
  auto tg2 = tgrid(-3.0, 2.5, 2 * n - 1);
  std::vector<double> f2(tg2.size());
  for (std::size_t i = 0; i < tg2.size(); ++i)
    f2[i] = std::exp(-sqr((std::exp(tg2[i]) - c) / w));
  double e_coarse = std::abs(ray_frac_seminorm(tg, f, 0.0) - ref0);
  double e_fine = std::abs(ray_frac_seminorm(tg2, f2, 0.0) - ref0);
  CHECK(e_fine < 0.8 * e_coarse + 1e-12);
}

TEST_CASE("trace norm structure matches its definition") {
  int n = 501;
  double beta = 1.3;
  int l = 2;
  auto tg = tgrid(-6.0, 0.5, n);
  double h = tg[1] - tg[0];
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i)
    f[i] = std::exp(-sqr((tg[i] + 2.0) / 0.6)) * (1.0 + 0.3 * std::sin(tg[i]));

  // Independent accumulation straight from the definition: for each
  // derivative level, one radially weighted L2 piece and one excluded-band
  // difference quotient with its midpoint patch.
  double total = 0.0;
  for (int j = 0; j <= l - 1; ++j) {
    std::vector<double> fj = (j > 0) ? fd_derivative(f, h, j, 4) : f;
    double ps = 2.0 * (beta - l) + 1.0, pf = ps + 1.0;
    std::vector<double> sq(n), wq(n, h);
    for (int i = 0; i < n; ++i) sq[i] = std::exp((ps + 1.0) * tg[i]) * fj[i] * fj[i];
    total += simpson(sq, h);
    for (int i = 0; i < n; ++i) wq[i] = (i % 2 ? 4.0 : 2.0) * h / 3.0;
    wq[0] = wq[n - 1] = h / 3.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        if (std::abs(i - k) <= 1) continue;
        double ri = std::exp(tg[i]), rk = std::exp(tg[k]);
        total += wq[i] * wq[k] * std::pow(ri, pf) * sqr(fj[i] - fj[k]) / sqr(ri - rk) * ri * rk;
      }
    auto fjp = fd_derivative(fj, h, 1, 4);
    for (int i = 0; i < n; ++i) {
      double ri = std::exp(tg[i]);
      double slope = fjp[i] / ri;  // radial derivative of the level-j term
      total += 3.0 * h * wq[i] * std::pow(ri, pf) * slope * slope * ri * ri;
    }
  }
  CHECK(trace_norm(tg, f, l, beta) == doctest::Approx(std::sqrt(total)).epsilon(1e-12));
  CHECK_THROWS_AS(trace_norm(tg, f, 0, beta), error);
}

TEST_CASE("angular blending extension of edge data") {
  double om1 = 0.9, om2 = 0.4;
  int n = 161, nth = 41;
  auto tg = tgrid(-8.0, 0.0, n);
  std::vector<double> f(n), g0(n, 0.0), gsame(n);
  for (int i = 0; i < n; ++i) {
    f[i] = std::exp(-sqr((tg[i] + 3.0) / 0.6));
    gsame[i] = f[i];
  }
  auto w = extend_trace(tg, f, g0, om1, om2, nth);
  for (int i = 0; i < n; i += 7) {
    CHECK(w.at(i, nth - 1) == doctest::Approx(f[i]).epsilon(1e-14));
    CHECK(std::abs(w.at(i, 0)) < 1e-14);
  }
  auto wc = extend_trace(tg, f, gsame, om1, om2, nth);
  double dev = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < nth; ++j) dev = std::max(dev, std::abs(wc.at(i, j) - f[i]));
  CHECK(dev < 1e-14);

  // Extension continuity: the interior weighted norm is controlled by the
  // trace norm of the data with a moderate constant.
  double ratio = vnorm_cone(w, 2, 2.0) / trace_norm(tg, f, 2, 2.0);
  CHECK(ratio < 20.0);
  CHECK(ratio > 0.01);

  grid_function vR = make_grid("strip", 0.0, 1.0, 41, 0.0, 1.0, 31);
  vR.fill([](double x, double z) { return x * z; });
  CHECK(vnorm_domain(w, vR, 2, 2.0) ==
        doctest::Approx(vnorm_cone(w, 2, 2.0) + hnorm_flat(vR, 2)).epsilon(1e-14));

  auto rep = make_report("V_cone", 2.0, 2.0, "cone", 1.5, n, nth);
  CHECK(rep.family == "V_cone");
  CHECK(rep.value == 1.5);
}
