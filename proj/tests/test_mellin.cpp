#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "corner/eigensystem.hpp"
#include "corner/errors.hpp"
#include "corner/laplace.hpp"
#include "corner/numerics.hpp"
#include "corner/pencil.hpp"
#include "corner/rng.hpp"

using namespace corner;

namespace {

std::vector<double> sample(const std::vector<double>& tg,
                           const std::function<double(double)>& f) {
  std::vector<double> out(tg.size());
  for (std::size_t i = 0; i < tg.size(); ++i) out[i] = f(tg[i]);
  return out;
}

// Second-order collocation of lambda^2 phi + phi'' = F with the pair's
// boundary rows (ghost-node elimination at flux ends). Independent of the
// closed-form path: complex Thomas solve on a uniform grid.
std::vector<cplx> collocate(cplx lambda, const std::function<cplx(double)>& F, cplx a,
                            cplx b, const eigen_system& sys, int n) {
  double h = sys.omega / (n - 1);
  std::vector<double> th(n);
  for (int i = 0; i < n; ++i) th[i] = -sys.omega2 + i * h;
  std::vector<cplx> sub(n), diag(n), sup(n), rhs(n);
  cplx l2 = lambda * lambda;
  double ih2 = 1.0 / (h * h);
  for (int i = 1; i < n - 1; ++i) {
    sub[i] = ih2;
    diag[i] = l2 - 2.0 * ih2;
    sup[i] = ih2;
    rhs[i] = F ? F(th[i]) : cplx(0.0);
  }
  bool bot_value = (sys.bc_pair == "dirichlet");
  bool top_value = (sys.bc_pair != "neumann");
  if (bot_value) {
    diag[0] = 1.0;
    sup[0] = 0.0;
    rhs[0] = b;
  } else {
    // -phi'(-omega2) = b via the ghost node phi_{-1} = phi_1 + 2 h b.
    diag[0] = l2 - 2.0 * ih2;
    sup[0] = 2.0 * ih2;
    rhs[0] = (F ? F(th[0]) : cplx(0.0)) - 2.0 * b / h;
  }
  if (top_value) {
    diag[n - 1] = 1.0;
    sub[n - 1] = 0.0;
    rhs[n - 1] = a;
  } else {
    // phi'(omega1) = a via phi_n = phi_{n-2} + 2 h a.
    diag[n - 1] = l2 - 2.0 * ih2;
    sub[n - 1] = 2.0 * ih2;
    rhs[n - 1] = (F ? F(th[n - 1]) : cplx(0.0)) - 2.0 * a / h;
  }
  for (int i = 1; i < n; ++i) {
    cplx m = sub[i] / diag[i - 1];
    diag[i] -= m * sup[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  std::vector<cplx> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (int i = n - 2; i >= 0; --i) x[i] = (rhs[i] - sup[i] * x[i + 1]) / diag[i];
  return x;
}

double sup_diff(const std::vector<cplx>& u, const std::vector<cplx>& v) {
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) d = std::max(d, std::abs(u[i] - v[i]));
  return d;
}

double sup_abs(const std::vector<cplx>& u) {
  double d = 0.0;
  for (auto& z : u) d = std::max(d, std::abs(z));
  return d;
}

}  // namespace

TEST_CASE("axial transform of a Gaussian matches the closed form") {
  auto tg = linspace(-8.0, 8.0, 1601);
  auto w = sample(tg, [](double t) { return std::exp(-t * t); });

  auto ct0 = make_contour(1e-12, 1.0, 3);
  ct0.beta = 0.0;
  auto wh0 = laplace_forward(tg, w, ct0);
  CHECK(std::abs(wh0[1] - cplx(std::sqrt(M_PI), 0.0)) < 1e-8);

  // Whole contour against sqrt(pi) e^{lambda^2/4}.
  auto ct = make_contour(0.5, 3.0, 25);
  auto wh = laplace_forward(tg, w, ct);
  for (int k = 0; k < ct.n(); ++k) {
    cplx lam = ct.lambda(k);
    cplx want = std::sqrt(M_PI) * std::exp(lam * lam / 4.0);
    CHECK(std::abs(wh[k] - want) < 1e-7);
  }

  // Single-point evaluation agrees with the contour path.
  cplx at = laplace_at(tg, w, cplx(-0.5, 1.25));
  cplx want = std::sqrt(M_PI) * std::exp(cplx(-0.5, 1.25) * cplx(-0.5, 1.25) / 4.0);
  CHECK(std::abs(at - want) < 1e-7);
}

TEST_CASE("transform turns the axial derivative into multiplication by lambda") {
  auto tg = linspace(-8.0, 8.0, 1601);
  auto w = sample(tg, [](double t) { return std::exp(-t * t); });
  auto dw = sample(tg, [](double t) { return -2.0 * t * std::exp(-t * t); });
  auto ct = make_contour(0.5, 4.0, 33);
  auto wh = laplace_forward(tg, w, ct);
  auto dwh = laplace_forward(tg, dw, ct);
  for (int k = 0; k < ct.n(); ++k)
    CHECK(std::abs(dwh[k] - ct.lambda(k) * wh[k]) < 1e-6);
}

TEST_CASE("zero signal transforms to zero and back") {
  auto tg = linspace(-6.0, 6.0, 401);
  std::vector<double> w(tg.size(), 0.0);
  auto ct = make_contour(0.3, 5.0, 51);
  auto wh = laplace_forward(tg, w, ct);
  for (auto& z : wh) CHECK(std::abs(z) == 0.0);
  auto back = laplace_inverse(ct, wh, tg);
  for (auto& v : back) CHECK(v == 0.0);
}

TEST_CASE("inverse of forward recovers the Gaussian") {
  auto tg = linspace(-8.0, 8.0, 1601);
  auto w = sample(tg, [](double t) { return std::exp(-t * t); });
  auto ct = make_contour(0.0, 10.0, 101);
  auto wh = laplace_forward(tg, w, ct);

  CHECK(conjugate_defect(ct, wh) < 1e-12);

  auto tq = linspace(-4.0, 4.0, 161);
  double resid = 0.0;
  auto back = laplace_inverse(ct, wh, tq, &resid);
  CHECK(resid < 1e-10);
  double worst = 0.0;
  for (std::size_t i = 0; i < tq.size(); ++i)
    worst = std::max(worst, std::abs(back[i] - std::exp(-tq[i] * tq[i])));
  CHECK(worst < 1e-6);
}

TEST_CASE("contour energy balances the weighted axial energy") {
  auto tg = linspace(-8.0, 8.0, 1601);
  auto w = sample(tg, [](double t) { return std::exp(-t * t); });
  auto ct = make_contour(0.5, 12.0, 241);
  CHECK(parseval_gap(tg, w, ct) < 1e-6);

  // Ten random bump sums, same contour line.
  lcg rng(2026);
  for (int trial = 0; trial < 10; ++trial) {
    int nb = rng.uniform_int(1, 3);
    std::vector<double> c(nb), s(nb), amp(nb);
    for (int i = 0; i < nb; ++i) {
      c[i] = rng.uniform(-2.0, 2.0);
      s[i] = rng.uniform(0.5, 1.0);
      amp[i] = rng.uniform(-1.0, 1.0);
    }
    auto f = sample(tg, [&](double t) {
      double v = 0.0;
      for (int i = 0; i < nb; ++i) v += amp[i] * std::exp(-sqr((t - c[i]) / s[i]));
      return v;
    });
    auto ctb = make_contour(0.5, 30.0, 601);
    CHECK(parseval_gap(tg, f, ctb) < 1e-6);
  }
}

TEST_CASE("forward transform rejects samples that do not decay") {
  auto tg = linspace(-6.0, 6.0, 401);
  std::vector<double> w(tg.size(), 1.0);
  auto ct = make_contour(0.0, 2.0, 21);
  CHECK_THROWS_AS(laplace_forward(tg, w, ct), error);
}

TEST_CASE("wedge spectra for the three boundary pairs") {
  // Equal quarter-angles, opening pi/3: half-integer lattice 3(m + 1/2).
  auto mix = make_eigensystem("mixed", M_PI / 6.0, M_PI / 6.0, 4);
  std::vector<double> got;
  for (auto& e : mix.entries) got.push_back(e.lambda);
  double mn = 1e300;
  for (double v : got) mn = std::min(mn, std::abs(v));
  CHECK(mn == doctest::Approx(1.5).epsilon(1e-12));
  bool has15 = false, has45 = false;
  for (double v : got) {
    if (std::abs(v - 1.5) < 1e-12) has15 = true;
    if (std::abs(v - 4.5) < 1e-12) has45 = true;
  }
  CHECK(has15);
  CHECK(has45);

  // Right-angle Dirichlet wedge: even lattice, no zero mode.
  auto dir = make_eigensystem("dirichlet", M_PI / 4.0, M_PI / 4.0, 3);
  for (auto& e : dir.entries) {
    CHECK(e.m != 0);
    CHECK(e.lambda == doctest::Approx(2.0 * e.m).epsilon(1e-12));
    CHECK(!(e.lambda >= -1.0 && e.lambda < 0.0));
  }

  // Neumann opening 3pi/4 keeps the constant mode.
  auto neu = make_eigensystem("neumann", M_PI / 2.0, M_PI / 4.0, 3);
  int zero_idx = -1;
  bool has43 = false;
  for (std::size_t i = 0; i < neu.entries.size(); ++i) {
    if (neu.entries[i].m == 0) zero_idx = static_cast<int>(i);
    if (std::abs(neu.entries[i].lambda - 4.0 / 3.0) < 1e-12) has43 = true;
  }
  CHECK(has43);
  REQUIRE(zero_idx >= 0);
  CHECK(neu.entries[zero_idx].lambda == 0.0);
  for (double th = -M_PI / 4.0; th <= M_PI / 2.0; th += 0.1)
    CHECK(neu.eigenfunction(zero_idx, th) == doctest::Approx(1.0));
}

TEST_CASE("spectral gaps hold across opening angles") {
  lcg rng(7);
  for (int i = 0; i < 50; ++i) {
    double omega = rng.uniform(0.05, M_PI / 2.0 - 0.01);
    auto sys = make_eigensystem("mixed", 0.5 * omega, 0.5 * omega, 6);
    double mn = 1e300;
    for (auto& e : sys.entries) mn = std::min(mn, std::abs(e.lambda));
    CHECK(mn == doctest::Approx(M_PI / (2.0 * omega)).epsilon(1e-12));
    CHECK(mn > 1.0);
  }
  for (int i = 0; i < 50; ++i) {
    double omega = rng.uniform(0.05, M_PI - 0.01);
    for (const char* bc : {"dirichlet", "neumann"}) {
      auto sys = make_eigensystem(bc, 0.5 * omega, 0.5 * omega, 6);
      for (auto& e : sys.entries) CHECK(!(e.lambda >= -1.0 && e.lambda < 0.0));
    }
  }
  CHECK_THROWS_AS(make_eigensystem("mixed", M_PI / 2.0, M_PI / 2.0, 3), error);
  CHECK_THROWS_AS(make_eigensystem("robin", M_PI / 6.0, M_PI / 6.0, 3), error);
}

TEST_CASE("distance to the spectrum uses the full lattice") {
  auto mix = make_eigensystem("mixed", M_PI / 6.0, M_PI / 6.0, 2);
  CHECK(nearest_eigen_distance(mix, cplx(1.5, 0.0)) == doctest::Approx(0.0));
  CHECK(nearest_eigen_distance(mix, cplx(0.0, 0.0)) == doctest::Approx(1.5));
  CHECK(nearest_eigen_distance(mix, cplx(-0.5, 2.0)) ==
        doctest::Approx(std::hypot(1.0, 2.0)));
  // Far beyond the stored m range the lattice formula still answers.
  CHECK(nearest_eigen_distance(mix, cplx(300.0, 0.0)) <= 1.5 + 1e-12);

  auto dir = make_eigensystem("dirichlet", M_PI / 4.0, M_PI / 4.0, 2);
  // The hole at lambda = 0 is not an eigenvalue.
  CHECK(nearest_eigen_distance(dir, cplx(0.1, 0.0)) == doctest::Approx(1.9));
}

TEST_CASE("weight lines split exactly at the spectrum") {
  auto mix = make_eigensystem("mixed", M_PI / 6.0, M_PI / 6.0, 4);
  auto segs = admissible_weight_lines(mix, 2, -1.0, 3.0);
  REQUIRE(segs.size() == 3);
  CHECK(segs[0].first == doctest::Approx(-1.0));
  CHECK(segs[0].second == doctest::Approx(-0.5));  // beta = 1 - 1.5
  CHECK(segs[1].second == doctest::Approx(2.5));   // beta = 1 + 1.5
  CHECK(segs[2].second == doctest::Approx(3.0));

  auto dir = make_eigensystem("dirichlet", M_PI / 4.0, M_PI / 4.0, 4);
  auto dsegs = admissible_weight_lines(dir, 1, -1.5, 1.5);
  // Only the lambda = 0 line cuts this window (eigenvalues sit at +-2).
  REQUIRE(dsegs.size() == 2);
  CHECK(dsegs[0].second == doctest::Approx(0.0));

  auto csv = eigen_csv(mix);
  CHECK(csv.find("m,lambda,bc_pair,omega") != std::string::npos);
  CHECK(csv.find("mixed") != std::string::npos);
}

TEST_CASE("pure top datum reproduces the closed-form angular mode") {
  auto sys = make_eigensystem("mixed", M_PI / 6.0, M_PI / 6.0, 4);
  auto th = linspace(-M_PI / 6.0, M_PI / 6.0, 41);
  pencil_rhs rhs;
  rhs.a = 1.0;
  auto phi = solve_pencil(cplx(1.0, 0.0), rhs, sys, th);
  for (std::size_t j = 0; j < th.size(); ++j) {
    double want = 2.0 * std::cos(th[j] + M_PI / 6.0);
    CHECK(std::abs(phi[j] - cplx(want, 0.0)) < 1e-12);
  }
  // Top value hits the datum: phi(omega1) = 2 cos(pi/3) = 1.
  CHECK(std::abs(phi.back() - cplx(1.0, 0.0)) < 1e-12);
}

TEST_CASE("closed-form resolvent matches collocation for all three pairs") {
  struct probe {
    const char* bc;
    double o1, o2;
    cplx lambda;
  };
  std::vector<probe> probes = {
      {"mixed", M_PI / 6.0, M_PI / 6.0, cplx(0.3, 0.7)},
      {"dirichlet", M_PI / 4.0, M_PI / 4.0, cplx(0.4, 0.3)},
      {"neumann", M_PI / 2.0, M_PI / 4.0, cplx(0.6, 0.5)},
  };
  auto F = [](double t) { return cplx(std::sin(t) + 0.3 * t, 0.5 * std::cos(2.0 * t)); };
  for (auto& pr : probes) {
    CAPTURE(pr.bc);
    auto sys = make_eigensystem(pr.bc, pr.o1, pr.o2, 6);
    pencil_rhs rhs;
    rhs.F = F;
    rhs.a = cplx(0.3, -0.2);
    rhs.b = cplx(-0.1, 0.4);
    int n = 3001;
    auto ref = collocate(pr.lambda, F, rhs.a, rhs.b, sys, n);
    std::vector<double> th(n);
    for (int i = 0; i < n; ++i) th[i] = -pr.o2 + i * sys.omega / (n - 1);
    auto phi = solve_pencil(pr.lambda, rhs, sys, th);
    CHECK(sup_diff(phi, ref) / sup_abs(ref) < 1e-5);
  }
}

TEST_CASE("resolvent stays accurate deep into the oscillatory regime") {
  // |Im lambda| 2 omega is far past the direct-trig window here, so this
  // exercises the normalized exponential forms against collocation.
  auto sys = make_eigensystem("mixed", M_PI / 6.0, M_PI / 6.0, 6);
  cplx lambda(-0.5, 20.0);
  auto F = [](double t) { return cplx(std::cos(t), 0.0); };
  pencil_rhs rhs;
  rhs.F = F;
  rhs.a = 1.0;
  rhs.b = 0.2;
  int n = 6001;
  auto ref = collocate(lambda, F, rhs.a, rhs.b, sys, n);
  std::vector<double> th(n);
  for (int i = 0; i < n; ++i) th[i] = -sys.omega2 + i * sys.omega / (n - 1);
  auto phi = solve_pencil(lambda, rhs, sys, th);
  CHECK(sup_diff(phi, ref) / sup_abs(ref) < 1e-4);

  // Extreme frequencies must stay finite (no overflow in the trig forms).
  auto hi = solve_pencil(cplx(-0.5, 4000.0), rhs, sys, th);
  CHECK(std::isfinite(sup_abs(hi)));
  CHECK(sup_abs(hi) < 10.0);
}

TEST_CASE("pencil solve is linear and annihilates zero data") {
  auto sys = make_eigensystem("dirichlet", M_PI / 4.0, M_PI / 4.0, 4);
  auto th = linspace(-M_PI / 4.0, M_PI / 4.0, 33);
  pencil_rhs zero;
  auto phi0 = solve_pencil(cplx(0.7, 0.2), zero, sys, th);
  for (auto& z : phi0) CHECK(std::abs(z) == 0.0);

  pencil_rhs rhs;
  rhs.F = [](double t) { return cplx(t * t, std::sin(3.0 * t)); };
  rhs.a = cplx(0.5, 0.1);
  rhs.b = cplx(-0.2, 0.3);
  cplx alpha(2.0, -3.0);
  pencil_rhs scaled;
  scaled.F = [&](double t) { return alpha * rhs.F(t); };
  scaled.a = alpha * rhs.a;
  scaled.b = alpha * rhs.b;
  auto u = solve_pencil(cplx(0.7, 0.2), rhs, sys, th);
  auto v = solve_pencil(cplx(0.7, 0.2), scaled, sys, th);
  for (std::size_t j = 0; j < th.size(); ++j)
    CHECK(std::abs(v[j] - alpha * u[j]) < 1e-12 * sup_abs(v));
}

TEST_CASE("solution norm blows up like the reciprocal spectral distance") {
  auto sys = make_eigensystem("mixed", M_PI / 6.0, M_PI / 6.0, 4);
  auto th = linspace(-M_PI / 6.0, M_PI / 6.0, 65);
  pencil_rhs rhs;
  rhs.a = 1.0;
  std::vector<double> norms;
  for (int k = 2; k <= 6; ++k) {
    double eps = std::pow(10.0, -k);
    auto phi = solve_pencil(cplx(1.5 + eps, 0.0), rhs, sys, th);
    norms.push_back(sup_abs(phi));
  }
  // Successive decades should scale the norm by ~10.
  for (std::size_t i = 0; i + 1 < norms.size(); ++i) {
    double ratio = norms[i + 1] / norms[i];
    CHECK(ratio > 8.0);
    CHECK(ratio < 12.5);
  }
  CHECK_THROWS_AS(solve_pencil(cplx(1.5 + 1e-9, 0.0), rhs, sys, th), error);
  try {
    solve_pencil(cplx(1.5 + 1e-9, 0.0), rhs, sys, th);
  } catch (const error& e) {
    CHECK(std::string(e.what()).find("eigenvalue") != std::string::npos);
    CHECK(e.code == errc::solver);
  }
}

TEST_CASE("sampled solutions satisfy the angular equation") {
  auto sys = make_eigensystem("mixed", M_PI / 6.0, M_PI / 6.0, 4);
  // Grid chosen near the optimum of the residual's error budget: the
  // divided-difference noise grows like eps/h^2 while the stencil truncation
  // shrinks like h^4.
  auto th = linspace(-M_PI / 6.0, M_PI / 6.0, 501);
  pencil_rhs rhs;
  rhs.F = [](double t) { return cplx(std::exp(-t) * std::sin(2.0 * t), 0.4 * std::cos(t)); };
  rhs.a = cplx(0.2, 0.6);
  rhs.b = cplx(0.8, -0.1);
  cplx lambda(0.3, 0.7);
  auto phi = solve_pencil(lambda, rhs, sys, th);
  CHECK(pencil_residual(lambda, rhs, sys, th, phi) < 1e-8);
}

TEST_CASE("parameter norm of a sine matches its closed form") {
  auto th = linspace(0.0, 1.0, 201);
  std::vector<cplx> v(th.size());
  for (std::size_t i = 0; i < th.size(); ++i) v[i] = std::sin(M_PI * th[i]);
  // l = 1: 1/2 + pi^2/2 + |lambda|^2 / 2.
  double want = std::sqrt(0.5 + 0.5 * M_PI * M_PI + 4.0 * 0.5);
  CHECK(param_norm(th, v, 1, cplx(0.0, 2.0)) == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("parameter-elliptic bound holds along a contour sweep") {
  auto sys = make_eigensystem("mixed", M_PI / 6.0, M_PI / 6.0, 6);
  int n = 257;
  std::vector<double> th(n);
  for (int i = 0; i < n; ++i) th[i] = -sys.omega2 + i * sys.omega / (n - 1);
  pencil_rhs rhs;
  rhs.F = [](double t) { return cplx(std::cos(t), 0.2 * std::sin(2.0 * t)); };
  rhs.a = cplx(0.7, 0.0);
  rhs.b = cplx(-0.3, 0.1);

  pencil_rhs zero;
  auto z = solve_pencil(cplx(-0.5, 0.0), zero, sys, th);
  auto rz = resolvent_norm_check(cplx(-0.5, 0.0), zero, z, sys, th, 2);
  CHECK(rz.pass);
  CHECK(rz.lhs == 0.0);
  CHECK(rz.rhs_bound == 0.0);

  double c2 = 0.0, c3 = 0.0;
  for (double tau = 0.0; tau <= 50.0; tau += 2.5) {
    cplx lambda(-0.5, tau);
    auto phi = solve_pencil(lambda, rhs, sys, th);
    auto r2 = resolvent_norm_check(lambda, rhs, phi, sys, th, 2);
    CHECK(r2.pass);
    c2 = std::max(c2, r2.fitted_c);
    auto r3 = resolvent_norm_check(lambda, rhs, phi, sys, th, 3);
    c3 = std::max(c3, r3.fitted_c);
  }
  CHECK(c2 < 100.0);
  CHECK(c3 < 100.0);
  CHECK(c3 < 10.0 * c2);
  CHECK(c2 < 10.0 * c3);
}

TEST_CASE("spectral fields report their truncation tails") {
  auto ct = make_contour(0.5, 5.0, 41);
  spectral_field sf;
  sf.ct = ct;
  sf.theta = linspace(0.0, 1.0, 33);
  sf.init_zero();
  for (int k = 0; k < ct.n(); ++k) {
    double damp = std::exp(-sqr(ct.tau[k]) / 2.0);
    for (std::size_t j = 0; j < sf.theta.size(); ++j)
      sf.vals[k][j] = damp * std::sin(M_PI * sf.theta[j]);
  }
  CHECK(tail_ratio(sf, 1) < 1e-5);
  CHECK(tail_ratio(sf, 1) > 0.0);
}
