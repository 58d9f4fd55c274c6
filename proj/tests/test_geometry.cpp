#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "corner/coefficients.hpp"
#include "corner/profile.hpp"
#include "corner/regularized.hpp"
#include "corner/rng.hpp"
#include "corner/transforms.hpp"

using namespace corner;

namespace {

surface_profile linear_profile() {
  surface_profile p;
  p.kind = "poly";
  p.params = {1.0};
  p.gamma = 1.0;
  return p;
}

surface_profile curved_profile() {
  surface_profile p;
  p.kind = "scaled_tanh";
  p.params = {0.5, 2.0};  // eta = 0.5 tanh(2x), slope 1 at the corner
  p.gamma = 1.0;
  return p;
}

double mat_dev(const mat2& A, const mat2& B) {
  return std::abs(A.a00 - B.a00) + std::abs(A.a01 - B.a01) + std::abs(A.a10 - B.a10) +
         std::abs(A.a11 - B.a11);
}

}  // namespace

TEST_CASE("contact angles from the surface slope") {
  auto p = linear_profile();
  auto d = build_domain(p);
  CHECK(d.omega1 == doctest::Approx(M_PI / 4).epsilon(1e-14));
  CHECK(d.omega2 == doctest::Approx(M_PI / 4).epsilon(1e-14));
  CHECK(d.omega == doctest::Approx(M_PI / 2).epsilon(1e-14));

  surface_profile q;
  q.kind = "poly";
  q.params = {std::tan(M_PI / 6)};
  q.gamma = std::tan(M_PI / 6);
  CHECK(build_domain(q).omega == doctest::Approx(M_PI / 3).epsilon(1e-14));

  // Quadratic correction does not move the corner slope.
  surface_profile r;
  r.kind = "poly";
  r.params = {1.0, -0.04};
  r.gamma = 1.0;
  CHECK(build_domain(r).omega1 == doctest::Approx(M_PI / 4).epsilon(1e-14));
  double h = 1e-6;
  double fd_slope = (r.eta(h) - r.eta(0.0)) / h;
  CHECK(fd_slope == doctest::Approx(r.eta_d(0.0, 1)).epsilon(1e-5));
}

TEST_CASE("profile validation rejects broken geometry") {
  surface_profile p = linear_profile();
  p.gamma = -1.0;
  CHECK_THROWS_AS(build_domain(p), error);

  surface_profile q = linear_profile();
  q.params = {-2.0};  // eta'(0) + gamma = -1
  CHECK_THROWS_AS(build_domain(q), error);

  CHECK_THROWS_AS(check_omega(linear_profile(), "mixed"), error);  // omega = pi/2 exactly
  surface_profile m;
  m.params = {std::tan(M_PI / 6)};
  m.gamma = std::tan(M_PI / 6);
  CHECK_NOTHROW(check_omega(m, "mixed"));
  CHECK_NOTHROW(check_omega(linear_profile(), "dirichlet"));

  // A surface that folds over far from the corner is fine as long as the
  // declared work region stays clear of the fold.
  surface_profile f;
  f.kind = "poly";
  f.params = {1.0, -1.0};  // eta = x - x^2, etabar' = 2 - 2x
  f.gamma = 1.0;
  f.x0 = 0.8;
  f.delta = 0.2;
  auto df = build_domain(f);
  CHECK(df.omega1 == doctest::Approx(M_PI / 4).epsilon(1e-14));
  CHECK(df.depth_min > 0.0);
  f.x0 = 3.0;  // now the window reaches past the pinch-off
  CHECK_THROWS_AS(build_domain(f), error);
}

TEST_CASE("etabar inverse on linear and curved surfaces") {
  auto p = linear_profile();
  CHECK(p.etabar_inv(1.0) == doctest::Approx(0.5).epsilon(1e-13));  // etabar = 2x
  auto q = curved_profile();
  lcg rng(7);
  for (int i = 0; i < 50; ++i) {
    double x = rng.uniform(0.0, 3.0);
    CHECK(q.etabar_inv(q.etabar(x)) == doctest::Approx(x).epsilon(1e-11));
  }
}

TEST_CASE("corner matrix and its determinant") {
  auto p = linear_profile();
  mat2 P0 = jac_P0(p);
  CHECK(P0.a00 == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(P0.a01 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(P0.a10 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(P0.a11 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(P0.det() == doctest::Approx(1.0).epsilon(1e-14));

  lcg rng(11);
  for (int i = 0; i < 20; ++i) {
    surface_profile q;
    q.kind = "scaled_tanh";
    q.params = {rng.uniform(0.2, 1.0), rng.uniform(0.5, 3.0)};
    q.gamma = rng.uniform(0.3, 2.0);
    CHECK(jac_P0(q).det() == doctest::Approx(1.0).epsilon(1e-13));
  }
  vec2 o = map_T0(p, {0.0, 0.0});
  CHECK(o.x == 0.0);
  CHECK(o.z == 0.0);
}

TEST_CASE("surface straightening map and its inverse") {
  auto p = linear_profile();
  vec2 im = map_TS(p, {1.0, 1.0});
  CHECK(im.x == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(im.z == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(im.z == doctest::Approx(p.eta(im.x)).epsilon(1e-13));  // lands on the surface

  vec2 origin = map_TS(p, {0.0, 0.0});
  CHECK(std::abs(origin.x) < 1e-14);
  CHECK(std::abs(origin.z) < 1e-14);

  auto q = curved_profile();
  lcg rng(3);
  for (int i = 0; i < 100; ++i) {
    // Points of the reference wedge 0 <= z~ <= x~.
    double xt = rng.uniform(1e-3, 1.5);
    double zt = xt * rng.uniform();
    vec2 w = map_TS_inv(q, map_TS(q, {xt, zt}));
    CHECK(std::abs(w.x - xt) + std::abs(w.z - zt) < 1e-10);
  }
  // Boundary rays are preserved: z~ = x~ goes to the surface, z~ = 0 to the bottom.
  for (double xt : {0.05, 0.3, 0.9}) {
    vec2 top = map_TS(q, {xt, xt});
    CHECK(top.z == doctest::Approx(q.eta(top.x)).epsilon(1e-12));
    vec2 bot = map_TS(q, {xt, 0.0});
    CHECK(bot.z == doctest::Approx(q.l(bot.x)).epsilon(1e-12));
  }
}

TEST_CASE("composed corner map is the identity for a straight surface") {
  auto p = linear_profile();
  lcg rng(5);
  for (int i = 0; i < 100; ++i) {
    double x = rng.uniform(1e-3, 1.0);
    double z = rng.uniform(-p.gamma * x, p.eta_d(0.0, 1) * x);
    vec2 im = map_Tc(p, {x, z});
    CHECK(std::abs(im.x - x) + std::abs(im.z - z) < 1e-11);
  }
  auto q = curved_profile();
  for (int i = 0; i < 100; ++i) {
    double x = rng.uniform(1e-3, 0.8);
    double z = rng.uniform(-q.gamma * x, q.eta_d(0.0, 1) * x);
    vec2 rt = map_Tc_inv(q, map_Tc(q, {x, z}));
    CHECK(std::abs(rt.x - x) + std::abs(rt.z - z) < 1e-10);
  }
}

TEST_CASE("strip chart hits the surface and bottom lines") {
  auto q = curved_profile();
  for (double x : {0.5, 1.0, 2.5}) {
    CHECK(map_TR(q, {x, 1.0}).z == doctest::Approx(q.eta(x)).epsilon(1e-14));
    CHECK(map_TR(q, {x, 0.0}).z == doctest::Approx(q.l(x)).epsilon(1e-14));
  }
  lcg rng(13);
  for (int i = 0; i < 100; ++i) {
    double x = rng.uniform(0.2, 3.0), z = rng.uniform();
    vec2 rt = map_TR_inv(q, map_TR(q, {x, z}));
    CHECK(std::abs(rt.x - x) + std::abs(rt.z - z) < 1e-12);
  }
}

TEST_CASE("finite differences confirm the analytic Jacobian factors") {
  auto q = curved_profile();
  lcg rng(17);
  double h = 1e-6;
  for (int i = 0; i < 20; ++i) {
    double xt = rng.uniform(0.05, 1.0);
    double zt = xt * rng.uniform();
    // Row-Jacobian of the forward map by central differences.
    vec2 fx1 = map_TS(q, {xt + h, zt}), fx0 = map_TS(q, {xt - h, zt});
    vec2 fz1 = map_TS(q, {xt, zt + h}), fz0 = map_TS(q, {xt, zt - h});
    mat2 J{(fx1.x - fx0.x) / (2 * h), (fx1.z - fx0.z) / (2 * h),
           (fz1.x - fz0.x) / (2 * h), (fz1.z - fz0.z) / (2 * h)};
    // The inverse-map factor at the image carries the same z~ argument.
    mat2 prod = J * jac_PS(q, zt);
    CHECK(mat_dev(prod, mat2::identity()) < 1e-8);
  }
  // Strip factor against the frozen hand computation at eta = x, l = -x.
  auto p = linear_profile();
  mat2 Pr = jac_Pr(p, 1.0, 0.5);
  CHECK(Pr.a00 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(Pr.a01) < 1e-14);
  CHECK(std::abs(Pr.a10) < 1e-14);
  CHECK(Pr.a11 == doctest::Approx(0.5).epsilon(1e-14));
  mat2 PR = field_PR(p, 1.0, 0.5);
  CHECK(PR.a11 == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(PR.a00 == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("coefficient fields: corner identity and positivity") {
  auto q = curved_profile();
  mat2 atc = field_Pc(q, {0.0, 0.0});
  CHECK(mat_dev(atc, mat2::identity()) < 1e-12);

  lcg rng(23);
  double growth = 0.0;
  for (int i = 0; i < 200; ++i) {
    double r = rng.uniform(1e-3, 0.5);
    double th = rng.uniform(-q.omega2(), q.omega1());
    vec2 X{r * std::cos(th), r * std::sin(th)};
    mat2 Pc = field_Pc(q, X);
    CHECK(is_spd(Pc));
    growth = std::max(growth, mat_dev(Pc, mat2::identity()) / r);
    mat2 PR = field_PR(q, rng.uniform(0.3, 2.0), rng.uniform());
    CHECK(is_spd(PR));
    mat2 Pw = field_Pw(q, std::log(r), th);
    CHECK(is_spd(Pw));
  }
  // Deviation from the identity vanishes linearly in r near the corner.
  CHECK(growth < 10.0);

  CHECK(mat_dev(field_PS(linear_profile(), 0.0), jac_P0(linear_profile())) < 1e-14);
}

TEST_CASE("rotation conjugation preserves symmetry and eigenvalues") {
  auto q = curved_profile();
  mat2 A = field_Pc(q, {0.2, 0.1});
  mat2 B = rotate_coeff(A, 0.7);
  CHECK(B.a01 == doctest::Approx(B.a10).epsilon(1e-12));
  CHECK(A.det() == doctest::Approx(B.det()).epsilon(1e-12));
  CHECK(A.a00 + A.a11 == doctest::Approx(B.a00 + B.a11).epsilon(1e-12));
}

TEST_CASE("smoothed straightening: trace, determinant identity, inverse") {
  auto q = curved_profile();
  q.delta = 0.5;
  auto rm = build_regularized_map(q);
  CHECK(rm.epsilon > 0.0);
  CHECK(rm.epsilon <= 0.25);

  // On the slanted edge, inside the open part of the cutoff, the map agrees
  // with the unsmoothed one at stored-grid radii.
  int hits = 0;
  for (int i = 0; i < rm.st.nx; ++i) {
    double rho = std::exp(rm.st.xs[i]);
    double xt = rho * std::cos(M_PI / 4);
    if (xt < 1e-4 || xt > 0.2 * q.delta) continue;
    vec2 a = rm.map_TS_reg({xt, xt});
    vec2 b = map_TS(q, {xt, xt});
    CHECK(std::abs(a.x - b.x) + std::abs(a.z - b.z) < 1e-10);
    ++hits;
  }
  CHECK(hits > 10);

  // Determinant identity det(forward Jacobian) = 1 + eps d s~/dx~, checked
  // against finite differences at cell-center points so the stencil stays
  // inside one stored cell.
  lcg rng(29);
  for (int n = 0; n < 100; ++n) {
    int i = rng.uniform_int(5, rm.st.nx - 6);
    int j = rng.uniform_int(1, rm.st.ny - 3);
    double sig = 0.5 * (rm.st.xs[i] + rm.st.xs[i + 1]);
    if (sig < -8.0 || sig > std::log(0.9 * rm.L)) continue;
    double phi = 0.5 * (rm.st.ys[j] + rm.st.ys[j + 1]);
    double rho = std::exp(sig);
    vec2 Xt{rho * std::cos(phi), rho * std::sin(phi)};
    double h = 1e-5 * rho;
    vec2 fx1 = rm.map_TS_reg({Xt.x + h, Xt.z}), fx0 = rm.map_TS_reg({Xt.x - h, Xt.z});
    vec2 fz1 = rm.map_TS_reg({Xt.x, Xt.z + h}), fz0 = rm.map_TS_reg({Xt.x, Xt.z - h});
    mat2 J{(fx1.x - fx0.x) / (2 * h), (fx1.z - fx0.z) / (2 * h),
           (fz1.x - fz0.x) / (2 * h), (fz1.z - fz0.z) / (2 * h)};
    double a1 = rm.epsilon * Xt.x + (1.0 - rm.epsilon) * Xt.z;
    double s1, s2;
    rm.stilde_grad(a1, Xt.z, s1, s2);
    CHECK(std::abs(J.det() - (1.0 + rm.epsilon * s1)) < 1e-8);
    CHECK(J.det() >= 0.5);
    // Analytic Jacobian matches the finite differences too.
    CHECK(mat_dev(J, rm.jac_TS_reg(Xt)) < 1e-7);
  }

  // Newton inverse roundtrip on the patch.
  for (int n = 0; n < 50; ++n) {
    double xt = rng.uniform(0.01, 0.8);
    double zt = xt * rng.uniform();
    vec2 im = rm.map_TS_reg({xt, zt});
    vec2 back = rm.map_TS_reg_inv(im);
    CHECK(std::abs(back.x - xt) + std::abs(back.z - zt) < 1e-10);
  }
}

TEST_CASE("smoothed corner matrix and the composed coefficient identity") {
  auto q = curved_profile();
  auto rm = build_regularized_map(q);

  // Gradient of the extension near the corner approaches (1 - d(0), 0).
  double s1, s2;
  double rho = std::exp(-6.0);
  rm.stilde_grad(rho * std::cos(0.3), rho * std::sin(0.3), s1, s2);
  CHECK(s1 == doctest::Approx(1.0 - rm.d0).epsilon(0.02));
  CHECK(std::abs(s2) < 0.02);

  // Composed-field evaluation through the cone chain rule agrees with the
  // direct wedge-side formula.
  lcg rng(31);
  double g = q.gamma, d0 = rm.d0;
  for (int n = 0; n < 50; ++n) {
    double r = rng.uniform(0.01, 0.4);
    double th = rng.uniform(-q.omega2(), q.omega1());
    vec2 X{r * std::cos(th), r * std::sin(th)};
    mat2 direct = rm.field_on_cone(X);
    double sx, sz;
    rm.s_cone_grad(X, sx, sz);
    double Dq = 1.0 + sx - g * sz;
    double E = 1.0 + d0 * sx - (1.0 + g * d0) * sz;
    mat2 via{(1.0 + g * E) / Dq, g, E / Dq, 1.0};
    CHECK(mat_dev(direct, via) < 1e-11);
    CHECK(is_spd(field_Pc_reg(rm, X)));
  }
  CHECK(mat_dev(field_Pc_reg(rm, {0.0, 0.0}), mat2::identity()) < 1e-12);

  // Shear appears only through the first argument: freezing eps at zero
  // makes the determinant identically one.
  regularized_map frozen = rm;
  frozen.epsilon = 0.0;
  for (int n = 0; n < 20; ++n) {
    double xt = rng.uniform(0.05, 0.5);
    CHECK(frozen.jac_TS_reg({xt, 0.5 * xt}).det() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("coefficient dispatch by name") {
  auto q = curved_profile();
  auto rm = build_regularized_map(q);
  CHECK_NOTHROW(coefficient_field("P_c", q));
  CHECK_NOTHROW(coefficient_field("P_c_reg", q, &rm));
  CHECK_THROWS_AS(coefficient_field("P_c_reg", q), error);
  CHECK_THROWS_AS(coefficient_field("nope", q), error);
  auto f = coefficient_field("P_w", q);
  CHECK(is_spd(f({-2.0, 0.1})));
}
