#include "corner/regularized.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>

#include "corner/numerics.hpp"

namespace corner {

namespace {
constexpr double kPhiTop = M_PI / 4.0;
}

double regularized_map::stilde(double xt, double zt) const {
  double rho = std::hypot(xt, zt);
  if (rho >= L) return 0.0;
  if (rho < std::exp(sigma_min)) return (1.0 - d0) * xt;  // corner-limit linear mode
  double phi = std::clamp(std::atan2(zt, xt), 0.0, kPhiTop);
  return st.eval(std::log(rho), phi);
}

void regularized_map::stilde_grad(double xt, double zt, double& s1, double& s2) const {
  double rho = std::hypot(xt, zt);
  if (rho >= L) { s1 = s2 = 0.0; return; }
  if (rho < std::exp(sigma_min)) { s1 = 1.0 - d0; s2 = 0.0; return; }
  double phi = std::clamp(std::atan2(zt, xt), 0.0, kPhiTop);
  double sig = std::log(rho);
  double ds = st.deriv(sig, phi, 1, 0), dp = st.deriv(sig, phi, 0, 1);
  // d/dx~ = e^{-sigma}(cos phi d_sigma - sin phi d_phi), likewise for z~.
  double c = std::cos(phi), s = std::sin(phi);
  s1 = (c * ds - s * dp) / rho;
  s2 = (s * ds + c * dp) / rho;
}

vec2 regularized_map::map_TS_reg(vec2 Xt) const {
  double a1 = epsilon * Xt.x + (1.0 - epsilon) * Xt.z;
  double xb = Xt.x + stilde(a1, Xt.z) - Xt.z;
  return {xb, Xt.z - prof.gamma * xb};
}

mat2 regularized_map::jac_TS_reg(vec2 Xt) const {
  double a1 = epsilon * Xt.x + (1.0 - epsilon) * Xt.z;
  double s1, s2;
  stilde_grad(a1, Xt.z, s1, s2);
  double dxb_dxt = 1.0 + epsilon * s1;
  double dxb_dzt = (1.0 - epsilon) * s1 + s2 - 1.0;
  return {dxb_dxt, -prof.gamma * dxb_dxt, dxb_dzt, 1.0 - prof.gamma * dxb_dzt};
}

mat2 regularized_map::jac_PS_reg(vec2 Xt) const { return jac_TS_reg(Xt).inverse(); }

vec2 regularized_map::map_TS_reg_inv(vec2 Xb) const {
  vec2 Xt = map_TS_inv(prof, Xb);  // unsmoothed inverse as the seed
  for (int it = 0; it < 60; ++it) {
    vec2 F = map_TS_reg(Xt);
    double rx = F.x - Xb.x, rz = F.z - Xb.z;
    mat2 Jinv = jac_TS_reg(Xt).inverse();
    // Row convention: dX_in = dX_out * J^{-1}.
    double dx = rx * Jinv.a00 + rz * Jinv.a10;
    double dz = rx * Jinv.a01 + rz * Jinv.a11;
    Xt.x -= dx;
    Xt.z -= dz;
    if (std::abs(dx) + std::abs(dz) < 1e-14 * (1.0 + std::abs(Xt.x))) break;
  }
  return Xt;
}

double regularized_map::s_cone(vec2 X) const {
  vec2 Xt = X * P0;
  double a1 = epsilon * Xt.x + (1.0 - epsilon) * Xt.z;
  return stilde(a1, Xt.z);
}

void regularized_map::s_cone_grad(vec2 X, double& sx, double& sz) const {
  vec2 Xt = X * P0;
  double a1 = epsilon * Xt.x + (1.0 - epsilon) * Xt.z;
  double s1, s2;
  stilde_grad(a1, Xt.z, s1, s2);
  // Chain rule through (X P0) P_eps with P_eps = [[eps, 0], [1-eps, 1]].
  double g1 = epsilon * s1;                      // w.r.t. x~
  double g2 = (1.0 - epsilon) * s1 + s2;         // w.r.t. z~
  sx = P0.a00 * g1 + P0.a01 * g2;
  sz = P0.a10 * g1 + P0.a11 * g2;
}

regularized_map build_regularized_map(const surface_profile& p,
                                      const regularized_options& opt) {
  regularized_map rm;
  rm.prof = p;
  rm.d0 = p.d_of(0.0);
  rm.P0 = jac_P0(p);

  // Trace cutoff open on [0, delta/2], gone at delta; the stored patch keeps
  // a factor of four beyond that so the extension has room to decay before
  // the zero outer edge.
  double r0 = opt.cutoff_r0 > 0.0 ? opt.cutoff_r0 : 0.5 * p.delta;
  double r1 = opt.cutoff_r1 > 0.0 ? opt.cutoff_r1 : p.delta;
  rm.L = 4.0 * r1;
  rm.sigma_min = opt.sigma_min;
  rm.sigma_max = std::log(rm.L);
  cutoff1d beta{r0, r1};

  // Harmonic extension in log-polar coordinates: Laplace on the rectangle
  // [sigma_min, sigma_max] x [0, pi/4], Dirichlet trace on phi = pi/4,
  // reflection on phi = 0 and on the inner edge, zero on the outer edge.
  int ns = opt.n_sigma, np = opt.n_phi;
  require(ns >= 8 && np >= 8, "regularized map: grid too small");
  auto sg = linspace(rm.sigma_min, rm.sigma_max, ns);
  auto pg = linspace(0.0, kPhiTop, np);
  double hs = sg[1] - sg[0], hp = pg[1] - pg[0];
  double ws = 1.0 / (hs * hs), wp = 1.0 / (hp * hp);

  auto idx = [&](int i, int j) { return i * np + j; };
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ns * np);
  for (int i = 0; i < ns; ++i) {
    for (int j = 0; j < np; ++j) {
      int row = idx(i, j);
      if (j == np - 1) {  // Dirichlet trace on the slanted edge
        double xt = std::exp(sg[i]) * std::cos(kPhiTop);
        trip.emplace_back(row, row, 1.0);
        rhs[row] = beta(xt) * p.etabar_inv(xt);
        continue;
      }
      if (i == ns - 1) {  // outer edge
        trip.emplace_back(row, row, 1.0);
        rhs[row] = 0.0;
        continue;
      }
      // 5-point Laplacian; mirrored neighbours realize the reflection edges.
      double diag = -2.0 * ws - 2.0 * wp;
      trip.emplace_back(row, row, diag);
      auto add = [&](int ii, int jj, double w) { trip.emplace_back(row, idx(ii, jj), w); };
      if (i == 0) add(1, j, 2.0 * ws);
      else { add(i - 1, j, ws); add(i + 1, j, ws); }
      if (j == 0) add(i, 1, 2.0 * wp);
      else { add(i, j - 1, wp); add(i, j + 1, wp); }
    }
  }
  Eigen::SparseMatrix<double> A(ns * np, ns * np);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) fail_solver("regularized map: factorization failed");
  Eigen::VectorXd sol = lu.solve(rhs);
  if (lu.info() != Eigen::Success) fail_solver("regularized map: solve failed");

  std::vector<double> vals(static_cast<std::size_t>(ns) * np);
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < np; ++j) vals[idx(i, j)] = sol[idx(i, j)];
  rm.st.build(sg, pg, vals);

  // Shear size from the measured slope bound.
  double smax = 0.0;
  for (int i = 0; i < ns; ++i) {
    for (int j = 0; j < np; ++j) {
      double rho = std::exp(sg[i]);
      double s1, s2;
      rm.stilde_grad(rho * std::cos(pg[j]), rho * std::sin(pg[j]), s1, s2);
      smax = std::max(smax, std::abs(s1));
    }
  }
  rm.epsilon = std::min(opt.epsilon_cap, 1.0 / (2.0 * smax));

  // Corner value of the inverse-Jacobian factor: the extension approaches the
  // linear mode (1 - d0) x~ there, so the gradient limit is (1 - d0, 0).
  {
    double k = 1.0 - rm.d0, g = p.gamma, e = rm.epsilon;
    double D = 1.0 + e * k;
    rm.P0_reg = {(1.0 + g * (1.0 - (1.0 - e) * k)) / D, g,
                 (1.0 - (1.0 - e) * k) / D, 1.0};
  }
  return rm;
}

}  // namespace corner
