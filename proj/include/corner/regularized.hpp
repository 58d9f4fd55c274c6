#pragma once
#include "corner/spline.hpp"
#include "corner/transforms.hpp"

namespace corner {

// Smoothed variant of the corner straightening. The slanted-edge shift
// etabar_inv(z~) - z~ of map_TS is replaced by s~(eps x~ + (1-eps) z~, z~) - z~,
// where s~ is the harmonic extension into the reference wedge {0 <= z~ <= x~}
// of the edge trace beta(x~) etabar_inv(x~) (beta a radial cutoff), with a
// reflection condition on the bottom edge. The extension is solved once in
// log-polar coordinates, where the wedge becomes a rectangle, and stored as a
// bicubic patch. The shear parameter eps keeps the map invertible:
// det of the forward Jacobian is exactly 1 + eps d(s~)/dx~.
struct regularized_map {
  surface_profile prof;
  double epsilon = 0.25;
  double sigma_min = -16.0, sigma_max = 0.0;
  double L = 1.0;       // outer radius of the stored extension
  double d0 = 0.0;      // d(0) of the profile
  mat2 P0;              // corner matrix of the linear cone -> wedge map
  mat2 P0_reg;          // corner value of the smoothed-edge Jacobian factor
  bicubic st;           // s~ over (sigma, phi) in [sigma_min, sigma_max] x [0, pi/4]

  double stilde(double xt, double zt) const;
  // Cartesian partials of s~ at a wedge point.
  void stilde_grad(double xt, double zt, double& s1, double& s2) const;

  vec2 map_TS_reg(vec2 Xt) const;
  vec2 map_TS_reg_inv(vec2 Xb) const;  // 2D Newton from the unsmoothed inverse
  // Row-Jacobian of the forward map at a wedge point.
  mat2 jac_TS_reg(vec2 Xt) const;
  // Inverse-map Jacobian factor at a wedge point (the analogue of jac_PS).
  mat2 jac_PS_reg(vec2 Xt) const;

  vec2 map_Tc_reg(vec2 X) const { return map_TS_reg(map_T0(prof, X)); }
  vec2 map_Tc_reg_inv(vec2 Xb) const { return map_T0_inv(prof, map_TS_reg_inv(Xb)); }

  // Scalar s composed onto the cone, s(X) = s~((X P0) P_eps), and its gradient.
  double s_cone(vec2 X) const;
  void s_cone_grad(vec2 X, double& sx, double& sz) const;

  // jac_PS_reg pulled back to a cone point (evaluated at X P0).
  mat2 field_on_cone(vec2 X) const { return jac_PS_reg(map_T0(prof, X)); }
};

struct regularized_options {
  double cutoff_r0 = 0.0;   // edge-trace cutoff start; 0 selects it from delta
  double cutoff_r1 = 0.0;   // cutoff end
  double epsilon_cap = 0.25;
  int n_sigma = 361;
  int n_phi = 33;
  double sigma_min = -16.0;
};

regularized_map build_regularized_map(const surface_profile& p,
                                      const regularized_options& opt = {});

}  // namespace corner
