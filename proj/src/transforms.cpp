#include "corner/transforms.hpp"

namespace corner {

vec2 map_TS(const surface_profile& p, vec2 Xt) {
  double xb = Xt.x + p.etabar_inv(Xt.z) - Xt.z;
  return {xb, Xt.z - p.gamma * xb};
}

vec2 map_TS_inv(const surface_profile& p, vec2 Xb) {
  double zt = p.gamma * Xb.x + Xb.z;
  return {Xb.x - p.etabar_inv(zt) + zt, zt};
}

mat2 jac_PS(const surface_profile& p, double ztilde) {
  double d = p.d_of(ztilde);
  return {1.0 + p.gamma * d, p.gamma, d, 1.0};
}

mat2 jac_P0(const surface_profile& p) { return jac_PS(p, 0.0); }

vec2 map_T0(const surface_profile& p, vec2 X) { return X * jac_P0(p); }

vec2 map_T0_inv(const surface_profile& p, vec2 Xt) { return Xt * jac_P0(p).inverse(); }

vec2 map_Tc(const surface_profile& p, vec2 X) { return map_TS(p, map_T0(p, X)); }

vec2 map_Tc_inv(const surface_profile& p, vec2 Xb) { return map_T0_inv(p, map_TS_inv(p, Xb)); }

vec2 map_TR(const surface_profile& p, vec2 X) {
  return {X.x, p.eta(X.x) * X.z + p.l(X.x) * (1.0 - X.z)};
}

vec2 map_TR_inv(const surface_profile& p, vec2 Xb) {
  double depth = p.eta(Xb.x) - p.l(Xb.x);
  return {Xb.x, (Xb.z - p.l(Xb.x)) / depth};
}

mat2 jac_Pr(const surface_profile& p, double x, double z) {
  double depth = p.eta(x) - p.l(x);
  double slope = p.eta_d(x, 1) + p.gamma;  // eta' - l'
  double lp = -p.gamma;
  return {1.0, -(slope * z + lp) / depth, 0.0, 1.0 / depth};
}

}  // namespace corner
