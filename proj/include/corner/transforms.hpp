#pragma once
#include <cmath>

#include "corner/profile.hpp"

namespace corner {

struct vec2 {
  double x = 0.0, z = 0.0;
};

// Small 2x2 matrix. The straightening maps use the row-vector convention
// X_out = X_in * J, so entry (i,j) of a Jacobian is d(out_j)/d(in_i) and
// Jacobians of composed maps multiply left to right.
struct mat2 {
  double a00 = 0.0, a01 = 0.0, a10 = 0.0, a11 = 0.0;

  static mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  double det() const { return a00 * a11 - a01 * a10; }
  mat2 transpose() const { return {a00, a10, a01, a11}; }
  mat2 inverse() const {
    double dd = det();
    return {a11 / dd, -a01 / dd, -a10 / dd, a00 / dd};
  }
  mat2 operator*(const mat2& o) const {
    return {a00 * o.a00 + a01 * o.a10, a00 * o.a01 + a01 * o.a11,
            a10 * o.a00 + a11 * o.a10, a10 * o.a01 + a11 * o.a11};
  }
  mat2 operator-(const mat2& o) const { return {a00 - o.a00, a01 - o.a01, a10 - o.a10, a11 - o.a11}; }
  mat2 operator+(const mat2& o) const { return {a00 + o.a00, a01 + o.a01, a10 + o.a10, a11 + o.a11}; }
  mat2 operator*(double s) const { return {a00 * s, a01 * s, a10 * s, a11 * s}; }
};

// Row-vector action: (x z) * M.
inline vec2 operator*(const vec2& v, const mat2& m) {
  return {v.x * m.a00 + v.z * m.a10, v.x * m.a01 + v.z * m.a11};
}

// Straightening maps between the charts:
//   S      reference wedge {0 <= z~ <= x~} with slanted top, flat image of Omega near the corner
//   K      cone {-gamma x <= z <= eta'(0) x}
//   Omega  physical fluid domain
//   R      flat strip [x_delta, inf) x [0,1]
//
// map_TS : S -> Omega straightens the surface, map_T0 : K -> S is the linear
// corner normalization, map_Tc = map_TS o map_T0 : K -> Omega.

vec2 map_TS(const surface_profile& p, vec2 Xt);
vec2 map_TS_inv(const surface_profile& p, vec2 Xb);

// Row-Jacobian of T_S^{-1} evaluated at z~ = ztilde (equals gamma x + z in
// cone coordinates): [[1 + gamma d, gamma], [d, 1]].
mat2 jac_PS(const surface_profile& p, double ztilde);

// Linear map T_0 : X~ = X P_0 with P_0 = jac_PS at 0; det P_0 = 1.
mat2 jac_P0(const surface_profile& p);
vec2 map_T0(const surface_profile& p, vec2 X);
vec2 map_T0_inv(const surface_profile& p, vec2 Xt);

vec2 map_Tc(const surface_profile& p, vec2 X);
vec2 map_Tc_inv(const surface_profile& p, vec2 Xb);

// Strip chart: T_R(x, z) = (x, eta(x) z + l(x)(1-z)) for z in [0,1].
vec2 map_TR(const surface_profile& p, vec2 X);
vec2 map_TR_inv(const surface_profile& p, vec2 Xb);

// Row-Jacobian of T_R^{-1} composed with T_R, at strip coordinates (x, z).
mat2 jac_Pr(const surface_profile& p, double x, double z);

}  // namespace corner
