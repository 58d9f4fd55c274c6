#include "corner/coefficients.hpp"

#include <cmath>

#include "corner/errors.hpp"

namespace corner {

mat2 field_P0(const surface_profile& p) { return jac_P0(p); }

mat2 field_PS(const surface_profile& p, double ztilde) { return jac_PS(p, ztilde); }

mat2 field_Pc(const surface_profile& p, vec2 X) {
  // The Jacobian factor sits at the straightened image of X, whose second
  // coordinate is (X P0).z.
  mat2 P0 = jac_P0(p);
  mat2 Ps = jac_PS(p, (X * P0).z);
  mat2 P0i = P0.inverse();
  return P0i.transpose() * Ps.transpose() * Ps * P0i;
}

mat2 field_PR(const surface_profile& p, double x, double z) {
  mat2 Pr = jac_Pr(p, x, z);
  return Pr.transpose() * Pr;
}

mat2 rotate_coeff(const mat2& A, double theta) {
  double c = std::cos(theta), s = std::sin(theta);
  mat2 R{c, -s, s, c};
  return R.transpose() * A * R;
}

mat2 field_Pw(const surface_profile& p, double t, double theta) {
  double r = std::exp(t);
  return rotate_coeff(field_Pc(p, {r * std::cos(theta), r * std::sin(theta)}), theta);
}

mat2 field_PS_reg(const regularized_map& rm, vec2 X) { return rm.field_on_cone(X); }

mat2 field_Pc_reg(const regularized_map& rm, vec2 X) {
  mat2 Ps = rm.field_on_cone(X);
  mat2 P0i = rm.P0_reg.inverse();
  return P0i.transpose() * Ps.transpose() * Ps * P0i;
}

mat2 field_Pw_reg(const regularized_map& rm, double t, double theta) {
  double r = std::exp(t);
  return rotate_coeff(field_Pc_reg(rm, {r * std::cos(theta), r * std::sin(theta)}), theta);
}

bool is_spd(const mat2& A, double tol) {
  if (std::abs(A.a01 - A.a10) > tol * (1.0 + std::abs(A.a01))) return false;
  return A.a00 > 0.0 && A.det() > 0.0;
}

std::function<mat2(vec2)> coefficient_field(const std::string& kind,
                                            const surface_profile& p,
                                            const regularized_map* rm) {
  auto check_corner = [](const mat2& A, const std::string& k) {
    double dev = std::abs(A.a00 - 1.0) + std::abs(A.a01) + std::abs(A.a10) + std::abs(A.a11 - 1.0);
    if (dev > 1e-10) fail_solver(k + ": corner value deviates from identity");
  };
  if (kind == "P_0") return [p](vec2) { return field_P0(p); };
  if (kind == "P_S") return [p](vec2 X) { return field_PS(p, X.z); };
  if (kind == "P_c") {
    check_corner(field_Pc(p, {0.0, 0.0}), kind);
    return [p](vec2 X) { return field_Pc(p, X); };
  }
  if (kind == "P_R") return [p](vec2 X) { return field_PR(p, X.x, X.z); };
  if (kind == "P_w") return [p](vec2 X) { return field_Pw(p, X.x, X.z); };
  if (kind == "P_S_reg" || kind == "P_c_reg" || kind == "P_w_reg") {
    require(rm != nullptr, "coefficient_field: " + kind + " needs the smoothed map");
    regularized_map m = *rm;
    if (kind == "P_S_reg") return [m](vec2 X) { return field_PS_reg(m, X); };
    if (kind == "P_c_reg") {
      check_corner(field_Pc_reg(m, {0.0, 0.0}), kind);
      return [m](vec2 X) { return field_Pc_reg(m, X); };
    }
    return [m](vec2 X) { return field_Pw_reg(m, X.x, X.z); };
  }
  fail_pre("unknown coefficient kind: " + kind);
}

}  // namespace corner
