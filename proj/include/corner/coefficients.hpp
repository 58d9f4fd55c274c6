#pragma once
#include <functional>
#include <string>

#include "corner/regularized.hpp"
#include "corner/transforms.hpp"

namespace corner {

// Coefficient matrices of the straightened elliptic operators. Each field is
// the symmetric matrix A in div(A grad u) on its chart:
//   cone chart    P_c  = (P0^{-1})^t P_S^t P_S P0^{-1}, identity at the corner
//   flat strip    P_R  = P_r^t P_r
//   polar/strip   P_w(t,theta) = R(theta)^t P_c(e^t, theta) R(theta)
// field_PS and field_P0 expose the (non-symmetrized) Jacobian factors.

mat2 field_P0(const surface_profile& p);
mat2 field_PS(const surface_profile& p, double ztilde);
mat2 field_Pc(const surface_profile& p, vec2 X);            // X in cone coordinates
mat2 field_PR(const surface_profile& p, double x, double z);  // strip coords, z in [0,1]
mat2 field_Pw(const surface_profile& p, double t, double theta);

// Smoothed-map versions.
mat2 field_PS_reg(const regularized_map& rm, vec2 X);  // Jacobian factor at cone point
mat2 field_Pc_reg(const regularized_map& rm, vec2 X);
mat2 field_Pw_reg(const regularized_map& rm, double t, double theta);

// Conjugation by the rotation R(theta) = [[cos, -sin], [sin, cos]].
mat2 rotate_coeff(const mat2& A, double theta);

bool is_spd(const mat2& A, double tol = 1e-12);

// Name-based dispatch onto a point evaluator; kinds: P_S, P_0, P_c, P_R,
// P_S_reg, P_c_reg, P_w, P_w_reg. For P_S the point's z component is ztilde;
// for P_w kinds the point is (t, theta).
std::function<mat2(vec2)> coefficient_field(const std::string& kind,
                                            const surface_profile& p,
                                            const regularized_map* rm = nullptr);

}  // namespace corner
