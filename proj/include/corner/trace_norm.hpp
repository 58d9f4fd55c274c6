#pragma once
#include <vector>

namespace corner {

// Norms of boundary-ray data sampled on a uniform grid in t = ln r.

// integral r^p |f|^2 dr.
double ray_weighted_l2(const std::vector<double>& tg, const std::vector<double>& f, double p);

// double integral W(r,rho) |f(r)-f(rho)|^2 / |r-rho|^2 drho dr, with
// W = r^p as written, or the symmetric variant (r rho)^{p/2}. The diagonal
// band (one grid cell each side) is excluded and replaced by a midpoint
// derivative estimate, which converges at first order in the grid step.
double ray_frac_seminorm(const std::vector<double>& tg, const std::vector<double>& f,
                         double p, bool symmetric = false);

// Weighted trace norm of order l - 1/2:
//   sum_{j <= l-1} [ integral r^{2(beta-l)+1} |(r d/dr)^j f|^2 dr
//                  + frac seminorm of (r d/dr)^j f with weight r^{2(beta-l)+2} ].
double trace_norm(const std::vector<double>& tg, const std::vector<double>& f, int l,
                  double beta, bool symmetric = false);

// Plain fractional Sobolev norm H^{l-1/2} of the ray function (l = 1 or 2),
// measured in the radial variable.
double ray_sobolev_half(const std::vector<double>& tg, const std::vector<double>& f, int l);

// Axial boundary norm ||e^{beta t} f||_{H^{l-1/2}} in the t variable.
double wnorm_ray(const std::vector<double>& tg, const std::vector<double>& f, int l,
                 double beta);

}  // namespace corner
