#pragma once
#include <functional>
#include <memory>
#include <string>

#include "corner/cone_patch.hpp"
#include "corner/strip_solver.hpp"

namespace corner {

// Physical data for the corner-domain problem. h is the interior source at
// physical points, f runs along the surface z = eta(x) and g along the bottom
// ray z = -gamma x, both indexed by x. kind picks the pairing: "mixed" takes
// surface values and bottom conormal flux, "dirichlet" values on both sides,
// "neumann" fluxes on both sides. Empty functions mean zero. Data are assumed
// to vanish within a couple of units of the far truncation edge.
struct bvp_data {
  std::string kind = "mixed";
  std::function<double(double, double)> h;
  std::function<double(double)> f, g;
};

// Approximate solution field feeding the cutoff commutator terms of the
// corner/strip splitting.
struct approx_field {
  std::function<double(double, double)> u;
  std::function<vec2(double, double)> grad;
};

// The split problem: corner piece as physical cone data for the patch solver
// (already pulled through the corner chart), strip piece as physical data for
// the complement solve.
struct split_data {
  wedge_data cone;
  strip_data strip;
};

// Splits the data against the cutoff pair: the corner piece carries
//   chi h + (lap chi) u + 2 grad chi . grad u
// with chi radial, so the bottom ray sees no flux commutator (the radial
// direction is tangent there); the strip piece carries the complement with
// the commutators negated. Interior and edge cone data are tabulated over
// about nine log-units below the patch radius and interpolated; source mass
// below that floor is dropped. When rm is given the pullbacks run through the
// smoothed chart instead.
split_data localize(const surface_profile& p, const bvp_data& d,
                    const cutoff_spec& cut, const approx_field& u,
                    const regularized_map* rm = nullptr);

// Interior mass minus boundary flux over the domain truncated at x_max, with
// the fixed quadrature that seeded data families also use when adjusting
// all-flux data for compatibility. Zero (to quadrature accuracy) is the
// solvability condition of the all-flux pairing.
double flux_balance(const surface_profile& p, const bvp_data& d, double x_max);

struct full_options {
  patch_options patch;
  strip_options strip;  // complement solve
  strip_options mono;   // monolithic reference/seed solve
  int passes = 1;       // additional passes refresh the commutators from the assembled field
  bool use_regularized = false;

  full_options() {
    strip.n_x = 256;
    strip.n_z = 48;
    strip.grade = 3.0;
    mono = strip;
  }
};

struct full_solution {
  std::string kind;
  int l = 2;
  double beta = 0.0;          // weight offset of the requested estimate
  double beta_contour = 0.0;  // inversion contour used for the corner piece
  surface_profile prof;
  cutoff_spec cut;
  patch_solution cone;   // chi_c-localized piece on the corner chart
  strip_solution strip;  // complement piece
  strip_solution mono;   // independent single-grid solve of the same problem
  double overlap_mismatch = 0.0;  // assembled vs monolithic, matching annulus

  // Assembled field v_c + v_R at a physical point (the corner piece carries
  // its cutoff already), and its gradient by differences whose stencils stay
  // inside the domain.
  double eval(double xb, double zb) const;
  vec2 eval_grad(double xb, double zb) const;

  // assembly internals
  bicubic cone_w;
  double cone_t_lo = 0.0, cone_t_hi = 0.0;
  std::shared_ptr<const regularized_map> rmap;  // set when the smoothed chart was used
};

// Corner-domain solve targeting the weighted estimate with derivative order l
// and weight offset beta (solution weight l-2+beta for the mixed pairing,
// l-1+beta for the one-sided pairings; the corner contour follows from it).
// Checks angle admissibility and data compatibility (corner match of values
// for "dirichlet", total flux balance for "neumann"), seeds the commutators
// from a monolithic graded solve, then splits and solves corner and strip
// pieces, refreshing the split from the assembled field passes-1 times.
full_solution solve_full(const surface_profile& p, const bvp_data& d, int l,
                         double beta, const full_options& opt = {});

}  // namespace corner
