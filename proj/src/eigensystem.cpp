#include "corner/eigensystem.hpp"

#include <algorithm>
#include <cmath>

#include "corner/csv.hpp"
#include "corner/errors.hpp"
#include "corner/numerics.hpp"

namespace corner {

namespace {

bool uses_half_integers(const std::string& bc) { return bc == "mixed"; }

double lattice_value(const std::string& bc, double omega, int m) {
  if (uses_half_integers(bc)) return (m + 0.5) * M_PI / omega;
  return m * M_PI / omega;
}

}  // namespace

double eigen_system::eigenfunction(int idx, double theta) const {
  require(idx >= 0 && idx < static_cast<int>(entries.size()), "eigenfunction: bad index");
  double arg = entries[idx].lambda * (theta + omega2);
  if (bc_pair == "dirichlet") return std::sin(arg);
  return std::cos(arg);  // mixed and neumann, including the constant mode
}

eigen_system make_eigensystem(const std::string& bc_pair, double omega1, double omega2,
                              int m_max) {
  require(bc_pair == "mixed" || bc_pair == "dirichlet" || bc_pair == "neumann",
          "make_eigensystem: unknown bc pair");
  double omega = omega1 + omega2;
  require(omega > 0.0 && omega < M_PI, "make_eigensystem: need omega in (0, pi)");
  require(m_max >= 1, "make_eigensystem: need m_max >= 1");

  eigen_system sys;
  sys.bc_pair = bc_pair;
  sys.omega1 = omega1;
  sys.omega2 = omega2;
  sys.omega = omega;

  for (int m = -m_max; m <= m_max; ++m) {
    if (bc_pair == "dirichlet" && m == 0) continue;  // sin(0) is not an eigenfunction
    sys.entries.push_back({m, lattice_value(bc_pair, omega, m)});
  }
  std::sort(sys.entries.begin(), sys.entries.end(),
            [](const eigen_entry& a, const eigen_entry& b) { return a.lambda < b.lambda; });

  // Cross-check every closed-form value against a determinant root. The
  // determinant of the homogeneous angular problem is cos(lambda omega) for
  // the mixed pair and sin(lambda omega) for the one-sided pairs; brackets
  // half a lattice gap wide isolate one simple root each.
  double gap = M_PI / omega;
  bool mixed = uses_half_integers(bc_pair);
  auto det = [&](double lam) { return mixed ? std::cos(lam * omega) : std::sin(lam * omega); };
  auto det_d = [&](double lam) {
    return mixed ? -omega * std::sin(lam * omega) : omega * std::cos(lam * omega);
  };
  for (const auto& e : sys.entries) {
    double root = newton_bisect(det, det_d, e.lambda - 0.45 * gap, e.lambda + 0.45 * gap, 1e-14);
    if (std::abs(root - e.lambda) > 1e-10)
      fail_solver("make_eigensystem: determinant root disagrees with the closed form");
  }
  return sys;
}

double nearest_eigen_distance(const eigen_system& sys, std::complex<double> lambda) {
  double gap = M_PI / sys.omega;
  double shift = uses_half_integers(sys.bc_pair) ? 0.5 : 0.0;
  // Nearest lattice index for the real part, then scan neighbours so the
  // Dirichlet hole at m = 0 is handled.
  double mq = lambda.real() / gap - shift;
  int m0 = static_cast<int>(std::lround(mq));
  double best = 1e300;
  for (int m = m0 - 2; m <= m0 + 2; ++m) {
    if (sys.bc_pair == "dirichlet" && m == 0) continue;
    double lm = (m + shift) * gap;
    best = std::min(best, std::abs(lambda - std::complex<double>(lm, 0.0)));
  }
  return best;
}

std::vector<std::pair<double, double>> admissible_weight_lines(const eigen_system& sys,
                                                               int l, double beta_lo,
                                                               double beta_hi) {
  require(beta_hi > beta_lo, "admissible_weight_lines: empty beta range");
  // The contour Re lambda = -beta + l - 1 hits lambda_m when beta = l - 1 - lambda_m.
  std::vector<double> cuts;
  double gap = M_PI / sys.omega;
  double shift = uses_half_integers(sys.bc_pair) ? 0.5 : 0.0;
  // Enumerate all lattice points whose cut lands inside the range.
  int m_lo = static_cast<int>(std::floor((l - 1 - beta_hi) / gap - shift)) - 1;
  int m_hi = static_cast<int>(std::ceil((l - 1 - beta_lo) / gap - shift)) + 1;
  for (int m = m_lo; m <= m_hi; ++m) {
    if (sys.bc_pair == "dirichlet" && m == 0) continue;
    double b = l - 1 - (m + shift) * gap;
    if (b > beta_lo && b < beta_hi) cuts.push_back(b);
  }
  if (sys.bc_pair == "dirichlet") {
    // lambda = 0 is not an eigenvalue here, but the line through it still
    // cannot be crossed when inverting the transform.
    double b = double(l - 1);
    if (b > beta_lo && b < beta_hi) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             cuts.end());

  std::vector<std::pair<double, double>> out;
  double lo = beta_lo;
  for (double c : cuts) {
    out.push_back({lo, c});
    lo = c;
  }
  out.push_back({lo, beta_hi});
  return out;
}

std::string eigen_csv(const eigen_system& sys) {
  csv_writer w({"m", "lambda", "bc_pair", "omega"});
  for (const auto& e : sys.entries)
    w.add_row_mixed({std::to_string(e.m), csv_writer::fmt(e.lambda), sys.bc_pair,
                     csv_writer::fmt(sys.omega)});
  return w.str();
}

}  // namespace corner
