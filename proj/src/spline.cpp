#include "corner/spline.hpp"

namespace corner {

namespace {

// Hermite basis change on the unit interval.
constexpr double M[4][4] = {
    {1, 0, 0, 0}, {0, 0, 1, 0}, {-3, 3, -2, -1}, {2, -2, 1, 1}};

double poly_deriv(double u, double c0, double c1, double c2, double c3, int k) {
  switch (k) {
    case 0: return c0 + u * (c1 + u * (c2 + u * c3));
    case 1: return c1 + u * (2.0 * c2 + 3.0 * u * c3);
    case 2: return 2.0 * c2 + 6.0 * u * c3;
    case 3: return 6.0 * c3;
    default: return 0.0;
  }
}

}  // namespace

void bicubic::build(const std::vector<double>& gx, const std::vector<double>& gy,
                    const std::vector<double>& f) {
  nx = static_cast<int>(gx.size());
  ny = static_cast<int>(gy.size());
  require(nx >= 2 && ny >= 2, "bicubic: need at least a 2x2 grid");
  require(f.size() == static_cast<std::size_t>(nx) * ny, "bicubic: value size mismatch");
  xs = gx;
  ys = gy;

  // Nodal derivatives via 1D splines: fx along rows of constant y, fy along
  // columns of constant x, fxy by differentiating fy along x.
  std::vector<double> fx(f.size()), fy(f.size()), fxy(f.size());
  std::vector<double> tmp(std::max(nx, ny));
  for (int i = 0; i < nx; ++i) {
    std::vector<double> col(f.begin() + static_cast<std::size_t>(i) * ny,
                            f.begin() + static_cast<std::size_t>(i + 1) * ny);
    spline sp(ys, col);
    for (int j = 0; j < ny; ++j) fy[static_cast<std::size_t>(i) * ny + j] = sp.deriv(ys[j]);
  }
  for (int j = 0; j < ny; ++j) {
    std::vector<double> row(nx), rowy(nx);
    for (int i = 0; i < nx; ++i) {
      row[i] = f[static_cast<std::size_t>(i) * ny + j];
      rowy[i] = fy[static_cast<std::size_t>(i) * ny + j];
    }
    spline sp(xs, row), spy(xs, rowy);
    for (int i = 0; i < nx; ++i) {
      fx[static_cast<std::size_t>(i) * ny + j] = sp.deriv(xs[i]);
      fxy[static_cast<std::size_t>(i) * ny + j] = spy.deriv(xs[i]);
    }
  }

  cells.assign(static_cast<std::size_t>(nx - 1) * (ny - 1), {});
  for (int i = 0; i < nx - 1; ++i) {
    double hx = xs[i + 1] - xs[i];
    for (int j = 0; j < ny - 1; ++j) {
      double hy = ys[j + 1] - ys[j];
      auto at = [&](const std::vector<double>& g, int di, int dj) {
        return g[static_cast<std::size_t>(i + di) * ny + (j + dj)];
      };
      // Corner data in unit-square scaling.
      double F[4][4] = {
          {at(f, 0, 0), at(f, 0, 1), hy * at(fy, 0, 0), hy * at(fy, 0, 1)},
          {at(f, 1, 0), at(f, 1, 1), hy * at(fy, 1, 0), hy * at(fy, 1, 1)},
          {hx * at(fx, 0, 0), hx * at(fx, 0, 1), hx * hy * at(fxy, 0, 0), hx * hy * at(fxy, 0, 1)},
          {hx * at(fx, 1, 0), hx * at(fx, 1, 1), hx * hy * at(fxy, 1, 0), hx * hy * at(fxy, 1, 1)}};
      auto& a = cells[static_cast<std::size_t>(i) * (ny - 1) + j];
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
          double s = 0.0;
          for (int p = 0; p < 4; ++p)
            for (int q = 0; q < 4; ++q) s += M[m][p] * F[p][q] * M[n][q];
          a[m * 4 + n] = s;
        }
    }
  }
}

double bicubic::deriv(double xq, double yq, int kx, int ky) const {
  int i = static_cast<int>(std::upper_bound(xs.begin(), xs.end(), xq) - xs.begin()) - 1;
  int j = static_cast<int>(std::upper_bound(ys.begin(), ys.end(), yq) - ys.begin()) - 1;
  i = std::clamp(i, 0, nx - 2);
  j = std::clamp(j, 0, ny - 2);
  double hx = xs[i + 1] - xs[i], hy = ys[j + 1] - ys[j];
  double u = (xq - xs[i]) / hx, v = (yq - ys[j]) / hy;
  const auto& a = cells[static_cast<std::size_t>(i) * (ny - 1) + j];
  // Contract v first, then u.
  double cu[4];
  for (int m = 0; m < 4; ++m)
    cu[m] = poly_deriv(v, a[m * 4 + 0], a[m * 4 + 1], a[m * 4 + 2], a[m * 4 + 3], ky);
  double val = poly_deriv(u, cu[0], cu[1], cu[2], cu[3], kx);
  return val / (std::pow(hx, kx) * std::pow(hy, ky));
}

}  // namespace corner
