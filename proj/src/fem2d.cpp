#include "corner/fem2d.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "corner/errors.hpp"
#include "corner/numerics.hpp"

namespace corner {

namespace {

// 1D Lagrange shapes on the reference cell [0, 1].
void shapes(int p, double xi, double N[3], double dN[3]) {
  if (p == 1) {
    N[0] = 1.0 - xi;
    N[1] = xi;
    dN[0] = -1.0;
    dN[1] = 1.0;
  } else {
    N[0] = (1.0 - xi) * (1.0 - 2.0 * xi);
    N[1] = 4.0 * xi * (1.0 - xi);
    N[2] = xi * (2.0 * xi - 1.0);
    dN[0] = 4.0 * xi - 3.0;
    dN[1] = 4.0 - 8.0 * xi;
    dN[2] = 4.0 * xi - 1.0;
  }
}

std::vector<double> node_lines(const std::vector<double>& br, int p) {
  std::vector<double> out;
  int ne = static_cast<int>(br.size()) - 1;
  for (int e = 0; e < ne; ++e)
    for (int q = 0; q < p; ++q)
      out.push_back(br[e] + (br[e + 1] - br[e]) * q / p);
  out.push_back(br.back());
  return out;
}

int find_cell(const std::vector<double>& br, double x) {
  int i = static_cast<int>(std::upper_bound(br.begin(), br.end(), x) - br.begin()) - 1;
  return std::clamp(i, 0, static_cast<int>(br.size()) - 2);
}

struct gauss3 {
  double x[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
  double w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
};

}  // namespace

double fem_solution::eval(double x, double y) const {
  int ex = find_cell(xb, x), ey = find_cell(yb, y);
  double xi = (x - xb[ex]) / (xb[ex + 1] - xb[ex]);
  double et = (y - yb[ey]) / (yb[ey + 1] - yb[ey]);
  double Nx[3], dNx[3], Ny[3], dNy[3];
  shapes(degree, xi, Nx, dNx);
  shapes(degree, et, Ny, dNy);
  double s = 0.0;
  int ny = static_cast<int>(yn.size());
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; b <= degree; ++b)
      s += Nx[a] * Ny[b] * u[static_cast<std::size_t>(degree * ex + a) * ny + degree * ey + b];
  return s;
}

double fem_solution::eval_dx(double x, double y) const {
  int ex = find_cell(xb, x), ey = find_cell(yb, y);
  double hx = xb[ex + 1] - xb[ex];
  double xi = (x - xb[ex]) / hx;
  double et = (y - yb[ey]) / (yb[ey + 1] - yb[ey]);
  double Nx[3], dNx[3], Ny[3], dNy[3];
  shapes(degree, xi, Nx, dNx);
  shapes(degree, et, Ny, dNy);
  double s = 0.0;
  int ny = static_cast<int>(yn.size());
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; b <= degree; ++b)
      s += (dNx[a] / hx) * Ny[b] *
           u[static_cast<std::size_t>(degree * ex + a) * ny + degree * ey + b];
  return s;
}

double fem_solution::eval_dy(double x, double y) const {
  int ex = find_cell(xb, x), ey = find_cell(yb, y);
  double hy = yb[ey + 1] - yb[ey];
  double xi = (x - xb[ex]) / (xb[ex + 1] - xb[ex]);
  double et = (y - yb[ey]) / hy;
  double Nx[3], dNx[3], Ny[3], dNy[3];
  shapes(degree, xi, Nx, dNx);
  shapes(degree, et, Ny, dNy);
  double s = 0.0;
  int ny = static_cast<int>(yn.size());
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; b <= degree; ++b)
      s += Nx[a] * (dNy[b] / hy) *
           u[static_cast<std::size_t>(degree * ex + a) * ny + degree * ey + b];
  return s;
}

std::vector<double> uniform_breaks(double a, double b, int n_elem) {
  return linspace(a, b, n_elem + 1);
}

std::vector<double> graded_breaks(double a, double b, int n_elem, double grade) {
  std::vector<double> out(n_elem + 1);
  for (int i = 0; i <= n_elem; ++i)
    out[i] = a + (b - a) * std::pow(double(i) / n_elem, grade);
  return out;
}

fem_solution fem_solve(const fem_problem& pb) {
  require(pb.degree == 1 || pb.degree == 2, "fem_solve: degree must be 1 or 2");
  require(pb.xb.size() >= 2 && pb.yb.size() >= 2, "fem_solve: need at least one element");
  for (std::size_t i = 0; i + 1 < pb.xb.size(); ++i)
    require(pb.xb[i + 1] > pb.xb[i], "fem_solve: x breakpoints must increase");
  for (std::size_t i = 0; i + 1 < pb.yb.size(); ++i)
    require(pb.yb[i + 1] > pb.yb[i], "fem_solve: y breakpoints must increase");
  require(static_cast<bool>(pb.A), "fem_solve: missing coefficient field");

  int p = pb.degree;
  int nex = static_cast<int>(pb.xb.size()) - 1, ney = static_cast<int>(pb.yb.size()) - 1;
  std::vector<double> xn = node_lines(pb.xb, p), yn = node_lines(pb.yb, p);
  int nx = static_cast<int>(xn.size()), ny = static_cast<int>(yn.size());
  int ndof = nx * ny;
  auto idx = [&](int i, int j) { return i * ny + j; };

  bool floating = pb.left.kind != "dirichlet" && pb.right.kind != "dirichlet" &&
                  pb.bottom.kind != "dirichlet" && pb.top.kind != "dirichlet";
  int nsys = ndof + ((floating && pb.pin_if_floating) ? 1 : 0);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(nex) * ney * (p + 1) * (p + 1) * (p + 1) * (p + 1));
  Eigen::VectorXd b = Eigen::VectorXd::Zero(nsys);
  std::vector<double> mass(floating && pb.pin_if_floating ? ndof : 0, 0.0);

  gauss3 g;
  int nl = (p + 1) * (p + 1);
  std::vector<int> loc(nl);
  std::vector<double> Ke(nl * nl), be(nl);

  for (int ex = 0; ex < nex; ++ex) {
    double hx = pb.xb[ex + 1] - pb.xb[ex];
    for (int ey = 0; ey < ney; ++ey) {
      double hy = pb.yb[ey + 1] - pb.yb[ey];
      int c = 0;
      for (int a = 0; a <= p; ++a)
        for (int bb = 0; bb <= p; ++bb) loc[c++] = idx(p * ex + a, p * ey + bb);
      std::fill(Ke.begin(), Ke.end(), 0.0);
      std::fill(be.begin(), be.end(), 0.0);
      for (int qx = 0; qx < 3; ++qx) {
        double xi = 0.5 * (1.0 + g.x[qx]);
        double xq = pb.xb[ex] + hx * xi;
        for (int qy = 0; qy < 3; ++qy) {
          double et = 0.5 * (1.0 + g.x[qy]);
          double yq = pb.yb[ey] + hy * et;
          double wq = 0.25 * g.w[qx] * g.w[qy] * hx * hy;
          mat2 A = pb.A(xq, yq);
          double sq = pb.source ? pb.source(xq, yq) : 0.0;
          double Nx[3], dNx[3], Ny[3], dNy[3];
          shapes(p, xi, Nx, dNx);
          shapes(p, et, Ny, dNy);
          double gx[9], gy[9], ph[9];
          int c2 = 0;
          for (int a = 0; a <= p; ++a)
            for (int bb = 0; bb <= p; ++bb) {
              ph[c2] = Nx[a] * Ny[bb];
              gx[c2] = (dNx[a] / hx) * Ny[bb];
              gy[c2] = Nx[a] * (dNy[bb] / hy);
              ++c2;
            }
          for (int a = 0; a < nl; ++a) {
            double Agx = A.a00 * gx[a] + A.a01 * gy[a];
            double Agy = A.a10 * gx[a] + A.a11 * gy[a];
            for (int bb = 0; bb < nl; ++bb)
              Ke[a * nl + bb] += wq * (Agx * gx[bb] + Agy * gy[bb]);
            be[a] -= wq * sq * ph[a];
            if (!mass.empty()) mass[loc[a]] += wq * ph[a];
          }
        }
      }
      for (int a = 0; a < nl; ++a) {
        b[loc[a]] += be[a];
        for (int bb = 0; bb < nl; ++bb)
          trip.emplace_back(loc[a], loc[bb], Ke[a * nl + bb]);
      }
    }
  }

  // Boundary flux loads, 3-point Gauss per edge segment.
  auto add_flux = [&](const fem_bc& bc, bool along_x, bool at_low) {
    if (bc.kind != "flux" || !bc.value) return;
    const std::vector<double>& br = along_x ? pb.xb : pb.yb;
    int ne = static_cast<int>(br.size()) - 1;
    for (int e = 0; e < ne; ++e) {
      double h = br[e + 1] - br[e];
      for (int q = 0; q < 3; ++q) {
        double xi = 0.5 * (1.0 + g.x[q]);
        double sq = br[e] + h * xi;
        double wq = 0.5 * g.w[q] * h * bc.value(sq);
        double N[3], dN[3];
        shapes(p, xi, N, dN);
        for (int a = 0; a <= p; ++a) {
          int i, j;
          if (along_x) {
            i = p * e + a;
            j = at_low ? 0 : ny - 1;
          } else {
            i = at_low ? 0 : nx - 1;
            j = p * e + a;
          }
          b[idx(i, j)] += wq * N[a];
        }
      }
    }
  };
  add_flux(pb.bottom, true, true);
  add_flux(pb.top, true, false);
  add_flux(pb.left, false, true);
  add_flux(pb.right, false, false);

  // Dirichlet rows replace everything else at their nodes.
  std::vector<char> fixed(ndof, 0);
  std::vector<double> fixval(ndof, 0.0);
  auto pin_side = [&](const fem_bc& bc, bool along_x, bool at_low) {
    if (bc.kind != "dirichlet") return;
    require(static_cast<bool>(bc.value), "fem_solve: dirichlet side without values");
    int count = along_x ? nx : ny;
    for (int k = 0; k < count; ++k) {
      int i = along_x ? k : (at_low ? 0 : nx - 1);
      int j = along_x ? (at_low ? 0 : ny - 1) : k;
      double s = along_x ? xn[k] : yn[k];
      fixed[idx(i, j)] = 1;
      fixval[idx(i, j)] = bc.value(s);
    }
  };
  pin_side(pb.bottom, true, true);
  pin_side(pb.top, true, false);
  pin_side(pb.left, false, true);
  pin_side(pb.right, false, false);

  std::vector<Eigen::Triplet<double>> trip2;
  trip2.reserve(trip.size() + ndof);
  for (auto& t : trip)
    if (!fixed[t.row()]) trip2.push_back(t);
  for (int d = 0; d < ndof; ++d)
    if (fixed[d]) {
      trip2.emplace_back(d, d, 1.0);
      b[d] = fixval[d];
    }
  if (floating && pb.pin_if_floating) {
    for (int d = 0; d < ndof; ++d) {
      trip2.emplace_back(ndof, d, mass[d]);
      trip2.emplace_back(d, ndof, mass[d]);
    }
    b[ndof] = 0.0;
  }

  Eigen::SparseMatrix<double> K(nsys, nsys);
  K.setFromTriplets(trip2.begin(), trip2.end());
  K.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(K);
  lu.factorize(K);
  if (lu.info() != Eigen::Success) fail_solver("fem_solve: factorization failed");
  Eigen::VectorXd sol = lu.solve(b);
  double bn = b.norm();
  double res = (K * sol - b).norm() / (bn > 0.0 ? bn : 1.0);
  if (!(res < 1e-8)) fail_solver("fem_solve: linear solve residual too large");

  fem_solution out;
  out.xn = xn;
  out.yn = yn;
  out.xb = pb.xb;
  out.yb = pb.yb;
  out.degree = p;
  out.residual = res;
  out.u.assign(ndof, 0.0);
  for (int d = 0; d < ndof; ++d) out.u[d] = sol[d];
  return out;
}

}  // namespace corner
