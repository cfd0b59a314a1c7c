#include "dgviv/refelem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dgviv {

namespace {

constexpr double kNodeTol = 1e-10;

// Alpha values of the optimized warp-and-blend construction, indexed by order.
constexpr std::array<double, 10> kAlphaOpt = {0.0,    0.0,    1.4152, 0.1001, 0.2751,
                                              0.9800, 1.0999, 1.2832, 1.3648, 1.4773};

void check_order(int p) {
  if (p < 1 || p > kMaxOrder)
    throw Error("polynomial order " + std::to_string(p) + " outside supported range [1, " +
                std::to_string(kMaxOrder) + "]");
}

Matrix vandermonde_1d(int n, const Vector& r) {
  Matrix v(r.size(), n + 1);
  for (int j = 0; j <= n; ++j) v.col(j) = jacobi_p(r, 0.0, 0.0, j);
  return v;
}

// Warp function along one edge, blended into the interior by the caller.
Vector warp_factor(int n, const Vector& rout) {
  const Vector lgl = jacobi_gl(0.0, 0.0, n);
  const Vector req = Vector::LinSpaced(n + 1, -1.0, 1.0);
  const Matrix veq = vandermonde_1d(n, req);

  Matrix pmat(n + 1, rout.size());
  for (int i = 0; i <= n; ++i) pmat.row(i) = jacobi_p(rout, 0.0, 0.0, i).transpose();
  const Matrix lmat = veq.transpose().partialPivLu().solve(pmat);
  Vector warp = lmat.transpose() * (lgl - req);

  for (Eigen::Index k = 0; k < rout.size(); ++k) {
    const bool inside = std::abs(rout(k)) < 1.0 - 1e-10;
    if (inside) warp(k) /= 1.0 - rout(k) * rout(k);
  }
  return warp;
}

// Collapsed coordinates of the reference triangle.
void rs_to_ab(const Matrix& points, Vector& a, Vector& b) {
  const auto n = points.rows();
  a.resize(n);
  b.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double r = points(k, 0);
    const double s = points(k, 1);
    a(k) = std::abs(s - 1.0) > 1e-14 ? 2.0 * (1.0 + r) / (1.0 - s) - 1.0 : -1.0;
    b(k) = s;
  }
}

std::vector<std::pair<int, int>> mode_order(int p) {
  std::vector<std::pair<int, int>> modes;
  for (int d = 0; d <= p; ++d)
    for (int i = d; i >= 0; --i) modes.emplace_back(i, d - i);
  return modes;
}

}  // namespace

Vector jacobi_p(const Vector& x, double alpha, double beta, int n) {
  const auto m = x.size();
  Matrix pl(n + 1, m);
  const double gamma0 = std::pow(2.0, alpha + beta + 1.0) / (alpha + beta + 1.0) *
                        std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) /
                        std::tgamma(alpha + beta + 1.0);
  pl.row(0).setConstant(1.0 / std::sqrt(gamma0));
  if (n == 0) return pl.row(0).transpose();
  const double gamma1 = (alpha + 1.0) * (beta + 1.0) / (alpha + beta + 3.0) * gamma0;
  pl.row(1) = (((alpha + beta + 2.0) * x.array() / 2.0 + (alpha - beta) / 2.0) / std::sqrt(gamma1))
                  .transpose();
  double aold = 2.0 / (2.0 + alpha + beta) *
                std::sqrt((alpha + 1.0) * (beta + 1.0) / (alpha + beta + 3.0));
  for (int i = 1; i < n; ++i) {
    const double h1 = 2.0 * i + alpha + beta;
    const double anew = 2.0 / (h1 + 2.0) *
                        std::sqrt((i + 1.0) * (i + 1.0 + alpha + beta) * (i + 1.0 + alpha) *
                                  (i + 1.0 + beta) / (h1 + 1.0) / (h1 + 3.0));
    const double bnew = -(alpha * alpha - beta * beta) / h1 / (h1 + 2.0);
    pl.row(i + 1) = (1.0 / anew) * (-aold * pl.row(i - 1).array() +
                                    (x.transpose().array() - bnew) * pl.row(i).array())
                                       .matrix();
    aold = anew;
  }
  return pl.row(n).transpose();
}

Vector grad_jacobi_p(const Vector& x, double alpha, double beta, int n) {
  if (n == 0) return Vector::Zero(x.size());
  return std::sqrt(n * (n + alpha + beta + 1.0)) * jacobi_p(x, alpha + 1.0, beta + 1.0, n - 1);
}

std::pair<Vector, Vector> jacobi_gq(double alpha, double beta, int n) {
  if (n == 0) {
    Vector x(1), w(1);
    x(0) = -(alpha - beta) / (alpha + beta + 2.0);
    w(0) = 2.0;
    return {x, w};
  }
  Matrix j = Matrix::Zero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    const double h1 = 2.0 * i + alpha + beta;
    j(i, i) = (alpha + beta) < 10 * 2.2e-16 && i == 0
                  ? 0.0
                  : -0.5 * (alpha * alpha - beta * beta) / (h1 + 2.0) / h1;
    if (i < n) {
      const double k = i + 1.0;
      j(i, i + 1) = 2.0 / (h1 + 2.0) *
                    std::sqrt(k * (k + alpha + beta) * (k + alpha) * (k + beta) / (h1 + 1.0) /
                              (h1 + 3.0));
      j(i + 1, i) = j(i, i + 1);
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(j);
  Vector x = eig.eigenvalues();
  const double scale = std::pow(2.0, alpha + beta + 1.0) / (alpha + beta + 1.0) *
                       std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) /
                       std::tgamma(alpha + beta + 1.0);
  Vector w = eig.eigenvectors().row(0).transpose().array().square() * scale;
  return {x, w};
}

Vector jacobi_gl(double alpha, double beta, int n) {
  Vector x(n + 1);
  x(0) = -1.0;
  x(n) = 1.0;
  if (n == 1) return x;
  const auto [xint, w] = jacobi_gq(alpha + 1.0, beta + 1.0, n - 2);
  x.segment(1, n - 1) = xint;
  return x;
}

std::pair<Vector, Vector> gauss_legendre(int n) { return jacobi_gq(0.0, 0.0, n - 1); }

NodeSet interpolation_nodes(int p) {
  check_order(p);
  const int np = num_nodes(p);
  const double alpha = kAlphaOpt[p];

  Vector l1(np), l2(np), l3(np);
  NodeSet ns;
  ns.p = p;
  ns.lattice.assign(p + 1, std::vector<int>(p + 1, -1));
  int sk = 0;
  for (int j = 0; j <= p; ++j) {
    for (int i = 0; i <= p - j; ++i) {
      l1(sk) = static_cast<double>(j) / p;
      l3(sk) = static_cast<double>(i) / p;
      ns.lattice[i][j] = sk;
      ++sk;
    }
  }
  l2 = Vector::Ones(np) - l1 - l3;

  // Equilateral triangle coordinates, warped then mapped back to (r, s).
  Vector x = -l2 + l3;
  Vector y = (-l2 - l3 + 2.0 * l1) / std::sqrt(3.0);

  const Vector blend1 = 4.0 * l2.array() * l3.array();
  const Vector blend2 = 4.0 * l1.array() * l3.array();
  const Vector blend3 = 4.0 * l1.array() * l2.array();
  const Vector wf1 = warp_factor(p, l3 - l2);
  const Vector wf2 = warp_factor(p, l1 - l3);
  const Vector wf3 = warp_factor(p, l2 - l1);
  const Vector warp1 =
      blend1.array() * wf1.array() * (1.0 + (alpha * l1.array()).square());
  const Vector warp2 =
      blend2.array() * wf2.array() * (1.0 + (alpha * l2.array()).square());
  const Vector warp3 =
      blend3.array() * wf3.array() * (1.0 + (alpha * l3.array()).square());
  const double pi = std::numbers::pi;
  x += warp1 + std::cos(2.0 * pi / 3.0) * warp2 + std::cos(4.0 * pi / 3.0) * warp3;
  y += std::sin(2.0 * pi / 3.0) * warp2 + std::sin(4.0 * pi / 3.0) * warp3;

  ns.points.resize(np, 2);
  const double sq3 = std::sqrt(3.0);
  for (int k = 0; k < np; ++k) {
    const double b1 = (sq3 * y(k) + 1.0) / 3.0;
    const double b2 = (-3.0 * x(k) - sq3 * y(k) + 2.0) / 6.0;
    const double b3 = (3.0 * x(k) - sq3 * y(k) + 2.0) / 6.0;
    ns.points(k, 0) = -b2 + b3 - b1;
    ns.points(k, 1) = -b2 - b3 + b1;
  }
  // Snap the vertices and edges onto the exact boundary.
  for (int k = 0; k < np; ++k)
    for (int c = 0; c < 2; ++c)
      if (std::abs(ns.points(k, c) + 1.0) < kNodeTol) ns.points(k, c) = -1.0;

  for (int f = 0; f < 3; ++f) {
    std::vector<std::pair<double, int>> on_face;
    for (int k = 0; k < np; ++k) {
      const double r = ns.points(k, 0);
      const double s = ns.points(k, 1);
      if (f == 0 && std::abs(s + 1.0) < kNodeTol) on_face.emplace_back(r, k);
      if (f == 1 && std::abs(r + s) < kNodeTol) on_face.emplace_back(s, k);
      if (f == 2 && std::abs(r + 1.0) < kNodeTol) on_face.emplace_back(-s, k);
    }
    std::sort(on_face.begin(), on_face.end());
    for (const auto& [xi, k] : on_face) ns.face_index[f].push_back(k);
  }
  return ns;
}

Matrix pkd_vandermonde(int p, const Matrix& points) {
  Vector a, b;
  rs_to_ab(points, a, b);
  const auto modes = mode_order(p);
  Matrix v(points.rows(), modes.size());
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const auto [i, j] = modes[m];
    const Vector h1 = jacobi_p(a, 0.0, 0.0, i);
    const Vector h2 = jacobi_p(b, 2.0 * i + 1.0, 0.0, j);
    v.col(m) = std::sqrt(2.0) * h1.array() * h2.array() * (1.0 - b.array()).pow(i);
  }
  return v;
}

std::pair<Matrix, Matrix> pkd_grad_vandermonde(int p, const Matrix& points) {
  Vector a, b;
  rs_to_ab(points, a, b);
  const auto modes = mode_order(p);
  Matrix vr(points.rows(), modes.size()), vs(points.rows(), modes.size());
  const Eigen::ArrayXd half_1mb = 0.5 * (1.0 - b.array());
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const auto [i, j] = modes[m];
    const Eigen::ArrayXd fa = jacobi_p(a, 0.0, 0.0, i).array();
    const Eigen::ArrayXd dfa = grad_jacobi_p(a, 0.0, 0.0, i).array();
    const Eigen::ArrayXd gb = jacobi_p(b, 2.0 * i + 1.0, 0.0, j).array();
    const Eigen::ArrayXd dgb = grad_jacobi_p(b, 2.0 * i + 1.0, 0.0, j).array();

    Eigen::ArrayXd dr = dfa * gb;
    Eigen::ArrayXd ds = dfa * (gb * (0.5 * (1.0 + a.array())));
    if (i > 0) {
      dr *= half_1mb.pow(i - 1);
      ds *= half_1mb.pow(i - 1);
    }
    Eigen::ArrayXd tmp = dgb * half_1mb.pow(i);
    if (i > 0) tmp -= 0.5 * i * gb * half_1mb.pow(i - 1);
    ds += fa * tmp;
    const double scale = std::pow(2.0, i + 0.5);
    vr.col(m) = scale * dr.matrix();
    vs.col(m) = scale * ds.matrix();
  }
  return {vr, vs};
}

Cubature volume_cubature(int degree) {
  const int na = std::max(1, (degree + 2) / 2);
  const int nb = std::max(1, (degree + 3) / 2);
  const auto [xa, wa] = gauss_legendre(na);
  const auto [xb, wb] = gauss_legendre(nb);
  Cubature c;
  c.points.resize(na * nb, 2);
  c.weights.resize(na * nb);
  int k = 0;
  for (int jb = 0; jb < nb; ++jb) {
    for (int ia = 0; ia < na; ++ia) {
      const double b = xb(jb);
      c.points(k, 0) = 0.5 * (1.0 + xa(ia)) * (1.0 - b) - 1.0;
      c.points(k, 1) = b;
      c.weights(k) = wa(ia) * wb(jb) * 0.5 * (1.0 - b);
      ++k;
    }
  }
  return c;
}

Vec2 face_point(int face, double xi) {
  switch (face) {
    case 0:
      return {xi, -1.0};
    case 1:
      return {-xi, xi};
    default:
      return {-1.0, -xi};
  }
}

Matrix OperatorTables::extraction(int face) const {
  Matrix e = Matrix::Zero(n_p, p + 1);
  for (int a = 0; a <= p; ++a) e(nodes.face_index[face][a], a) = 1.0;
  return e;
}

Matrix OperatorTables::interp_matrix(const Matrix& points) const {
  return pkd_vandermonde(p, points) * V_inv;
}

OperatorTables build_tables(int p, int p_f) {
  check_order(p);
  if (p_f < 2 * p)
    throw Error("overintegration order p_f=" + std::to_string(p_f) + " must be at least 2p");

  OperatorTables t;
  t.p = p;
  t.p_f = p_f;
  t.n_p = num_nodes(p);
  t.nodes = interpolation_nodes(p);

  t.V = pkd_vandermonde(p, t.nodes.points);
  t.V_inv = t.V.inverse();
  t.M_inv = t.V * t.V.transpose();
  t.M = t.M_inv.inverse();
  const auto [vr, vs] = pkd_grad_vandermonde(p, t.nodes.points);
  t.Dr = vr * t.V_inv;
  t.Ds = vs * t.V_inv;

  t.cub = volume_cubature(p_f);
  t.Vq = t.interp_matrix(t.cub.points);
  const auto [cr, cs] = pkd_grad_vandermonde(p, t.cub.points);
  t.Drq = cr * t.V_inv;
  t.Dsq = cs * t.V_inv;

  t.face_xi.resize(p + 1);
  for (int a = 0; a <= p; ++a) t.face_xi(a) = t.nodes.points(t.nodes.face_index[0][a], 0);
  const Matrix v1 = vandermonde_1d(p, t.face_xi);
  t.M_face = (v1 * v1.transpose()).inverse();

  const int nq = (p_f + 2) / 2;
  std::tie(t.quad_xi, t.quad_w) = gauss_legendre(nq);
  t.face_interp = vandermonde_1d(p, t.quad_xi) * v1.inverse();

  for (int f = 0; f < 3; ++f) {
    Matrix pts(nq, 2);
    for (int q = 0; q < nq; ++q) pts.row(q) = face_point(f, t.quad_xi(q)).transpose();
    const auto [fr, fs] = pkd_grad_vandermonde(p, pts);
    t.face_Dr[f] = fr * t.V_inv;
    t.face_Ds[f] = fs * t.V_inv;
  }
  return t;
}

}  // namespace dgviv
