#include "dgviv/refelem.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

using namespace dgviv;

namespace {

// Exact integral of r^a s^b over the reference triangle, by iterated integration
// in s then r: int_{-1}^{1} r^a [s^{b+1}/(b+1)]_{-1}^{-r} dr.
double monomial_integral(int a, int b) {
  // Expand (-r)^{b+1} - (-1)^{b+1} and integrate r^a times each term.
  auto int_pow = [](int n) { return n % 2 == 0 ? 2.0 / (n + 1) : 0.0; };
  const double sign = (b + 1) % 2 == 0 ? 1.0 : -1.0;
  return (sign * int_pow(a + b + 1) - sign * int_pow(a)) / (b + 1);
}

Vector sample(const Matrix& pts, const std::function<double(double, double)>& f) {
  Vector v(pts.rows());
  for (int i = 0; i < pts.rows(); ++i) v(i) = f(pts(i, 0), pts(i, 1));
  return v;
}

}  // namespace

TEST(Refelem, MonomialIntegralOracleSelfCheck) {
  EXPECT_NEAR(monomial_integral(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(monomial_integral(1, 0), -2.0 / 3.0, 1e-15);  // centroid at (-1/3, -1/3)
  EXPECT_NEAR(monomial_integral(0, 1), -2.0 / 3.0, 1e-15);
}

TEST(Refelem, NodeCountsAndFaces) {
  for (int p = 1; p <= kMaxOrder; ++p) {
    const NodeSet n = interpolation_nodes(p);
    ASSERT_EQ(n.points.rows(), num_nodes(p));
    for (int f = 0; f < 3; ++f) EXPECT_EQ(static_cast<int>(n.face_index[f].size()), p + 1);
    for (int i = 0; i < n.points.rows(); ++i) {
      const double r = n.points(i, 0), s = n.points(i, 1);
      // Barycentric coordinates of (r, s).
      const double l1 = (s + 1) / 2, l2 = -(r + s) / 2, l3 = (r + 1) / 2;
      for (double l : {l1, l2, l3}) {
        EXPECT_GE(l, -1e-12);
        EXPECT_LE(l, 1.0 + 1e-12);
      }
    }
  }
}

TEST(Refelem, LinearNodesAreVertices) {
  const NodeSet n = interpolation_nodes(1);
  const Matrix v = (Matrix(3, 2) << -1, -1, 1, -1, -1, 1).finished();
  for (int k = 0; k < 3; ++k) {
    bool found = false;
    for (int i = 0; i < 3; ++i) found |= (n.points.row(i) - v.row(k)).norm() < 1e-14;
    EXPECT_TRUE(found) << "vertex " << k;
  }
}

TEST(Refelem, FifthOrderHasSixInteriorNodes) {
  const NodeSet n = interpolation_nodes(5);
  EXPECT_EQ(n.points.rows(), 21);
  std::vector<bool> on_face(21, false);
  for (const auto& f : n.face_index)
    for (int i : f) on_face[i] = true;
  EXPECT_EQ(std::count(on_face.begin(), on_face.end(), false), 6);
}

TEST(Refelem, FaceNodesLieOnTheirFace) {
  for (int p = 1; p <= 6; ++p) {
    const NodeSet n = interpolation_nodes(p);
    for (int f = 0; f < 3; ++f)
      for (int i : n.face_index[f]) {
        const double r = n.points(i, 0), s = n.points(i, 1);
        const double dist = f == 0 ? s + 1 : (f == 1 ? r + s : r + 1);
        EXPECT_NEAR(dist, 0.0, 1e-12);
      }
  }
}

TEST(Refelem, UnsupportedOrderThrows) {
  EXPECT_THROW(interpolation_nodes(0), Error);
  EXPECT_THROW(interpolation_nodes(kMaxOrder + 1), Error);
  EXPECT_THROW(build_tables(2, 3), Error);  // p_f < 2p
}

TEST(Refelem, ConstantModeValue) {
  const Matrix pt = (Matrix(1, 2) << 0.1, -0.3).finished();
  const Matrix v = pkd_vandermonde(0, pt);
  ASSERT_EQ(v.rows(), 1);
  ASSERT_EQ(v.cols(), 1);
  EXPECT_NEAR(v(0, 0), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Refelem, PkdBasisOrthonormalUnderExactCubature) {
  for (int p = 1; p <= 6; ++p) {
    const Cubature c = volume_cubature(2 * p);
    const Matrix v = pkd_vandermonde(p, c.points);
    const Matrix gram = v.transpose() * c.weights.asDiagonal() * v;
    EXPECT_LT((gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), 1e-12)
        << "p=" << p;
  }
}

TEST(Refelem, LinearModesOrthonormalByAnalyticIntegrals) {
  // Modes of order 1 are affine: psi = a + b r + c s. Their Gram matrix follows from
  // the exact integrals of 1, r, s, r^2, rs, s^2 evaluated through vertex samples.
  const Matrix verts = (Matrix(3, 2) << -1, -1, 1, -1, -1, 1).finished();
  const Matrix v = pkd_vandermonde(1, verts);
  // Coefficients of each mode in the basis (1, r, s) from the vertex values.
  Matrix a(3, 3);
  for (int i = 0; i < 3; ++i) a.row(i) << 1.0, verts(i, 0), verts(i, 1);
  const Matrix coef = a.inverse() * v;  // column j: coefficients of mode j
  Matrix mono(3, 3);
  const int pw[3][2] = {{0, 0}, {1, 0}, {0, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      mono(i, j) = monomial_integral(pw[i][0] + pw[j][0], pw[i][1] + pw[j][1]);
  const Matrix gram = coef.transpose() * mono * coef;
  EXPECT_LT((gram - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Refelem, WarpBlendBetterConditionedThanEquispaced) {
  const int p = 5;
  const NodeSet n = interpolation_nodes(p);
  Matrix eq(num_nodes(p), 2);
  int row = 0;
  for (int j = 0; j <= p; ++j)
    for (int i = 0; i + j <= p; ++i) eq.row(row++) << -1.0 + 2.0 * i / p, -1.0 + 2.0 * j / p;
  auto cond = [](const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
  };
  EXPECT_LT(cond(pkd_vandermonde(p, n.points)), cond(pkd_vandermonde(p, eq)));
}

TEST(Refelem, CubatureExactForMonomials) {
  for (int deg : {1, 4, 9, 13}) {
    const Cubature c = volume_cubature(deg);
    EXPECT_NEAR(c.weights.sum(), 2.0, 1e-13);
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b) {
        double q = 0.0;
        for (int i = 0; i < c.points.rows(); ++i)
          q += c.weights(i) * std::pow(c.points(i, 0), a) * std::pow(c.points(i, 1), b);
        const double exact = monomial_integral(a, b);
        EXPECT_NEAR(q, exact, 1e-12 * std::max(1.0, std::abs(exact))) << a << "," << b;
      }
  }
}

TEST(Refelem, CubicProductIntegral) {
  const OperatorTables t = build_tables(3, 9);
  double q = 0.0;
  for (int i = 0; i < t.num_cub(); ++i)
    q += t.cub.weights(i) * std::pow(t.cub.points(i, 0), 3) * std::pow(t.cub.points(i, 1), 3);
  EXPECT_NEAR(q, monomial_integral(3, 3), 1e-13);
}

TEST(Refelem, MassMatrixProperties) {
  for (int p = 1; p <= 6; ++p) {
    const OperatorTables t = build_tables(p, 2 * p);
    EXPECT_LT((t.M - t.M.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> es(t.M);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
    const Matrix vvt_inv = (t.V * t.V.transpose()).inverse();
    EXPECT_LT((t.M - vvt_inv).norm() / t.M.norm(), 1e-10);
    EXPECT_LT((t.M * t.M_inv - Matrix::Identity(t.n_p, t.n_p)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Refelem, LinearMassMatrixAnalytic) {
  const OperatorTables t = build_tables(1, 3);
  const Matrix expected = (2.0 / 12.0) * (Matrix::Identity(3, 3) + Matrix::Ones(3, 3));
  EXPECT_LT((t.M - expected).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Refelem, DifferentiationOfConstantsAndCoordinates) {
  for (int p = 1; p <= 8; ++p) {
    const OperatorTables t = build_tables(p, 2 * p);
    const Vector one = Vector::Ones(t.n_p);
    EXPECT_LT((t.Dr * one).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((t.Ds * one).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((t.Dr * t.nodes.points.col(0) - one).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((t.Ds * t.nodes.points.col(1) - one).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((t.Dr * t.nodes.points.col(1)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Refelem, LaplacianOfQuadratic) {
  const OperatorTables t = build_tables(2, 4);
  const Vector q = sample(t.nodes.points, [](double r, double s) { return r * r + s * s; });
  const Vector lap = t.Dr * (t.Dr * q) + t.Ds * (t.Ds * q);
  EXPECT_LT((lap - 4.0 * Vector::Ones(t.n_p)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Refelem, MassWeightedQuadratureOfPolynomials) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int p = 1; p <= 5; ++p) {
    const OperatorTables t = build_tables(p, 2 * p);
    // Random polynomial of degree p as a combination of monomials.
    std::vector<std::array<double, 3>> terms;
    for (int a = 0; a <= p; ++a)
      for (int b = 0; a + b <= p; ++b) terms.push_back({u(rng), double(a), double(b)});
    double exact = 0.0;
    for (const auto& c : terms) exact += c[0] * monomial_integral(int(c[1]), int(c[2]));
    const Vector q = sample(t.nodes.points, [&](double r, double s) {
      double v = 0.0;
      for (const auto& c : terms) v += c[0] * std::pow(r, c[1]) * std::pow(s, c[2]);
      return v;
    });
    const double quad = Vector::Ones(t.n_p).dot(t.M * q);
    EXPECT_NEAR(quad, exact, 1e-10);
  }
}

TEST(Refelem, ExtractionMapsAreSelections) {
  const OperatorTables t = build_tables(4, 8);
  for (int f = 0; f < 3; ++f) {
    const Matrix e = t.extraction(f);
    ASSERT_EQ(e.rows(), t.n_p);
    ASSERT_EQ(e.cols(), 5);
    for (int c = 0; c < e.cols(); ++c) {
      int nnz = 0;
      for (int r = 0; r < e.rows(); ++r) {
        EXPECT_TRUE(e(r, c) == 0.0 || e(r, c) == 1.0);
        nnz += e(r, c) != 0.0;
      }
      EXPECT_EQ(nnz, 1);
    }
  }
}

TEST(Refelem, TraceConsistency) {
  const OperatorTables t = build_tables(3, 6);
  const Vector q = sample(t.nodes.points, [](double r, double s) { return r * r * s - 2 * s + 1; });
  for (int f = 0; f < 3; ++f) {
    const Vector selected = t.extraction(f).transpose() * q;
    for (int a = 0; a <= 3; ++a) {
      const int i = t.nodes.face_index[f][a];
      EXPECT_EQ(selected(a), q(i));
      const Vec2 x = face_point(f, t.face_xi(a));
      EXPECT_NEAR((t.nodes.points.row(i).transpose() - x).norm(), 0.0, 1e-12);
    }
  }
}

TEST(Refelem, FaceInterpolationAndGradients) {
  const int p = 3;
  const OperatorTables t = build_tables(p, 9);
  auto f = [](double r, double s) { return r * r * r - r * s * s + 2 * s; };
  auto fr = [](double r, double s) { return 3 * r * r - s * s; };
  auto fs = [](double r, double s) { return -2 * r * s + 2; };
  const Vector q = sample(t.nodes.points, f);
  for (int face = 0; face < 3; ++face) {
    Vector on_face(p + 1);
    for (int a = 0; a <= p; ++a) on_face(a) = q(t.nodes.face_index[face][a]);
    const Vector at_quad = t.face_interp * on_face;
    const Vector dr = t.face_Dr[face] * q, ds = t.face_Ds[face] * q;
    for (int k = 0; k < t.num_face_quad(); ++k) {
      const Vec2 x = face_point(face, t.quad_xi(k));
      EXPECT_NEAR(at_quad(k), f(x.x(), x.y()), 1e-11);
      EXPECT_NEAR(dr(k), fr(x.x(), x.y()), 1e-10);
      EXPECT_NEAR(ds(k), fs(x.x(), x.y()), 1e-10);
    }
  }
  // Face mass matrix integrates products of face polynomials.
  const Vector one = Vector::Ones(p + 1);
  EXPECT_NEAR(one.dot(t.M_face * one), 2.0, 1e-13);
  EXPECT_NEAR(t.face_xi.dot(t.M_face * t.face_xi), 2.0 / 3.0, 1e-13);
}
