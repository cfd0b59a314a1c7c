#include "dgviv/dg_core.hpp"
#include "dgviv/verify.hpp"

#include "oracles.hpp"
#include "test_meshes.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace dgviv;

TEST(Manufactured, StateAtOrigin) {
  const ManufacturedCase mc;
  const State u = manufactured_state(Vec2::Zero(), mc);
  EXPECT_EQ(u, State(200.0, 200.0, 200.0, 40000.0));
}

TEST(Manufactured, SourceMatchesFiniteDifferences) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (double mu : {0.01, 0.0}) {
    ManufacturedCase mc;
    mc.gas.mu = mu;
    for (int i = 0; i < 100; ++i) {
      const Vec2 x(d(rng), d(rng));
      const State s = manufactured_source(x, mc);
      const State fd = oracles::fd_manufactured_source(x, mc);
      EXPECT_LE((s - fd).cwiseAbs().maxCoeff(), 1e-6 * s.cwiseAbs().maxCoeff())
          << "x=(" << x.x() << ", " << x.y() << ") mu=" << mu;
    }
  }
}

TEST(Manufactured, ZeroWavenumberHasNoSource) {
  ManufacturedCase mc;
  mc.kappa = 0.0;
  for (const Vec2& x : {Vec2(0.1, 0.7), Vec2(0.9, 0.3)}) {
    EXPECT_EQ(manufactured_source(x, mc).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(manufactured_state(x, mc), State(200.0, 200.0, 200.0, 40000.0));
  }
}

TEST(ErrorNorms, UnitFieldOnUnitSquare) {
  const Mesh mesh = generate_structured(3, 3, Rect{});
  const OperatorTables t = build_tables(2, 4);
  const StateField ones = uniform_field(mesh, t, State::Ones());
  const ErrorNorms e = error_norms(ones, [](const Vec2&) { return State::Zero().eval(); }, mesh, t);
  EXPECT_NEAR(e.l2, 2.0, 1e-13);
  EXPECT_NEAR(e.linf, 1.0, 1e-14);
}

TEST(ErrorNorms, InterpolationErrorShrinksWithOrder) {
  ManufacturedCase mc;
  mc.kappa = 3.0;
  const Mesh mesh = generate_structured(4, 4, Rect{});
  auto exact = [&](const Vec2& x) { return manufactured_state(x, mc); };
  double prev = 1e300;
  for (int p = 1; p <= 5; ++p) {
    const OperatorTables t = build_tables(p, 3 * p);
    const ErrorNorms e = error_norms(interpolate(mesh, t, exact), exact, mesh, t);
    EXPECT_LT(e.l2, prev);
    EXPECT_GE(e.linf, e.l2 / std::sqrt(4.0 * 1.0));
    prev = e.l2;
  }
}

TEST(ConvergenceRate, Examples) {
  EXPECT_NEAR(convergence_rate({1.0, 0.25}, {1.0, 0.5}), 2.0, 1e-15);
  std::vector<double> e, h;
  for (int i = 0; i < 4; ++i) {
    h.push_back(0.3 / (1 << i));
    e.push_back(7.0 * std::pow(h.back(), 3));
  }
  EXPECT_NEAR(convergence_rate(e, h), 3.0, 1e-12);
  EXPECT_THROW(convergence_rate({1.0}, {1.0}), Error);
  EXPECT_THROW(convergence_rate({1.0, 0.0}, {1.0, 0.5}), Error);
}

namespace {

struct Body {
  GasParams gas;
  Mesh mesh;
  OperatorTables tables;
  Body(int n_theta, double r_in, int p) : mesh(test_meshes::annulus(n_theta, 3, r_in, 4.0)), tables(build_tables(p, 2 * p)) {
    gas.mu = 0.0;
  }
  double wall_polygon_area() const {
    double a = 0.0;
    for (int g = 0; g < mesh.num_faces(); ++g) {
      const Face& f = mesh.face(g);
      if (f.tag != BoundaryTag::Wall) continue;
      const Vec2 x0 = mesh.map_to_physical(f.left, face_point(f.left_face, -1.0));
      const Vec2 x1 = mesh.map_to_physical(f.left, face_point(f.left_face, 1.0));
      a += 0.5 * std::abs(x0.x() * x1.y() - x1.x() * x0.y());
    }
    return a;
  }
};

}  // namespace

TEST(AeroForces, UniformStreamHasNoNetForce) {
  Body b(32, 0.5, 3);
  b.gas.mu = 0.01;
  const Freestream fs{1.0, Vec2(0.2, 0.0), 1.0 / 1.4};
  const StateField f = uniform_field(b.mesh, b.tables, fs.state(b.gas));
  const Forces F = aero_forces(f, b.mesh, b.tables, b.gas, fs, 1.0, Vec2::Zero());
  EXPECT_LT(F.force.norm(), 1e-12);
  EXPECT_LT(std::abs(F.moment), 1e-12);
}

TEST(AeroForces, LinearPressureOnCircle) {
  Body b(256, 1.0, 1);
  const Freestream fs{1.0, Vec2(1.0, 0.0), 1.0};
  const StateField f = interpolate(b.mesh, b.tables, [&](const Vec2& x) {
    return to_conservative({1.0, Vec2::Zero(), 5.0 + x.x()}, b.gas);
  });
  const Forces F = aero_forces(f, b.mesh, b.tables, b.gas, fs, 2.0, Vec2::Zero());
  // -closed integral of x n_x over the polygonal wall is minus its area, -> -pi.
  EXPECT_NEAR(F.force.x(), -b.wall_polygon_area(), 1e-12);
  EXPECT_NEAR(F.force.x(), -M_PI, 1e-3);
  EXPECT_NEAR(F.force.y(), 0.0, 1e-12);
  EXPECT_NEAR(F.drag, F.force.x(), 1e-15);
  EXPECT_NEAR(F.lift, F.force.y(), 1e-15);

  const Freestream fast{1.0, Vec2(2.0, 0.0), 1.0};
  const Forces G = aero_forces(f, b.mesh, b.tables, b.gas, fast, 2.0, Vec2::Zero());
  EXPECT_NEAR(G.cd, F.cd / 4.0, 1e-14);
}

TEST(AeroForces, LiftAndDragFollowTheInflow) {
  Body b(64, 1.0, 1);
  const StateField f = interpolate(b.mesh, b.tables, [&](const Vec2& x) {
    return to_conservative({1.0, Vec2::Zero(), 5.0 + x.x() + 0.5 * x.y()}, b.gas);
  });
  const Freestream along{1.0, Vec2(1.0, 0.0), 1.0};
  const Freestream up{1.0, Vec2(0.0, 1.0), 1.0};
  const Forces a = aero_forces(f, b.mesh, b.tables, b.gas, along, 1.0, Vec2::Zero());
  const Forces c = aero_forces(f, b.mesh, b.tables, b.gas, up, 1.0, Vec2::Zero());
  EXPECT_NEAR(c.drag, a.force.y(), 1e-13);
  EXPECT_NEAR(std::abs(c.lift), std::abs(a.force.x()), 1e-13);
}

TEST(AeroForces, NeedsWall) {
  const Mesh mesh = generate_structured(2, 2, Rect{});
  const OperatorTables t = build_tables(1, 2);
  GasParams gas;
  const Freestream fs;
  EXPECT_THROW(aero_forces(uniform_field(mesh, t, fs.state(gas)), mesh, t, gas, fs, 1.0, Vec2::Zero()),
               Error);
}

TEST(Spectrum, PureTone) {
  std::vector<double> t(512), v(512);
  for (int i = 0; i < 512; ++i) {
    t[i] = 50.0 * i / 511.0;
    v[i] = std::sin(2.0 * M_PI * 0.2 * t[i]);
  }
  const Spectrum s = dft_spectrum(t, v);
  const double bin = s.f[1] - s.f[0];
  const auto modes = dominant_modes(s, 1);
  ASSERT_EQ(modes.size(), 1u);
  EXPECT_NEAR(modes[0].f, 0.2, bin);
}

TEST(Spectrum, TwoTonesOrderedByMagnitude) {
  std::vector<double> t(1024), v(1024);
  for (int i = 0; i < 1024; ++i) {
    t[i] = 0.1 * i + 0.02 * std::sin(i);  // non-uniform sampling
    v[i] = std::sin(2.0 * M_PI * 0.2 * t[i]) + 0.5 * std::sin(2.0 * M_PI * 0.45 * t[i]);
  }
  const Spectrum s = dft_spectrum(t, v);
  const double bin = s.f[1] - s.f[0];
  const auto modes = dominant_modes(s, 2);
  ASSERT_EQ(modes.size(), 2u);
  EXPECT_NEAR(modes[0].f, 0.2, bin);
  EXPECT_NEAR(modes[1].f, 0.45, bin);
  EXPECT_GT(modes[0].mag, modes[1].mag);
}

TEST(Spectrum, ConstantSeriesHasOnlyDc) {
  std::vector<double> t(64), v(64, 3.0);
  for (int i = 0; i < 64; ++i) t[i] = i;
  const auto modes = dominant_modes(dft_spectrum(t, v), 3);
  ASSERT_EQ(modes.size(), 1u);
  EXPECT_EQ(modes[0].f, 0.0);
  EXPECT_THROW(dft_spectrum({0.0, 1.0}, {1.0, 2.0}), Error);
}

TEST(Vorticity, RigidRotationAndUniformFlow) {
  const Mesh mesh = generate_structured(3, 3, Rect{-1, -1, 2, 2}, true);
  const OperatorTables t = build_tables(2, 4);
  GasParams gas;
  const StateField rot = interpolate(mesh, t, [&](const Vec2& x) {
    return to_conservative({1.3, Vec2(-x.y(), x.x()), 10.0}, gas);
  });
  const Vector w = vorticity_field(rot, broken_gradient(rot, mesh, t));
  EXPECT_LT((w.array() - 2.0).abs().maxCoeff(), 1e-12);
  const StateField uni = uniform_field(mesh, t, to_conservative({1.0, Vec2(0.4, 0.1), 1.0}, gas));
  EXPECT_LT(vorticity_field(uni, broken_gradient(uni, mesh, t)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Vorticity, LineSampling) {
  const Mesh mesh = generate_structured(4, 4, Rect{});
  const OperatorTables t = build_tables(2, 4);
  Vector nodal(t.n_p * mesh.num_elements());
  for (int k = 0; k < mesh.num_elements(); ++k)
    for (int i = 0; i < t.n_p; ++i) {
      const Vec2 x = mesh.map_to_physical(k, t.nodes.points.row(i).transpose());
      nodal(k * t.n_p + i) = x.x() * x.x() + 2.0 * x.y();
    }
  const auto pts = sample_line(mesh, t, nodal, Vec2(0.05, 0.3), Vec2(0.95, 0.3), 11);
  ASSERT_EQ(pts.size(), 11u);
  for (const auto& p : pts) EXPECT_NEAR(p.value, p.x.x() * p.x.x() + 0.6, 1e-12);
  EXPECT_NEAR(pts.back().x.x(), 0.95, 1e-15);
  EXPECT_THROW(sample_line(mesh, t, nodal, Vec2(0.5, 0.5), Vec2(1.5, 0.5), 5), Error);
}
