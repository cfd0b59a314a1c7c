#include "dgviv/penalty.hpp"

#include "dgviv/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <mutex>

namespace dgviv {

void PenaltyConfig::validate() const {
  if (!(theta >= -1.0 && theta <= 1.0)) throw ConfigError("theta must lie in [-1, 1]");
  if (!(c1 >= 0.0)) throw ConfigError("penalty constant C1 must be >= 0");
  if (!(c_cfl > 0.0)) throw ConfigError("C_CFL must be > 0");
  if (!(dt_max > 0.0)) throw ConfigError("dt_max must be > 0");
}

double trace_inverse_constant(int p, double face_length, double area) {
  return (p + 1.0) * (p + 2.0) * face_length / (2.0 * area);
}

double element_trace_constant(const Mesh& mesh, int k, int p) {
  const ElementGeometry& g = mesh.element(k);
  double c = 0.0;
  for (int f = 0; f < 3; ++f)
    c = std::max(c, trace_inverse_constant(p, mesh.face(g.faces[f]).length, g.area));
  return c;
}

namespace {

double spectral_norm(const Mat4& a) {
  // The mass row is zero, so only the lower 3x4 block carries singular values.
  const Eigen::Matrix<double, 3, 4> b = a.bottomRows<3>();
  const Eigen::Matrix3d bbt = b * b.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
  es.computeDirect(bbt, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace

double normal_diffusion_norm(const Mat8& g, const Vec2& n) {
  Mat4 a = Mat4::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a += n(i) * n(j) * g_block(g, i, j);
  return spectral_norm(a);
}

double normal_diffusion_norm(const State& u, const Vec2& n, const GasParams& gas) {
  Mat4 a;
  StateGrad d = StateGrad::Zero();
  for (int c = 0; c < 4; ++c) {
    d(c) = n.x();
    d(4 + c) = n.y();
    const StateGrad f = apply_diffusion(u, d, gas);
    a.col(c) = n.x() * f.head<4>() + n.y() * f.tail<4>();
    d(c) = 0.0;
    d(4 + c) = 0.0;
  }
  return spectral_norm(a);
}

double gbar_face(const std::vector<State>& traces, const Vec2& n, const GasParams& gas) {
  double g = 0.0;
  for (const State& u : traces) g = std::max(g, normal_diffusion_norm(diffusion_tensor(u, gas), n));
  return g;
}

double penalty_sigma(double gbar, double max_c_inv, const PenaltyConfig& cfg) {
  const double s = 1.0 + cfg.theta;
  return cfg.c1 * s * s * 3.0 * gbar * max_c_inv;
}

double gradient_inverse_constant(int p) {
  static std::array<double, kMaxOrder + 1> cache{};
  static std::mutex lock;
  if (p < 1 || p > kMaxOrder) throw Error("unsupported order " + std::to_string(p));
  std::lock_guard<std::mutex> guard(lock);
  if (cache[p] > 0.0) return cache[p];
  const OperatorTables t = build_tables(p, 2 * p);
  const Matrix stiff = t.Dr.transpose() * t.M * t.Dr + t.Ds.transpose() * t.M * t.Ds;
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(stiff, t.M, Eigen::EigenvaluesOnly);
  const double rho = 2.0 - std::sqrt(2.0);  // inradius of the reference triangle
  const double p4 = std::pow(static_cast<double>(p), 4);
  cache[p] = es.eigenvalues().maxCoeff() * rho * rho / p4;
  return cache[p];
}

CflReport cfl_estimate(const Mesh& mesh, const OperatorTables& tables, const StateField& field,
                       const GasParams& gas, const Vec2& v_w, const std::vector<double>& sigma,
                       const PenaltyConfig& cfg) {
  const int ne = mesh.num_elements();
  if (ne == 0) throw Error("empty mesh");
  const int p = tables.p;
  const int np = tables.n_p;
  const double c_grad = gradient_inverse_constant(p);
  const double p4 = std::pow(static_cast<double>(p), 4);

  CflReport report;
  report.elements.resize(ne);
  std::vector<double> g_local(ne, 0.0);

  parallel_for(ne, [&](int begin, int end) {
    for (int k = begin; k < end; ++k) {
      const ElementGeometry& geo = mesh.element(k);
      ElementCfl& e = report.elements[k];
      e.c_inv = element_trace_constant(mesh, k, p);
      e.c_inv2 = c_grad * p4 / (geo.inradius * geo.inradius);
      for (int f = 0; f < 3; ++f) e.sigma_k = std::max(e.sigma_k, sigma[geo.faces[f]]);

      const auto uk = field.element(k);
      const NodalState ur = tables.Dr * uk;
      const NodalState us = tables.Ds * uk;
      double g_max = 0.0;
      for (int i = 0; i < np; ++i) {
        const State u = uk.row(i).transpose();
        Primitive q;
        try {
          q = to_primitive(u, gas);
        } catch (const PositivityError& err) {
          throw PositivityError(err.reason(), k, i);
        }
        const double c = sound_speed(q, gas);
        const double b = std::max(std::abs(q.v.x() - v_w.x()), std::abs(q.v.y() - v_w.y())) + c;
        e.beta = std::max(e.beta, b);

        const State ux = geo.rx() * ur.row(i).transpose() + geo.sx() * us.row(i).transpose();
        const State uy = geo.ry() * ur.row(i).transpose() + geo.sy() * us.row(i).transpose();
        const double div = (ux(1) - q.v.x() * ux(0) + uy(2) - q.v.y() * uy(0)) / q.rho;
        e.beta_prime = std::max(e.beta_prime, 0.5 * std::abs(div));

        if (gas.mu > 0.0) g_max = std::max(g_max, diffusion_tensor(u, gas).norm());
      }
      g_local[k] = g_max;
    }
  });

  auto neighbour_max = [&](const std::vector<double>& v, int k) {
    double m = v[k];
    const ElementGeometry& geo = mesh.element(k);
    for (int f = 0; f < 3; ++f) {
      const Face& face = mesh.face(geo.faces[f]);
      if (face.is_boundary()) continue;
      m = std::max(m, v[face.left == k ? face.right : face.left]);
    }
    return m;
  };

  std::vector<double> g_k(ne);
  for (int k = 0; k < ne; ++k) g_k[k] = neighbour_max(g_local, k);

  for (int k = 0; k < ne; ++k) {
    ElementCfl& e = report.elements[k];
    e.g_k = g_k[k];
    e.g_tilde = neighbour_max(g_k, k);
    e.lambda = 1.5 * e.c_inv2 * e.g_k + 3.0 * e.c_inv * (3.0 * e.sigma_k + e.beta) + e.beta_prime;
    report.lambda = std::max(report.lambda, e.lambda);

    const double adv = (std::sqrt(e.c_inv2) + 3.0 * e.c_inv) * e.beta + e.beta_prime;
    const double lambda_a = adv * adv;
    double lambda_d = 0.0;
    if (gas.mu > 0.0) {
      if (!(e.sigma_k > 0.0) || !(cfg.c1 > 0.0)) {
        if (report.tilde_error.empty())
          report.tilde_error = "operator-norm estimator needs a positive penalty when mu > 0 "
                               "(element " + std::to_string(k) + ")";
        continue;
      }
      lambda_d = cfg.c1 * e.g_tilde * e.c_inv2 / (8.0 * e.sigma_k * e.c_inv) +
                 e.g_tilde * e.g_tilde * e.c_inv2 * e.c_inv2 +
                 2.0 * e.g_tilde * e.sigma_k * e.c_inv * e.c_inv2 / cfg.c1;
    }
    e.lambda_tilde = std::sqrt(2.0 * (lambda_a + lambda_d));
    report.lambda_tilde = std::max(report.lambda_tilde, e.lambda_tilde);
  }
  return report;
}

double lambda_rayleigh(const CflReport& report) { return report.lambda; }
double lambda_tilde(const CflReport& report) {
  if (!report.tilde_error.empty()) throw Error(report.tilde_error);
  return report.lambda_tilde;
}

double timestep(double lambda, const PenaltyConfig& cfg) {
  if (!(lambda > 0.0)) return cfg.dt_max;
  return cfg.c_cfl / lambda;
}

}  // namespace dgviv
