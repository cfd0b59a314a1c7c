#include "dgviv/time_fsi.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

namespace dgviv {

RKScheme RKScheme::carpenter_kennedy() {
  RKScheme s;
  s.a = {0.0, -567301805773.0 / 1357537059087.0, -2404267990393.0 / 2016746695238.0,
         -3550918686646.0 / 2091501179385.0, -1275806237668.0 / 842570457699.0};
  s.b = {1432997174477.0 / 9575080441755.0, 5161836677717.0 / 13612068292357.0,
         1720146321549.0 / 2090206949498.0, 3134564353537.0 / 4481467310338.0,
         2277821191437.0 / 14882151754819.0};
  s.c = {0.0, 1432997174477.0 / 9575080441755.0, 2526269341429.0 / 6820363183890.0,
         2006345519317.0 / 3224310063776.0, 2802321613138.0 / 2924317926251.0};
  return s;
}

void rk_step(StateField& field, double dt, DGOperator& op, const Vec2& v_w,
             const RKScheme& scheme) {
  if (!(dt > 0.0)) throw Error("time step must be positive");
  StateField k0 = field;
  NodalState k1 = NodalState::Zero(field.u.rows(), 4);
  for (int i = 0; i < RKScheme::kStages; ++i) {
    k0.t = field.t + scheme.c[i] * dt;
    try {
      k1 = scheme.a[i] * k1 + dt * op.rhs(k0, v_w);
    } catch (const PositivityError& e) {
      throw e.with_context("RK stage " + std::to_string(i + 1) + ": ");
    }
    k0.u += scheme.b[i] * k1;
  }
  field.u = std::move(k0.u);
  field.t += dt;
}

void OscillatorState::initialize(double f) {
  if (!(m > 0.0)) throw Error("oscillator mass must be positive");
  yddot = (f - c * ydot - k * y) / m;
}

void newmark_step(OscillatorState& osc, double f, double dt) {
  if (!(dt > 0.0)) throw Error("time step must be positive");
  const double y_pred = osc.y + dt * osc.ydot + dt * dt * (0.5 - osc.beta) * osc.yddot;
  const double v_pred = osc.ydot + dt * (1.0 - osc.gamma) * osc.yddot;
  const double m_eff = osc.m + osc.gamma * dt * osc.c + osc.beta * dt * dt * osc.k;
  if (!(m_eff > 0.0)) throw Error("singular effective stiffness in Newmark step");
  osc.yddot = (f - osc.c * v_pred - osc.k * y_pred) / m_eff;
  osc.y = y_pred + osc.beta * dt * dt * osc.yddot;
  osc.ydot = v_pred + osc.gamma * dt * osc.yddot;
}

StructuralCoefficients structural_coefficients(double reduced_velocity, double mass_ratio,
                                               double damping_ratio, double v_inf, double diameter,
                                               double rho_inf) {
  if (!(reduced_velocity > 0.0) || !(mass_ratio > 0.0) || !(diameter > 0.0))
    throw ConfigError("reduced velocity, mass ratio and diameter must be positive");
  StructuralCoefficients s;
  s.f_n = v_inf / (reduced_velocity * diameter);
  s.m_r = 1.0;
  s.c_r = 4.0 * M_PI * s.f_n * damping_ratio;
  const double omega = 2.0 * M_PI * s.f_n;
  s.k_r = (1.0 + 1.0 / mass_ratio) * omega * omega;
  s.mass = mass_ratio * rho_inf * M_PI * diameter * diameter / 4.0;
  return s;
}

CoupledSolver::CoupledSolver(Mesh& mesh, DGOperator& op, const CouplingConfig& config,
                             StateField initial)
    : mesh_(mesh), op_(op), config_(config), field_(std::move(initial)) {
  if (&op_.mesh() != &mesh_) throw Error("operator and coupled solver must share the mesh");
  if (config_.motion && !mesh_.has_tag(BoundaryTag::Wall))
    throw Error("body motion needs a wall boundary");
  osc_.m = config_.structure.m_r;
  osc_.c = config_.structure.c_r;
  osc_.k = config_.structure.k_r;
  if (mesh_.has_tag(BoundaryTag::Wall))
    forces_ = aero_forces(field_, mesh_, op_.tables(), op_.gas(), op_.boundary().freestream,
                          config_.diameter, config_.body_center + mesh_.displacement());
  if (config_.motion) osc_.initialize(forces_.lift / config_.structure.mass);
}

const SeriesRow& CoupledSolver::step() {
  double dt = config_.dt_override;
  if (!(dt > 0.0)) {
    const CflReport report = op_.cfl(field_, v_w_);
    last_lambda_ = report.lambda;
    dt = timestep(report.lambda, op_.penalty_config());
  }

  const StateField field_backup = field_;
  const OscillatorState osc_backup = osc_;
  const Vec2 v_w_backup = v_w_;
  const std::vector<Vec2> vertices_backup = mesh_.vertices();
  const Vec2 displacement_backup = mesh_.displacement();
  try {
    if (config_.motion) {
      const double y_old = osc_.y;
      newmark_step(osc_, forces_.lift / config_.structure.mass, dt);
      const double delta = osc_.y - y_old;
      v_w_ = Vec2(0.0, delta / dt);
      mesh_.translate(Vec2(0.0, delta));
    }
    op_.begin_step(field_, v_w_);
    rk_step(field_, dt, op_, v_w_);
  } catch (const PositivityError&) {
    field_ = field_backup;
    osc_ = osc_backup;
    v_w_ = v_w_backup;
    mesh_.set_vertex_positions(vertices_backup, displacement_backup);
    if (!config_.checkpoint_path.empty()) save_checkpoint(config_.checkpoint_path);
    throw;
  }

  if (mesh_.has_tag(BoundaryTag::Wall))
    forces_ = aero_forces(field_, mesh_, op_.tables(), op_.gas(), op_.boundary().freestream,
                          config_.diameter, config_.body_center + mesh_.displacement());
  ++step_;
  series_.push_back({field_.t, forces_.cl, forces_.cd, osc_.y, osc_.ydot, dt});
  if (config_.checkpoint_interval > 0 && !config_.checkpoint_path.empty() &&
      step_ % config_.checkpoint_interval == 0)
    save_checkpoint(config_.checkpoint_path);
  return series_.back();
}

void CoupledSolver::run(const std::function<void(const CoupledSolver&)>& on_step) {
  const double t_end = config_.t_final * (1.0 - 1e-12);
  while (field_.t < t_end && (config_.max_steps < 0 || step_ < config_.max_steps)) {
    step();
    if (on_step) on_step(*this);
  }
}

namespace {

constexpr char kMagic[8] = {'D', 'G', 'V', 'I', 'V', 'C', 'K', 'P'};
constexpr std::int32_t kCheckpointVersion = 1;

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw Error("truncated checkpoint");
  return v;
}

}  // namespace

void CoupledSolver::save_checkpoint(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint '" + path + "'");
  out.write(kMagic, sizeof(kMagic));
  put(out, kCheckpointVersion);
  put<std::int64_t>(out, step_);
  put(out, field_.t);
  for (double v : {osc_.y, osc_.ydot, osc_.yddot, osc_.m, osc_.c, osc_.k, osc_.beta, osc_.gamma})
    put(out, v);
  put(out, v_w_.x());
  put(out, v_w_.y());
  for (double v : {forces_.force.x(), forces_.force.y(), forces_.moment, forces_.lift,
                   forces_.drag, forces_.cl, forces_.cd})
    put(out, v);
  put(out, last_lambda_);
  put(out, mesh_.displacement().x());
  put(out, mesh_.displacement().y());
  put<std::int64_t>(out, mesh_.num_vertices());
  for (const Vec2& v : mesh_.vertices()) {
    put(out, v.x());
    put(out, v.y());
  }
  put<std::int32_t>(out, field_.n_p);
  put<std::int32_t>(out, field_.num_elements);
  for (Eigen::Index i = 0; i < field_.u.rows(); ++i)
    for (int j = 0; j < 4; ++j) put(out, field_.u(i, j));
  put<std::int64_t>(out, static_cast<std::int64_t>(series_.size()));
  for (const SeriesRow& r : series_)
    for (double v : {r.t, r.cl, r.cd, r.y, r.ydot, r.dt}) put(out, v);
  if (!out) throw Error("failed writing checkpoint '" + path + "'");
}

void CoupledSolver::load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint '" + path + "'");
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw Error("'" + path + "' is not a checkpoint file");
  if (get<std::int32_t>(in) != kCheckpointVersion) throw Error("unsupported checkpoint version");
  const long step = static_cast<long>(get<std::int64_t>(in));
  const double t = get<double>(in);
  OscillatorState osc;
  for (double* v : {&osc.y, &osc.ydot, &osc.yddot, &osc.m, &osc.c, &osc.k, &osc.beta, &osc.gamma})
    *v = get<double>(in);
  Vec2 v_w;
  v_w.x() = get<double>(in);
  v_w.y() = get<double>(in);
  Forces forces;
  forces.force.x() = get<double>(in);
  forces.force.y() = get<double>(in);
  for (double* v : {&forces.moment, &forces.lift, &forces.drag, &forces.cl, &forces.cd})
    *v = get<double>(in);
  const double lambda = get<double>(in);
  Vec2 displacement;
  displacement.x() = get<double>(in);
  displacement.y() = get<double>(in);
  const auto nv = get<std::int64_t>(in);
  if (nv != mesh_.num_vertices()) throw Error("checkpoint vertex count does not match the mesh");
  std::vector<Vec2> vertices(nv);
  for (Vec2& v : vertices) {
    v.x() = get<double>(in);
    v.y() = get<double>(in);
  }
  const int n_p = get<std::int32_t>(in);
  const int ne = get<std::int32_t>(in);
  if (n_p != field_.n_p || ne != field_.num_elements)
    throw Error("checkpoint field layout does not match the discretization");
  StateField field(n_p, ne);
  field.t = t;
  for (Eigen::Index i = 0; i < field.u.rows(); ++i)
    for (int j = 0; j < 4; ++j) field.u(i, j) = get<double>(in);
  const auto ns = get<std::int64_t>(in);
  std::vector<SeriesRow> series(ns);
  for (SeriesRow& r : series)
    for (double* v : {&r.t, &r.cl, &r.cd, &r.y, &r.ydot, &r.dt}) *v = get<double>(in);

  mesh_.set_vertex_positions(std::move(vertices), displacement);
  step_ = step;
  field_ = std::move(field);
  osc_ = osc;
  v_w_ = v_w;
  forces_ = forces;
  last_lambda_ = lambda;
  series_ = std::move(series);
}

void write_series_csv(const std::vector<SeriesRow>& series, const std::string& path) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> file(std::fopen(path.c_str(), "w"), &std::fclose);
  if (!file) throw Error("cannot write '" + path + "'");
  std::fprintf(file.get(), "t,CL,CD,y,ydot,dt\n");
  for (const SeriesRow& r : series)
    std::fprintf(file.get(), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.cl, r.cd, r.y,
                 r.ydot, r.dt);
}

}  // namespace dgviv
