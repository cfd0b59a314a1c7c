#pragma once

// Low-storage Runge-Kutta, Newmark structural integrator and the staggered
// fluid-structure loop with rigid mesh motion.

#include "dgviv/dg_core.hpp"
#include "dgviv/verify.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace dgviv {

/// Two-register scheme: K1 <- a_i K1 + dt f(t + c_i dt, K0); K0 <- K0 + b_i K1.
struct RKScheme {
  static constexpr int kStages = 5;
  std::array<double, kStages> a{}, b{}, c{};

  /// Five-stage fourth-order low-storage scheme of Carpenter and Kennedy.
  static RKScheme carpenter_kennedy();
};

/// Generic low-storage step for any vector-space type with +, scalar * and a zero.
template <typename V, typename F>
void low_storage_step(V& y, double t, double dt, F&& f, const RKScheme& s) {
  V k1 = y * 0.0;
  for (int i = 0; i < RKScheme::kStages; ++i) {
    k1 = s.a[i] * k1 + dt * f(t + s.c[i] * dt, y);
    y = y + s.b[i] * k1;
  }
}

/// One RK step of the DG system with v_w held fixed over all stages. A positivity
/// failure aborts the step (field untouched) and reports the stage.
void rk_step(StateField& field, double dt, DGOperator& op, const Vec2& v_w,
             const RKScheme& scheme = RKScheme::carpenter_kennedy());

struct OscillatorState {
  double y = 0.0, ydot = 0.0, yddot = 0.0;
  double m = 1.0, c = 0.0, k = 0.0;
  double beta = 0.25, gamma = 0.5;

  /// Sets the acceleration from equilibrium with force f.
  void initialize(double f);
};

/// Average-acceleration Newmark step with force f held constant over the step.
void newmark_step(OscillatorState& osc, double f, double dt);

struct StructuralCoefficients {
  double m_r = 1.0;
  double c_r = 0.0;
  double k_r = 0.0;
  double f_n = 0.0;   // natural frequency (Hz)
  double mass = 0.0;  // body mass per unit span; F_r = lift / mass
};

StructuralCoefficients structural_coefficients(double reduced_velocity, double mass_ratio,
                                               double damping_ratio, double v_inf, double diameter,
                                               double rho_inf);

struct SeriesRow {
  double t = 0.0, cl = 0.0, cd = 0.0, y = 0.0, ydot = 0.0, dt = 0.0;
};

struct CouplingConfig {
  double t_final = 1.0;
  long max_steps = -1;  // < 0: unlimited
  double dt_override = 0.0;  // > 0 replaces the estimator
  bool motion = false;
  StructuralCoefficients structure;
  double diameter = 1.0;
  Vec2 body_center = Vec2::Zero();
  long checkpoint_interval = 0;  // steps; 0 disables periodic checkpoints
  std::string checkpoint_path;
};

/// Staggered loop: structure advances with the lagged force, the mesh is
/// translated, the fluid takes one RK step with the resulting grid velocity and
/// the forces are recomputed.
class CoupledSolver {
 public:
  CoupledSolver(Mesh& mesh, DGOperator& op, const CouplingConfig& config, StateField initial);

  /// Advances one step; returns the appended series row.
  const SeriesRow& step();
  /// Advances until t_final or max_steps; `on_step` is called after every step.
  void run(const std::function<void(const CoupledSolver&)>& on_step = {});

  double time() const { return field_.t; }
  long steps() const { return step_; }
  const StateField& field() const { return field_; }
  const OscillatorState& oscillator() const { return osc_; }
  const Vec2& grid_velocity() const { return v_w_; }
  const std::vector<SeriesRow>& series() const { return series_; }
  const Forces& forces() const { return forces_; }
  double last_lambda() const { return last_lambda_; }

  void save_checkpoint(const std::string& path) const;
  void load_checkpoint(const std::string& path);

 private:
  Mesh& mesh_;
  DGOperator& op_;
  CouplingConfig config_;
  StateField field_;
  OscillatorState osc_;
  Vec2 v_w_ = Vec2::Zero();
  Forces forces_;
  long step_ = 0;
  double last_lambda_ = 0.0;
  std::vector<SeriesRow> series_;
};

/// Writes the `t,CL,CD,y,ydot,dt` series with round-trip precision.
void write_series_csv(const std::vector<SeriesRow>& series, const std::string& path);

}  // namespace dgviv
