#pragma once

// Semi-discrete interior-penalty DG operator: M dU/dt = R(U).

#include "dgviv/field.hpp"
#include "dgviv/mesh.hpp"
#include "dgviv/penalty.hpp"
#include "dgviv/physics.hpp"
#include "dgviv/refelem.hpp"

#include <optional>
#include <vector>

namespace dgviv {

struct BoundaryData {
  Freestream freestream;
  /// Position-dependent far-field state; the free stream when empty.
  StateFunction exterior;
};

struct OperatorOptions {
  bool advection = true;
  bool diffusion = true;
  /// Replaces G(U) by a constant tensor everywhere (linear diffusion studies).
  std::optional<Mat8> frozen_diffusion;
};

/// Bit mask selecting residual contributions.
enum ResidualPart : unsigned {
  kVolume = 1u,
  kInteriorFaces = 2u,
  kBoundaryFaces = 4u,
  kSource = 8u,
  kAllParts = 15u,
};

/// Broken gradient at the nodes, (K*N_p) x 8 ordered [d/dx U, d/dy U].
Matrix broken_gradient(const StateField& field, const Mesh& mesh, const OperatorTables& tables);

class DGOperator {
 public:
  DGOperator(const Mesh& mesh, const OperatorTables& tables, const GasParams& gas,
             const PenaltyConfig& penalty, BoundaryData boundary, OperatorOptions options = {});

  const Mesh& mesh() const { return mesh_; }
  const OperatorTables& tables() const { return tables_; }
  const GasParams& gas() const { return gas_; }
  const PenaltyConfig& penalty_config() const { return penalty_; }
  const BoundaryData& boundary() const { return boundary_; }

  /// Precomputes the load vector of a steady volume source.
  void set_source(const StateFunction& source);
  void clear_source() { source_load_.reset(); }

  /// Face penalties sigma_e of the given state (boundary ghosts built with v_w).
  std::vector<double> compute_penalties(const StateField& field, const Vec2& v_w) const;
  /// Called at the start of each time step; freezes sigma when configured.
  void begin_step(const StateField& field, const Vec2& v_w);
  void freeze_penalties(std::vector<double> sigma);
  void unfreeze_penalties() { frozen_sigma_.reset(); }
  /// Penalties used by the most recent residual evaluation.
  const std::vector<double>& last_penalties() const { return sigma_; }

  /// R with M dU/dt = R, N_p*K x 4.
  NodalState residual(const StateField& field, const Vec2& v_w, unsigned parts = kAllParts);
  /// M^-1 applied element by element.
  NodalState apply_inverse_mass(const NodalState& r) const;
  /// M^-1 R.
  NodalState rhs(const StateField& field, const Vec2& v_w) {
    return apply_inverse_mass(residual(field, v_w));
  }
  /// M R element by element (inverse of apply_inverse_mass).
  NodalState apply_mass(const NodalState& r) const;

  /// Both CFL estimators at the current state, using freshly computed penalties.
  CflReport cfl(const StateField& field, const Vec2& v_w) const;

 private:
  Mat8 diffusion(const State& u) const;
  StateGrad diffusive_flux(const State& u, const StateGrad& grad) const;
  void gather_traces(const StateField& field);
  void face_fluxes(const Vec2& v_w, unsigned parts);
  void volume(const StateField& field, const Vec2& v_w, NodalState& r) const;
  void scatter_faces(unsigned parts, NodalState& r) const;

  const Mesh& mesh_;
  const OperatorTables& tables_;
  GasParams gas_;
  PenaltyConfig penalty_;
  BoundaryData boundary_;
  OperatorOptions options_;
  bool has_diffusion_;

  std::vector<Matrix> face_rs_;  // reference coordinates of face quadrature points
  std::optional<NodalState> source_load_;
  std::optional<std::vector<double>> frozen_sigma_;
  std::vector<double> sigma_;

  // Per element-face quadrature traces, index (3k+f)*n_q + q.
  std::vector<State> trace_u_;
  std::vector<StateGrad> trace_grad_;
  // Per face quadrature fluxes, index g*n_q + q in the quadrature order of the left side.
  std::vector<State> flux_;
  std::vector<StateGrad> theta_left_, theta_right_;
};

}  // namespace dgviv
