#pragma once

#include "dgviv/types.hpp"

#include <functional>

namespace dgviv {

class Mesh;
struct OperatorTables;
struct GasParams;

/// Nodal conservative values of all elements, element k in rows [k*n_p, (k+1)*n_p).
struct StateField {
  int n_p = 0;
  int num_elements = 0;
  NodalState u;
  double t = 0.0;

  StateField() = default;
  StateField(int n_p_, int num_elements_)
      : n_p(n_p_), num_elements(num_elements_), u(NodalState::Zero(n_p_ * num_elements_, 4)) {}

  auto element(int k) { return u.middleRows(k * n_p, n_p); }
  auto element(int k) const { return u.middleRows(k * n_p, n_p); }
  State node(int k, int i) const { return u.row(k * n_p + i).transpose(); }
};

using StateFunction = std::function<State(const Vec2&)>;

/// Nodal interpolant of `f`.
StateField interpolate(const Mesh& mesh, const OperatorTables& tables, const StateFunction& f);
/// Uniform field.
StateField uniform_field(const Mesh& mesh, const OperatorTables& tables, const State& u);
/// Throws PositivityError with the first failing element/node.
void check_admissible(const StateField& field, const GasParams& gas);

}  // namespace dgviv
