#pragma once

// Interior-penalty parameter and explicit time-step estimators.

#include "dgviv/field.hpp"
#include "dgviv/mesh.hpp"
#include "dgviv/physics.hpp"
#include "dgviv/refelem.hpp"

#include <string>
#include <vector>

namespace dgviv {

struct PenaltyConfig {
  double theta = 1.0;   // 1 symmetric, 0 incomplete, -1 non-symmetric
  double c1 = 0.01;
  double c_cfl = 0.8;
  double dt_max = 1e-2;  // returned when the estimator sees no dynamics
  bool freeze_per_step = false;

  void validate() const;
};

/// Trace inverse constant (p+1)(p+2)|e| / (2|K|).
double trace_inverse_constant(int p, double face_length, double area);
/// max over faces of trace_inverse_constant for element k.
double element_trace_constant(const Mesh& mesh, int k, int p);

/// Spectral norm of sum_ij n_i n_j G_ij.
double normal_diffusion_norm(const Mat8& g, const Vec2& n);
/// Same quantity for G(u), without forming the tensor.
double normal_diffusion_norm(const State& u, const Vec2& n, const GasParams& gas);
/// Max of normal_diffusion_norm over a set of traces.
double gbar_face(const std::vector<State>& traces, const Vec2& n, const GasParams& gas);

/// sigma_e = C1 (1+theta)^2 (d+1) gbar max C_inv.
double penalty_sigma(double gbar, double max_c_inv, const PenaltyConfig& cfg);

/// Constant C_grad with ||grad q||^2 <= C_grad p^4 rho_K^-2 ||q||^2 on the reference
/// triangle, computed from the extreme generalized eigenvalue of stiffness vs mass.
double gradient_inverse_constant(int p);

/// Per-element ingredients of the two estimators.
struct ElementCfl {
  double c_inv = 0.0;     // max face trace constant
  double c_inv2 = 0.0;    // C_grad p^4 rho_K^-2
  double beta = 0.0;      // max nodal |b_ns| (max-norm of its components)
  double beta_prime = 0.0;  // half max |div v|
  double g_k = 0.0;       // max ||G|| over K and face neighbours
  double g_tilde = 0.0;   // max g_k over K and face neighbours
  double sigma_k = 0.0;   // max face penalty
  double lambda = 0.0;
  double lambda_tilde = 0.0;
};

struct CflReport {
  double lambda = 0.0;
  double lambda_tilde = 0.0;
  std::string tilde_error;  // set when the operator-norm estimator is undefined
  std::vector<ElementCfl> elements;
};

/// Evaluates both estimators for the given state and face penalties.
CflReport cfl_estimate(const Mesh& mesh, const OperatorTables& tables, const StateField& field,
                       const GasParams& gas, const Vec2& v_w, const std::vector<double>& sigma,
                       const PenaltyConfig& cfg);

double lambda_rayleigh(const CflReport& report);
/// Throws Error when sigma_K = 0 (or C1 = 0) with mu > 0.
double lambda_tilde(const CflReport& report);

/// dt = C_CFL / lambda, or dt_max when lambda is zero.
double timestep(double lambda, const PenaltyConfig& cfg);

}  // namespace dgviv
