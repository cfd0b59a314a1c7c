#pragma once

// Compressible Navier-Stokes gas model: state conversions, fluxes, diffusion
// tensor, Roe numerical flux and boundary ghost states.

#include "dgviv/types.hpp"

namespace dgviv {

struct GasParams {
  double gamma = 1.4;
  double prandtl = 0.72;
  double mu = 0.0;
  double c_v = 717.5;

  void validate() const;
};

/// Primitive variables Q = [rho, v1, v2, p].
struct Primitive {
  double rho = 0.0;
  Vec2 v = Vec2::Zero();
  double p = 0.0;
};

/// p = (gamma - 1)(eps - rho |v|^2 / 2). Throws PositivityError if rho <= 0 or p <= 0.
double eos_pressure(const State& u, const GasParams& gas);
Primitive to_primitive(const State& u, const GasParams& gas);
State to_conservative(const Primitive& q, const GasParams& gas);
double sound_speed(const Primitive& q, const GasParams& gas);
/// Temperature from eps = c_v rho T + rho |v|^2 / 2.
double temperature(const State& u, const GasParams& gas);

/// Advective flux including the grid-velocity term, F_c(U) - v_w (x) U.
Flux advective_flux(const State& u, const Vec2& v_w, const GasParams& gas);
/// Flux along a unit normal: (F_c(U) - v_w (x) U) n.
State normal_flux(const State& u, const Vec2& n, const Vec2& v_w, const GasParams& gas);

/// Block diffusion tensor [[G11, G12], [G21, G22]] acting on [dU/dx; dU/dy].
/// Only requires rho > 0.
Mat8 diffusion_tensor(const State& u, const GasParams& gas);
/// Block (i, j) of a diffusion tensor.
inline Mat4 g_block(const Mat8& g, int i, int j) { return g.block<4, 4>(4 * i, 4 * j); }
/// Viscous flux F_v = G(U) grad U, column j in direction j.
Flux viscous_flux(const Mat8& g, const StateGrad& grad);
/// G(U) grad U without forming the tensor; same result as diffusion_tensor(u) * grad.
StateGrad apply_diffusion(const State& u, const StateGrad& grad, const GasParams& gas);

/// Roe-averaged quantities of a state pair.
struct RoeAverage {
  double rho = 0.0;
  Vec2 v = Vec2::Zero();
  double h = 0.0;  // total enthalpy per unit mass
  double c = 0.0;
};

/// Throws PositivityError if the averaged sound speed is not positive.
RoeAverage roe_average(const State& a, const State& b, const GasParams& gas);
/// Signed Roe matrix A(n) = dF_N/dU at the Roe average (grid-velocity shift included).
Mat4 roe_matrix(const State& a, const State& b, const Vec2& n, const Vec2& v_w,
                const GasParams& gas);
/// |A| built from the eigen-decomposition of the Roe matrix.
Mat4 roe_abs_matrix(const State& a, const State& b, const Vec2& n, const Vec2& v_w,
                    const GasParams& gas);
/// Roe flux H = (F_N(U+) + F_N(U-))/2 - |A|(U- - U+)/2, oriented along n (from + to -).
State roe_flux(const State& u_plus, const State& u_minus, const Vec2& n, const Vec2& v_w,
               const GasParams& gas);

/// Wall ghost: density and pressure of the interior trace, velocity of the wall.
State wall_ghost(const State& interior, const Vec2& v_w, const GasParams& gas);

/// Free-stream description used for far-field ghosts and normalizations.
struct Freestream {
  double rho = 1.0;
  Vec2 v = Vec2(1.0, 0.0);
  double p = 1.0;

  State state(const GasParams& gas) const;
  double speed() const { return v.norm(); }
};

/// Far-field ghost: the free-stream state, independent of the interior.
inline State farfield_ghost(const Freestream& fs, const GasParams& gas) { return fs.state(gas); }

}  // namespace dgviv
