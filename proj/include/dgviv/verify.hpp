#pragma once

// Verification and post-processing: manufactured solution, error norms,
// convergence rates, aerodynamic forces, spectra and vorticity sampling.

#include "dgviv/field.hpp"
#include "dgviv/mesh.hpp"
#include "dgviv/physics.hpp"
#include "dgviv/refelem.hpp"

#include <vector>

namespace dgviv {

/// Steady exact solution U = [s, s, s, s^2], s = sin(kappa (x + y)) + c2.
struct ManufacturedCase {
  double kappa = 25.0;
  double c2 = 200.0;
  GasParams gas{1.4, 0.72, 0.01, 717.5};
};

State manufactured_state(const Vec2& x, const ManufacturedCase& mc);
/// Volume source balancing div(F_c - F_v) for the exact solution.
State manufactured_source(const Vec2& x, const ManufacturedCase& mc);

struct ErrorNorms {
  double l2 = 0.0;
  double linf = 0.0;
};

/// L2 over all four components by cubature, Linf over a dense per-element lattice.
ErrorNorms error_norms(const StateField& field, const StateFunction& exact, const Mesh& mesh,
                       const OperatorTables& tables);

/// Least-squares slope of log(error) against log(h).
double convergence_rate(const std::vector<double>& errors, const std::vector<double>& h);

struct Forces {
  Vec2 force = Vec2::Zero();  // on the body, per unit span
  double moment = 0.0;        // about the body reference point
  double lift = 0.0, drag = 0.0;
  double cl = 0.0, cd = 0.0;
};

/// Integrates -p n + tau n over wall faces (n pointing out of the body).
Forces aero_forces(const StateField& field, const Mesh& mesh, const OperatorTables& tables,
                   const GasParams& gas, const Freestream& fs, double diameter,
                   const Vec2& center);

struct Spectrum {
  std::vector<double> f;
  std::vector<double> mag;
};

struct Mode {
  double f = 0.0;
  double mag = 0.0;
};

/// Single-sided magnitude spectrum of a (possibly non-uniformly sampled) series.
/// The series is resampled uniformly by linear interpolation, the mean removed and a
/// Hann window applied when `hann` is set.
Spectrum dft_spectrum(const std::vector<double>& t, const std::vector<double>& values,
                      bool hann = true);
/// Up to k local maxima sorted by magnitude, refined by parabolic interpolation.
std::vector<Mode> dominant_modes(const Spectrum& spectrum, int k);

/// Nodal vorticity dv/dx - du/dy from conservative broken gradients.
Vector vorticity_field(const StateField& field, const Matrix& gradients);

struct ProfilePoint {
  Vec2 x = Vec2::Zero();
  double value = 0.0;
};

/// Samples a nodal scalar at n equispaced points of segment [a, b].
std::vector<ProfilePoint> sample_line(const Mesh& mesh, const OperatorTables& tables,
                                      const Vector& nodal, const Vec2& a, const Vec2& b, int n);

}  // namespace dgviv
