#pragma once

// Versioned JSON run configuration.

#include "dgviv/penalty.hpp"
#include "dgviv/physics.hpp"
#include "dgviv/verify.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dgviv {

constexpr int kConfigVersion = 1;

struct GasSection {
  double gamma = 1.4;
  double prandtl = 0.72;
  std::optional<double> mu;        // dynamic viscosity (Pa s)
  std::optional<double> reynolds;  // alternative: mu = rho v D / Re
  double c_v = 717.5;
};

struct DiscretizationSection {
  int p = 3;
  std::optional<int> p_f;  // default 3p
  double theta = 1.0;
  double c1 = 0.01;

  int overintegration() const { return p_f ? *p_f : 3 * p; }
};

struct TimeSection {
  double c_cfl = 0.8;
  std::optional<double> dt_override;
  double dt_max = 1e-2;
  double t_final = 1.0;
  long max_steps = -1;
  long checkpoint_interval = 0;
  bool freeze_penalty = false;
};

struct FreestreamSection {
  double mach = 0.1;
  double rho = 1.0;
  double p = 100.0 / 1.4;  // sound speed 10 m/s for rho = 1, gamma = 1.4
  double angle = 0.0;      // degrees
};

struct ManufacturedSection {
  double kappa = 25.0;
  double c2 = 200.0;
  std::vector<int> orders{2, 3, 4};
  std::vector<double> thetas{0.0, 1.0};
  std::vector<int> default_levels{8, 16, 32};
  std::map<std::string, std::vector<int>> levels;  // per order, cells per side
  bool skew_layer = false;
  double residual_tol = 1e-10;
  double stall_tol = 1e-6;  // relative change of the L2 error between checks
  long check_interval = 50;
  long max_steps = 20000;
};

struct CylinderSection {
  double diameter = 1.0;
  std::vector<double> center{0.0, 0.0};
  double perturbation = 0.0;  // amplitude of the initial transverse velocity bump / v_inf
  double stats_start = 0.0;   // samples before this time are excluded from statistics
  long vtk_interval = 0;      // steps between snapshots; 0 writes only the final field
  double profile_start = 0.75;  // wake line x range (multiples of D behind the center)
  double profile_end = 5.0;
  int profile_points = 200;
};

struct VivSection {
  double reduced_velocity = 5.0;
  double mass_ratio = 1.0;
  double damping_ratio = 0.01;
  bool motion = true;
};

struct IoSection {
  std::string mesh;
  std::string output_dir = "output";
  long series_stride = 1;
};

struct SolverConfig {
  int version = kConfigVersion;
  GasSection gas;
  DiscretizationSection discretization;
  TimeSection time;
  FreestreamSection freestream;
  std::optional<ManufacturedSection> manufactured;
  std::optional<CylinderSection> cylinder;
  std::optional<VivSection> viv;
  IoSection io;

  /// Throws ConfigError on inconsistent or out-of-range values.
  void validate() const;

  Freestream freestream_state() const;
  /// Gas parameters with mu resolved from the Reynolds number when given.
  GasParams gas_params() const;
  PenaltyConfig penalty_config() const;
  double diameter() const { return cylinder ? cylinder->diameter : 1.0; }
};

/// Parses and validates; unknown keys are rejected.
SolverConfig parse_config(const std::string& json_text);
SolverConfig load_config(const std::string& path);
std::string serialize_config(const SolverConfig& config);

}  // namespace dgviv
