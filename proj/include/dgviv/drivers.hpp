#pragma once

// Run drivers behind the command-line subcommands.

#include "dgviv/config.hpp"
#include "dgviv/time_fsi.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace dgviv {

struct ConvergenceSample {
  int p = 0;
  double theta = 0.0;
  int cells = 0;  // cells per side of the unit square
  double h = 0.0;
  ErrorNorms error;
  double sigma_max = 0.0;
  long steps = 0;
  double residual = 0.0;  // final max |dU/dt| / max |U|
};

struct ConvergenceRate {
  int p = 0;
  double theta = 0.0;
  double rate_l2 = 0.0;
  double rate_linf = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergenceSample> samples;
  std::vector<ConvergenceRate> rates;
};

/// Marches the forced manufactured problem on an n x n structured mesh of the unit
/// square to a steady state and measures the error against the exact solution.
ConvergenceSample solve_manufactured(const SolverConfig& config, int p, double theta, int cells,
                                     std::ostream* log = nullptr);

/// Full study; writes convergence_theta<k>.csv and rates.json when `write` is set.
ConvergenceResult run_convergence(const SolverConfig& config, std::ostream* log = nullptr,
                                  bool write = true);

struct RunSummary {
  long steps = 0;
  double t_end = 0.0;
  double f_prim = 0.0;      // dominant frequency of the lift (stationary) or displacement (moving)
  double strouhal = 0.0;    // lift frequency * D / |v_inf|
  double cl_max = 0.0;
  double cd_mean = 0.0;
  double amplitude_max = 0.0;  // max |y| / D in the statistics window
  double f_n = 0.0;
  std::vector<SeriesRow> series;
};

/// Stationary cylinder (motion disabled) or elastically mounted cylinder.
RunSummary run_cylinder(const SolverConfig& config, std::ostream* log = nullptr);
RunSummary run_viv(const SolverConfig& config, std::ostream* log = nullptr);

void penalty_report(const SolverConfig& config, std::ostream* log = nullptr);
void cfl_report(const SolverConfig& config, std::ostream* log = nullptr);

/// Initial field of the cylinder runs: free stream plus the optional transverse bump.
StateField cylinder_initial_field(const SolverConfig& config, const Mesh& mesh,
                                  const OperatorTables& tables);

}  // namespace dgviv
