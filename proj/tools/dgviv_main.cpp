#include "dgviv/drivers.hpp"
#include "dgviv/parallel.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Discontinuous Galerkin solver for compressible flow past elastically mounted bodies"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<double> dt;
  int threads = 1;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--dt", dt, "fixed time step, overrides the CFL estimate")->check(CLI::PositiveNumber);
    sub->add_option("--threads", threads, "worker threads for residual evaluation")->check(CLI::PositiveNumber);
  };
  CLI::App* convergence = app.add_subcommand("convergence", "manufactured-solution convergence study");
  CLI::App* cylinder = app.add_subcommand("cylinder", "flow past a stationary cylinder");
  CLI::App* viv = app.add_subcommand("viv", "flow past an elastically mounted cylinder");
  CLI::App* penalty = app.add_subcommand("penalty-report", "per-face penalty and per-element CFL terms");
  CLI::App* cfl = app.add_subcommand("cfl-report", "time step estimates per polynomial order");
  for (CLI::App* sub : {convergence, cylinder, viv, penalty, cfl}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    dgviv::SolverConfig config = dgviv::load_config(config_path);
    if (dt) config.time.dt_override = *dt;
    dgviv::set_num_threads(threads);
    std::ostream* log = &std::cerr;
    if (convergence->parsed()) {
      dgviv::run_convergence(config, log);
    } else if (cylinder->parsed()) {
      const auto s = dgviv::run_cylinder(config, log);
      std::cout << "steps " << s.steps << " t " << s.t_end << " St " << s.strouhal << " CD "
                << s.cd_mean << "\n";
    } else if (viv->parsed()) {
      const auto s = dgviv::run_viv(config, log);
      std::cout << "steps " << s.steps << " t " << s.t_end << " f_prim " << s.f_prim << " f_n "
                << s.f_n << " A/D " << s.amplitude_max << "\n";
    } else if (penalty->parsed()) {
      dgviv::penalty_report(config, log);
    } else if (cfl->parsed()) {
      dgviv::cfl_report(config, log);
    }
  } catch (const dgviv::PositivityError& e) {
    std::cerr << "positivity failure: " << e.what() << "\n";
    return 3;
  } catch (const dgviv::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
