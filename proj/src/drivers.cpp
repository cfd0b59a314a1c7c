#include "dgviv/drivers.hpp"

#include "dgviv/vtk.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>

namespace dgviv {

namespace fs = std::filesystem;

namespace {

std::string output_path(const SolverConfig& config, const std::string& name) {
  fs::create_directories(config.io.output_dir);
  return (fs::path(config.io.output_dir) / name).string();
}

using File = std::unique_ptr<std::FILE, int (*)(std::FILE*)>;

File open_file(const std::string& path) {
  File f(std::fopen(path.c_str(), "w"), &std::fclose);
  if (!f) throw Error("cannot write '" + path + "'");
  return f;
}

std::string theta_tag(double theta) {
  return theta < 0.0 ? "m" + std::to_string(static_cast<int>(-theta))
                     : std::to_string(static_cast<int>(theta));
}

std::vector<int> levels_for(const ManufacturedSection& m, int p) {
  auto it = m.levels.find(std::to_string(p));
  return it != m.levels.end() ? it->second : m.default_levels;
}

ManufacturedCase manufactured_case(const SolverConfig& config) {
  ManufacturedCase mc;
  const ManufacturedSection m = config.manufactured.value_or(ManufacturedSection{});
  mc.kappa = m.kappa;
  mc.c2 = m.c2;
  mc.gas = config.gas_params();
  return mc;
}

}  // namespace

ConvergenceSample solve_manufactured(const SolverConfig& config, int p, double theta, int cells,
                                     std::ostream* log) {
  const ManufacturedSection m = config.manufactured.value_or(ManufacturedSection{});
  const ManufacturedCase mc = manufactured_case(config);
  const Mesh mesh = generate_structured(cells, cells, Rect{}, m.skew_layer);
  const int p_f = config.discretization.p_f ? std::max(*config.discretization.p_f, 2 * p) : 3 * p;
  const OperatorTables tables = build_tables(p, p_f);
  PenaltyConfig pen = config.penalty_config();
  pen.theta = theta;

  const StateFunction exact = [&mc](const Vec2& x) { return manufactured_state(x, mc); };
  BoundaryData bc;
  bc.exterior = exact;
  DGOperator op(mesh, tables, mc.gas, pen, bc);
  op.set_source([&mc](const Vec2& x) { return manufactured_source(x, mc); });

  StateField u = interpolate(mesh, tables, exact);
  const double u_scale = u.u.cwiseAbs().maxCoeff();
  const Vec2 v_w = Vec2::Zero();

  double dt = 0.0;
  auto refresh_dt = [&] {
    dt = config.time.dt_override ? *config.time.dt_override
                                 : timestep(op.cfl(u, v_w).lambda, pen);
  };
  refresh_dt();

  ConvergenceSample s;
  s.p = p;
  s.theta = theta;
  s.cells = cells;
  s.h = 1.0 / cells;
  double last_l2 = error_norms(u, exact, mesh, tables).l2;
  int quiet = 0;  // consecutive checks below the stall tolerance
  for (long step = 1; step <= m.max_steps; ++step) {
    const bool check = step % m.check_interval == 0 || step == m.max_steps;
    NodalState before;
    if (check) before = u.u;
    op.begin_step(u, v_w);
    rk_step(u, dt, op, v_w);
    s.steps = step;
    if (!check) continue;
    s.residual = (u.u - before).cwiseAbs().maxCoeff() / (dt * u_scale);
    const double l2 = error_norms(u, exact, mesh, tables).l2;
    const double change = std::abs(l2 - last_l2) / l2;
    last_l2 = l2;
    if (log)
      *log << "  p=" << p << " theta=" << theta << " n=" << cells << " step " << step
           << " t=" << u.t << " residual=" << s.residual << " L2=" << l2 << "\n";
    quiet = change < m.stall_tol ? quiet + 1 : 0;
    if (s.residual < m.residual_tol || quiet >= 2) break;
    refresh_dt();
  }
  s.error = error_norms(u, exact, mesh, tables);
  const std::vector<double> sigma = op.compute_penalties(u, v_w);
  for (double v : sigma) s.sigma_max = std::max(s.sigma_max, v);
  return s;
}

ConvergenceResult run_convergence(const SolverConfig& config, std::ostream* log, bool write) {
  if (!config.manufactured) throw ConfigError("convergence run needs a 'manufactured' section");
  const ManufacturedSection& m = *config.manufactured;
  ConvergenceResult result;
  for (double theta : m.thetas) {
    for (int p : m.orders) {
      std::vector<double> h, l2, linf;
      for (int n : levels_for(m, p)) {
        ConvergenceSample s = solve_manufactured(config, p, theta, n, log);
        if (log)
          *log << "p=" << p << " theta=" << theta << " h=" << s.h << " L2=" << s.error.l2
               << " Linf=" << s.error.linf << " steps=" << s.steps << "\n";
        h.push_back(s.h);
        l2.push_back(s.error.l2);
        linf.push_back(s.error.linf);
        result.samples.push_back(s);
      }
      result.rates.push_back({p, theta, convergence_rate(l2, h), convergence_rate(linf, h)});
      if (log)
        *log << "p=" << p << " theta=" << theta << " r2=" << result.rates.back().rate_l2
             << " rinf=" << result.rates.back().rate_linf << "\n";
    }
  }
  if (!write) return result;

  for (double theta : m.thetas) {
    File f = open_file(output_path(config, "convergence_theta" + theta_tag(theta) + ".csv"));
    std::fprintf(f.get(), "p,h,L2,Linf\n");
    for (const auto& s : result.samples)
      if (s.theta == theta)
        std::fprintf(f.get(), "%d,%.17g,%.17g,%.17g\n", s.p, s.h, s.error.l2, s.error.linf);
  }
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : result.rates) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& s : result.samples)
      if (s.theta == r.theta && s.p == r.p)
        levels.push_back({{"cells", s.cells},
                          {"h", s.h},
                          {"L2", s.error.l2},
                          {"Linf", s.error.linf},
                          {"sigma_max", s.sigma_max},
                          {"steps", s.steps},
                          {"residual", s.residual}});
    j.push_back({{"p", r.p},
                 {"theta", r.theta},
                 {"rate_L2", r.rate_l2},
                 {"rate_Linf", r.rate_linf},
                 {"levels", levels}});
  }
  std::ofstream(output_path(config, "rates.json")) << j.dump(2) << "\n";
  return result;
}

StateField cylinder_initial_field(const SolverConfig& config, const Mesh& mesh,
                                  const OperatorTables& tables) {
  const GasParams gas = config.gas_params();
  const Freestream fs = config.freestream_state();
  const CylinderSection cy = config.cylinder.value_or(CylinderSection{});
  const Vec2 center(cy.center[0], cy.center[1]);
  const double amp = cy.perturbation * fs.speed();
  const double d = cy.diameter;
  return interpolate(mesh, tables, [&](const Vec2& x) {
    Primitive q{fs.rho, fs.v, fs.p};
    if (amp != 0.0) {
      const Vec2 r = x - center - Vec2(d, 0.0);
      q.v.y() += amp * std::exp(-r.squaredNorm() / (0.25 * d * d));
    }
    return to_conservative(q, gas);
  });
}

namespace {

RunSummary run_body(const SolverConfig& config, bool moving, std::ostream* log) {
  if (config.io.mesh.empty()) throw ConfigError("io.mesh is required for cylinder runs");
  Mesh mesh = load_msh(config.io.mesh);
  if (!mesh.has_tag(BoundaryTag::Wall)) throw ConfigError("cylinder mesh has no wall boundary");
  const GasParams gas = config.gas_params();
  const Freestream fs = config.freestream_state();
  const OperatorTables tables =
      build_tables(config.discretization.p, config.discretization.overintegration());
  BoundaryData bc;
  bc.freestream = fs;
  DGOperator op(mesh, tables, gas, config.penalty_config(), bc);

  const CylinderSection cy = config.cylinder.value_or(CylinderSection{});
  CouplingConfig cc;
  cc.t_final = config.time.t_final;
  cc.max_steps = config.time.max_steps;
  cc.dt_override = config.time.dt_override.value_or(0.0);
  cc.diameter = cy.diameter;
  cc.body_center = Vec2(cy.center[0], cy.center[1]);
  cc.checkpoint_interval = config.time.checkpoint_interval;
  cc.checkpoint_path = output_path(config, moving ? "viv.ckpt" : "cylinder.ckpt");
  RunSummary summary;
  if (moving) {
    const VivSection viv = config.viv.value_or(VivSection{});
    cc.motion = viv.motion;
    cc.structure = structural_coefficients(viv.reduced_velocity, viv.mass_ratio,
                                           viv.damping_ratio, fs.speed(), cy.diameter, fs.rho);
    summary.f_n = cc.structure.f_n;
  }

  const std::string prefix = moving ? "viv" : "cylinder";
  CoupledSolver solver(mesh, op, cc, cylinder_initial_field(config, mesh, tables));
  long snapshot = 0;
  solver.run([&](const CoupledSolver& s) {
    if (log && s.steps() % 100 == 0) {
      const SeriesRow& r = s.series().back();
      *log << prefix << " step " << s.steps() << " t=" << r.t << " dt=" << r.dt << " CL=" << r.cl
           << " CD=" << r.cd << " y=" << r.y << "\n";
    }
    if (cy.vtk_interval > 0 && s.steps() % cy.vtk_interval == 0) {
      char name[64];
      std::snprintf(name, sizeof(name), "%s_%06ld.vtk", prefix.c_str(), snapshot++);
      write_vtk(s.field(), mesh, tables, gas, output_path(config, name));
    }
  });

  summary.steps = solver.steps();
  summary.t_end = solver.time();
  summary.series = solver.series();
  std::vector<SeriesRow> strided;
  for (std::size_t i = 0; i < summary.series.size(); i += config.io.series_stride)
    strided.push_back(summary.series[i]);
  write_series_csv(strided, output_path(config, prefix + "_series.csv"));
  write_vtk(solver.field(), mesh, tables, gas, output_path(config, prefix + "_final.vtk"));

  // Wake vorticity profile.
  const Matrix grad = broken_gradient(solver.field(), mesh, tables);
  const Vector omega = vorticity_field(solver.field(), grad);
  const Vec2 c = Vec2(cy.center[0], cy.center[1]) + mesh.displacement();
  try {
    const auto profile =
        sample_line(mesh, tables, omega, c + Vec2(cy.profile_start * cy.diameter, 0.0),
                    c + Vec2(cy.profile_end * cy.diameter, 0.0), cy.profile_points);
    File f = open_file(output_path(config, prefix + "_profile.csv"));
    std::fprintf(f.get(), "x,omega\n");
    for (const auto& pt : profile) std::fprintf(f.get(), "%.17g,%.17g\n", pt.x.x(), pt.value);
  } catch (const Error& e) {
    if (log) *log << "wake profile skipped: " << e.what() << "\n";
  }

  // Statistics over the post-transient window.
  std::vector<double> t, cl, y;
  double cd_sum = 0.0;
  for (const SeriesRow& r : summary.series) {
    if (r.t < cy.stats_start) continue;
    t.push_back(r.t);
    cl.push_back(r.cl);
    y.push_back(r.y);
    cd_sum += r.cd;
    summary.cl_max = std::max(summary.cl_max, std::abs(r.cl));
    summary.amplitude_max = std::max(summary.amplitude_max, std::abs(r.y) / cy.diameter);
  }
  if (!t.empty()) summary.cd_mean = cd_sum / t.size();
  if (t.size() >= 16) {
    const Spectrum cl_spec = dft_spectrum(t, cl);
    const auto cl_modes = dominant_modes(cl_spec, 2);
    const double f_lift = cl_modes.empty() ? 0.0 : cl_modes[0].f;
    summary.strouhal = f_lift * cy.diameter / fs.speed();
    summary.f_prim = f_lift;
    Spectrum out_spec = cl_spec;
    if (moving) {
      out_spec = dft_spectrum(t, y);
      const auto y_modes = dominant_modes(out_spec, 2);
      summary.f_prim = y_modes.empty() ? 0.0 : y_modes[0].f;
    }
    File f = open_file(output_path(config, prefix + "_spectrum.csv"));
    std::fprintf(f.get(), "f,mag\n");
    for (std::size_t i = 0; i < out_spec.f.size(); ++i)
      std::fprintf(f.get(), "%.17g,%.17g\n", out_spec.f[i], out_spec.mag[i]);
  }

  nlohmann::json j = {{"steps", summary.steps},
                      {"t_end", summary.t_end},
                      {"stats_start", cy.stats_start},
                      {"f_prim", summary.f_prim},
                      {"strouhal", summary.strouhal},
                      {"cl_max", summary.cl_max},
                      {"cd_mean", summary.cd_mean},
                      {"amplitude_max", summary.amplitude_max}};
  if (moving) {
    j["f_n"] = summary.f_n;
    j["f_prim_over_f_n"] = summary.f_n > 0.0 ? summary.f_prim / summary.f_n : 0.0;
  }
  std::ofstream(output_path(config, prefix + "_summary.json")) << j.dump(2) << "\n";
  return summary;
}

struct ReportCase {
  std::unique_ptr<Mesh> mesh;
  StateFunction initial;
  BoundaryData bc;
  GasParams gas;
};

ReportCase report_case(const SolverConfig& config) {
  ReportCase rc;
  rc.gas = config.gas_params();
  if (!config.io.mesh.empty()) {
    rc.mesh = std::make_unique<Mesh>(load_msh(config.io.mesh));
    rc.bc.freestream = config.freestream_state();
    const Freestream fs = rc.bc.freestream;
    const GasParams gas = rc.gas;
    rc.initial = [fs, gas](const Vec2&) { return fs.state(gas); };
  } else if (config.manufactured) {
    const ManufacturedCase mc = manufactured_case(config);
    rc.mesh = std::make_unique<Mesh>(
        generate_structured(config.manufactured->default_levels.front(),
                            config.manufactured->default_levels.front(), Rect{},
                            config.manufactured->skew_layer));
    rc.initial = [mc](const Vec2& x) { return manufactured_state(x, mc); };
    rc.bc.exterior = rc.initial;
  } else {
    throw ConfigError("reports need io.mesh or a 'manufactured' section");
  }
  return rc;
}

}  // namespace

RunSummary run_cylinder(const SolverConfig& config, std::ostream* log) {
  return run_body(config, false, log);
}

RunSummary run_viv(const SolverConfig& config, std::ostream* log) {
  if (!config.viv) throw ConfigError("viv run needs a 'viv' section");
  return run_body(config, true, log);
}

void penalty_report(const SolverConfig& config, std::ostream* log) {
  ReportCase rc = report_case(config);
  const OperatorTables tables =
      build_tables(config.discretization.p, config.discretization.overintegration());
  DGOperator op(*rc.mesh, tables, rc.gas, config.penalty_config(), rc.bc);
  const StateField u = interpolate(*rc.mesh, tables, rc.initial);
  const std::vector<double> sigma = op.compute_penalties(u, Vec2::Zero());
  const CflReport report = op.cfl(u, Vec2::Zero());

  File faces = open_file(output_path(config, "penalty_faces.csv"));
  std::fprintf(faces.get(), "face,left,right,tag,length,sigma\n");
  double sigma_max = 0.0;
  for (int g = 0; g < rc.mesh->num_faces(); ++g) {
    const Face& f = rc.mesh->face(g);
    std::fprintf(faces.get(), "%d,%d,%d,%s,%.17g,%.17g\n", g, f.left, f.right,
                 to_string(f.tag).c_str(), f.length, sigma[g]);
    sigma_max = std::max(sigma_max, sigma[g]);
  }
  File elems = open_file(output_path(config, "penalty_elements.csv"));
  std::fprintf(elems.get(),
               "element,c_inv,c_inv2,beta,beta_prime,G_K,G_tilde,sigma_K,lambda,lambda_tilde\n");
  for (std::size_t k = 0; k < report.elements.size(); ++k) {
    const ElementCfl& e = report.elements[k];
    std::fprintf(elems.get(), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", k,
                 e.c_inv, e.c_inv2, e.beta, e.beta_prime, e.g_k, e.g_tilde, e.sigma_k, e.lambda,
                 e.lambda_tilde);
  }
  if (log) *log << "max sigma_e = " << sigma_max << ", Lambda = " << report.lambda << "\n";
}

void cfl_report(const SolverConfig& config, std::ostream* log) {
  ReportCase rc = report_case(config);
  const PenaltyConfig pen = config.penalty_config();
  File f = open_file(output_path(config, "cfl_report.csv"));
  std::fprintf(f.get(), "p,lambda,lambda_tilde,dt,dt_tilde\n");
  for (int p = 1; p <= config.discretization.p; ++p) {
    const int p_f = std::max(config.discretization.p_f.value_or(3 * p), 2 * p);
    const OperatorTables tables = build_tables(p, p_f);
    DGOperator op(*rc.mesh, tables, rc.gas, pen, rc.bc);
    const StateField u = interpolate(*rc.mesh, tables, rc.initial);
    const CflReport report = op.cfl(u, Vec2::Zero());
    double tilde = report.lambda_tilde;
    if (!report.tilde_error.empty()) tilde = std::nan("");
    std::fprintf(f.get(), "%d,%.17g,%.17g,%.17g,%.17g\n", p, report.lambda, tilde,
                 timestep(report.lambda, pen), std::isnan(tilde) ? tilde : timestep(tilde, pen));
    if (log)
      *log << "p=" << p << " Lambda=" << report.lambda << " Lambda~=" << tilde
           << " dt=" << timestep(report.lambda, pen) << "\n";
  }
}

}  // namespace dgviv
