#include "dgviv/config.hpp"
#include "dgviv/dg_core.hpp"
#include "dgviv/drivers.hpp"
#include "dgviv/parallel.hpp"
#include "dgviv/vtk.hpp"

#include "test_meshes.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dgviv;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / name) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

const char* kFullConfig = R"({
  "version": 1,
  "gas": {"gamma": 1.4, "prandtl": 0.72, "reynolds": 100, "c_v": 717.5},
  "discretization": {"p": 2, "p_f": 5, "theta": 0, "c1": 0.5},
  "time": {"c_cfl": 0.5, "dt_override": 0.001, "t_final": 3.0, "max_steps": 10,
           "checkpoint_interval": 5, "freeze_penalty": true},
  "freestream": {"mach": 0.2, "rho": 1.2, "p": 80.0, "angle": 5.0},
  "manufactured": {"kappa": 3, "c2": 10, "orders": [1, 2], "thetas": [-1, 1],
                   "levels": {"2": [2, 4]}, "skew_layer": true},
  "cylinder": {"diameter": 1.0, "center": [0.5, 0.0], "perturbation": 0.1, "stats_start": 1.0},
  "viv": {"reduced_velocity": 6.0, "mass_ratio": 2.0, "damping_ratio": 0.0, "motion": false},
  "io": {"mesh": "mesh.msh", "output_dir": "out", "series_stride": 2}
})";

SolverConfig body_config(const fs::path& dir) {
  SolverConfig c = parse_config(R"({"version": 1, "gas": {"reynolds": 100},
    "discretization": {"p": 1, "c1": 1.0}, "time": {"t_final": 1000, "max_steps": 24},
    "freestream": {"mach": 0.1}, "cylinder": {"perturbation": 0.2},
    "viv": {"reduced_velocity": 5.0}})");
  c.io.mesh = (dir / "annulus.msh").string();
  c.io.output_dir = (dir / "out").string();
  test_meshes::write_msh(test_meshes::annulus(16, 3, 0.5, 4.0), c.io.mesh);
  return c;
}

}  // namespace

TEST(Config, RoundTrip) {
  const SolverConfig a = parse_config(kFullConfig);
  const std::string text = serialize_config(a);
  const SolverConfig b = parse_config(text);
  EXPECT_EQ(serialize_config(b), text);
  EXPECT_EQ(b.discretization.p_f, 5);
  EXPECT_EQ(b.manufactured->levels.at("2"), (std::vector<int>{2, 4}));
  EXPECT_FALSE(b.viv->motion);
  EXPECT_EQ(b.io.series_stride, 2);
}

TEST(Config, Defaults) {
  const SolverConfig c = parse_config(R"({"version": 1})");
  EXPECT_EQ(c.discretization.c1, 0.01);
  EXPECT_EQ(c.time.c_cfl, 0.8);
  EXPECT_EQ(c.gas.gamma, 1.4);
  EXPECT_EQ(c.gas.prandtl, 0.72);
  EXPECT_EQ(c.discretization.overintegration(), 3 * c.discretization.p);
  EXPECT_FALSE(c.manufactured.has_value());
  const SolverConfig v = parse_config(R"({"version": 1, "viv": {}})");
  EXPECT_EQ(v.viv->mass_ratio, 1.0);
  EXPECT_EQ(v.viv->damping_ratio, 0.01);
}

TEST(Config, UnknownKeysRejected) {
  EXPECT_THROW(parse_config(R"({"version": 1, "gass": {}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"version": 1, "time": {"cfl": 1}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"version": 1, "viv": {"u_star": 5}})"), ConfigError);
}

TEST(Config, InvalidValuesRejected) {
  EXPECT_THROW(parse_config(R"({})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"version": 2})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"version": 1, "discretization": {"theta": 0.5}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"version": 1, "discretization": {"c1": -1}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"version": 1, "discretization": {"p": 3, "p_f": 4}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"version": 1, "gas": {"mu": 0.1, "reynolds": 10}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"version": 1, "manufactured": {"c2": 0.5}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"version": 1, "time": {"c_cfl": "fast"}})"), ConfigError);
  EXPECT_THROW(parse_config("{not json"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, DerivedQuantities) {
  const SolverConfig c = parse_config(R"({"version": 1, "gas": {"reynolds": 200},
    "freestream": {"mach": 0.1, "rho": 1.0, "p": 71.42857142857143}})");
  const Freestream fs = c.freestream_state();
  EXPECT_NEAR(fs.speed(), 1.0, 1e-12);
  EXPECT_NEAR(c.gas_params().mu, 1.0 / 200.0, 1e-14);
  const PenaltyConfig pen = c.penalty_config();
  EXPECT_EQ(pen.theta, 1.0);
  EXPECT_EQ(pen.c_cfl, 0.8);
}

TEST(Vtk, LatticeSubdivision) {
  for (int p = 1; p <= 5; ++p) EXPECT_EQ(lattice_triangles(interpolation_nodes(p)).size(), size_t(p * p));
}

TEST(Vtk, CountsAndLosslessRoundTrip) {
  TempDir dir("dgviv_vtk_test");
  const Mesh mesh = generate_structured(1, 1, Rect{});
  GasParams gas;
  for (int p : {1, 2}) {
    const OperatorTables t = build_tables(p, 2 * p);
    const StateField f = interpolate(mesh, t, [&](const Vec2& x) {
      return to_conservative({1.0 + 0.1 * x.x(), Vec2(0.3 * x.y(), -0.2), 1.0 / 3.0 + x.x()}, gas);
    });
    const std::string path = (dir.path() / ("f" + std::to_string(p) + ".vtk")).string();
    write_vtk(f, mesh, t, gas, path);
    const VtkData d = read_vtk(path);
    EXPECT_EQ(d.points.size(), size_t(mesh.num_elements() * t.n_p));
    EXPECT_EQ(d.triangles.size(), size_t(mesh.num_elements() * p * p));
    for (const char* name : {"rho", "u", "v", "p", "vorticity"}) EXPECT_EQ(d.point_data.count(name), 1u);
    if (p == 1) {
      EXPECT_EQ(d.points.size(), 6u);
      EXPECT_EQ(d.triangles.size(), 2u);
      for (int k = 0; k < mesh.num_elements(); ++k)
        for (int i = 0; i < t.n_p; ++i) {
          const Primitive q = to_primitive(f.node(k, i), gas);
          const int idx = k * t.n_p + i;
          EXPECT_EQ(d.point_data.at("rho")[idx], q.rho);
          EXPECT_EQ(d.point_data.at("u")[idx], q.v.x());
          EXPECT_EQ(d.point_data.at("v")[idx], q.v.y());
          EXPECT_EQ(d.point_data.at("p")[idx], q.p);
        }
    }
  }
}

TEST(Vtk, DiscontinuitiesAreKept) {
  TempDir dir("dgviv_vtk_jump");
  const Mesh mesh = generate_structured(1, 1, Rect{});
  const OperatorTables t = build_tables(1, 2);
  GasParams gas;
  StateField f(t.n_p, mesh.num_elements());
  for (int k = 0; k < mesh.num_elements(); ++k)
    f.element(k).rowwise() = to_conservative({1.0 + k, Vec2::Zero(), 1.0}, gas).transpose();
  const std::string path = (dir.path() / "jump.vtk").string();
  write_vtk(f, mesh, t, gas, path);
  const VtkData d = read_vtk(path);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(d.point_data.at("rho")[i], 1.0);
    EXPECT_EQ(d.point_data.at("rho")[3 + i], 2.0);
  }
}

TEST(Drivers, CylinderRunWritesOutputs) {
  TempDir dir("dgviv_cyl_test");
  const SolverConfig c = body_config(dir.path());
  const RunSummary s = run_cylinder(c);
  EXPECT_EQ(s.steps, 24);
  EXPECT_EQ(s.series.size(), 24u);
  const fs::path out = c.io.output_dir;
  EXPECT_EQ(first_line(out / "cylinder_series.csv"), "t,CL,CD,y,ydot,dt");
  EXPECT_EQ(first_line(out / "cylinder_spectrum.csv"), "f,mag");
  EXPECT_TRUE(fs::exists(out / "cylinder_final.vtk"));
  const auto summary = nlohmann::json::parse(read_file(out / "cylinder_summary.json"));
  for (const char* key : {"f_prim", "strouhal", "cl_max", "cd_mean", "amplitude_max", "steps"})
    EXPECT_TRUE(summary.contains(key)) << key;
  EXPECT_EQ(summary["amplitude_max"].get<double>(), 0.0);
}

TEST(Drivers, MotionDisabledVivMatchesCylinder) {
  TempDir dir("dgviv_viv_test");
  SolverConfig c = body_config(dir.path());
  c.viv->motion = false;
  const RunSummary a = run_cylinder(c);
  const RunSummary b = run_viv(c);
  ASSERT_EQ(a.series.size(), b.series.size());
  for (size_t i = 0; i < a.series.size(); ++i) {
    EXPECT_EQ(a.series[i].t, b.series[i].t);
    EXPECT_EQ(a.series[i].cl, b.series[i].cl);
    EXPECT_EQ(a.series[i].cd, b.series[i].cd);
    EXPECT_EQ(b.series[i].y, 0.0);
  }
  const fs::path out = c.io.output_dir;
  EXPECT_EQ(read_file(out / "cylinder_series.csv"), read_file(out / "viv_series.csv"));
  const auto summary = nlohmann::json::parse(read_file(out / "viv_summary.json"));
  EXPECT_TRUE(summary.contains("f_n"));
  EXPECT_NEAR(summary["f_n"].get<double>(), c.freestream_state().speed() / 5.0, 1e-12);
}

TEST(Drivers, SeriesIndependentOfWorkerCount) {
  TempDir dir("dgviv_threads_test");
  SolverConfig c = body_config(dir.path());
  const int saved = num_threads();
  set_num_threads(1);
  run_viv(c);
  const std::string one = read_file(fs::path(c.io.output_dir) / "viv_series.csv");
  set_num_threads(3);
  run_viv(c);
  const std::string three = read_file(fs::path(c.io.output_dir) / "viv_series.csv");
  set_num_threads(saved);
  EXPECT_FALSE(one.empty());
  EXPECT_EQ(one, three);
}

TEST(Drivers, ReportsHaveExactHeaders) {
  TempDir dir("dgviv_report_test");
  SolverConfig c = body_config(dir.path());
  penalty_report(c);
  cfl_report(c);
  const fs::path out = c.io.output_dir;
  EXPECT_EQ(first_line(out / "penalty_faces.csv"), "face,left,right,tag,length,sigma");
  EXPECT_EQ(first_line(out / "penalty_elements.csv"),
            "element,c_inv,c_inv2,beta,beta_prime,G_K,G_tilde,sigma_K,lambda,lambda_tilde");
  EXPECT_EQ(first_line(out / "cfl_report.csv"), "p,lambda,lambda_tilde,dt,dt_tilde");
}

TEST(Drivers, SmallConvergenceStudy) {
  TempDir dir("dgviv_conv_test");
  SolverConfig c = parse_config(R"({"version": 1, "gas": {"mu": 0.05},
    "discretization": {"c1": 1.0}, "time": {"c_cfl": 2.0},
    "manufactured": {"kappa": 2, "c2": 4, "orders": [1], "thetas": [0, 1],
                     "default_levels": [2, 4], "check_interval": 20, "max_steps": 200,
                     "stall_tol": 1e-3}})");
  c.io.output_dir = (dir.path() / "out").string();
  const ConvergenceResult r = run_convergence(c);
  EXPECT_EQ(r.samples.size(), 4u);
  EXPECT_EQ(r.rates.size(), 2u);
  for (const auto& s : r.samples) {
    EXPECT_GT(s.sigma_max, 0.0);
    EXPECT_TRUE(std::isfinite(s.error.l2));
  }
  const fs::path out = c.io.output_dir;
  EXPECT_EQ(first_line(out / "convergence_theta0.csv"), "p,h,L2,Linf");
  EXPECT_EQ(first_line(out / "convergence_theta1.csv"), "p,h,L2,Linf");
  const auto rates = nlohmann::json::parse(read_file(out / "rates.json"));
  EXPECT_EQ(rates.size(), 2u);
  EXPECT_TRUE(rates[0].contains("rate_L2"));
}

TEST(Drivers, MissingSectionsAreConfigErrors) {
  const SolverConfig c = parse_config(R"({"version": 1})");
  EXPECT_THROW(run_convergence(c), ConfigError);
  EXPECT_THROW(run_cylinder(c), ConfigError);
  EXPECT_THROW(run_viv(c), ConfigError);
}
