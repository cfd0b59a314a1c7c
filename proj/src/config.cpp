#include "dgviv/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace dgviv {

using nlohmann::json;

namespace {

class Reader {
 public:
  Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError("'" + path_ + "' must be an object");
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    if (!obj_.contains(key)) return;
    seen_.insert(key);
    out = convert<T>(obj_.at(key), key);
  }

  template <typename T>
  void get(const std::string& key, std::optional<T>& out) {
    if (!obj_.contains(key)) return;
    seen_.insert(key);
    if (obj_.at(key).is_null()) {
      out.reset();
      return;
    }
    out = convert<T>(obj_.at(key), key);
  }

  /// Sub-object or nullptr when absent/null.
  const json* section(const std::string& key) {
    if (!obj_.contains(key)) return nullptr;
    seen_.insert(key);
    if (obj_.at(key).is_null()) return nullptr;
    return &obj_.at(key);
  }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& item : obj_.items())
      if (!seen_.count(item.key())) throw ConfigError("unknown key '" + child(item.key()) + "'");
  }

 private:
  template <typename T>
  T convert(const json& v, const std::string& key) const {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("'" + child(key) + "' must be a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError("'" + child(key) + "' must be an integer");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError("'" + child(key) + "' must be a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError("'" + child(key) + "' must be a string");
    }
    try {
      return v.get<T>();
    } catch (const json::exception& e) {
      throw ConfigError("'" + child(key) + "': " + e.what());
    }
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Fn>
void with_section(Reader& r, const std::string& key, Fn&& fn) {
  if (const json* s = r.section(key)) {
    Reader sub(*s, r.child(key));
    fn(sub);
    sub.finish();
  }
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

void SolverConfig::validate() const {
  if (version != kConfigVersion)
    throw ConfigError("unsupported config version " + std::to_string(version));
  if (!(gas.gamma > 1.0)) throw ConfigError("gas.gamma must be > 1");
  if (!(gas.prandtl > 0.0)) throw ConfigError("gas.prandtl must be > 0");
  if (!(gas.c_v > 0.0)) throw ConfigError("gas.c_v must be > 0");
  if (gas.mu && gas.reynolds) throw ConfigError("give either gas.mu or gas.reynolds, not both");
  if (gas.mu && !(*gas.mu >= 0.0)) throw ConfigError("gas.mu must be >= 0");
  if (gas.reynolds && !(*gas.reynolds > 0.0)) throw ConfigError("gas.reynolds must be > 0");

  const auto& d = discretization;
  if (d.p < 1 || d.p > kMaxOrder) throw ConfigError("discretization.p must lie in [1, 9]");
  if (d.overintegration() < 2 * d.p) throw ConfigError("discretization.p_f must be >= 2p");
  if (d.theta != -1.0 && d.theta != 0.0 && d.theta != 1.0)
    throw ConfigError("discretization.theta must be -1, 0 or 1");
  if (!(d.c1 >= 0.0)) throw ConfigError("discretization.c1 must be >= 0");

  if (!(time.c_cfl > 0.0)) throw ConfigError("time.c_cfl must be > 0");
  if (time.dt_override && !(*time.dt_override > 0.0))
    throw ConfigError("time.dt_override must be > 0");
  if (!(time.dt_max > 0.0)) throw ConfigError("time.dt_max must be > 0");
  if (!(time.t_final > 0.0)) throw ConfigError("time.t_final must be > 0");
  if (time.checkpoint_interval < 0) throw ConfigError("time.checkpoint_interval must be >= 0");

  if (!(freestream.mach >= 0.0)) throw ConfigError("freestream.mach must be >= 0");
  if (!(freestream.rho > 0.0) || !(freestream.p > 0.0))
    throw ConfigError("freestream density and pressure must be > 0");

  if (manufactured) {
    const auto& m = *manufactured;
    if (!(m.c2 > 1.0)) throw ConfigError("manufactured.c2 must be > 1");
    if (m.orders.empty()) throw ConfigError("manufactured.orders must not be empty");
    for (int p : m.orders)
      if (p < 1 || p > kMaxOrder) throw ConfigError("manufactured.orders must lie in [1, 9]");
    for (double t : m.thetas)
      if (t != -1.0 && t != 0.0 && t != 1.0)
        throw ConfigError("manufactured.thetas must be -1, 0 or 1");
    auto check_levels = [](const std::vector<int>& l) {
      if (l.size() < 2) throw ConfigError("a convergence study needs at least two mesh levels");
      for (std::size_t i = 0; i < l.size(); ++i)
        if (l[i] < 1 || (i > 0 && l[i] <= l[i - 1]))
          throw ConfigError("mesh levels must be positive and increasing");
    };
    check_levels(m.default_levels);
    for (const auto& [key, l] : m.levels) {
      if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos)
        throw ConfigError("manufactured.levels keys must be polynomial orders");
      check_levels(l);
    }
    if (m.check_interval < 1 || m.max_steps < 1)
      throw ConfigError("manufactured.check_interval and max_steps must be >= 1");
  }
  if (cylinder) {
    if (!(cylinder->diameter > 0.0)) throw ConfigError("cylinder.diameter must be > 0");
    if (cylinder->center.size() != 2) throw ConfigError("cylinder.center must have two entries");
    if (cylinder->profile_points < 2) throw ConfigError("cylinder.profile_points must be >= 2");
  }
  if (viv) {
    if (!(viv->reduced_velocity > 0.0) || !(viv->mass_ratio > 0.0))
      throw ConfigError("viv.reduced_velocity and viv.mass_ratio must be > 0");
    if (!(viv->damping_ratio >= 0.0)) throw ConfigError("viv.damping_ratio must be >= 0");
  }
  if (io.series_stride < 1) throw ConfigError("io.series_stride must be >= 1");
}

Freestream SolverConfig::freestream_state() const {
  Freestream fs;
  fs.rho = freestream.rho;
  fs.p = freestream.p;
  const double c = std::sqrt(gas.gamma * fs.p / fs.rho);
  const double angle = freestream.angle * M_PI / 180.0;
  fs.v = freestream.mach * c * Vec2(std::cos(angle), std::sin(angle));
  return fs;
}

GasParams SolverConfig::gas_params() const {
  GasParams g;
  g.gamma = gas.gamma;
  g.prandtl = gas.prandtl;
  g.c_v = gas.c_v;
  if (gas.mu) {
    g.mu = *gas.mu;
  } else if (gas.reynolds) {
    const Freestream fs = freestream_state();
    g.mu = fs.rho * fs.speed() * diameter() / *gas.reynolds;
  } else {
    g.mu = 0.0;
  }
  return g;
}

PenaltyConfig SolverConfig::penalty_config() const {
  PenaltyConfig p;
  p.theta = discretization.theta;
  p.c1 = discretization.c1;
  p.c_cfl = time.c_cfl;
  p.dt_max = time.dt_max;
  p.freeze_per_step = time.freeze_penalty;
  return p;
}

SolverConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  SolverConfig c;
  Reader r(root, "");
  if (!root.contains("version")) throw ConfigError("missing 'version'");
  r.get("version", c.version);
  with_section(r, "gas", [&](Reader& s) {
    s.get("gamma", c.gas.gamma);
    s.get("prandtl", c.gas.prandtl);
    s.get("mu", c.gas.mu);
    s.get("reynolds", c.gas.reynolds);
    s.get("c_v", c.gas.c_v);
  });
  with_section(r, "discretization", [&](Reader& s) {
    s.get("p", c.discretization.p);
    s.get("p_f", c.discretization.p_f);
    s.get("theta", c.discretization.theta);
    s.get("c1", c.discretization.c1);
  });
  with_section(r, "time", [&](Reader& s) {
    s.get("c_cfl", c.time.c_cfl);
    s.get("dt_override", c.time.dt_override);
    s.get("dt_max", c.time.dt_max);
    s.get("t_final", c.time.t_final);
    s.get("max_steps", c.time.max_steps);
    s.get("checkpoint_interval", c.time.checkpoint_interval);
    s.get("freeze_penalty", c.time.freeze_penalty);
  });
  with_section(r, "freestream", [&](Reader& s) {
    s.get("mach", c.freestream.mach);
    s.get("rho", c.freestream.rho);
    s.get("p", c.freestream.p);
    s.get("angle", c.freestream.angle);
  });
  with_section(r, "manufactured", [&](Reader& s) {
    ManufacturedSection m;
    s.get("kappa", m.kappa);
    s.get("c2", m.c2);
    s.get("orders", m.orders);
    s.get("thetas", m.thetas);
    s.get("default_levels", m.default_levels);
    s.get("levels", m.levels);
    s.get("skew_layer", m.skew_layer);
    s.get("residual_tol", m.residual_tol);
    s.get("stall_tol", m.stall_tol);
    s.get("check_interval", m.check_interval);
    s.get("max_steps", m.max_steps);
    c.manufactured = m;
  });
  with_section(r, "cylinder", [&](Reader& s) {
    CylinderSection cy;
    s.get("diameter", cy.diameter);
    s.get("center", cy.center);
    s.get("perturbation", cy.perturbation);
    s.get("stats_start", cy.stats_start);
    s.get("vtk_interval", cy.vtk_interval);
    s.get("profile_start", cy.profile_start);
    s.get("profile_end", cy.profile_end);
    s.get("profile_points", cy.profile_points);
    c.cylinder = cy;
  });
  with_section(r, "viv", [&](Reader& s) {
    VivSection v;
    s.get("reduced_velocity", v.reduced_velocity);
    s.get("mass_ratio", v.mass_ratio);
    s.get("damping_ratio", v.damping_ratio);
    s.get("motion", v.motion);
    c.viv = v;
  });
  with_section(r, "io", [&](Reader& s) {
    s.get("mesh", c.io.mesh);
    s.get("output_dir", c.io.output_dir);
    s.get("series_stride", c.io.series_stride);
  });
  r.finish();
  c.validate();
  return c;
}

SolverConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const SolverConfig& c) {
  json root;
  root["version"] = c.version;
  root["gas"] = {{"gamma", c.gas.gamma},
                 {"prandtl", c.gas.prandtl},
                 {"mu", optional_json(c.gas.mu)},
                 {"reynolds", optional_json(c.gas.reynolds)},
                 {"c_v", c.gas.c_v}};
  root["discretization"] = {{"p", c.discretization.p},
                            {"p_f", optional_json(c.discretization.p_f)},
                            {"theta", c.discretization.theta},
                            {"c1", c.discretization.c1}};
  root["time"] = {{"c_cfl", c.time.c_cfl},
                  {"dt_override", optional_json(c.time.dt_override)},
                  {"dt_max", c.time.dt_max},
                  {"t_final", c.time.t_final},
                  {"max_steps", c.time.max_steps},
                  {"checkpoint_interval", c.time.checkpoint_interval},
                  {"freeze_penalty", c.time.freeze_penalty}};
  root["freestream"] = {{"mach", c.freestream.mach},
                        {"rho", c.freestream.rho},
                        {"p", c.freestream.p},
                        {"angle", c.freestream.angle}};
  if (c.manufactured) {
    const auto& m = *c.manufactured;
    root["manufactured"] = {{"kappa", m.kappa},
                            {"c2", m.c2},
                            {"orders", m.orders},
                            {"thetas", m.thetas},
                            {"default_levels", m.default_levels},
                            {"levels", m.levels},
                            {"skew_layer", m.skew_layer},
                            {"residual_tol", m.residual_tol},
                            {"stall_tol", m.stall_tol},
                            {"check_interval", m.check_interval},
                            {"max_steps", m.max_steps}};
  }
  if (c.cylinder) {
    const auto& cy = *c.cylinder;
    root["cylinder"] = {{"diameter", cy.diameter},
                        {"center", cy.center},
                        {"perturbation", cy.perturbation},
                        {"stats_start", cy.stats_start},
                        {"vtk_interval", cy.vtk_interval},
                        {"profile_start", cy.profile_start},
                        {"profile_end", cy.profile_end},
                        {"profile_points", cy.profile_points}};
  }
  if (c.viv) {
    root["viv"] = {{"reduced_velocity", c.viv->reduced_velocity},
                   {"mass_ratio", c.viv->mass_ratio},
                   {"damping_ratio", c.viv->damping_ratio},
                   {"motion", c.viv->motion}};
  }
  root["io"] = {{"mesh", c.io.mesh},
                {"output_dir", c.io.output_dir},
                {"series_stride", c.io.series_stride}};
  return root.dump(2) + "\n";
}

}  // namespace dgviv
