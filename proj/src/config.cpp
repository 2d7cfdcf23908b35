#include "polylin/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "polylin/verify.hpp"

namespace polylin {

std::string to_string(SpeedNodes nodes) { return nodes == SpeedNodes::Laguerre ? "laguerre" : "legendre"; }

SpeedNodes parse_speed_nodes(const std::string& name) {
  if (name == "laguerre") return SpeedNodes::Laguerre;
  if (name == "legendre") return SpeedNodes::Legendre;
  throw std::invalid_argument("unknown speed nodes '" + name + "' (laguerre|legendre)");
}

ScatteringModel ModelSettings::build() const { return {variant, prefactor, alpha, gamma}; }

Grid GridSettings::build(const GasModel& gas) const {
  if (mode == GridMode::Isotropic) return isotropic_grid(n_speed, n_energy, gas, speed_nodes, v_max);
  return full_grid(n_velocity, n_energy_full, gas);
}

void RunConfig::validate() const {
  gas.validate();
  quad.validate();
  (void)model.build();
  if (grid.n_speed < 1 || grid.n_energy < 1 || grid.n_velocity < 1 || grid.n_energy_full < 1)
    throw ConfigError("grid counts must be positive");
  if (grid.speed_nodes == SpeedNodes::Legendre && !(grid.v_max > 0)) throw ConfigError("grid.v_max must be positive");
  if (!(nu.s_max > 0) || !(nu.I_min > 0) || !(nu.I_max >= nu.I_min) || !(nu.epsilon > 0))
    throw ConfigError("nu scan bounds invalid");
  if (!(tol_scale > 0)) throw ConfigError("tol_scale must be positive");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& v, const std::string& key) {
  T out{};
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError("bad value '" + v + "' for " + key);
  return out;
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("bad boolean '" + v + "' for " + key);
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto dbl = [&](const std::string& k, auto get) {
      t[k] = [get](RunConfig& c, const std::string& v, const std::string& key) { get(c) = parse_number<double>(v, key); };
    };
    auto int_ = [&](const std::string& k, auto get) {
      t[k] = [get](RunConfig& c, const std::string& v, const std::string& key) { get(c) = parse_number<int>(v, key); };
    };
    dbl("gas.m", [](RunConfig& c) -> double& { return c.gas.m; });
    dbl("gas.delta", [](RunConfig& c) -> double& { return c.gas.delta; });

    t["model.variant"] = [](RunConfig& c, const std::string& v, const std::string&) {
      c.model.variant = parse_variant(v);
    };
    dbl("model.C", [](RunConfig& c) -> double& { return c.model.prefactor; });
    dbl("model.b", [](RunConfig& c) -> double& { return c.model.prefactor; });
    dbl("model.alpha", [](RunConfig& c) -> double& { return c.model.alpha; });
    dbl("model.gamma", [](RunConfig& c) -> double& { return c.model.gamma; });

    int_("quad.n_interval", [](RunConfig& c) -> int& { return c.quad.n_interval; });
    int_("quad.n_semi", [](RunConfig& c) -> int& { return c.quad.n_semi; });
    int_("quad.sphere_order", [](RunConfig& c) -> int& { return c.quad.sphere_order; });
    int_("quad.n_plane_radial", [](RunConfig& c) -> int& { return c.quad.n_plane_radial; });
    int_("quad.n_plane_angular", [](RunConfig& c) -> int& { return c.quad.n_plane_angular; });
    int_("quad.n_chi", [](RunConfig& c) -> int& { return c.quad.n_chi; });
    int_("quad.n_k2_energy", [](RunConfig& c) -> int& { return c.quad.n_k2_energy; });
    int_("quad.n_split", [](RunConfig& c) -> int& { return c.quad.n_split; });
    int_("quad.n_mu", [](RunConfig& c) -> int& { return c.quad.n_mu; });
    int_("quad.n_velocity", [](RunConfig& c) -> int& { return c.quad.n_velocity; });
    int_("quad.n_pair_velocity", [](RunConfig& c) -> int& { return c.quad.n_pair_velocity; });
    int_("quad.n_pair_energy", [](RunConfig& c) -> int& { return c.quad.n_pair_energy; });
    int_("quad.n_pair_split", [](RunConfig& c) -> int& { return c.quad.n_pair_split; });
    int_("quad.pair_sphere_order", [](RunConfig& c) -> int& { return c.quad.pair_sphere_order; });
    dbl("quad.v_max", [](RunConfig& c) -> double& { return c.quad.v_max; });
    dbl("quad.I_max", [](RunConfig& c) -> double& { return c.quad.I_max; });

    t["grid.mode"] = [](RunConfig& c, const std::string& v, const std::string&) { c.grid.mode = parse_mode(v); };
    int_("grid.n_speed", [](RunConfig& c) -> int& { return c.grid.n_speed; });
    int_("grid.n_energy", [](RunConfig& c) -> int& { return c.grid.n_energy; });
    t["grid.speed_nodes"] = [](RunConfig& c, const std::string& v, const std::string&) {
      c.grid.speed_nodes = parse_speed_nodes(v);
    };
    dbl("grid.v_max", [](RunConfig& c) -> double& { return c.grid.v_max; });
    int_("grid.n_velocity", [](RunConfig& c) -> int& { return c.grid.n_velocity; });
    int_("grid.n_energy_full", [](RunConfig& c) -> int& { return c.grid.n_energy_full; });
    t["grid.mirror"] = [](RunConfig& c, const std::string& v, const std::string& k) { c.grid.mirror = parse_bool(v, k); };

    int_("nu.n_speed", [](RunConfig& c) -> int& { return c.nu.n_speed; });
    int_("nu.n_energy", [](RunConfig& c) -> int& { return c.nu.n_energy; });
    dbl("nu.s_max", [](RunConfig& c) -> double& { return c.nu.s_max; });
    dbl("nu.I_min", [](RunConfig& c) -> double& { return c.nu.I_min; });
    dbl("nu.I_max", [](RunConfig& c) -> double& { return c.nu.I_max; });
    dbl("nu.epsilon", [](RunConfig& c) -> double& { return c.nu.epsilon; });

    t["output.nu_csv"] = [](RunConfig& c, const std::string& v, const std::string&) { c.output.nu_csv = v; };
    t["output.operator"] = [](RunConfig& c, const std::string& v, const std::string&) { c.output.operator_file = v; };

    t["run.seed"] = [](RunConfig& c, const std::string& v, const std::string& k) {
      c.quad.mc_seed = parse_number<std::uint64_t>(v, k);
    };
    t["run.mc_samples"] = [](RunConfig& c, const std::string& v, const std::string& k) {
      c.quad.mc_samples = parse_number<std::int64_t>(v, k);
    };
    dbl("run.tol_scale", [](RunConfig& c) -> double& { return c.tol_scale; });
    return t;
  }();
  return table;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  auto fail = [&](const std::string& msg) { throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + msg); };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    line = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (section.empty()) fail("key '" + key + "' outside a section");
    if (value.empty()) fail("empty value for " + section + "." + key);
    const std::string full = section + "." + key;
    std::function<void()> apply;
    if (section == "tol") {
      if (!tolerance_known(key)) fail("unknown tolerance " + full);
      apply = [&] { cfg.tolerances[key] = parse_number<double>(value, full); };
    } else {
      auto it = setters().find(full);
      if (it == setters().end()) fail("unknown key " + full);
      apply = [&, it] { it->second(cfg, value, full); };
    }
    try {
      apply();
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

RunConfig resolve_config(const std::string& path) {
  if (!path.empty()) return load_config(path);
  if (const char* env = std::getenv(kConfigEnv); env && *env) return load_config(env);
  RunConfig cfg;
  cfg.validate();
  return cfg;
}

}  // namespace polylin
