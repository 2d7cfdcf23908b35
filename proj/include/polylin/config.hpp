#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "polylin/kinematics.hpp"
#include "polylin/models.hpp"
#include "polylin/quadrature.hpp"
#include "polylin/spectral.hpp"

namespace polylin {

// Environment variable naming the default config file.
inline constexpr const char* kConfigEnv = "POLYLIN_CONFIG";

struct ModelSettings {
  ModelVariant variant = ModelVariant::PowerLawE;
  double prefactor = 1.0;  // C for the power law, b for the GP-20 models
  double alpha = 1.0;
  double gamma = 0.5;
  ScatteringModel build() const;
};

struct GridSettings {
  GridMode mode = GridMode::Isotropic;
  int n_speed = 10;
  int n_energy = 10;
  SpeedNodes speed_nodes = SpeedNodes::Laguerre;
  double v_max = 8.0;  // Legendre speed nodes only
  int n_velocity = 7;  // full mode, per axis
  int n_energy_full = 6;
  bool mirror = false;
  Grid build(const GasModel& gas) const;
};

// (|xi|, I) scan used by the nu table and the envelope checks.
struct NuScan {
  int n_speed = 5;
  int n_energy = 4;
  double s_max = 10.0;
  double I_min = 0.5;
  double I_max = 25.0;
  double epsilon = 0.1;
  bool empty() const { return n_speed < 1 || n_energy < 1; }
};

struct OutputPaths {
  std::string nu_csv = "nu.csv";
  std::string operator_file = "operator.blop";
};

struct RunConfig {
  GasModel gas;
  ModelSettings model;
  QuadratureSpec quad;
  GridSettings grid;
  NuScan nu;
  OutputPaths output;
  std::map<std::string, double> tolerances;  // overrides by name
  double tol_scale = 1.0;
  void validate() const;
};

// Sectioned "key = value" text; '#' and ';' start comments. Throws ConfigError.
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>");
RunConfig load_config(const std::string& path);
// Explicit path, else $POLYLIN_CONFIG, else built-in defaults.
RunConfig resolve_config(const std::string& path);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string to_string(SpeedNodes nodes);
SpeedNodes parse_speed_nodes(const std::string& name);

}  // namespace polylin
