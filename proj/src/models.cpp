#include "polylin/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polylin {

std::string to_string(ModelVariant v) {
  switch (v) {
    case ModelVariant::PowerLawE: return "PowerLawE";
    case ModelVariant::GP20Model1: return "GP20Model1";
    case ModelVariant::GP20Model2: return "GP20Model2";
    case ModelVariant::GP20Model3: return "GP20Model3";
  }
  return "?";
}

ModelVariant parse_variant(const std::string& name) {
  for (auto v : {ModelVariant::PowerLawE, ModelVariant::GP20Model1, ModelVariant::GP20Model2,
                 ModelVariant::GP20Model3})
    if (to_string(v) == name) return v;
  throw std::invalid_argument("unknown model variant '" + name + "'");
}

ScatteringModel::ScatteringModel(ModelVariant variant, double prefactor, double alpha, double gamma)
    : variant_(variant), prefactor_(prefactor), alpha_(alpha), gamma_(gamma) {
  if (!(prefactor > 0) || !std::isfinite(prefactor)) throw std::invalid_argument("model prefactor must be positive");
  if (!(gamma > 0 && gamma < 1)) throw std::invalid_argument("model gamma must lie in (0,1)");
  if (variant == ModelVariant::PowerLawE) {
    if (!(alpha >= 0 && alpha <= 2)) throw std::invalid_argument("power-law alpha must lie in [0,2]");
  } else if (!(alpha > 0 && alpha <= 2)) {
    throw std::invalid_argument("GP-20 alpha must lie in (0,2]");
  }
}

ScatteringModel ScatteringModel::power_law(double C, double alpha, double gamma) {
  return {ModelVariant::PowerLawE, C, alpha, gamma};
}

ScatteringModel ScatteringModel::gp20(int which, double b, double alpha, double gamma) {
  switch (which) {
    case 1: return {ModelVariant::GP20Model1, b, alpha, gamma};
    case 2: return {ModelVariant::GP20Model2, b, alpha, gamma};
    case 3: return {ModelVariant::GP20Model3, b, alpha, gamma};
  }
  throw std::invalid_argument("GP-20 model index must be 1, 2 or 3");
}

ScatteringModel ScatteringModel::unchecked(ModelVariant variant, double prefactor, double alpha, double gamma) {
  ScatteringModel m = power_law(1.0, 1.0, 0.5);
  m.variant_ = variant;
  m.prefactor_ = prefactor;
  m.alpha_ = alpha;
  m.gamma_ = gamma;
  return m;
}

void ScatteringModel::set_angular_table(std::vector<double> table) {
  if (table.size() == 1) throw std::invalid_argument("angular table needs at least two samples");
  for (double t : table)
    if (!(t >= 0) || !std::isfinite(t)) throw std::invalid_argument("angular table must be finite and nonnegative");
  table_ = std::move(table);
}

double ScatteringModel::angular_factor(double cos_theta) const {
  if (table_.empty()) return 1.0;
  const double x = std::clamp(std::abs(cos_theta), 0.0, 1.0) * (table_.size() - 1);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(x), table_.size() - 2);
  const double t = x - i;
  return (1 - t) * table_[i] + t * table_[i + 1];
}

bool ScatteringModel::in_frequency_hypothesis() const {
  return variant_ == ModelVariant::PowerLawE && alpha_ >= 0 && alpha_ < 2;
}

double ScatteringModel::B(const CollisionScalars& c, const GasModel& gas) const {
  if (!(c.E > 0)) return 0.0;
  const double h = 0.5 * alpha_;
  double v = 0.0;
  switch (variant_) {
    case ModelVariant::PowerLawE:
      v = prefactor_ * (alpha_ == 2.0 ? 1.0 : std::pow(c.E, 1.0 - h));
      break;
    case ModelVariant::GP20Model1:
      v = prefactor_ * std::pow(c.E, h);
      break;
    case ModelVariant::GP20Model2:
      v = prefactor_ * (std::pow(c.R, h) * std::pow(c.g, alpha_) +
                        std::pow((1.0 - c.R) * (c.I + c.Istar) / gas.m, h));
      break;
    case ModelVariant::GP20Model3:
      v = prefactor_ * (std::pow(c.R, h) * std::pow(c.g, alpha_) +
                        std::pow(c.r * (1.0 - c.R) * c.I / gas.m, h) +
                        std::pow((1.0 - c.r) * (1.0 - c.R) * c.Istar / gas.m, h));
      break;
  }
  return table_.empty() ? v : v * angular_factor(c.cos_theta);
}

CollisionGeometry CollisionGeometry::make(const CollisionPair& pre, const CollisionPair& post, const GasModel& gas) {
  CollisionGeometry c;
  c.pre = pre;
  c.post = post;
  c.E = total_energy(pre, gas);
  const double Ep = total_energy(post, gas);
  if (!(std::abs(Ep - c.E) <= 1e-10 * c.E)) throw std::invalid_argument("collision geometry does not conserve energy");
  const Vec3 g = pre.relative(), gp = post.relative();
  c.g = norm(g);
  c.g_post = norm(gp);
  c.R = std::clamp(0.25 * gas.m * c.g_post * c.g_post / c.E, 0.0, 1.0);
  const double internal = post.a.I + post.b.I;
  c.r = internal > 0 ? std::clamp(post.a.I / internal, 0.0, 1.0) : 0.5;
  c.cos_theta = (c.g > 0 && c.g_post > 0) ? std::clamp(dot(g, gp) / (c.g * c.g_post), -1.0, 1.0) : 1.0;
  c.dI = delta_internal(pre, post);
  return c;
}

double kernel_B(const ScatteringModel& model, const CollisionGeometry& geom, const GasModel& gas) {
  return model.B(geom.scalars(), gas);
}

namespace {
double phi_factor(const CollisionGeometry& geom, const GasModel& gas) {
  const double a = gas.a();
  const double rr = a == 0.0 ? 1.0 : std::pow(geom.r * (1.0 - geom.r), a);
  const double oneR = gas.delta == 2.0 ? 1.0 : std::pow(1.0 - geom.R, gas.delta - 2.0);
  return oneR * std::sqrt(geom.R) * rr;
}
}  // namespace

double sigma(const ScatteringModel& model, const CollisionGeometry& geom, const GasModel& gas) {
  if (!(geom.g > 0)) throw std::domain_error("sigma: zero relative speed");
  if (!(geom.R > 0 && geom.R < 1) || !(geom.r > 0 && geom.r < 1))
    throw std::domain_error("sigma: boundary value of R or r");
  return kernel_B(model, geom, gas) * phi_factor(geom, gas) / (geom.g * geom.E * geom.E);
}

double kernel_from_sigma(double sigma_value, const CollisionGeometry& geom, const GasModel& gas) {
  return sigma_value * geom.g * geom.E * geom.E / phi_factor(geom, gas);
}

EnvelopeReport envelope_check_est1a(const ScatteringModel& model, const GasModel& gas,
                                    const std::vector<CollisionGeometry>& samples, double gamma) {
  if (!(gamma > 0 && gamma < 1)) throw std::invalid_argument("envelope check: gamma must lie in (0,1)");
  if (samples.empty()) throw std::invalid_argument("envelope check: empty sample set");
  EnvelopeReport rep;
  rep.in_hypothesis = model.variant() != ModelVariant::PowerLawE || model.in_frequency_hypothesis();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!(gas.m * s.g * s.g > 4.0 * s.dI)) continue;
    const double psi = s.g * std::sqrt(s.g * s.g - 4.0 * s.dI / gas.m);
    const double ratio = kernel_B(model, s, gas) / (s.E * (1.0 + std::pow(psi, -(1.0 - 0.5 * gamma))));
    ++rep.used;
    if (ratio > rep.worst_ratio || rep.used == 1) {
      rep.worst_ratio = ratio;
      rep.witness = i;
    }
  }
  rep.holds = rep.used > 0 && std::isfinite(rep.worst_ratio);
  return rep;
}

}  // namespace polylin
