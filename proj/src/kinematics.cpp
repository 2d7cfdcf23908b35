#include "polylin/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace polylin {

void GasModel::validate() const {
  if (!(m > 0) || !std::isfinite(m)) throw std::invalid_argument("gas: m must be positive");
  if (!(delta >= 2) || !std::isfinite(delta)) throw std::invalid_argument("gas: delta must be >= 2");
}

bool PhasePoint::valid() const { return finite(v) && std::isfinite(I) && I > 0; }

PhasePoint PhasePoint::checked(const Vec3& v, double I) {
  PhasePoint p{v, I};
  if (!p.valid()) throw std::invalid_argument("phase point needs finite velocity and I > 0");
  return p;
}

void BLParams::validate() const {
  if (!(r >= 0 && r <= 1)) throw std::invalid_argument("BL parameter r outside [0,1]");
  if (!(R >= 0 && R <= 1)) throw std::invalid_argument("BL parameter R outside [0,1]");
  if (!(std::abs(norm(omega) - 1.0) <= 1e-14)) throw std::invalid_argument("omega is not a unit vector");
}

double total_energy(const CollisionPair& pair, const GasModel& gas) {
  return 0.25 * gas.m * norm2(pair.relative()) + pair.a.I + pair.b.I;
}

PostCollision post_collision(const CollisionPair& pair, const BLParams& p, const GasModel& gas) {
  p.validate();
  const double E = total_energy(pair, gas);
  const Vec3 G = pair.center();
  const Vec3 gp = std::sqrt(4.0 * p.R * E / gas.m) * p.omega;
  PostCollision out;
  out.pair.a = {G + 0.5 * gp, p.r * (1.0 - p.R) * E};
  out.pair.b = {G - 0.5 * gp, (1.0 - p.r) * (1.0 - p.R) * E};
  out.boundary = !(out.pair.a.I > 0 && out.pair.b.I > 0);
  return out;
}

double bl_weight(double r, double R, const GasModel& gas) {
  if (!(r >= 0 && r <= 1) || !(R >= 0 && R <= 1)) throw std::invalid_argument("bl_weight: r, R outside [0,1]");
  const double a = gas.a();
  const double rr = a == 0.0 ? 1.0 : std::pow(r * (1.0 - r), a);
  return rr * std::pow(1.0 - R, gas.delta - 1.0) * std::sqrt(R);
}

ConservationResidual conservation_residual(const CollisionPair& pre, const CollisionPair& post,
                                           const GasModel& gas) {
  auto energy = [&](const CollisionPair& c) {
    return 0.5 * gas.m * (norm2(c.a.v) + norm2(c.b.v)) + c.a.I + c.b.I;
  };
  return {(pre.a.v + pre.b.v) - (post.a.v + post.b.v), energy(pre) - energy(post)};
}

BLParams inverse_params(const CollisionPair& pre, const CollisionPair& post, const GasModel& gas) {
  const double E = total_energy(post, gas);
  const Vec3 g = pre.relative();
  const double gn = norm(g);
  if (gn == 0.0) throw std::invalid_argument("inverse_params: zero relative velocity");
  BLParams p;
  p.R = std::min(1.0, 0.25 * gas.m * gn * gn / E);
  p.r = std::clamp(pre.a.I / ((1.0 - p.R) * E), 0.0, 1.0);
  p.omega = g / gn;
  return p;
}

double delta_internal(const CollisionPair& pre, const CollisionPair& post) {
  return post.a.I + post.b.I - pre.a.I - pre.b.I;
}

double post_relative_speed(double g, double dI, const GasModel& gas) {
  const double q = g * g - 4.0 * dI / gas.m;
  return q >= 0 ? std::sqrt(q) : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace polylin
