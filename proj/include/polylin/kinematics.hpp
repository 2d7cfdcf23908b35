#pragma once

#include "polylin/vec3.hpp"

namespace polylin {

struct GasModel {
  double m = 1.0;
  double delta = 2.0;

  void validate() const;
  // exponent delta/2 - 1 of the internal-energy density
  double a() const { return 0.5 * delta - 1.0; }
};

struct PhasePoint {
  Vec3 v;
  double I = 1.0;

  bool valid() const;
  // throws unless I > 0 and everything finite
  static PhasePoint checked(const Vec3& v, double I);
};

struct BLParams {
  Vec3 omega{0, 0, 1};
  double r = 0.5;
  double R = 0.5;

  void validate() const;
};

struct CollisionPair {
  PhasePoint a, b;

  Vec3 relative() const { return a.v - b.v; }
  Vec3 center() const { return 0.5 * (a.v + b.v); }
};

double total_energy(const CollisionPair& pair, const GasModel& gas);

struct PostCollision {
  CollisionPair pair;
  bool boundary = false;  // a primed internal energy is zero
};

PostCollision post_collision(const CollisionPair& pair, const BLParams& p, const GasModel& gas);

double bl_weight(double r, double R, const GasModel& gas);

struct ConservationResidual {
  Vec3 momentum;
  double energy = 0.0;
};

ConservationResidual conservation_residual(const CollisionPair& pre, const CollisionPair& post,
                                           const GasModel& gas);

// Parameters that map `post` back onto `pre`.
BLParams inverse_params(const CollisionPair& pre, const CollisionPair& post, const GasModel& gas);

// Delta I = I' + I*' - I - I*.
double delta_internal(const CollisionPair& pre, const CollisionPair& post);

// |g'| from |g| and the internal energy gain; NaN when kinematically closed.
double post_relative_speed(double g, double dI, const GasModel& gas);

}  // namespace polylin
