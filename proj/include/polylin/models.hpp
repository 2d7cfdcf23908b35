#pragma once

#include <string>
#include <vector>

#include "polylin/kinematics.hpp"

namespace polylin {

enum class ModelVariant { PowerLawE, GP20Model1, GP20Model2, GP20Model3 };

std::string to_string(ModelVariant v);
ModelVariant parse_variant(const std::string& name);

// Scalar description of one collision, enough to evaluate any kernel B.
struct CollisionScalars {
  double E = 0.0;      // total energy
  double R = 0.0;      // translational fraction after collision
  double r = 0.5;      // split of the internal part
  double g = 0.0;      // |g| before collision
  double I = 0.0;      // pre-collision internal energies
  double Istar = 0.0;
  double cos_theta = 1.0;
};

class ScatteringModel {
 public:
  ScatteringModel(ModelVariant variant, double prefactor, double alpha, double gamma = 0.5);

  static ScatteringModel power_law(double C, double alpha, double gamma = 0.5);
  static ScatteringModel gp20(int which, double b, double alpha, double gamma = 0.5);
  // Skips validation; used to exercise the failure paths of the checks.
  static ScatteringModel unchecked(ModelVariant variant, double prefactor, double alpha, double gamma);

  ModelVariant variant() const { return variant_; }
  double prefactor() const { return prefactor_; }
  double alpha() const { return alpha_; }
  double gamma() const { return gamma_; }

  // Even angular table b(cos theta) sampled uniformly on [0, 1] in |cos theta|.
  void set_angular_table(std::vector<double> table);
  bool angle_independent() const { return table_.empty(); }
  double angular_factor(double cos_theta) const;

  // frequency growth bounds are only claimed for the power law with 0 <= alpha < 2
  bool in_frequency_hypothesis() const;

  double B(const CollisionScalars& c, const GasModel& gas) const;

 private:
  ModelVariant variant_;
  double prefactor_, alpha_, gamma_;
  std::vector<double> table_;
};

struct CollisionGeometry {
  CollisionPair pre, post;
  double E = 0.0, R = 0.0, r = 0.0, cos_theta = 1.0, dI = 0.0;
  double g = 0.0, g_post = 0.0;

  static CollisionGeometry make(const CollisionPair& pre, const CollisionPair& post, const GasModel& gas);
  CollisionScalars scalars() const { return {E, R, r, g, pre.a.I, pre.b.I, cos_theta}; }
  CollisionGeometry reversed(const GasModel& gas) const { return make(post, pre, gas); }
};

double kernel_B(const ScatteringModel& model, const CollisionGeometry& geom, const GasModel& gas);
double sigma(const ScatteringModel& model, const CollisionGeometry& geom, const GasModel& gas);
// Inverse of sigma: B = sigma |g| E^2 / ((1-R)^(delta-2) R^(1/2) (r(1-r))^(delta/2-1)).
double kernel_from_sigma(double sigma_value, const CollisionGeometry& geom, const GasModel& gas);

struct EnvelopeReport {
  bool holds = false;
  double worst_ratio = 0.0;
  std::size_t witness = 0;   // index of the worst sample
  std::size_t used = 0;      // samples with open indicator
  bool in_hypothesis = true;
};

EnvelopeReport envelope_check_est1a(const ScatteringModel& model, const GasModel& gas,
                                    const std::vector<CollisionGeometry>& samples, double gamma);

}  // namespace polylin
