#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "polylin/kinematics.hpp"
#include "polylin/quadrature.hpp"

namespace polylin {

struct MaxwellianParams {
  double n = 1.0;
  Vec3 u{};
  double T = 1.0;

  void validate() const;
};

double maxwellian(const MaxwellianParams& params, const GasModel& gas, const PhasePoint& p);

// Standard Maxwellian (n = 1, u = 0, T = 1) and helpers used by the kernels.
double maxwellian_constant(const GasModel& gas);  // m^{3/2} / ((2 pi)^{3/2} Gamma(delta/2))
double sqrt_maxwellian(const GasModel& gas, const PhasePoint& p);

class Field {
 public:
  using Fn = std::function<double(const PhasePoint&)>;

  Field() = default;
  explicit Field(Fn fn, bool closed_form = true) : fn_(std::move(fn)), closed_form_(closed_form) {}

  double operator()(const PhasePoint& p) const { return fn_ ? fn_(p) : 0.0; }
  bool closed_form() const { return closed_form_; }

  static Field zero();
  static Field maxwellian(const MaxwellianParams& params, const GasModel& gas);
  // Tensor-product cubic interpolation of values on an (|xi|, I) grid, zero outside.
  static Field isotropic_grid(std::vector<double> speeds, std::vector<double> energies,
                              std::vector<double> values);

 private:
  Fn fn_;
  bool closed_form_ = true;
};

enum class InvariantIndex { Mass, Px, Py, Pz, Energy };
inline constexpr InvariantIndex kInvariants[] = {InvariantIndex::Mass, InvariantIndex::Px, InvariantIndex::Py,
                                                 InvariantIndex::Pz, InvariantIndex::Energy};
const char* to_string(InvariantIndex idx);

double invariant(InvariantIndex idx, const PhasePoint& p, const GasModel& gas);
Field invariant_field(InvariantIndex idx, const GasModel& gas);

// int f g dxi dI over [-v_max, v_max]^3 x (0, I_max].
double inner_product(const Field& f, const Field& g, const QuadratureSpec& quad);

MaxwellianParams moments(const Field& f, const GasModel& gas, const QuadratureSpec& quad);

}  // namespace polylin
