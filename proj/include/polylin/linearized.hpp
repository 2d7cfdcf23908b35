#pragma once

#include <memory>
#include <utility>

#include "polylin/distributions.hpp"
#include "polylin/models.hpp"
#include "polylin/quadrature.hpp"

namespace polylin {

struct KernelArgs {
  PhasePoint x, y;
};

// Normalisation of k2, fixed once against weak_L_mc and frozen.
inline constexpr double kK2Constant = 8.0;

double nu_general(const PhasePoint& p, const GasModel& gas, const ScatteringModel& model, const QuadratureSpec& quad);

// Independent route for the power-law family B = C E^{1 - alpha/2}.
double nu_reduced_e1(const PhasePoint& p, const GasModel& gas, double alpha, double C, const QuadratureSpec& quad);

// Energy-shell integrand of the reduced route at fixed E (zero outside the indicator).
double nu_reduced_integrand(double E, double Ip, double Isp, const GasModel& gas, double alpha);

double k1_eval(const KernelArgs& args, const GasModel& gas, const ScatteringModel& model, const QuadratureSpec& quad);
double k2_eval(const KernelArgs& args, const GasModel& gas, const ScatteringModel& model, const QuadratureSpec& quad);
double k_eval(const KernelArgs& args, const GasModel& gas, const ScatteringModel& model, const QuadratureSpec& quad);

// Prebuilt rules for repeated kernel and frequency evaluations.
class KernelContext {
 public:
  KernelContext(const GasModel& gas, const ScatteringModel& model, const QuadratureSpec& quad);
  double nu(const PhasePoint& p) const;
  double k1(const PhasePoint& x, const PhasePoint& y) const;
  double k2(const PhasePoint& x, const PhasePoint& y, double c0 = kK2Constant) const;
  double k(const PhasePoint& x, const PhasePoint& y) const { return k2(x, y) - k1(x, y); }
  const GasModel& gas() const;
  const ScatteringModel& model() const;
  const QuadratureSpec& quad() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// Unchecked versions; k2 has a finite limit at coincident velocities which the
// Nystrom assembly relies on.
double k1_core(const PhasePoint& x, const PhasePoint& y, const GasModel& gas, const ScatteringModel& model,
               const QuadratureSpec& quad);
double k2_core(const PhasePoint& x, const PhasePoint& y, const GasModel& gas, const ScatteringModel& model,
               const QuadratureSpec& quad, double c0 = kK2Constant);

// Quarter-symmetrized (Lh, g), sampled from a Maxwellian pair and uniform (r, R, omega).
McResult weak_L_mc(const Field& h, const Field& g, const GasModel& gas, const ScatteringModel& model,
                   std::int64_t n, std::uint64_t seed);

std::pair<double, double> nu_envelope_ratios(const PhasePoint& p, const GasModel& gas, double alpha, double epsilon,
                                             double nu_value);

// int int k1^2 over the box [0, v_max] x (0, I_max] in both arguments.
double hs_norm_k1(const GasModel& gas, const ScatteringModel& model, const QuadratureSpec& quad, double v_max,
                  double I_max, int n);

}  // namespace polylin
