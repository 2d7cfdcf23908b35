#pragma once

#include "polylin/distributions.hpp"
#include "polylin/models.hpp"
#include "polylin/quadrature.hpp"

namespace polylin {

double q_eval(const Field& f, const PhasePoint& p, const GasModel& gas, const ScatteringModel& model,
              const QuadratureSpec& quad);

// Same integrand, sampled: xi* ~ N(0, 1/m), I* ~ Gamma(delta/2), r, R, omega uniform.
McResult q_eval_mc(const Field& f, const PhasePoint& p, const GasModel& gas, const ScatteringModel& model,
                   std::int64_t n, std::uint64_t seed);

struct WeakValue {
  double value = 0.0;
  double scale = 0.0;  // same integral with absolute values, unsymmetrized
};

// Quarter-symmetrized (Q(f,f), g) in Borgnakke-Larsen variables.
WeakValue weak_form_q(const Field& f, const Field& g, const GasModel& gas, const ScatteringModel& model,
                      const QuadratureSpec& quad);

// (Q(f,f), log(I^{1-delta/2} f)) in the nonpositive quarter form.
WeakValue w_functional(const Field& f, const GasModel& gas, const ScatteringModel& model,
                       const QuadratureSpec& quad);

// M^{-1/2} Q(M^{1/2} h, M^{1/2} h) at p, standard Maxwellian.
double gamma_term(const Field& h, const PhasePoint& p, const GasModel& gas, const ScatteringModel& model,
                  const QuadratureSpec& quad);

// (Gamma(h,h), phi) through the weak form.
WeakValue gamma_weak(const Field& h, const Field& phi, const GasModel& gas, const ScatteringModel& model,
                     const QuadratureSpec& quad);

}  // namespace polylin
