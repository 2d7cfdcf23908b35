#pragma once

// Shared internals: Borgnakke-Larsen fraction rules and samplers.

#include <algorithm>
#include <cmath>
#include <vector>
#include <numbers>

#include "polylin/kinematics.hpp"
#include "polylin/quadrature.hpp"

namespace polylin::detail {

// r = (1 - cos phi)/2 and R = t^2, Gauss-Legendre in phi and t. Weights carry
// the Jacobians and bl_weight, so sum_k w_k F(r_k, R_k) ~ int F Phi dr dR.
struct FractionRule {
  std::vector<double> r, R, w;
  FractionRule(int n, const GasModel& gas) {
    Rule ph = interval_rule(n, 0.0, std::numbers::pi);
    Rule t = interval_rule(n, 0.0, 1.0);
    for (std::size_t i = 0; i < ph.size(); ++i)
      for (std::size_t j = 0; j < t.size(); ++j) {
        const double ri = 0.5 * (1.0 - std::cos(ph.nodes[i]));
        const double Rj = t.nodes[j] * t.nodes[j];
        r.push_back(ri);
        R.push_back(Rj);
        w.push_back(ph.weights[i] * 0.5 * std::sin(ph.nodes[i]) * t.weights[j] * 2.0 * t.nodes[j] *
                    bl_weight(ri, Rj, gas));
      }
  }
  std::size_t size() const { return r.size(); }
};

// Gamma(k, 1) variate, k >= 1 (Marsaglia-Tsang).
inline double gamma_variate(Stream& st, double k) {
  if (k == 1.0) return -std::log(st.uniform());
  const double d = k - 1.0 / 3.0, c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = st.normal(), v = 1.0 + c * x;
    if (v <= 0) continue;
    v = v * v * v;
    const double u = st.uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

inline Vec3 unit_vector(Stream& st) {
  const double z = 2.0 * st.uniform() - 1.0, ph = 2.0 * std::numbers::pi * st.uniform();
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(ph), s * std::sin(ph), z};
}

inline double ipow(double x, double a) { return a == 0.0 ? 1.0 : std::pow(x, a); }

}  // namespace polylin::detail
