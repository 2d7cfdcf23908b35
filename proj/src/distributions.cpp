#include "polylin/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>

namespace polylin {

void MaxwellianParams::validate() const {
  if (!(n > 0) || !(T > 0) || !finite(u)) throw std::invalid_argument("Maxwellian needs n > 0, T > 0, finite u");
}

double maxwellian(const MaxwellianParams& mp, const GasModel& gas, const PhasePoint& p) {
  const double a = gas.a();
  const double norm_c = mp.n * std::pow(gas.m, 1.5) /
                        (std::pow(2.0 * std::numbers::pi, 1.5) * std::pow(mp.T, 0.5 * (gas.delta + 3.0)) *
                         std::tgamma(0.5 * gas.delta));
  const double ia = a == 0.0 ? 1.0 : std::pow(p.I, a);
  return norm_c * ia * std::exp(-(gas.m * norm2(p.v - mp.u) + 2.0 * p.I) / (2.0 * mp.T));
}

double maxwellian_constant(const GasModel& gas) {
  return std::pow(gas.m, 1.5) / (std::pow(2.0 * std::numbers::pi, 1.5) * std::tgamma(0.5 * gas.delta));
}

double sqrt_maxwellian(const GasModel& gas, const PhasePoint& p) {
  const double a = gas.a();
  const double ia = a == 0.0 ? 1.0 : std::pow(p.I, 0.5 * a);
  return std::sqrt(maxwellian_constant(gas)) * ia * std::exp(-0.25 * gas.m * norm2(p.v) - 0.5 * p.I);
}

Field Field::zero() {
  return Field([](const PhasePoint&) { return 0.0; });
}

Field Field::maxwellian(const MaxwellianParams& params, const GasModel& gas) {
  params.validate();
  return Field([params, gas](const PhasePoint& p) { return polylin::maxwellian(params, gas, p); });
}

namespace {

// Cubic Lagrange weights on the four nodes bracketing x (clamped at the ends).
std::size_t cubic_stencil(const std::vector<double>& xs, double x, double w[4]) {
  const std::size_t n = xs.size();
  std::size_t k = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
  std::size_t lo = k < 2 ? 0 : std::min(k - 2, n - 4);
  for (int i = 0; i < 4; ++i) {
    double v = 1.0;
    for (int j = 0; j < 4; ++j)
      if (j != i) v *= (x - xs[lo + j]) / (xs[lo + i] - xs[lo + j]);
    w[i] = v;
  }
  return lo;
}

}  // namespace

Field Field::isotropic_grid(std::vector<double> speeds, std::vector<double> energies, std::vector<double> values) {
  if (speeds.size() < 4 || energies.size() < 4) throw std::invalid_argument("grid field needs >= 4 nodes per axis");
  if (values.size() != speeds.size() * energies.size()) throw std::invalid_argument("grid field size mismatch");
  if (!std::is_sorted(speeds.begin(), speeds.end()) || !std::is_sorted(energies.begin(), energies.end()))
    throw std::invalid_argument("grid field axes must be increasing");
  auto data = std::make_shared<const std::tuple<std::vector<double>, std::vector<double>, std::vector<double>>>(
      std::move(speeds), std::move(energies), std::move(values));
  return Field(
      [data](const PhasePoint& p) {
        const auto& [s, e, v] = *data;
        const double sp = norm(p.v);
        if (sp > s.back() || p.I > e.back() || p.I < 0) return 0.0;
        double ws[4], we[4];
        std::size_t is = cubic_stencil(s, sp, ws), ie = cubic_stencil(e, p.I, we);
        double acc = 0.0;
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) acc += ws[a] * we[b] * v[(is + a) * e.size() + ie + b];
        return acc;
      },
      false);
}

const char* to_string(InvariantIndex idx) {
  switch (idx) {
    case InvariantIndex::Mass: return "mass";
    case InvariantIndex::Px: return "px";
    case InvariantIndex::Py: return "py";
    case InvariantIndex::Pz: return "pz";
    case InvariantIndex::Energy: return "energy";
  }
  return "?";
}

double invariant(InvariantIndex idx, const PhasePoint& p, const GasModel& gas) {
  switch (idx) {
    case InvariantIndex::Mass: return 1.0;
    case InvariantIndex::Px: return p.v.x;
    case InvariantIndex::Py: return p.v.y;
    case InvariantIndex::Pz: return p.v.z;
    case InvariantIndex::Energy: return gas.m * norm2(p.v) + 2.0 * p.I;
  }
  return 0.0;
}

Field invariant_field(InvariantIndex idx, const GasModel& gas) {
  return Field([idx, gas](const PhasePoint& p) { return invariant(idx, p, gas); });
}

namespace {

// Velocity rule on [-v_max, v_max] and energy rule in t = sqrt(I).
struct BoxRule {
  Rule v, t;
  explicit BoxRule(const QuadratureSpec& q)
      : v(interval_rule(q.n_interval, -q.v_max, q.v_max)), t(interval_rule(q.n_semi, 0.0, std::sqrt(q.I_max))) {}
};

template <class F>
double box_integrate(const QuadratureSpec& quad, F&& integrand) {
  BoxRule br(quad);
  const int nv = static_cast<int>(br.v.size()), nt = static_cast<int>(br.t.size());
  std::vector<double> slab(nv);
  std::vector<std::string> errors(nv);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nv; ++i) {
    double acc = 0.0;
    for (int j = 0; j < nv; ++j)
      for (int k = 0; k < nv; ++k)
        for (int l = 0; l < nt; ++l) {
          const double t = br.t.nodes[l];
          PhasePoint p{{br.v.nodes[i], br.v.nodes[j], br.v.nodes[k]}, t * t};
          const double val = integrand(p);
          if (!std::isfinite(val)) {
            std::ostringstream os;
            os << "non-finite integrand at xi=(" << p.v.x << "," << p.v.y << "," << p.v.z << "), I=" << p.I;
            if (errors[i].empty()) errors[i] = os.str();
          }
          acc += br.v.weights[j] * br.v.weights[k] * br.t.weights[l] * 2.0 * t * val;
        }
    slab[i] = br.v.weights[i] * acc;
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
  return pairwise_sum(slab);
}

}  // namespace

double inner_product(const Field& f, const Field& g, const QuadratureSpec& quad) {
  quad.validate();
  return box_integrate(quad, [&](const PhasePoint& p) { return f(p) * g(p); });
}

MaxwellianParams moments(const Field& f, const GasModel& gas, const QuadratureSpec& quad) {
  quad.validate();
  const double n = box_integrate(quad, [&](const PhasePoint& p) { return f(p); });
  if (!(n > 1e-12)) throw std::domain_error("moments: degenerate distribution (n ~ 0)");
  MaxwellianParams mp;
  mp.n = n;
  mp.u.x = box_integrate(quad, [&](const PhasePoint& p) { return f(p) * p.v.x; }) / n;
  mp.u.y = box_integrate(quad, [&](const PhasePoint& p) { return f(p) * p.v.y; }) / n;
  mp.u.z = box_integrate(quad, [&](const PhasePoint& p) { return f(p) * p.v.z; }) / n;
  const Vec3 u = mp.u;
  mp.T = gas.m / (3.0 * n) * box_integrate(quad, [&](const PhasePoint& p) { return f(p) * norm2(p.v - u); });
  return mp;
}

}  // namespace polylin
