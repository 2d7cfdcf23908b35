#include "polylin/collision_op.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "detail.hpp"

namespace polylin {

namespace {

using detail::ipow;

std::string where(const char* what, const PhasePoint& p) {
  std::ostringstream os;
  os << what << " at xi=(" << p.v.x << "," << p.v.y << "," << p.v.z << "), I=" << p.I;
  return os.str();
}

double eval_checked(const Field& f, const PhasePoint& p) {
  const double v = f(p);
  if (!std::isfinite(v)) throw std::runtime_error(where("non-finite field value", p));
  return v;
}

// Post-collision states for pair (x, y) at fractions (r, R) and direction w.
struct Post {
  PhasePoint a, b;
  double E;
};

inline Post collide(const PhasePoint& x, const PhasePoint& y, double r, double R, const Vec3& w, double m) {
  const Vec3 g = x.v - y.v;
  const double E = 0.25 * m * norm2(g) + x.I + y.I;
  const Vec3 G = 0.5 * (x.v + y.v);
  const Vec3 gp = std::sqrt(4.0 * R * E / m) * w;
  return {{G + 0.5 * gp, r * (1.0 - R) * E}, {G - 0.5 * gp, (1.0 - r) * (1.0 - R) * E}, E};
}

inline double b_value(const ScatteringModel& model, const GasModel& gas, const PhasePoint& x,
                      const PhasePoint& y, double E, double r, double R, const Vec3& w) {
  const Vec3 g = x.v - y.v;
  const double gn = norm(g);
  const double c = gn > 0 ? dot(g, w) / gn : 1.0;
  return model.B({E, R, r, gn, x.I, y.I, c}, gas);
}

struct Rules {
  Rule vel, energy;
  detail::FractionRule frac;
  SphereRule sphere;
  Rules(const GasModel& gas, const QuadratureSpec& q, bool pair)
      : vel(gaussian_plain_rule(pair ? q.n_pair_velocity : q.n_velocity, 0.0, 1.0 / std::sqrt(gas.m))),
        energy(semi_infinite_plain_rule(pair ? q.n_pair_energy : q.n_semi, 1.0, gas.a())),
        frac(pair ? q.n_pair_split : q.n_split, gas),
        sphere(sphere_rule(pair ? q.pair_sphere_order : q.sphere_order)) {}

  std::vector<PhasePoint> points() const {
    std::vector<PhasePoint> pts;
    for (double x : vel.nodes)
      for (double y : vel.nodes)
        for (double z : vel.nodes)
          for (double e : energy.nodes) pts.push_back({{x, y, z}, e});
    return pts;
  }
  std::vector<double> point_weights() const {
    std::vector<double> w;
    for (double x : vel.weights)
      for (double y : vel.weights)
        for (double z : vel.weights)
          for (double e : energy.weights) w.push_back(x * y * z * e);
    return w;
  }
};

// Loops over the pre-collision pair and (r, R, omega); body(x, y, xp, yp, weight)
// where weight already includes B, Phi, (I I*)^{delta/2-1} and all rule weights.
template <class Body>
WeakValue pair_sum(const GasModel& gas, const ScatteringModel& model, const QuadratureSpec& quad, Body&& body) {
  quad.validate();
  gas.validate();
  Rules rules(gas, quad, true);
  const auto pts = rules.points();
  const auto pw = rules.point_weights();
  const int n = static_cast<int>(pts.size());
  const double a = gas.a();
  std::vector<double> val(n), sc(n);
  std::vector<std::string> err(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      double acc = 0.0, acc_s = 0.0;
      const PhasePoint& x = pts[i];
      for (int j = 0; j < n; ++j) {
        const PhasePoint& y = pts[j];
        const double wxy = pw[i] * pw[j] * ipow(x.I * y.I, a);
        for (std::size_t k = 0; k < rules.frac.size(); ++k)
          for (std::size_t s = 0; s < rules.sphere.size(); ++s) {
            const Vec3& w = rules.sphere.nodes[s];
            Post p = collide(x, y, rules.frac.r[k], rules.frac.R[k], w, gas.m);
            const double B = b_value(model, gas, x, y, p.E, rules.frac.r[k], rules.frac.R[k], w);
            const double wt = wxy * rules.frac.w[k] * rules.sphere.weights[s] * B;
            auto [v, s_abs] = body(x, y, p.a, p.b, wt);
            acc += v;
            acc_s += s_abs;
          }
      }
      val[i] = acc;
      sc[i] = acc_s;
    } catch (const std::exception& e) {
      err[i] = e.what();
    }
  }
  for (const auto& e : err)
    if (!e.empty()) throw std::runtime_error(e);
  return {pairwise_sum(val), pairwise_sum(sc)};
}

}  // namespace

double q_eval(const Field& f, const PhasePoint& p, const GasModel& gas, const ScatteringModel& model,
              const QuadratureSpec& quad) {
  quad.validate();
  Rules rules(gas, quad, false);
  const double a = gas.a();
  const double fp = eval_checked(f, p);
  const int nv = static_cast<int>(rules.vel.size());
  std::vector<double> slab(nv);
  std::vector<std::string> err(nv);
#pragma omp parallel for schedule(dynamic)
  for (int ix = 0; ix < nv; ++ix) {
    try {
      double acc = 0.0;
      for (int iy = 0; iy < nv; ++iy)
        for (int iz = 0; iz < nv; ++iz)
          for (std::size_t ie = 0; ie < rules.energy.size(); ++ie) {
            const PhasePoint y{{rules.vel.nodes[ix], rules.vel.nodes[iy], rules.vel.nodes[iz]}, rules.energy.nodes[ie]};
            const double wy = rules.vel.weights[ix] * rules.vel.weights[iy] * rules.vel.weights[iz] *
                              rules.energy.weights[ie];
            const double loss = fp * eval_checked(f, y);
            const double mI = ipow(p.I * y.I, a);
            for (std::size_t k = 0; k < rules.frac.size(); ++k)
              for (std::size_t s = 0; s < rules.sphere.size(); ++s) {
                const Vec3& w = rules.sphere.nodes[s];
                Post q = collide(p, y, rules.frac.r[k], rules.frac.R[k], w, gas.m);
                const double B = b_value(model, gas, p, y, q.E, rules.frac.r[k], rules.frac.R[k], w);
                const double gain = eval_checked(f, q.a) * eval_checked(f, q.b) * mI / ipow(q.a.I * q.b.I, a);
                acc += wy * rules.frac.w[k] * rules.sphere.weights[s] * B * (gain - loss);
              }
          }
      slab[ix] = acc;
    } catch (const std::exception& e) {
      err[ix] = e.what();
    }
  }
  for (const auto& e : err)
    if (!e.empty()) throw std::runtime_error(e);
  return pairwise_sum(slab);
}

McResult q_eval_mc(const Field& f, const PhasePoint& p, const GasModel& gas, const ScatteringModel& model,
                   std::int64_t n, std::uint64_t seed) {
  gas.validate();
  const double a = gas.a(), k = 0.5 * gas.delta, sd = 1.0 / std::sqrt(gas.m);
  const double fp = f(p);
  const double lg = std::lgamma(k);
  return mc_mean(n, seed, [&](Stream& st) {
    PhasePoint y{{sd * st.normal(), sd * st.normal(), sd * st.normal()}, detail::gamma_variate(st, k)};
    const double r = st.uniform(), R = st.uniform();
    const Vec3 w = detail::unit_vector(st);
    const double dens = std::exp(-0.5 * gas.m * norm2(y.v)) * std::pow(gas.m / (2 * std::numbers::pi), 1.5) *
                        std::exp(a * std::log(y.I) - y.I - lg) / (4.0 * std::numbers::pi);
    Post q = collide(p, y, r, R, w, gas.m);
    const double B = b_value(model, gas, p, y, q.E, r, R, w);
    const double mI = ipow(p.I * y.I, a);
    const double gain = f(q.a) * f(q.b) * mI / ipow(q.a.I * q.b.I, a);
    return B * bl_weight(r, R, gas) * (gain - fp * f(y)) / dens;
  });
}

WeakValue weak_form_q(const Field& f, const Field& g, const GasModel& gas, const ScatteringModel& model,
                      const QuadratureSpec& quad) {
  const double a = gas.a();
  return pair_sum(gas, model, quad, [&](const PhasePoint& x, const PhasePoint& y, const PhasePoint& xp,
                                        const PhasePoint& yp, double wt) {
    const double fx = eval_checked(f, x), fy = eval_checked(f, y);
    const double gain = eval_checked(f, xp) * eval_checked(f, yp) / ipow(xp.I * yp.I, a);
    const double loss = fx * fy / ipow(x.I * y.I, a);
    const double gx = g(x), gy = g(y), gxp = g(xp), gyp = g(yp);
    const double d = (gx + gy) - (gxp + gyp);
    return std::pair{0.25 * wt * (gain - loss) * d,
                     0.25 * wt * (std::abs(gain) + std::abs(loss)) *
                         (std::abs(gx) + std::abs(gy) + std::abs(gxp) + std::abs(gyp))};
  });
}

WeakValue w_functional(const Field& f, const GasModel& gas, const ScatteringModel& model,
                       const QuadratureSpec& quad) {
  const double a = gas.a();
  auto positive = [&](const PhasePoint& p) {
    const double v = eval_checked(f, p);
    if (!(v > 0)) throw std::runtime_error(where("nonpositive field value", p));
    return v;
  };
  return pair_sum(gas, model, quad, [&](const PhasePoint& x, const PhasePoint& y, const PhasePoint& xp,
                                        const PhasePoint& yp, double wt) {
    const double F = positive(x) * positive(y) / ipow(x.I * y.I, a);
    const double Fp = positive(xp) * positive(yp) / ipow(xp.I * yp.I, a);
    const double t = Fp / F;
    // (t - 1) log t, expanded near t = 1
    const double d = t - 1.0;
    const double h = std::abs(d) < 1e-5 ? d * d * (1.0 - 0.5 * d) : d * std::log(t);
    return std::pair{-0.25 * wt * F * h, 0.25 * wt * (F + Fp) * std::abs(std::log(t))};
  });
}

double gamma_term(const Field& h, const PhasePoint& p, const GasModel& gas, const ScatteringModel& model,
                  const QuadratureSpec& quad) {
  Field f([&h, gas](const PhasePoint& q) { return sqrt_maxwellian(gas, q) * h(q); }, h.closed_form());
  return q_eval(f, p, gas, model, quad) / sqrt_maxwellian(gas, p);
}

WeakValue gamma_weak(const Field& h, const Field& phi, const GasModel& gas, const ScatteringModel& model,
                     const QuadratureSpec& quad) {
  Field f([&h, gas](const PhasePoint& q) { return sqrt_maxwellian(gas, q) * h(q); }, h.closed_form());
  Field g([&phi, gas](const PhasePoint& q) { return phi(q) / sqrt_maxwellian(gas, q); }, phi.closed_form());
  return weak_form_q(f, g, gas, model, quad);
}

}  // namespace polylin
