#include "polylin/linearized.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "detail.hpp"

namespace polylin {

using detail::ipow;

struct KernelContext::Impl {
  GasModel gas;
  ScatteringModel model;
  QuadratureSpec quad;
  detail::FractionRule frac;
  SphereRule sphere;
  // nu
  Rule speed, mu, energy;
  // k2
  Rule plane_t, chi_ref, chi_ref2, k2_energy;
  std::vector<double> cos_t, sin_t;
  double cM;

  Impl(const GasModel& g, const ScatteringModel& m, const QuadratureSpec& q)
      : gas(g), model(m), quad(q), frac(q.n_split, g), sphere(sphere_rule(q.sphere_order)),
        speed(interval_rule(q.n_interval, 0.0, q.v_max / std::sqrt(g.m))),
        mu(interval_rule(q.n_interval, -1.0, 1.0)),
        energy(semi_infinite_rule(q.n_semi, 1.0, g.a())),
        plane_t(semi_infinite_rule(q.n_plane_radial, 1.0, 0.0)),
        chi_ref(interval_rule(q.n_chi, 0.0, 1.0)),
        chi_ref2(interval_rule(2 * q.n_chi, -1.0, 1.0)),
        k2_energy(semi_infinite_rule(q.n_k2_energy, 2.0, g.a())),
        cM(maxwellian_constant(g)) {
    for (int j = 0; j < q.n_plane_angular; ++j) {
      const double th = 2.0 * std::numbers::pi * (j + 0.5) / q.n_plane_angular;
      cos_t.push_back(std::cos(th));
      sin_t.push_back(std::sin(th));
    }
  }

  // int B Phi dr dR domega for the pre-collision pair, with an extra factor
  // depending on the post-collision states.
  template <class F>
  double collision_integral(const PhasePoint& x, const PhasePoint& y, F&& post_factor) const {
    const Vec3 g = x.v - y.v;
    const double gn = norm(g);
    const double E = 0.25 * gas.m * gn * gn + x.I + y.I;
    const Vec3 G = 0.5 * (x.v + y.v);
    double acc = 0.0;
    auto one_direction = [&](const Vec3& w, double ww) {
      const double c = gn > 0 ? dot(g, w) / gn : 1.0;
      for (std::size_t k = 0; k < frac.size(); ++k) {
        const double r = frac.r[k], R = frac.R[k];
        const Vec3 gp = std::sqrt(4.0 * R * E / gas.m) * w;
        const PhasePoint a{G + 0.5 * gp, r * (1.0 - R) * E}, b{G - 0.5 * gp, (1.0 - r) * (1.0 - R) * E};
        acc += ww * frac.w[k] * model.B({E, R, r, gn, x.I, y.I, c}, gas) * post_factor(a, b);
      }
    };
    if (model.angle_independent()) {
      one_direction({0, 0, 1}, 4.0 * std::numbers::pi);
    } else {
      for (std::size_t s = 0; s < sphere.size(); ++s) one_direction(sphere.nodes[s], sphere.weights[s]);
    }
    return acc;
  }

  double nu(const PhasePoint& p) const {
    const double s = norm(p.v);
    const double lg = std::lgamma(0.5 * gas.delta);
    const double cv = std::pow(gas.m / (2.0 * std::numbers::pi), 1.5);
    double acc = 0.0;
    for (std::size_t i = 0; i < speed.size(); ++i) {
      const double sy = speed.nodes[i];
      const double wv = speed.weights[i] * 2.0 * std::numbers::pi * sy * sy * cv * std::exp(-0.5 * gas.m * sy * sy);
      for (std::size_t j = 0; j < mu.size(); ++j) {
        const double c = mu.nodes[j], st = std::sqrt(std::max(0.0, 1.0 - c * c));
        const Vec3 yv{sy * st, 0.0, sy * c};
        for (std::size_t k = 0; k < energy.size(); ++k) {
          const PhasePoint x{{0, 0, s}, p.I}, y{yv, energy.nodes[k]};
          const double wy = wv * mu.weights[j] * energy.weights[k] / std::exp(lg);
          acc += wy * collision_integral(x, y, [](const PhasePoint&, const PhasePoint&) { return 1.0; });
        }
      }
    }
    return acc;
  }

  double k1(const PhasePoint& x, const PhasePoint& y) const {
    const double a = gas.a();
    const double q = std::pow(cM, 0.25);
    auto quarter = [&](const PhasePoint& p) {
      // M^{1/4} / I^{a/4}
      return q * std::exp(-0.25 * (0.5 * gas.m * norm2(p.v) + p.I));
    };
    const double pre = quarter(x) * quarter(y) * ipow(x.I * y.I, 0.5 * a);
    return pre * collision_integral(x, y, [&](const PhasePoint& u, const PhasePoint& v) {
             return quarter(u) * quarter(v);
           });
  }

  double k2(const PhasePoint& x, const PhasePoint& y, double c0) const {
    const double m = gas.m, a = gas.a(), dl = gas.delta + 0.5;
    const Vec3 g = x.v - y.v;
    const double gn = norm(g);
    const Vec3 n = gn > 0 ? g / gn : Vec3{0, 0, 1};
    const Vec3 P = 0.5 * (x.v + y.v);
    const double Pn = dot(P, n);
    const Vec3 Pp = P - Pn * n;
    const double pp = norm(Pp);
    const Vec3 e1 = pp > 1e-12 * (1.0 + norm(P)) ? Pp / pp : any_orthogonal(n);
    const Vec3 e2 = cross(n, e1);

    // normal coordinate: Gaussian about Pn, split where I' or I*' changes role
    const double L = 7.0 / std::sqrt(m);
    std::vector<double> chi, wchi;
    const bool split = gn > 0 && std::abs((y.I - x.I) / (m * gn) - Pn) < L;
    if (split) {
      const double ck = (y.I - x.I) / (m * gn), off = Pn - ck;
      for (std::size_t i = 0; i < chi_ref.size(); ++i) {
        const double hr = off + L, hl = L - off;
        chi.push_back(ck + hr * chi_ref.nodes[i]);
        wchi.push_back(hr * chi_ref.weights[i]);
        chi.push_back(ck - hl * chi_ref.nodes[i]);
        wchi.push_back(hl * chi_ref.weights[i]);
      }
    } else {
      for (std::size_t i = 0; i < chi_ref2.size(); ++i) {
        chi.push_back(Pn + L * chi_ref2.nodes[i]);
        wchi.push_back(L * chi_ref2.weights[i]);
      }
    }

    const int nr = static_cast<int>(plane_t.size()), na = static_cast<int>(cos_t.size());
    std::vector<Vec3> wv(nr * na);
    std::vector<double> wp(nr * na);
    for (int i = 0; i < nr; ++i) {
      const double rho = std::sqrt(2.0 * plane_t.nodes[i] / m);
      for (int j = 0; j < na; ++j) {
        wv[i * na + j] = -1.0 * Pp + rho * (cos_t[j] * e1 + sin_t[j] * e2);
        wp[i * na + j] = plane_t.weights[i] / m * 2.0 * std::numbers::pi / na;
      }
    }

    const bool table = !model.angle_independent();
    double acc = 0.0;
    for (std::size_t ic = 0; ic < chi.size(); ++ic) {
      const double c = chi[ic];
      const double D = m * gn * c + x.I - y.I, aD = std::abs(D);
      const double wc = wchi[ic] * std::exp(-0.5 * m * (c - Pn) * (c - Pn) - 0.5 * aD);
      const double sp2 = (gn + c) * (gn + c), sm2 = (c - gn) * (c - gn);
      for (std::size_t iu = 0; iu < k2_energy.size(); ++iu) {
        const double u = k2_energy.nodes[iu], S = aD + u;
        const double Ip = 0.5 * (S - D), Isp = 0.5 * (S + D);
        const double wu = wc * k2_energy.weights[iu] * (a == 0.0 ? 1.0 : std::pow(Ip * Isp / u, a));
        const double rt = y.I / (y.I + Isp);
        double inner = 0.0;
        for (std::size_t q = 0; q < wv.size(); ++q) {
          const double w2 = norm2(wv[q]);
          const double gt2 = sp2 + w2, gs2 = sm2 + w2;
          const double Et = 0.25 * m * gt2 + x.I + Ip;
          const double Rt = std::min(1.0, 0.25 * m * gs2 / Et);
          double cth = 1.0;
          if (table) {
            const Vec3 gt = g - wv[q] + c * n, gs = -1.0 * g - wv[q] + c * n;
            const double d = std::sqrt(gt2 * gs2);
            cth = d > 0 ? dot(gt, gs) / d : 1.0;
          }
          const double B = model.B({Et, Rt, rt, std::sqrt(gt2), x.I, Ip, cth}, gas);
          inner += wp[q] * B / (dl == 2.5 ? Et * Et * std::sqrt(Et) : std::pow(Et, dl));
        }
        acc += wu * inner;
      }
    }
    return c0 * std::pow(m, 1.5) / 4.0 * cM * ipow(x.I * y.I, 0.5 * a) * std::exp(-0.125 * m * gn * gn) * acc;
  }
};

KernelContext::KernelContext(const GasModel& gas, const ScatteringModel& model, const QuadratureSpec& quad) {
  gas.validate();
  quad.validate();
  impl_ = std::make_shared<const Impl>(gas, model, quad);
}

double KernelContext::nu(const PhasePoint& p) const { return impl_->nu(p); }
double KernelContext::k1(const PhasePoint& x, const PhasePoint& y) const { return impl_->k1(x, y); }
double KernelContext::k2(const PhasePoint& x, const PhasePoint& y, double c0) const { return impl_->k2(x, y, c0); }
const GasModel& KernelContext::gas() const { return impl_->gas; }
const ScatteringModel& KernelContext::model() const { return impl_->model; }
const QuadratureSpec& KernelContext::quad() const { return impl_->quad; }

double nu_general(const PhasePoint& p, const GasModel& gas, const ScatteringModel& model, const QuadratureSpec& quad) {
  if (!p.valid()) throw std::invalid_argument("nu_general: invalid phase point");
  return KernelContext(gas, model, quad).nu(p);
}

double nu_reduced_integrand(double E, double Ip, double Isp, const GasModel& gas, double alpha) {
  const double rest = E - Ip - Isp;
  if (!(rest > 0) || !(Ip > 0) || !(Isp > 0)) return 0.0;
  return std::sqrt(rest) * ipow(Ip * Isp, gas.a()) / std::pow(E, gas.delta + 0.5 * (alpha - 1.0));
}

double nu_reduced_e1(const PhasePoint& p, const GasModel& gas, double alpha, double C, const QuadratureSpec& quad) {
  gas.validate();
  quad.validate();
  if (!(alpha >= 0 && alpha <= 2)) throw std::invalid_argument("nu_reduced_e1: alpha outside [0,2]");
  if (!p.valid()) throw std::invalid_argument("nu_reduced_e1: invalid phase point");
  const double m = gas.m, s = norm(p.v), a = gas.a();
  const double L = quad.v_max / std::sqrt(m);
  Rule grule = interval_rule(quad.n_interval, std::max(0.0, s - L), s + L);
  Rule Irule = semi_infinite_rule(quad.n_semi, 1.0, a);
  Rule x1 = interval_rule(quad.n_semi, 0.0, 1.0);
  const double cv = std::pow(m / (2.0 * std::numbers::pi), 1.5);
  const double gnorm = std::exp(-std::lgamma(0.5 * gas.delta));
  double acc = 0.0;
  for (std::size_t i = 0; i < grule.size(); ++i) {
    const double g = grule.nodes[i];
    // angular average of the velocity Gaussian about xi, at distance g
    const double z = m * s * g;
    const double shell = z < 1e-8 ? 1.0 - z : -std::expm1(-2.0 * z) / (2.0 * z);
    const double kv = cv * 4.0 * std::numbers::pi * g * g * std::exp(-0.5 * m * (s - g) * (s - g)) * shell;
    for (std::size_t j = 0; j < Irule.size(); ++j) {
      const double E = 0.25 * m * g * g + p.I + Irule.nodes[j];
      // I' = E x, I*' = (E - I')(1 - t^2)
      double tri = 0.0;
      for (std::size_t k = 0; k < x1.size(); ++k) {
        const double Ip = E * x1.nodes[k], rem = E - Ip;
        for (std::size_t l = 0; l < x1.size(); ++l) {
          const double t = x1.nodes[l];
          const double Isp = rem * (1.0 - t * t);
          tri += x1.weights[k] * E * x1.weights[l] * 2.0 * t * rem * nu_reduced_integrand(E, Ip, Isp, gas, alpha);
        }
      }
      acc += grule.weights[i] * kv * Irule.weights[j] * gnorm * tri;
    }
  }
  return 4.0 * std::numbers::pi * C * acc;
}

namespace {
void require_separated(const KernelArgs& args) {
  if (!args.x.valid() || !args.y.valid()) throw std::invalid_argument("kernel arguments need I > 0 and finite values");
  if (!(norm(args.x.v - args.y.v) >= 1e-8)) throw std::domain_error("kernel arguments too close: |xi - xi*| < 1e-8");
}
}  // namespace

double k1_core(const PhasePoint& x, const PhasePoint& y, const GasModel& gas, const ScatteringModel& model,
               const QuadratureSpec& quad) {
  return KernelContext(gas, model, quad).k1(x, y);
}

double k2_core(const PhasePoint& x, const PhasePoint& y, const GasModel& gas, const ScatteringModel& model,
               const QuadratureSpec& quad, double c0) {
  return KernelContext(gas, model, quad).k2(x, y, c0);
}

double k1_eval(const KernelArgs& args, const GasModel& gas, const ScatteringModel& model, const QuadratureSpec& quad) {
  require_separated(args);
  return k1_core(args.x, args.y, gas, model, quad);
}

double k2_eval(const KernelArgs& args, const GasModel& gas, const ScatteringModel& model, const QuadratureSpec& quad) {
  require_separated(args);
  return k2_core(args.x, args.y, gas, model, quad);
}

double k_eval(const KernelArgs& args, const GasModel& gas, const ScatteringModel& model, const QuadratureSpec& quad) {
  require_separated(args);
  KernelContext ctx(gas, model, quad);
  return ctx.k2(args.x, args.y) - ctx.k1(args.x, args.y);
}

McResult weak_L_mc(const Field& h, const Field& g, const GasModel& gas, const ScatteringModel& model,
                   std::int64_t n, std::uint64_t seed) {
  gas.validate();
  const double k = 0.5 * gas.delta, sd = 1.0 / std::sqrt(gas.m);
  return mc_mean(n, seed, [&](Stream& st) {
    const PhasePoint x{{sd * st.normal(), sd * st.normal(), sd * st.normal()}, detail::gamma_variate(st, k)};
    const PhasePoint y{{sd * st.normal(), sd * st.normal(), sd * st.normal()}, detail::gamma_variate(st, k)};
    const double r = st.uniform(), R = st.uniform();
    const Vec3 w = detail::unit_vector(st);
    const Vec3 gv = x.v - y.v;
    const double gn = norm(gv);
    const double E = 0.25 * gas.m * gn * gn + x.I + y.I;
    const Vec3 G = 0.5 * (x.v + y.v), gp = std::sqrt(4.0 * R * E / gas.m) * w;
    const PhasePoint xp{G + 0.5 * gp, r * (1.0 - R) * E}, yp{G - 0.5 * gp, (1.0 - r) * (1.0 - R) * E};
    if (!(xp.I > 0 && yp.I > 0)) throw std::runtime_error("weak_L_mc: degenerate post-collision sample");
    auto ratio = [&](const Field& f, const PhasePoint& p) { return f(p) / sqrt_maxwellian(gas, p); };
    const double dh = ratio(h, x) + ratio(h, y) - ratio(h, xp) - ratio(h, yp);
    const double dg = ratio(g, x) + ratio(g, y) - ratio(g, xp) - ratio(g, yp);
    const double c = gn > 0 ? dot(gv, w) / gn : 1.0;
    const double B = model.B({E, R, r, gn, x.I, y.I, c}, gas);
    return 0.25 * dh * dg * B * bl_weight(r, R, gas) * 4.0 * std::numbers::pi;
  });
}

std::pair<double, double> nu_envelope_ratios(const PhasePoint& p, const GasModel&, double alpha, double epsilon,
                                             double nu_value) {
  if (!(nu_value > 0)) throw std::invalid_argument("nu_envelope_ratios: nu must be positive");
  if (!(epsilon > 0)) throw std::invalid_argument("nu_envelope_ratios: epsilon must be positive");
  const double base = 1.0 + norm(p.v) + std::sqrt(p.I);
  return {nu_value / std::pow(base, 2.0 - alpha), nu_value / std::pow(base, 2.0 - alpha + epsilon)};
}

double hs_norm_k1(const GasModel& gas, const ScatteringModel& model, const QuadratureSpec& quad, double v_max,
                  double I_max, int n) {
  KernelContext ctx(gas, model, quad);
  Rule s = interval_rule(n, 0.0, v_max), e = interval_rule(n, 0.0, I_max), mu = interval_rule(n, -1.0, 1.0);
  std::vector<double> slab(s.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(s.size()); ++i) {
    double acc = 0.0;
    for (std::size_t a = 0; a < e.size(); ++a) {
      const PhasePoint x{{0, 0, s.nodes[i]}, e.nodes[a]};
      for (std::size_t j = 0; j < s.size(); ++j)
        for (std::size_t k = 0; k < mu.size(); ++k) {
          const double c = mu.nodes[k], st = std::sqrt(1.0 - c * c);
          for (std::size_t b = 0; b < e.size(); ++b) {
            const PhasePoint y{{s.nodes[j] * st, 0, s.nodes[j] * c}, e.nodes[b]};
            const double kv = ctx.k1(x, y);
            acc += e.weights[a] * s.weights[j] * 2.0 * std::numbers::pi * s.nodes[j] * s.nodes[j] * mu.weights[k] *
                   e.weights[b] * kv * kv;
          }
        }
    }
    slab[i] = s.weights[i] * 4.0 * std::numbers::pi * s.nodes[i] * s.nodes[i] * acc;
  }
  return pairwise_sum(slab);
}

}  // namespace polylin
