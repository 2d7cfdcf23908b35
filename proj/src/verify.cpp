#include "polylin/verify.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "polylin/collision_op.hpp"
#include "detail.hpp"

namespace polylin {

const std::vector<ToleranceEntry>& tolerance_table() {
  static const std::vector<ToleranceEntry> table{
      {"kinematics.conservation", 1e-12, false},
      {"kinematics.involution", 1e-12, false},
      {"kinematics.bl_symmetry", 1e-12, false},
      {"models.microreversibility", 1e-12, false},
      {"models.swap", 1e-12, false},
      {"models.roundtrip", 1e-12, false},
      {"q.orthogonality", 1e-7, false},
      {"q.entropy_zero", 1e-8, false},
      {"q.gamma_orthogonality", 1e-7, false},
      {"nu.closed_form_general", 1e-6, false},
      {"nu.closed_form_reduced", 5e-3, false},
      {"nu.constancy", 1e-6, false},
      {"nu.route", 5e-3, false},
      {"nu.envelope_stability", 0.1, false},
      {"kernel.k1_symmetry", 1e-10, false},
      {"kernel.k2_symmetry", 1e-8, false},
      {"kernel.hs_stability", 0.01, false},
      {"weak.stderr_multiple", 3.0, false},
      {"weak.relative", 0.01, false},
      {"spectral.symmetry", 1e-8, false},
      {"spectral.psd", 1e-8, false},
      {"spectral.null_isotropic", 1e-3, false},
      {"spectral.null_full", 5e-3, false},
      {"spectral.gap", 10.0, true},
      {"spectral.eigen_residual", 1e-10, false},
      {"spectral.svd_stability", 0.02, false},
      {"spectral.coercivity", 1e-10, false},
      {"spectral.truncation_ratio", 0.1, false},
  };
  return table;
}

bool tolerance_known(const std::string& name) {
  for (const auto& e : tolerance_table())
    if (name == e.name) return true;
  return false;
}

Tolerances::Tolerances(double scale, std::map<std::string, double> overrides)
    : scale_(scale), overrides_(std::move(overrides)) {
  if (!(scale > 0)) throw std::invalid_argument("tolerance scale must be positive");
  for (const auto& [k, v] : overrides_)
    if (!tolerance_known(k)) throw std::invalid_argument("unknown tolerance " + k);
}

double Tolerances::operator()(const std::string& name) const {
  for (const auto& e : tolerance_table()) {
    if (name != e.name) continue;
    auto it = overrides_.find(name);
    const double base = it == overrides_.end() ? e.value : it->second;
    return e.lower_bound ? base / scale_ : base * scale_;
  }
  throw std::invalid_argument("unknown tolerance " + name);
}

Check make_check(std::string name, double value, double tolerance, const std::string& relation) {
  bool pass = false;
  if (relation == "<=") pass = value <= tolerance;
  else if (relation == ">=") pass = value >= tolerance;
  else if (relation == "<") pass = value < tolerance;
  else if (relation == ">") pass = value > tolerance;
  else throw std::invalid_argument("unknown relation " + relation);
  return {std::move(name), value, tolerance, relation, pass};
}

bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

VerifyContext::VerifyContext(const RunConfig& c) : VerifyContext(c, c.model.build()) {}

VerifyContext::VerifyContext(const RunConfig& c, const ScatteringModel& m)
    : cfg(c), model(m), tol(c.tol_scale, c.tolerances) {}

std::vector<PhasePoint> nu_scan_points(const NuScan& scan, double factor) {
  std::vector<PhasePoint> pts;
  if (scan.empty()) return pts;
  const int ns = scan.n_speed, ne = scan.n_energy;
  const double ds = ns > 1 ? scan.s_max / (ns - 1) : 0.0;
  const double de = ne > 1 ? (scan.I_max - scan.I_min) / (ne - 1) : 0.0;
  const int ns2 = ns > 1 ? static_cast<int>(std::ceil(factor * (ns - 1) - 1e-9)) + 1 : 1;
  const int ne2 = ne > 1 ? static_cast<int>(std::ceil(factor * (ne - 1) - 1e-9)) + 1 : 1;
  for (int i = 0; i < ns2; ++i)
    for (int j = 0; j < ne2; ++j) pts.push_back({{0, 0, i * ds}, scan.I_min + j * de});
  return pts;
}

namespace {

constexpr double kBig = DBL_MAX;

double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s > 0 ? std::abs(a - b) / s : 0.0;
}

PhasePoint random_point(Stream& st, double v_sd, double I_scale) {
  return {{v_sd * st.normal(), v_sd * st.normal(), v_sd * st.normal()}, -I_scale * std::log(st.uniform())};
}

CollisionPair random_pair(Stream& st) { return {random_point(st, 1.5, 2.0), random_point(st, 1.5, 2.0)}; }

BLParams random_params(Stream& st) {
  BLParams p;
  p.omega = detail::unit_vector(st);
  p.r = st.uniform();
  p.R = st.uniform();
  return p;
}

// larger of |a.v - b.v| / velocity scale and |a.I - b.I| / energy scale
double pair_distance(const CollisionPair& a, const CollisionPair& b, double vs, double es) {
  const double dv = std::max(norm(a.a.v - b.a.v), norm(a.b.v - b.b.v)) / vs;
  const double de = std::max(std::abs(a.a.I - b.a.I), std::abs(a.b.I - b.b.I)) / es;
  return std::max(dv, de);
}

CollisionPair swapped(const CollisionPair& c) { return {c.b, c.a}; }

struct TestField {
  std::string name;
  Field f;
};

std::vector<TestField> positive_fields(const GasModel& gas) {
  MaxwellianParams std_p;
  MaxwellianParams a{1.0, {0.5, 0.0, 0.0}, 1.0}, b{1.0, {-0.3, 0.2, 0.0}, 1.5}, c{1.0, {}, 0.8};
  return {
      {"modulated", Field([gas, std_p](const PhasePoint& p) {
         return maxwellian(std_p, gas, p) * (1.0 + 0.3 * std::tanh(p.v.x) + 0.2 * std::sin(p.I));
       })},
      {"bimodal", Field([gas, a, b](const PhasePoint& p) {
         return 0.6 * maxwellian(a, gas, p) + 0.4 * maxwellian(b, gas, p);
       })},
      {"bump", Field([gas, c](const PhasePoint& p) {
         const Vec3 d = p.v - Vec3{1.0, 0.5, 0.0};
         return maxwellian(c, gas, p) * (1.0 + 0.5 * std::exp(-norm2(d)) * p.I / (1.0 + p.I));
       })},
  };
}

}  // namespace

std::vector<Check> check_kinematics(const VerifyContext& ctx, int samples) {
  const GasModel& gas = ctx.cfg.gas;
  std::vector<double> mom(samples), en(samples), inv(samples), lvl(samples), blw(samples);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < samples; ++i) {
    Stream st(ctx.cfg.quad.mc_seed, static_cast<std::uint64_t>(i));
    const CollisionPair pre = random_pair(st);
    const BLParams p = random_params(st);
    const PostCollision post = post_collision(pre, p, gas);
    const auto res = conservation_residual(pre, post.pair, gas);
    const double vs = norm(pre.a.v) + norm(pre.b.v) + 1e-300;
    const double E_lab = 0.5 * gas.m * (norm2(pre.a.v) + norm2(pre.b.v)) + pre.a.I + pre.b.I;
    mom[i] = norm(res.momentum) / vs;
    en[i] = std::abs(res.energy) / E_lab;
    const double E = total_energy(pre, gas);
    lvl[i] = std::abs(total_energy(post.pair, gas) - E) / E;
    const BLParams back = inverse_params(pre, post.pair, gas);
    const PostCollision again = post_collision(post.pair, back, gas);
    inv[i] = pair_distance(again.pair, pre, std::sqrt(E / gas.m) + norm(pre.center()), E);
    blw[i] = rel(bl_weight(p.r, p.R, gas), bl_weight(1.0 - p.r, p.R, gas));
  }
  auto mx = [](const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); };
  const double tc = ctx.tol("kinematics.conservation");
  return {
      make_check("kinematics.momentum_conservation", mx(mom), tc, "<="),
      make_check("kinematics.energy_conservation", mx(en), tc, "<="),
      make_check("kinematics.energy_level", mx(lvl), tc, "<="),
      make_check("kinematics.involution", mx(inv), ctx.tol("kinematics.involution"), "<="),
      make_check("kinematics.bl_weight_symmetry", mx(blw), ctx.tol("kinematics.bl_symmetry"), "<="),
  };
}

std::vector<Check> check_models(const VerifyContext& ctx, int samples) {
  const GasModel& gas = ctx.cfg.gas;
  const ScatteringModel& model = ctx.model;
  double micro = 0, swap_pre = 0, swap_post = 0, trip = 0, min_B = kBig, min_sigma = kBig;
  std::vector<CollisionGeometry> geoms;
  for (int i = 0; i < samples; ++i) {
    Stream st(ctx.cfg.quad.mc_seed ^ 0x6d6f64656c73ULL, static_cast<std::uint64_t>(i));
    const CollisionPair pre = random_pair(st);
    const PostCollision post = post_collision(pre, random_params(st), gas);
    if (post.boundary) continue;
    const auto geom = CollisionGeometry::make(pre, post.pair, gas);
    if (!(geom.R > 0 && geom.R < 1 && geom.r > 0 && geom.r < 1)) continue;
    geoms.push_back(geom);
    const double B = kernel_B(model, geom, gas);
    micro = std::max(micro, rel(B, kernel_B(model, geom.reversed(gas), gas)));
    const auto g1 = CollisionGeometry::make(swapped(pre), swapped(post.pair), gas);
    swap_pre = std::max(swap_pre, rel(B, kernel_B(model, g1, gas)));
    const auto g2 = CollisionGeometry::make(pre, swapped(post.pair), gas);
    swap_post = std::max(swap_post, rel(B, kernel_B(model, g2, gas)));
    const double s = sigma(model, geom, gas);
    trip = std::max(trip, rel(B, kernel_from_sigma(s, geom, gas)));
    min_B = std::min(min_B, B);
    min_sigma = std::min(min_sigma, s);
  }
  const std::string tag = "." + to_string(model.variant());
  const auto env = envelope_check_est1a(model, gas, geoms, model.gamma());
  return {
      make_check("models.microreversibility" + tag, micro, ctx.tol("models.microreversibility"), "<="),
      make_check("models.swap_pre" + tag, swap_pre, ctx.tol("models.swap"), "<="),
      make_check("models.swap_post" + tag, swap_post, ctx.tol("models.swap"), "<="),
      make_check("models.sigma_roundtrip" + tag, trip, ctx.tol("models.roundtrip"), "<="),
      make_check("models.B_nonnegative" + tag, min_B, 0.0, ">="),
      make_check("models.sigma_nonnegative" + tag, min_sigma, 0.0, ">="),
      make_check("models.envelope_finite" + tag, env.worst_ratio, kBig, "<"),
  };
}

std::vector<Check> check_orthogonality(const VerifyContext& ctx) {
  const GasModel& gas = ctx.cfg.gas;
  std::vector<Check> out;
  const double tol = ctx.tol("q.orthogonality");
  for (const auto& tf : positive_fields(gas))
    for (auto idx : kInvariants) {
      const auto w = weak_form_q(tf.f, invariant_field(idx, gas), gas, ctx.model, ctx.cfg.quad);
      out.push_back(make_check("q.orthogonality." + tf.name + "." + to_string(idx),
                               w.scale > 0 ? std::abs(w.value) / w.scale : std::abs(w.value), tol, "<="));
    }
  Field h([](const PhasePoint& p) { return 0.3 + p.v.x + 0.5 * (p.I - 1.0) * p.v.z; });
  for (auto idx : kInvariants) {
    Field phi([gas, idx](const PhasePoint& p) { return invariant(idx, p, gas) * sqrt_maxwellian(gas, p); });
    const auto w = gamma_weak(h, phi, gas, ctx.model, ctx.cfg.quad);
    out.push_back(make_check(std::string("q.gamma_orthogonality.") + to_string(idx),
                             w.scale > 0 ? std::abs(w.value) / w.scale : std::abs(w.value),
                             ctx.tol("q.gamma_orthogonality"), "<="));
  }
  return out;
}

std::vector<Check> check_entropy(const VerifyContext& ctx) {
  const GasModel& gas = ctx.cfg.gas;
  std::vector<Check> out;
  const double tz = ctx.tol("q.entropy_zero");
  const auto wm = w_functional(Field::maxwellian({}, gas), gas, ctx.model, ctx.cfg.quad);
  out.push_back(make_check("q.entropy_maxwellian", std::abs(wm.value), tz, "<="));
  const auto ws = w_functional(Field::maxwellian({2.0, {0.3, -0.2, 0.1}, 1.2}, gas), gas, ctx.model, ctx.cfg.quad);
  out.push_back(make_check("q.entropy_scaled_maxwellian", std::abs(ws.value), tz, "<="));
  for (const auto& tf : positive_fields(gas)) {
    const auto w = w_functional(tf.f, gas, ctx.model, ctx.cfg.quad);
    out.push_back(make_check("q.entropy_sign." + tf.name, w.value, 0.0, "<"));
    // a strict sign that is only rounding noise would not mean anything
    out.push_back(make_check("q.entropy_resolved." + tf.name, -w.value, tz, ">"));
  }
  return out;
}

std::vector<Check> check_nu_closed_form(const VerifyContext& ctx) {
  const GasModel gas{1.0, 2.0};
  const auto model = ScatteringModel::power_law(1.0, 2.0);
  const double exact = 16.0 * std::numbers::pi / 15.0;
  double err_g = 0, err_r = 0, lo = kBig, hi = -kBig;
  for (const auto& p : nu_scan_points(NuScan{})) {
    const double g = nu_general(p, gas, model, ctx.cfg.quad);
    const double r = nu_reduced_e1(p, gas, 2.0, 1.0, ctx.cfg.quad);
    err_g = std::max(err_g, std::abs(g - exact));
    err_r = std::max(err_r, std::abs(r - exact) / exact);
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  return {
      make_check("nu.closed_form.general", err_g, ctx.tol("nu.closed_form_general"), "<="),
      make_check("nu.closed_form.reduced", err_r, ctx.tol("nu.closed_form_reduced"), "<="),
      make_check("nu.closed_form.constancy", (hi - lo) / exact, ctx.tol("nu.constancy"), "<="),
  };
}

namespace {
std::string alpha_tag(double a) {
  std::string s = std::to_string(a);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return "alpha" + s;
}

double power_law_C(const VerifyContext& ctx) {
  return ctx.model.variant() == ModelVariant::PowerLawE ? ctx.model.prefactor() : 1.0;
}
}  // namespace

std::vector<Check> check_nu_routes(const VerifyContext& ctx, const std::vector<double>& alphas) {
  std::vector<Check> out;
  const double C = power_law_C(ctx);
  for (double a : alphas) {
    const auto model = ScatteringModel::power_law(C, a);
    double worst = 0;
    for (const auto& p : nu_scan_points(ctx.cfg.nu))
      worst = std::max(worst, rel(nu_general(p, ctx.cfg.gas, model, ctx.cfg.quad),
                                  nu_reduced_e1(p, ctx.cfg.gas, a, C, ctx.cfg.quad)));
    out.push_back(make_check("nu.route_agreement." + alpha_tag(a), worst, ctx.tol("nu.route"), "<="));
  }
  return out;
}

std::vector<Check> check_nu_envelopes(const VerifyContext& ctx, const std::vector<double>& alphas) {
  std::vector<Check> out;
  const double C = power_law_C(ctx), eps = ctx.cfg.nu.epsilon;
  for (double a : alphas) {
    const auto model = ScatteringModel::power_law(C, a);
    auto scan = [&](double factor) {
      double lo = kBig, hi = 0;
      for (const auto& p : nu_scan_points(ctx.cfg.nu, factor)) {
        const auto [l, u] = nu_envelope_ratios(p, ctx.cfg.gas, a, eps, nu_general(p, ctx.cfg.gas, model, ctx.cfg.quad));
        lo = std::min(lo, l);
        hi = std::max(hi, u);
      }
      return std::pair{lo, hi};
    };
    const auto [lo, hi] = scan(1.0);
    const auto [lo2, hi2] = scan(1.5);
    const std::string t = "." + alpha_tag(a);
    const double ts = ctx.tol("nu.envelope_stability");
    out.push_back(make_check("nu.envelope.lower_min" + t, lo, 0.0, ">"));
    out.push_back(make_check("nu.envelope.lower_stability" + t, rel(lo, lo2), ts, "<="));
    out.push_back(make_check("nu.envelope.upper_max" + t, std::isfinite(hi) ? hi : kBig, kBig, "<"));
    out.push_back(make_check("nu.envelope.upper_stability" + t, rel(hi, hi2), ts, "<="));
  }
  return out;
}

std::vector<Check> check_kernel_symmetry(const VerifyContext& ctx, int pairs) {
  KernelContext kc(ctx.cfg.gas, ctx.model, ctx.cfg.quad);
  std::vector<double> s1(pairs), s2(pairs), s(pairs), m1(pairs), m2(pairs);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < pairs; ++i) {
    Stream st(ctx.cfg.quad.mc_seed ^ 0x6b65726eULL, static_cast<std::uint64_t>(i));
    PhasePoint x = random_point(st, 1.2, 1.5), y = random_point(st, 1.2, 1.5);
    const double a1 = kc.k1(x, y), b1 = kc.k1(y, x), a2 = kc.k2(x, y), b2 = kc.k2(y, x);
    s1[i] = rel(a1, b1);
    s2[i] = rel(a2, b2);
    s[i] = rel(a2 - a1, b2 - b1);
    m1[i] = std::min(a1, b1);
    m2[i] = std::min(a2, b2);
  }
  auto mx = [](const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); };
  auto mn = [](const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); };
  return {
      make_check("kernel.k1_symmetry", mx(s1), ctx.tol("kernel.k1_symmetry"), "<="),
      make_check("kernel.k2_symmetry", mx(s2), ctx.tol("kernel.k2_symmetry"), "<="),
      make_check("kernel.k_symmetry", mx(s), ctx.tol("kernel.k2_symmetry"), "<="),
      make_check("kernel.k1_nonnegative", mn(m1), 0.0, ">="),
      make_check("kernel.k2_nonnegative", mn(m2), 0.0, ">="),
  };
}

std::vector<Check> check_hs_norm(const VerifyContext& ctx) {
  const auto& q = ctx.cfg.quad;
  const double a = hs_norm_k1(ctx.cfg.gas, ctx.model, q, q.v_max, q.I_max, 12);
  const double b = hs_norm_k1(ctx.cfg.gas, ctx.model, q, 1.5 * q.v_max, 1.5 * q.I_max, 12);
  return {make_check("kernel.hs_norm_k1_stability", rel(a, b), ctx.tol("kernel.hs_stability"), "<=")};
}

double matrix_quadratic_form(const NystromOperator& op, const std::function<double(const PhasePoint&)>& h) {
  const auto& g = op.grid;
  const int n = static_cast<int>(g.size());
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = h(g.points[i]);
  const Eigen::VectorXd Lh = op.nu.cwiseProduct(v) - op.Kmat * v;
  double s = 0;
  for (int i = 0; i < n; ++i) s += g.weights[i] * v(i) * Lh(i);
  return s;
}

std::vector<Check> check_weak_form(const VerifyContext& ctx, const NystromOperator& op) {
  const GasModel gas = ctx.cfg.gas;
  auto null_field = [gas](const PhasePoint& p) {
    return (gas.m * norm2(p.v) + 2.0 * p.I - (3.0 + gas.delta)) * sqrt_maxwellian(gas, p);
  };
  auto test_field = [gas](const PhasePoint& p) { return (0.5 * gas.m * norm2(p.v) - p.I) * sqrt_maxwellian(gas, p); };
  auto nu_form = [&](const std::function<double(const PhasePoint&)>& h) {
    double s = 0;
    for (std::size_t i = 0; i < op.grid.size(); ++i) {
      const double v = h(op.grid.points[i]);
      s += op.grid.weights[i] * op.nu(static_cast<Eigen::Index>(i)) * v * v;
    }
    return s;
  };
  const double k = ctx.tol("weak.stderr_multiple"), r = ctx.tol("weak.relative");
  std::vector<Check> out;
  for (int which = 0; which < 2; ++which) {
    const std::function<double(const PhasePoint&)> h =
        which == 0 ? std::function<double(const PhasePoint&)>(null_field) : test_field;
    const double mat = matrix_quadratic_form(op, h);
    Field f(h);
    const auto mc = weak_L_mc(f, f, gas, ctx.model, ctx.cfg.quad.mc_samples, ctx.cfg.quad.mc_seed);
    // the null field has (h, Lh) = 0, so its relative slack is taken against (h, nu h)
    const double scale = which == 0 ? nu_form(h) : std::abs(mc.estimate);
    const double excess = std::max(0.0, std::abs(mat - mc.estimate) - k * mc.stderr_);
    out.push_back(make_check(which == 0 ? "weak.calibration_null_field" : "weak.calibration_test_field",
                             excess / scale, r, "<="));
  }
  return out;
}

std::vector<Check> check_structure(const VerifyContext& ctx, const NystromOperator& op) {
  std::vector<Check> out;
  const SymmetrizedL sl = symmetrized_L(op);
  out.push_back(make_check("spectral.symmetry_correction", sl.correction, ctx.tol("spectral.symmetry"), "<="));
  out.push_back(make_check("spectral.nu_positive", op.nu.minCoeff(), 0.0, ">"));
  const Eigenpairs ep = eigendecompose(sl.L);
  const int n = static_cast<int>(ep.values.size());
  const double lmax = ep.values(0), lmin = ep.values(n - 1);
  out.push_back(make_check("spectral.psd", -lmin / lmax, ctx.tol("spectral.psd"), "<="));
  double resid = 0;
  const double anorm = std::max(std::abs(lmax), std::abs(lmin));
  for (int k = 0; k < n; ++k)
    resid = std::max(resid, (sl.L * ep.vectors.col(k) - ep.values(k) * ep.vectors.col(k)).norm() / anorm);
  out.push_back(make_check("spectral.eigen_residual", resid, ctx.tol("spectral.eigen_residual"), "<="));

  const bool iso = op.grid.mode == GridMode::Isotropic;
  const auto names = kernel_basis_names(op.grid.mode);
  const auto res = nullspace_residuals(op, ctx.cfg.gas);
  const std::string prefix = iso ? "spectral.nullspace." : "spectral.full.nullspace.";
  const double tn = ctx.tol(iso ? "spectral.null_isotropic" : "spectral.null_full");
  for (std::size_t i = 0; i < res.size(); ++i) out.push_back(make_check(prefix + names[i], res[i], tn, "<="));
  const int d = iso ? 2 : 5;
  double small = 0;
  for (int k = 0; k < d; ++k) small = std::max(small, std::abs(ep.values(n - 1 - k)));
  const double gap = small > 0 ? std::abs(ep.values(n - 1 - d)) / small : kBig;
  out.push_back(make_check(iso ? "spectral.null_gap" : "spectral.full.null_gap", gap, ctx.tol("spectral.gap"), ">="));

  if (iso) {
    const SvdReport sv = svd_decay(op);
    int bad = 0;
    for (std::size_t i = 1; i < sv.values.size(); ++i) bad += sv.values[i] > sv.values[i - 1];
    out.push_back(make_check("spectral.svd_sorted", bad, 0, "<="));
    out.push_back(make_check("spectral.svd_half_below_quarter", sv.ratio_half - sv.ratio_quarter, 0.0, "<"));
  }
  return out;
}

std::vector<Check> check_coercivity(const VerifyContext& ctx, const NystromOperator& op, const std::string& tag) {
  const Coercivity c = coercivity_estimate(op);
  const SymmetrizedL sl = symmetrized_L(op);
  const int m = static_cast<int>(c.complement.cols());
  double worst = -kBig;
  for (int t = 0; t < 100; ++t) {
    Stream st(ctx.cfg.quad.mc_seed ^ 0x636f6572ULL, static_cast<std::uint64_t>(t));
    Eigen::VectorXd coef(m);
    for (int i = 0; i < m; ++i) coef(i) = st.normal();
    Eigen::VectorXd x = c.complement * coef;
    x.normalize();
    const double lh = x.dot(sl.L * x), nh = x.dot(op.nu.cwiseProduct(x));
    worst = std::max(worst, c.lambda * nh - lh);
  }
  const std::string s = tag.empty() ? "" : "." + tag;
  return {
      make_check("spectral.coercivity_lambda_positive" + s, c.lambda, 0.0, ">"),
      make_check("spectral.coercivity_lambda_below_one" + s, c.lambda, 1.0, "<"),
      make_check("spectral.coercivity_inequality" + s, worst, ctx.tol("spectral.coercivity"), "<="),
  };
}

std::vector<Check> check_svd_refinement(const VerifyContext& ctx, const NystromOperator& op) {
  if (op.grid.mode != GridMode::Isotropic) throw std::invalid_argument("refinement check needs an isotropic operator");
  GridSettings fine = ctx.cfg.grid;
  fine.mode = GridMode::Isotropic;
  fine.n_speed = static_cast<int>(std::lround(1.5 * op.grid.dim_a));
  fine.n_energy = static_cast<int>(std::lround(1.5 * op.grid.dim_b));
  const auto op2 = assemble(fine.build(ctx.cfg.gas), ctx.cfg.gas, ctx.model, ctx.cfg.quad, {ctx.cfg.grid.mirror});
  const auto a = svd_decay(op).values, b = svd_decay(op2).values;
  const std::size_t k = std::min<std::size_t>({10, a.size(), b.size()});
  double worst = 0;
  for (std::size_t i = 0; i < k; ++i) worst = std::max(worst, std::abs(a[i] - b[i]) / a[i]);
  return {make_check("spectral.svd_refinement", worst, ctx.tol("spectral.svd_stability"), "<=")};
}

std::vector<Check> check_full_mode(const VerifyContext& ctx) {
  GridSettings gs = ctx.cfg.grid;
  gs.mode = GridMode::Full;
  const auto op = assemble(gs.build(ctx.cfg.gas), ctx.cfg.gas, ctx.model, ctx.cfg.quad, {ctx.cfg.grid.mirror});
  std::vector<Check> out;
  for (auto& c : check_structure(ctx, op))
    if (c.name.rfind("spectral.full.", 0) == 0) out.push_back(c);
  return out;
}

std::vector<Check> check_truncation(const VerifyContext& ctx) {
  const auto v = lgd_truncation_probe(ctx.cfg.gas, ctx.model, ctx.cfg.quad, {2, 4, 8, 16});
  int bad = 0;
  for (std::size_t i = 1; i < v.size(); ++i) bad += v[i] > v[i - 1];
  double env = 0;
  const std::vector<int> N{2, 4, 8, 16};
  for (std::size_t i = 0; i < v.size(); ++i) env = std::max(env, v[i] * N[i] / (v[0] * N[0]));
  return {
      make_check("spectral.truncation_monotone", bad, 0, "<="),
      make_check("spectral.truncation_ratio", v.back() / v.front(), ctx.tol("spectral.truncation_ratio"), "<"),
      make_check("spectral.truncation_inverse_N_envelope", env, 1.0, "<="),
  };
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"kinematics", "models", "q", "linearized", "spectral", "all"};
  return names;
}

std::vector<Check> run_suite(const std::string& suite, const VerifyContext& ctx) {
  std::vector<Check> out;
  auto add = [&out](std::vector<Check> v) { out.insert(out.end(), v.begin(), v.end()); };
  const bool all = suite == "all";
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
    throw std::invalid_argument("unknown suite '" + suite + "'");
  if (all || suite == "kinematics") add(check_kinematics(ctx));
  if (all || suite == "models") add(check_models(ctx));
  if (all || suite == "q") {
    add(check_orthogonality(ctx));
    add(check_entropy(ctx));
  }
  if (all || suite == "linearized") {
    add(check_nu_closed_form(ctx));
    add(check_nu_routes(ctx, {0.0, 1.0, 2.0}));
    add(check_nu_envelopes(ctx, {0.0, 1.0}));
    add(check_kernel_symmetry(ctx));
    add(check_hs_norm(ctx));
  }
  if (all || suite == "spectral") {
    GridSettings gs = ctx.cfg.grid;
    gs.mode = GridMode::Isotropic;
    const auto op = assemble(gs.build(ctx.cfg.gas), ctx.cfg.gas, ctx.model, ctx.cfg.quad, {ctx.cfg.grid.mirror});
    add(check_structure(ctx, op));
    add(check_svd_refinement(ctx, op));
    add(check_coercivity(ctx, op));
    add(check_weak_form(ctx, op));
    add(check_full_mode(ctx));
    add(check_truncation(ctx));
  }
  return out;
}

}  // namespace polylin
