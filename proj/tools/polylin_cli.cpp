#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "polylin/collision_op.hpp"
#include "polylin/config.hpp"
#include "polylin/verify.hpp"

using namespace polylin;
using json = nlohmann::json;

namespace {

constexpr int kOk = 0, kFail = 1, kUsage = 2;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
};

RunConfig load(const Common& c) {
  RunConfig cfg = resolve_config(c.config);
  if (c.seed) cfg.quad.mc_seed = *c.seed;
  if (c.alpha) cfg.model.alpha = *c.alpha;
  cfg.validate();
  return cfg;
}

json checks_json(const std::vector<Check>& checks) {
  json arr = json::array();
  for (const auto& c : checks)
    arr.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"relation", c.relation},
                   {"pass", c.pass}});
  return arr;
}

json vec_json(const std::vector<double>& v) { return json(v); }

// "NSxNI", e.g. "5x4"; returns false for anything else
bool parse_grid_spec(const std::string& s, int& ns, int& ne) {
  const auto x = s.find('x');
  if (x == std::string::npos) return false;
  try {
    std::size_t p1 = 0, p2 = 0;
    ns = std::stoi(s.substr(0, x), &p1);
    ne = std::stoi(s.substr(x + 1), &p2);
    return p1 == x && p2 == s.size() - x - 1;
  } catch (const std::exception&) {
    return false;
  }
}

PhasePoint parse_point(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  if (v.size() != 4) throw std::invalid_argument("phase point needs vx,vy,vz,I");
  return PhasePoint::checked({v[0], v[1], v[2]}, v[3]);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path);
}

int cmd_nu(const Common& common, const std::optional<std::string>& grid, std::optional<double> epsilon, std::string out) {
  RunConfig cfg = load(common);
  if (epsilon) cfg.nu.epsilon = *epsilon;
  if (out.empty()) out = cfg.output.nu_csv;
  if (grid) {
    int ns = 0, ne = 0;
    if (!parse_grid_spec(*grid, ns, ne)) ns = ne = 0;
    cfg.nu.n_speed = ns;
    cfg.nu.n_energy = ne;
  }
  if (cfg.nu.empty()) {
    std::cerr << "nu: empty scan grid\n";
    return kFail;
  }
  const ScatteringModel model = cfg.model.build();
  const bool reduced = model.variant() == ModelVariant::PowerLawE;
  std::ostringstream csv;
  csv.precision(17);
  csv << "s,I,nu_general,nu_reduced,lower_ratio,upper_ratio\n";
  double worst = 0;
  for (const auto& p : nu_scan_points(cfg.nu)) {
    const double g = nu_general(p, cfg.gas, model, cfg.quad);
    const double r = reduced ? nu_reduced_e1(p, cfg.gas, model.alpha(), model.prefactor(), cfg.quad) : NAN;
    const auto [lo, hi] = nu_envelope_ratios(p, cfg.gas, model.alpha(), cfg.nu.epsilon, g);
    if (reduced) worst = std::max(worst, std::abs(g - r) / std::max(std::abs(g), std::abs(r)));
    csv << p.v.z << ',' << p.I << ',' << g << ',';
    if (reduced) csv << r;
    csv << ',' << lo << ',' << hi << '\n';
  }
  write_text(out, csv.str());
  const Tolerances tol(cfg.tol_scale, cfg.tolerances);
  if (worst > tol("nu.route")) {
    std::cerr << "nu: routes disagree by " << worst << "\n";
    return kUsage;
  }
  return kOk;
}

int cmd_kernel(const Common& common, const std::string& xs, const std::string& ys) {
  RunConfig cfg = load(common);
  const PhasePoint x = parse_point(xs), y = parse_point(ys);
  const ScatteringModel model = cfg.model.build();
  const KernelArgs args{x, y};
  const double k1 = k1_eval(args, cfg.gas, model, cfg.quad), k2 = k2_eval(args, cfg.gas, model, cfg.quad);
  json j{{"x", {x.v.x, x.v.y, x.v.z, x.I}},
         {"y", {y.v.x, y.v.y, y.v.z, y.I}},
         {"k1", k1},
         {"k2", k2},
         {"k", k2 - k1},
         {"nu_x", nu_general(x, cfg.gas, model, cfg.quad)},
         {"nu_y", nu_general(y, cfg.gas, model, cfg.quad)}};
  std::cout << j.dump(2) << "\n";
  return kOk;
}

int cmd_assemble(const Common& common, const std::string& mode, std::string out) {
  RunConfig cfg = load(common);
  if (!mode.empty()) cfg.grid.mode = parse_mode(mode);
  if (out.empty()) out = cfg.output.operator_file;
  const auto t0 = std::chrono::steady_clock::now();
  const Grid grid = cfg.grid.build(cfg.gas);
  const NystromOperator op = assemble(grid, cfg.gas, cfg.model.build(), cfg.quad, {cfg.grid.mirror});
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_blop(out, op);
  const double entries = static_cast<double>(op.Kmat.size());
  json j{{"mode", to_string(grid.mode)},
         {"nodes", grid.size()},
         {"dims", {grid.dim_a, grid.dim_b}},
         {"entries", entries},
         {"wall_seconds", dt},
         {"entries_per_second", dt > 0 ? entries / dt : 0.0},
         {"out", out}};
  std::cout << j.dump(2) << "\n";
  return kOk;
}

int cmd_spectrum(const Common& common, const std::string& in, const std::string& out) {
  RunConfig cfg = load(common);
  const NystromOperator op = read_blop(in);
  const SymmetrizedL sl = symmetrized_L(op);
  const Eigenpairs ep = eigendecompose(sl.L);
  const SvdReport sv = svd_decay(op);
  const Coercivity c = coercivity_estimate(op);
  std::vector<double> eig(ep.values.data(), ep.values.data() + ep.values.size());
  const auto names = kernel_basis_names(op.grid.mode);
  const auto res = nullspace_residuals(op, cfg.gas);
  json null;
  for (std::size_t i = 0; i < res.size(); ++i) null[names[i]] = res[i];
  json j{{"mode", to_string(op.grid.mode)},
         {"nodes", op.grid.size()},
         {"symmetry_correction", sl.correction},
         {"eigenvalues", eig},
         {"singular_values", vec_json(sv.values)},
         {"sigma_ratio", {{"quarter", sv.ratio_quarter}, {"half", sv.ratio_half}, {"full", sv.ratio_full}}},
         {"nullspace_residuals", null},
         {"coercivity_lambda", c.lambda},
         {"null_dim", c.null_dim}};
  if (!out.empty()) write_text(out, j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return kOk;
}

ScatteringModel hooked_model(const RunConfig& cfg, const std::string& hook) {
  if (hook.empty()) return cfg.model.build();
  if (hook == "negative-prefactor")
    return ScatteringModel::unchecked(cfg.model.variant, -std::abs(cfg.model.prefactor), cfg.model.alpha,
                                      cfg.model.gamma);
  throw CLI::ValidationError("--test-hook", "unknown hook " + hook);
}

int emit_report(const std::string& suite, const std::vector<Check>& checks, const std::string& report,
                json extra = json::object()) {
  json j{{"suite", suite}, {"pass", all_pass(checks)}, {"checks", checks_json(checks)}};
  j.update(extra);
  std::vector<std::string> failed;
  for (const auto& c : checks)
    if (!c.pass) failed.push_back(c.name);
  j["failed"] = failed;
  if (!report.empty()) write_text(report, j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return all_pass(checks) ? kOk : kFail;
}

int cmd_qcheck(const Common& common, std::optional<double> tol_scale, const std::string& report,
               const std::string& hook) {
  RunConfig cfg = load(common);
  if (tol_scale) cfg.tol_scale = *tol_scale;
  cfg.validate();
  VerifyContext ctx(cfg, hooked_model(cfg, hook));
  auto checks = run_suite("q", ctx);
  // sampled Q at a fixed point; seeded, so the value is part of the artifact
  const PhasePoint p{{0.5, -0.25, 1.0}, 1.5};
  Field f([gas = cfg.gas](const PhasePoint& q) {
    return maxwellian({}, gas, q) * (1.0 + 0.3 * std::tanh(q.v.x) + 0.2 * std::sin(q.I));
  });
  const auto mc = q_eval_mc(f, p, cfg.gas, ctx.model, cfg.quad.mc_samples, cfg.quad.mc_seed);
  return emit_report("q", checks, report,
                     {{"q_eval_mc", {{"point", {p.v.x, p.v.y, p.v.z, p.I}},
                                     {"estimate", mc.estimate},
                                     {"stderr", mc.stderr_},
                                     {"samples", mc.samples},
                                     {"seed", cfg.quad.mc_seed}}}});
}

int cmd_verify(const Common& common, const std::string& suite, std::optional<double> tol_scale,
               const std::string& report, const std::string& hook) {
  RunConfig cfg = load(common);
  if (tol_scale) cfg.tol_scale = *tol_scale;
  cfg.validate();
  VerifyContext ctx(cfg, hooked_model(cfg, hook));
  return emit_report(suite, run_suite(suite, ctx), report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linearized polyatomic Boltzmann operator toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "polylin 0.1.0");
  Common common;
  auto add_common = [&](CLI::App* sub, bool seed) {
    sub->add_option("--config", common.config, "config file (default: $POLYLIN_CONFIG)");
    if (seed) sub->add_option("--seed", common.seed, "Monte Carlo seed");
  };

  auto* nu = app.add_subcommand("nu", "collision frequency table (CSV)");
  add_common(nu, false);
  std::optional<std::string> grid;
  std::string out, mode, in, xs, ys, suite = "all", report, hook;
  std::optional<double> epsilon, tol_scale;
  nu->add_option("--alpha", common.alpha, "power-law exponent");
  nu->add_option("--grid", grid, "scan size NSxNI");
  nu->add_option("--epsilon", epsilon, "upper envelope epsilon");
  nu->add_option("--out", out, "CSV path");

  auto* kernel = app.add_subcommand("kernel", "pointwise k1, k2, k as JSON");
  add_common(kernel, false);
  kernel->add_option("--alpha", common.alpha);
  kernel->add_option("--x", xs, "vx,vy,vz,I")->required();
  kernel->add_option("--y", ys, "vx,vy,vz,I")->required();

  auto* asmb = app.add_subcommand("assemble", "Nystrom assembly to a BLOP file");
  add_common(asmb, true);
  asmb->add_option("--alpha", common.alpha);
  asmb->add_option("--mode", mode, "isotropic|full");
  asmb->add_option("--out", out, "BLOP path");

  auto* spec = app.add_subcommand("spectrum", "eigen and singular values of a BLOP file");
  add_common(spec, false);
  spec->add_option("--in", in, "BLOP path")->required();
  spec->add_option("--out", out, "JSON path");

  auto* qc = app.add_subcommand("qcheck", "collision operator checks");
  add_common(qc, true);
  qc->add_option("--alpha", common.alpha);
  qc->add_option("--tol-scale", tol_scale);
  qc->add_option("--report", report, "JSON path");
  qc->add_option("--test-hook", hook)->group("");

  auto* ver = app.add_subcommand("verify", "run verification suites");
  add_common(ver, true);
  ver->add_option("--alpha", common.alpha);
  ver->add_option("--suite", suite)->check(CLI::IsMember(suite_names()));
  ver->add_option("--tol-scale", tol_scale);
  ver->add_option("--report", report, "JSON path");
  ver->add_option("--test-hook", hook)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*nu) return cmd_nu(common, grid, epsilon, out);
    if (*kernel) return cmd_kernel(common, xs, ys);
    if (*asmb) return cmd_assemble(common, mode, out);
    if (*spec) return cmd_spectrum(common, in, out);
    if (*qc) return cmd_qcheck(common, tol_scale, report, hook);
    if (*ver) return cmd_verify(common, suite, tol_scale, report, hook);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
