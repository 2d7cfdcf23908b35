// Runs the twelve acceptance criteria at the default configuration and prints
// one PASS/FAIL line per criterion. Exit status is nonzero if any fails.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "polylin/collision_op.hpp"
#include "polylin/verify.hpp"

using namespace polylin;

namespace {

using Clock = std::chrono::steady_clock;

struct Criterion {
  int id;
  std::string title;
  std::vector<Check> checks;
  double seconds;
};

void report(const Criterion& c) {
  const bool ok = all_pass(c.checks);
  std::printf("criterion %2d %s  %s  (%zu checks, %.1f s)\n", c.id, ok ? "PASS" : "FAIL", c.title.c_str(),
              c.checks.size(), c.seconds);
  for (const auto& k : c.checks)
    if (!k.pass) std::printf("    failed %s: %.6g %s %.6g\n", k.name.c_str(), k.value, k.relation.c_str(), k.tolerance);
  std::fflush(stdout);
}

template <class F>
Criterion run(int id, const std::string& title, F&& body) {
  const auto t0 = Clock::now();
  Criterion c{id, title, {}, 0.0};
  try {
    c.checks = body();
  } catch (const std::exception& e) {
    c.checks.push_back({"exception: " + std::string(e.what()), 0, 0, "", false});
  }
  c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  report(c);
  return c;
}

std::vector<Check> keep(const std::vector<Check>& v, const std::string& prefix) {
  std::vector<Check> out;
  for (const auto& c : v)
    if (c.name.rfind(prefix, 0) == 0) out.push_back(c);
  return out;
}

void append(std::vector<Check>& a, const std::vector<Check>& b) { a.insert(a.end(), b.begin(), b.end()); }

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

int main() {
  const RunConfig cfg = resolve_config("");
  const VerifyContext ctx(cfg);
  const int threads = omp_get_max_threads();
  std::vector<Criterion> all;

  all.push_back(run(1, "conservation and involution", [&] { return check_kinematics(ctx, 100000); }));

  all.push_back(run(2, "collision invariant orthogonality",
                    [&] { return keep(check_orthogonality(ctx), "q.orthogonality."); }));
  all.push_back(run(3, "entropy sign", [&] { return check_entropy(ctx); }));
  all.push_back(run(4, "nu closed form", [&] { return check_nu_closed_form(ctx); }));
  all.push_back(run(5, "nu route agreement", [&] { return check_nu_routes(ctx, {0.0, 1.0, 2.0}); }));
  all.push_back(run(6, "nu envelopes", [&] { return check_nu_envelopes(ctx, {0.0, 1.0}); }));
  all.push_back(run(7, "kernel symmetry", [&] { return check_kernel_symmetry(ctx, 1000); }));

  GridSettings gs = cfg.grid;
  gs.mode = GridMode::Isotropic;
  const Grid grid = gs.build(cfg.gas);
  const NystromOperator op = assemble(grid, cfg.gas, ctx.model, cfg.quad, {cfg.grid.mirror});

  all.push_back(run(8, "weak form oracle", [&] { return check_weak_form(ctx, op); }));
  all.push_back(run(9, "operator structure", [&] {
    auto v = check_structure(ctx, op);
    append(v, check_svd_refinement(ctx, op));
    append(v, check_full_mode(ctx));
    return v;
  }));
  all.push_back(run(10, "coercivity", [&] {
    std::vector<Check> v;
    for (double a : {0.0, 1.0}) {
      ModelSettings ms = cfg.model;
      ms.alpha = a;
      const VerifyContext c2(cfg, ms.build());
      const NystromOperator o = a == ctx.model.alpha() ? op : assemble(grid, cfg.gas, c2.model, cfg.quad, {cfg.grid.mirror});
      append(v, check_coercivity(c2, o, "alpha" + std::to_string(static_cast<int>(a))));
    }
    return v;
  }));
  all.push_back(run(11, "truncation probe", [&] { return check_truncation(ctx); }));

  all.push_back(run(12, "determinism", [&] {
    std::vector<Check> v;
    // assembled operator file, different thread counts
    const Grid small = isotropic_grid(4, 3, cfg.gas);
    std::string bytes[2];
    for (int k = 0; k < 2; ++k) {
      omp_set_num_threads(k == 0 ? 1 : std::max(2, threads));
      const std::string path = "acceptance_det_" + std::to_string(k) + ".blop";
      write_blop(path, assemble(small, cfg.gas, ctx.model, cfg.quad));
      bytes[k] = slurp(path);
      std::remove(path.c_str());
    }
    v.push_back(make_check("determinism.blop_bytes", bytes[0] == bytes[1] && !bytes[0].empty() ? 0 : 1, 0, "<="));

    // Monte Carlo estimators
    const GasModel gas = cfg.gas;
    Field h([gas](const PhasePoint& p) { return (0.5 * gas.m * norm2(p.v) - p.I) * sqrt_maxwellian(gas, p); });
    Field f([gas](const PhasePoint& p) { return maxwellian({}, gas, p) * (1.0 + 0.3 * std::tanh(p.v.x)); });
    McResult w[2], q[2];
    std::vector<Check> kin[2];
    for (int k = 0; k < 2; ++k) {
      omp_set_num_threads(k == 0 ? 1 : std::max(2, threads));
      w[k] = weak_L_mc(h, h, gas, ctx.model, 200000, cfg.quad.mc_seed);
      q[k] = q_eval_mc(f, {{0.3, -0.2, 0.5}, 0.7}, gas, ctx.model, 200000, cfg.quad.mc_seed);
      kin[k] = check_kinematics(ctx, 5000);
    }
    omp_set_num_threads(threads);
    v.push_back(make_check("determinism.weak_mc",
                           w[0].estimate == w[1].estimate && w[0].stderr_ == w[1].stderr_ ? 0 : 1, 0, "<="));
    v.push_back(make_check("determinism.q_mc",
                           q[0].estimate == q[1].estimate && q[0].stderr_ == q[1].stderr_ ? 0 : 1, 0, "<="));
    bool same = kin[0].size() == kin[1].size();
    for (std::size_t i = 0; same && i < kin[0].size(); ++i) same = kin[0][i].value == kin[1][i].value;
    v.push_back(make_check("determinism.random_collisions", same ? 0 : 1, 0, "<="));
    return v;
  }));

  int failed = 0;
  for (const auto& c : all) failed += !all_pass(c.checks);
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
