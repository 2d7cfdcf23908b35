#include <doctest.h>

#include <cmath>

#include "polylin/collision_op.hpp"
#include "polylin/linearized.hpp"

using namespace polylin;

namespace {
QuadratureSpec small_quad() {
  QuadratureSpec q;
  q.n_pair_velocity = 3;
  q.n_pair_energy = 3;
  q.n_pair_split = 3;
  return q;
}
}  // namespace

TEST_SUITE("collision_op") {
  TEST_CASE("maxwellian is annihilated pointwise") {
    GasModel gas;
    QuadratureSpec q;
    q.n_velocity = 4;
    q.n_semi = 6;
    q.n_split = 4;
    q.sphere_order = 3;
    auto model = ScatteringModel::power_law(1, 1);
    Field M = Field::maxwellian({}, gas);
    PhasePoint p{{0.4, -0.3, 0.9}, 1.1};
    const double loss_scale = maxwellian({}, gas, p) * nu_general(p, gas, model, QuadratureSpec{});
    CHECK(std::abs(q_eval(M, p, gas, model, q)) < 1e-12 * loss_scale);
  }

  TEST_CASE("weak form orthogonal to invariants") {
    GasModel gas{1.0, 3.0};
    auto model = ScatteringModel::gp20(2, 1, 1);
    Field f([&](const PhasePoint& p) { return maxwellian({}, gas, p) * (1 + 0.4 * std::tanh(p.v.y - p.I)); });
    for (auto idx : kInvariants) {
      auto w = weak_form_q(f, invariant_field(idx, gas), gas, model, small_quad());
      CHECK(std::abs(w.value) <= 1e-12 * w.scale);
    }
    // a non-invariant test function sees a nonzero value
    Field g([](const PhasePoint& p) { return p.v.y * p.v.y * p.I; });
    auto w = weak_form_q(f, g, gas, model, small_quad());
    CHECK(std::abs(w.value) > 1e-6 * w.scale);
  }

  TEST_CASE("entropy production sign") {
    GasModel gas;
    auto model = ScatteringModel::power_law(1, 0.5);
    CHECK(std::abs(w_functional(Field::maxwellian({3.0, {0.2, 0, 0}, 0.9}, gas), gas, model, small_quad()).value) <
          1e-12);
    Field f([&](const PhasePoint& p) {
      return maxwellian({}, gas, p) + 0.5 * maxwellian({1.0, {1, 0, 0}, 0.5}, gas, p);
    });
    CHECK(w_functional(f, gas, model, small_quad()).value < 0);
    Field neg([](const PhasePoint& p) { return p.v.x; });
    CHECK_THROWS(w_functional(neg, gas, model, small_quad()));
  }

  TEST_CASE("quadrature and sampled routes agree") {
    GasModel gas;
    auto model = ScatteringModel::power_law(1, 1);
    Field f([&](const PhasePoint& p) { return maxwellian({}, gas, p) * (1 + 0.5 * std::tanh(p.v.x)); });
    PhasePoint p{{0.5, 0.0, 0.2}, 0.8};
    QuadratureSpec q;
    q.n_velocity = 8;
    q.n_semi = 10;
    const double det = q_eval(f, p, gas, model, q);
    auto mc = q_eval_mc(f, p, gas, model, 400'000, 17);
    CHECK(std::abs(det - mc.estimate) < 4 * mc.stderr_ + 1e-3 * std::abs(det));
    auto again = q_eval_mc(f, p, gas, model, 400'000, 17);
    CHECK(again.estimate == mc.estimate);
  }

  TEST_CASE("gamma term orthogonality") {
    GasModel gas;
    auto model = ScatteringModel::power_law(1, 1);
    Field h([](const PhasePoint& p) { return 1 + p.v.x * p.I; });
    for (auto idx : kInvariants) {
      Field phi([&, idx](const PhasePoint& p) { return invariant(idx, p, gas) * sqrt_maxwellian(gas, p); });
      auto w = gamma_weak(h, phi, gas, model, small_quad());
      CHECK(std::abs(w.value) <= 1e-12 * w.scale);
    }
  }

  TEST_CASE("non-finite field values are reported") {
    GasModel gas;
    Field bad([](const PhasePoint& p) { return p.v.x > 0 ? NAN : 1.0; });
    CHECK_THROWS(weak_form_q(bad, Field([](const PhasePoint&) { return 1.0; }), gas,
                             ScatteringModel::power_law(1, 1), small_quad()));
  }
}
