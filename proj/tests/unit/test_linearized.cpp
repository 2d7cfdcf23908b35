#include <doctest.h>

#include <cmath>
#include <numbers>

#include "polylin/linearized.hpp"

using namespace polylin;

TEST_SUITE("linearized") {
  TEST_CASE("closed-form frequency for constant kernel") {
    GasModel gas;
    QuadratureSpec q;
    auto model = ScatteringModel::power_law(1, 2);
    const double exact = 16 * std::numbers::pi / 15;
    for (double s : {0.0, 1.0, 4.0, 9.0})
      for (double I : {0.2, 3.0, 20.0}) {
        PhasePoint p{{0, 0, s}, I};
        CHECK(std::abs(nu_general(p, gas, model, q) - exact) < 1e-6);
        CHECK(nu_reduced_e1(p, gas, 2, 1, q) == doctest::Approx(exact).epsilon(5e-3));
      }
    // scales linearly in C
    CHECK(nu_general({{0, 0, 1}, 1}, gas, ScatteringModel::power_law(2.5, 2), q) ==
          doctest::Approx(2.5 * exact).epsilon(1e-9));
  }

  TEST_CASE("frequency routes agree and the value is direction independent") {
    GasModel gas{1.0, 4.0};
    QuadratureSpec q;
    for (double alpha : {0.0, 0.7, 1.0}) {
      auto model = ScatteringModel::power_law(1, alpha);
      PhasePoint p{{0, 0, 2.0}, 1.5}, p2{{2.0 / std::sqrt(3), -2.0 / std::sqrt(3), 2.0 / std::sqrt(3)}, 1.5};
      const double g = nu_general(p, gas, model, q);
      CHECK(g == doctest::Approx(nu_reduced_e1(p, gas, alpha, 1, q)).epsilon(5e-3));
      CHECK(g == doctest::Approx(nu_general(p2, gas, model, q)).epsilon(1e-12));
    }
  }

  TEST_CASE("frequency regression") {
    GasModel gas;
    QuadratureSpec q;
    auto model = ScatteringModel::power_law(1, 1);
    CHECK(nu_general({{0.3, -0.2, 0.5}, 0.7}, gas, model, q) == doctest::Approx(5.2107485911125728).epsilon(1e-10));
  }

  TEST_CASE("kernel values regression and symmetry") {
    GasModel gas;
    QuadratureSpec q;
    auto model = ScatteringModel::power_law(1, 1);
    KernelContext kc(gas, model, q);
    PhasePoint x{{0.3, -0.2, 0.5}, 0.7}, y{{-0.4, 0.1, 1.1}, 1.9};
    CHECK(kc.k1(x, y) == doctest::Approx(0.06288005702111861).epsilon(1e-10));
    CHECK(kc.k2(x, y) == doctest::Approx(0.13530909952136988).epsilon(1e-10));
    CHECK(kc.k1(x, y) == doctest::Approx(kc.k1(y, x)).epsilon(1e-12));
    CHECK(kc.k2(x, y) == doctest::Approx(kc.k2(y, x)).epsilon(1e-10));
    CHECK(k_eval({x, y}, gas, model, q) == doctest::Approx(kc.k(x, y)).epsilon(1e-14));
    CHECK(k2_eval({x, y}, gas, model, q) == doctest::Approx(kc.k2(x, y)).epsilon(1e-14));
  }

  TEST_CASE("coincident velocities rejected by checked entry points") {
    GasModel gas;
    QuadratureSpec q;
    auto model = ScatteringModel::power_law(1, 1);
    PhasePoint x{{0.3, -0.2, 0.5}, 0.7}, y{{0.3, -0.2, 0.5 + 1e-10}, 1.9};
    CHECK_THROWS(k1_eval({x, y}, gas, model, q));
    CHECK_THROWS(k2_eval({x, y}, gas, model, q));
    CHECK_THROWS(k_eval({x, y}, gas, model, q));
    // the unchecked form has a finite limit there
    const double lim = k2_core(x, {x.v, 1.9}, gas, model, q);
    CHECK(std::isfinite(lim));
    CHECK(lim == doctest::Approx(k2_core(x, {x.v + Vec3{0, 0, 1e-5}, 1.9}, gas, model, q)).epsilon(1e-3));
  }

  TEST_CASE("k2 integral identity fixes its normalisation") {
    // for phi = M^{1/2}: int (k2 - k1) phi = nu phi, and int k1 phi = nu phi, so int k2 phi = 2 nu phi
    GasModel gas;
    QuadratureSpec q;
    auto model = ScatteringModel::power_law(1, 1);
    KernelContext kc(gas, model, q);
    PhasePoint x{{0, 0, 0.8}, 1.2};
    Rule v = gaussian_plain_rule(10, 0.0, 1.0);
    Rule e = semi_infinite_plain_rule(8, 2.0, 0.0);
    double i1 = 0, i2 = 0;
    for (std::size_t a = 0; a < v.size(); ++a)
      for (std::size_t b = 0; b < v.size(); ++b)
        for (std::size_t c = 0; c < v.size(); ++c)
          for (std::size_t k = 0; k < e.size(); ++k) {
            PhasePoint y{{v.nodes[a], v.nodes[b], v.nodes[c] + 1e-3}, e.nodes[k]};
            const double w = v.weights[a] * v.weights[b] * v.weights[c] * e.weights[k] * sqrt_maxwellian(gas, y);
            i1 += w * kc.k1(x, y);
            i2 += w * kc.k2(x, y);
          }
    const double rhs = kc.nu(x) * sqrt_maxwellian(gas, x);
    CHECK(i1 == doctest::Approx(rhs).epsilon(1e-3));
    CHECK(i2 == doctest::Approx(2 * rhs).epsilon(2e-2));
  }

  TEST_CASE("kernels are nonnegative") {
    GasModel gas{1.0, 3.0};
    QuadratureSpec q;
    KernelContext kc(gas, ScatteringModel::power_law(1, 0), q);
    for (int i = 0; i < 40; ++i) {
      Stream st(8, i);
      PhasePoint x{{st.normal(), st.normal(), st.normal()}, 0.1 + 3 * st.uniform()};
      PhasePoint y{{st.normal(), st.normal(), st.normal()}, 0.1 + 3 * st.uniform()};
      CHECK(kc.k1(x, y) >= 0);
      CHECK(kc.k2(x, y) >= 0);
    }
  }

  TEST_CASE("envelope ratios") {
    GasModel gas;
    auto [lo, hi] = nu_envelope_ratios({{0, 0, 3}, 4}, gas, 1.0, 0.1, 12.0);
    CHECK(lo == doctest::Approx(12.0 / 6.0));
    CHECK(hi == doctest::Approx(12.0 / std::pow(6.0, 1.1)));
    CHECK_THROWS(nu_envelope_ratios({{0, 0, 3}, 4}, gas, 1.0, 0.0, 12.0));
  }

  TEST_CASE("sampled weak form is seeded") {
    GasModel gas;
    auto model = ScatteringModel::power_law(1, 1);
    Field h([&](const PhasePoint& p) { return (0.5 * norm2(p.v) - p.I) * sqrt_maxwellian(gas, p); });
    auto a = weak_L_mc(h, h, gas, model, 20'000, 4), b = weak_L_mc(h, h, gas, model, 20'000, 4);
    CHECK(a.estimate == b.estimate);
    CHECK(a.estimate > 0);
    // invariants are in the kernel
    Field inv([&](const PhasePoint& p) { return p.v.y * sqrt_maxwellian(gas, p); });
    auto z = weak_L_mc(inv, inv, gas, model, 20'000, 4);
    CHECK(std::abs(z.estimate) < 1e-12);
  }
}
