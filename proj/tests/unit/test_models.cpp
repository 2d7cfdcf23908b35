#include <doctest.h>

#include <cmath>

#include "polylin/models.hpp"
#include "polylin/quadrature.hpp"

using namespace polylin;

namespace {
CollisionGeometry head_on(double g_post = 2.0, double r = 0.5) {
  GasModel gas;
  CollisionPair pre{{{1, 0, 0}, 0.5}, {{-1, 0, 0}, 0.5}};
  BLParams p;
  p.omega = {0, 0, 1};
  p.R = g_post * g_post / 8.0;
  p.r = r;
  return CollisionGeometry::make(pre, post_collision(pre, p, gas).pair, gas);
}

CollisionGeometry random_geometry(Stream& st, const GasModel& gas) {
  for (;;) {
    CollisionPair pre{{{st.normal(), st.normal(), st.normal()}, 0.05 + 2 * st.uniform()},
                      {{st.normal(), st.normal(), st.normal()}, 0.05 + 2 * st.uniform()}};
    BLParams p;
    const double z = 2 * st.uniform() - 1, ph = 6.283185307179586 * st.uniform();
    p.omega = {std::sqrt(1 - z * z) * std::cos(ph), std::sqrt(1 - z * z) * std::sin(ph), z};
    p.r = st.uniform();
    p.R = st.uniform();
    auto post = post_collision(pre, p, gas);
    if (!post.boundary) return CollisionGeometry::make(pre, post.pair, gas);
  }
}
}  // namespace

TEST_SUITE("models") {
  TEST_CASE("kernel values") {
    GasModel gas;
    CollisionScalars c{2.0, 0.5, 0.5, 2.0, 0.5, 0.5, 1.0};
    CHECK(ScatteringModel::power_law(1, 1).B(c, gas) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(ScatteringModel::gp20(1, 1, 2).B(c, gas) == doctest::Approx(2.0));
    c.E = 7.3;
    CHECK(ScatteringModel::power_law(1, 2).B(c, gas) == 1.0);
  }

  TEST_CASE("sigma head-on") {
    GasModel gas;
    auto geom = head_on();
    CHECK(geom.E == doctest::Approx(2.0));
    CHECK(geom.R == doctest::Approx(0.5));
    CHECK(sigma(ScatteringModel::power_law(1, 1), geom, gas) == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(sigma(ScatteringModel::power_law(1, 2), geom, gas) == doctest::Approx(0.0883883476483184).epsilon(1e-13));
    // sigma ~ sqrt(R) as R -> 0 when delta = 2
    const double s1 = sigma(ScatteringModel::power_law(1, 1), head_on(0.02), gas);
    const double s2 = sigma(ScatteringModel::power_law(1, 1), head_on(0.01), gas);
    CHECK(s1 / s2 == doctest::Approx(2.0).epsilon(1e-6));
  }

  TEST_CASE("microreversibility and swap symmetry") {
    GasModel gas{1.0, 3.0};
    for (auto model : {ScatteringModel::power_law(1, 1), ScatteringModel::gp20(1, 1, 1.5),
                       ScatteringModel::gp20(2, 1, 1.0), ScatteringModel::gp20(3, 1, 0.7)}) {
      double worst = 0, worst_pre = 0;
      for (int i = 0; i < 2000; ++i) {
        Stream st(11, i);
        auto g = random_geometry(st, gas);
        const double B = kernel_B(model, g, gas);
        worst = std::max(worst, std::abs(B - kernel_B(model, g.reversed(gas), gas)) / B);
        auto swapped = CollisionGeometry::make({g.pre.b, g.pre.a}, {g.post.b, g.post.a}, gas);
        worst_pre = std::max(worst_pre, std::abs(B - kernel_B(model, swapped, gas)) / B);
        CHECK(B >= 0);
      }
      CHECK(worst < 1e-12);
      CHECK(worst_pre < 1e-12);
    }
  }

  TEST_CASE("model 3 as written is not symmetric under a primed-only swap") {
    GasModel gas;
    auto model = ScatteringModel::gp20(3, 1, 1.0);
    Stream st(5, 0);
    auto g = random_geometry(st, gas);
    auto swapped = CollisionGeometry::make(g.pre, {g.post.b, g.post.a}, gas);
    const double B = kernel_B(model, g, gas), Bs = kernel_B(model, swapped, gas);
    CHECK(std::abs(B - Bs) / B > 1e-6);
    // models 1 and 2 are
    for (auto m : {ScatteringModel::gp20(1, 1, 1.0), ScatteringModel::gp20(2, 1, 1.0)})
      CHECK(kernel_B(m, g, gas) == doctest::Approx(kernel_B(m, swapped, gas)).epsilon(1e-13));
  }

  TEST_CASE("sigma round trip") {
    GasModel gas{1.5, 4.0};
    auto model = ScatteringModel::gp20(2, 0.7, 1.2);
    for (int i = 0; i < 500; ++i) {
      Stream st(2, i);
      auto g = random_geometry(st, gas);
      const double B = kernel_B(model, g, gas);
      CHECK(kernel_from_sigma(sigma(model, g, gas), g, gas) == doctest::Approx(B).epsilon(1e-12));
    }
  }

  TEST_CASE("envelope report") {
    GasModel gas;
    std::vector<CollisionGeometry> big, all;
    for (int i = 0; i < 10000; ++i) {
      Stream st(7, i);
      const double E = 0.01 * std::pow(1e4, st.uniform());
      Vec3 v1{st.normal(), st.normal(), st.normal()}, v2{st.normal(), st.normal(), st.normal()};
      const double f = st.uniform();
      Vec3 g = v1 - v2;
      g = g * (std::sqrt(4 * f * E) / norm(g));
      CollisionPair pre{{g * 0.5, (1 - f) * E * 0.5}, {g * (-0.5), (1 - f) * E * 0.5}};
      BLParams bp;
      bp.r = st.uniform();
      bp.R = st.uniform();
      auto post = post_collision(pre, bp, gas);
      if (post.boundary) continue;
      auto geom = CollisionGeometry::make(pre, post.pair, gas);
      all.push_back(geom);
      if (E >= 1) big.push_back(geom);
    }
    auto rep = envelope_check_est1a(ScatteringModel::power_law(1, 1), gas, all, 0.5);
    CHECK(rep.holds);
    CHECK(rep.worst_ratio == doctest::Approx(1.0475799175961691).epsilon(1e-10));
    auto rep_big = envelope_check_est1a(ScatteringModel::power_law(1, 1), gas, big, 0.5);
    CHECK(rep_big.worst_ratio <= 1.0);
    auto rep1 = envelope_check_est1a(ScatteringModel::gp20(1, 1, 2), gas, all, 0.5);
    CHECK(rep1.holds);
    CHECK(rep1.worst_ratio <= 1.0);
    CHECK_FALSE(envelope_check_est1a(ScatteringModel::power_law(1, 2), gas, all, 0.5).in_hypothesis);
  }

  TEST_CASE("construction errors") {
    CHECK_THROWS(ScatteringModel::power_law(-1, 1));
    CHECK_THROWS(ScatteringModel::power_law(1, 2.5));
    CHECK_THROWS(ScatteringModel::gp20(1, 1, 0.0));
    CHECK_THROWS(ScatteringModel::gp20(4, 1, 1.0));
    CHECK_THROWS(parse_variant("Model9"));
    CHECK(parse_variant("GP20Model2") == ModelVariant::GP20Model2);
    CHECK_NOTHROW(ScatteringModel::unchecked(ModelVariant::PowerLawE, -1, 1, 0.5));
  }

  TEST_CASE("angular table") {
    auto m = ScatteringModel::gp20(1, 1, 2);
    CHECK(m.angle_independent());
    m.set_angular_table({1.0, 2.0});
    CHECK_FALSE(m.angle_independent());
    CHECK(m.angular_factor(0.5) == doctest::Approx(1.5));
    CHECK(m.angular_factor(-0.5) == doctest::Approx(1.5));
  }
}
