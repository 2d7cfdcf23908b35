#include <doctest.h>

#include <cmath>

#include "polylin/kinematics.hpp"
#include "polylin/quadrature.hpp"

using namespace polylin;

TEST_SUITE("kinematics") {
  TEST_CASE("head-on example") {
    GasModel gas;
    CollisionPair pre{{{1, 0, 0}, 0.5}, {{-1, 0, 0}, 0.5}};
    CHECK(total_energy(pre, gas) == doctest::Approx(2.0));
    BLParams p;
    p.omega = {0, 1, 0};
    p.r = 0.25;
    p.R = 0.5;
    auto post = post_collision(pre, p, gas);
    CHECK_FALSE(post.boundary);
    CHECK(post.pair.a.v.y == doctest::Approx(1.0));
    CHECK(post.pair.b.v.y == doctest::Approx(-1.0));
    CHECK(post.pair.a.I == doctest::Approx(0.25));
    CHECK(post.pair.b.I == doctest::Approx(0.75));
    CHECK(total_energy(post.pair, gas) == doctest::Approx(2.0).epsilon(1e-15));
  }

  TEST_CASE("conservation and involution on random collisions") {
    GasModel gas{2.0, 5.0};
    for (int i = 0; i < 2000; ++i) {
      Stream st(3, i);
      CollisionPair pre{{{st.normal(), st.normal(), st.normal()}, 0.1 + st.uniform()},
                        {{st.normal(), st.normal(), st.normal()}, 0.1 + 3 * st.uniform()}};
      BLParams p;
      const double z = 2 * st.uniform() - 1, ph = 6.283185307179586 * st.uniform();
      p.omega = {std::sqrt(1 - z * z) * std::cos(ph), std::sqrt(1 - z * z) * std::sin(ph), z};
      p.r = st.uniform();
      p.R = st.uniform();
      auto post = post_collision(pre, p, gas);
      auto res = conservation_residual(pre, post.pair, gas);
      CHECK(norm(res.momentum) < 1e-13 * (1 + norm(pre.a.v) + norm(pre.b.v)));
      CHECK(std::abs(res.energy) < 1e-13 * total_energy(pre, gas) * 4);
      auto back = post_collision(post.pair, inverse_params(pre, post.pair, gas), gas);
      CHECK(norm(back.pair.a.v - pre.a.v) < 1e-12);
      CHECK(back.pair.a.I == doctest::Approx(pre.a.I).epsilon(1e-12));
      CHECK(back.pair.b.I == doctest::Approx(pre.b.I).epsilon(1e-12));
    }
  }

  TEST_CASE("bl weight") {
    GasModel gas{1.0, 3.0};
    CHECK(bl_weight(0.2, 0.3, gas) == doctest::Approx(bl_weight(0.8, 0.3, gas)));
    CHECK(bl_weight(0.5, 0.0, gas) == 0.0);
    CHECK(bl_weight(0.5, 1.0, gas) == 0.0);
    CHECK_THROWS(bl_weight(1.5, 0.3, gas));
    // delta = 2: Phi = (1-R) sqrt(R)
    CHECK(bl_weight(0.3, 0.25, GasModel{}) == doctest::Approx(0.375));
  }

  TEST_CASE("validation") {
    CHECK_THROWS(GasModel{0.0, 2.0}.validate());
    CHECK_THROWS(GasModel{1.0, 1.5}.validate());
    CHECK_THROWS(PhasePoint::checked({0, 0, 0}, 0.0));
    CHECK_THROWS(PhasePoint::checked({NAN, 0, 0}, 1.0));
    BLParams p;
    p.omega = {1, 1, 0};
    CHECK_THROWS(p.validate());
    p.omega = {0, 0, 1};
    p.r = -0.1;
    CHECK_THROWS(p.validate());
  }

  TEST_CASE("post relative speed and delta internal") {
    GasModel gas;
    CHECK(post_relative_speed(2.0, 0.75, gas) == doctest::Approx(1.0));
    CHECK(std::isnan(post_relative_speed(1.0, 1.0, gas)));
    CollisionPair a{{{0, 0, 0}, 1.0}, {{1, 0, 0}, 2.0}}, b{{{0, 0, 0}, 1.5}, {{1, 0, 0}, 2.0}};
    CHECK(delta_internal(a, b) == doctest::Approx(0.5));
  }

  TEST_CASE("boundary flag") {
    CollisionPair pre{{{1, 0, 0}, 0.5}, {{-1, 0, 0}, 0.5}};
    BLParams p;
    p.r = 0.0;
    CHECK(post_collision(pre, p, GasModel{}).boundary);
  }
}
