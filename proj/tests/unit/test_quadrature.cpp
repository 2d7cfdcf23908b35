#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <numbers>

#include "polylin/quadrature.hpp"

using namespace polylin;

TEST_SUITE("quadrature") {
  TEST_CASE("legendre rule integrates polynomials exactly") {
    Rule r = interval_rule(6, -1.0, 2.0);
    for (int k = 0; k <= 11; ++k) {
      const double exact = (std::pow(2.0, k + 1) - std::pow(-1.0, k + 1)) / (k + 1);
      CHECK(r.apply([k](double x) { return std::pow(x, k); }) == doctest::Approx(exact).epsilon(1e-13));
    }
    for (double w : r.weights) CHECK(w > 0);
  }

  TEST_CASE("generalized laguerre moments") {
    for (double a : {0.0, 0.5, 1.5}) {
      Rule r = semi_infinite_rule(8, 1.0, a);
      for (int k = 0; k <= 15; ++k)
        CHECK(r.apply([k](double x) { return std::pow(x, k); }) ==
              doctest::Approx(std::tgamma(a + k + 1)).epsilon(1e-11));
    }
  }

  TEST_CASE("plain laguerre rule and scale") {
    Rule r = semi_infinite_plain_rule(10, 2.0, 0.0);
    // int_0^inf x e^{-x/2} dx = 4
    CHECK(r.apply([](double x) { return x * std::exp(-0.5 * x); }) == doctest::Approx(4.0).epsilon(1e-12));
    for (double w : r.weights) CHECK(w > 0);
  }

  TEST_CASE("hermite rule for a normal density") {
    Rule r = gaussian_plain_rule(8, 0.5, 2.0);
    const double c = 1.0 / (2.0 * std::sqrt(2.0 * std::numbers::pi));
    auto dens = [c](double x) { return c * std::exp(-0.125 * (x - 0.5) * (x - 0.5)); };
    CHECK(r.apply(dens) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.apply([&](double x) { return x * x * dens(x); }) == doctest::Approx(4.25).epsilon(1e-12));
  }

  TEST_CASE("sphere rule exact for low harmonics") {
    SphereRule s = sphere_rule(7);
    double area = 0, xz2 = 0, z4 = 0, x3 = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Vec3& n = s.nodes[i];
      area += s.weights[i];
      xz2 += s.weights[i] * n.x * n.x * n.z * n.z;
      z4 += s.weights[i] * std::pow(n.z, 4);
      x3 += s.weights[i] * n.x * n.x * n.x;
      CHECK(norm(n) == doctest::Approx(1.0).epsilon(1e-15));
    }
    const double pi = std::numbers::pi;
    CHECK(area == doctest::Approx(4 * pi).epsilon(1e-14));
    CHECK(xz2 == doctest::Approx(4 * pi / 15).epsilon(1e-13));
    CHECK(z4 == doctest::Approx(4 * pi / 5).epsilon(1e-13));
    CHECK(std::abs(x3) < 1e-13);
  }

  TEST_CASE("spec validation") {
    QuadratureSpec q;
    CHECK_NOTHROW(q.validate());
    q.n_mu = 1;
    CHECK_THROWS(q.validate());
    q = {};
    q.I_max = 0;
    CHECK_THROWS(q.validate());
  }

  TEST_CASE("pairwise sum") {
    std::vector<double> v(1000, 0.1);
    CHECK(pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(pairwise_sum({}) == 0.0);
  }

  TEST_CASE("stream is a pure function of seed and index") {
    Stream a(42, 7), b(42, 7), c(42, 8);
    const double a1 = a.uniform(), b1 = b.uniform();
    CHECK(a1 == b1);
    CHECK(a.normal() == b.normal());
    CHECK(c.uniform() != a1);
    CHECK(a1 > 0);
    CHECK(a1 < 1);
  }

  TEST_CASE("mc mean independent of thread count") {
    auto fn = [](Stream& s) { return s.normal() * s.normal() + s.uniform(); };
    omp_set_num_threads(1);
    const McResult one = mc_mean(50'000, 99, fn);
    omp_set_num_threads(3);
    const McResult three = mc_mean(50'000, 99, fn);
    omp_set_num_threads(omp_get_num_procs());
    CHECK(one.estimate == three.estimate);
    CHECK(one.stderr_ == three.stderr_);
    CHECK(one.estimate == doctest::Approx(0.5).epsilon(0.02));
  }

  TEST_CASE("mc integrate samplers") {
    auto m = mc_integrate([](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; },
                          Sampler::StandardNormal3, 100'000, 5);
    CHECK(std::abs(m.estimate - 3.0) < 5 * m.stderr_);
    auto u = mc_integrate([](std::span<const double> x) { return x[0]; }, Sampler::Uniform1, 100'000, 5);
    CHECK(std::abs(u.estimate - 0.5) < 5 * u.stderr_);
  }
}
