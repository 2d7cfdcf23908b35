#include <doctest.h>

#include <set>

#include "polylin/verify.hpp"

using namespace polylin;

TEST_SUITE("verify") {
  TEST_CASE("make_check relations") {
    CHECK(make_check("a", 1.0, 1.0, "<=").pass);
    CHECK_FALSE(make_check("a", 1.0, 1.0, "<").pass);
    CHECK(make_check("a", 1.0, 1.0, ">=").pass);
    CHECK_FALSE(make_check("a", 1.0, 1.0, ">").pass);
    CHECK(make_check("a", 2.0, 1.0, ">").pass);
    CHECK_FALSE(make_check("a", std::nan(""), 1.0, "<=").pass);
    CHECK_FALSE(make_check("a", std::nan(""), 1.0, ">=").pass);
    CHECK_THROWS(make_check("a", 1.0, 1.0, "=="));
    CHECK(all_pass({}));
    CHECK_FALSE(all_pass({make_check("a", 1, 0, "<="), make_check("b", 0, 1, "<=")}));
  }

  TEST_CASE("tolerance table") {
    std::set<std::string> names;
    for (const auto& e : tolerance_table()) {
      CHECK(names.insert(e.name).second);
      CHECK(e.value > 0);
    }
    CHECK(tolerance_known("nu.route"));
    CHECK_FALSE(tolerance_known("nu.routes"));
    Tolerances t(10.0, {{"nu.route", 1e-4}});
    CHECK(t("nu.route") == doctest::Approx(1e-3));
    CHECK(t("q.orthogonality") == doctest::Approx(1e-6));
    CHECK(t("spectral.gap") == doctest::Approx(1.0));  // lower bounds loosen by division
    CHECK_THROWS(t("bogus"));
    CHECK_THROWS(Tolerances(0.0));
    CHECK_THROWS(Tolerances(1.0, {{"bogus", 1.0}}));
  }

  TEST_CASE("scan points") {
    NuScan s;
    s.n_speed = 3;
    s.n_energy = 2;
    s.s_max = 4;
    s.I_min = 1;
    s.I_max = 3;
    auto p = nu_scan_points(s);
    REQUIRE(p.size() == 6);
    CHECK(p.back().v.z == 4.0);
    CHECK(p.back().I == 3.0);
    auto q = nu_scan_points(s, 1.5);
    CHECK(q.size() == 4 * 3);
    CHECK(q.back().v.z == 6.0);
    s.n_speed = 0;
    CHECK(nu_scan_points(s).empty());
  }

  TEST_CASE("cheap suites pass at default settings") {
    VerifyContext ctx(RunConfig{});
    auto k = check_kinematics(ctx, 2000);
    CHECK(all_pass(k));
    auto m = check_models(ctx, 500);
    CHECK(all_pass(m));
    CHECK(m.front().name.find("PowerLawE") != std::string::npos);
    CHECK(all_pass(check_nu_closed_form(ctx)));
  }

  TEST_CASE("negative prefactor is caught") {
    RunConfig cfg;
    VerifyContext ctx(cfg, ScatteringModel::unchecked(ModelVariant::PowerLawE, -1.0, 1.0, 0.5));
    auto m = check_models(ctx, 200);
    CHECK_FALSE(all_pass(m));
  }

  TEST_CASE("tightened tolerance fails the same data") {
    RunConfig cfg;
    cfg.tolerances["kinematics.conservation"] = 1e-30;
    VerifyContext ctx(cfg);
    CHECK_FALSE(all_pass(check_kinematics(ctx, 500)));
  }

  TEST_CASE("suite names") {
    const auto& s = suite_names();
    for (const char* n : {"kinematics", "models", "q", "linearized", "spectral", "all"})
      CHECK(std::find(s.begin(), s.end(), n) != s.end());
    CHECK_THROWS_AS(run_suite("bogus", VerifyContext(RunConfig{})), std::invalid_argument);
  }
}
