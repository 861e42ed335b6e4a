#include <doctest.h>

#include <cmath>

#include "plurex/profiles.hpp"

using namespace plurex;

TEST_CASE("smooth transition endpoint and symmetry values") {
  CHECK(smooth_transition(-1.0) == 0.0);
  CHECK(smooth_transition(0.0) == 0.0);
  CHECK(smooth_transition(1.0) == 1.0);
  CHECK(smooth_transition(2.0) == 1.0);
  CHECK(smooth_transition(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  // e^{-3} / (e^{-3} + e^{-3/2}), fixed by independent evaluation
  CHECK(smooth_transition(1.0 / 3.0) == doctest::Approx(0.18242552380635634).epsilon(1e-14));
}

TEST_CASE("smooth transition is increasing and complements to 1") {
  // Strict increase is fp-observable away from the flat ends; beyond
  // x ~ 0.974 the complementary bump drops below one ulp of the sum.
  double prev = 0.0;
  for (int i = 1; i < 100; ++i) {
    const double x = i / 100.0;
    const double y = smooth_transition(x);
    if (x >= 0.03 && x <= 0.97) {
      CHECK(y > prev);
    } else {
      CHECK(y >= prev);
    }
    CHECK(y + smooth_transition(1.0 - x) == doctest::Approx(1.0).epsilon(1e-14));
    prev = y;
  }
}

TEST_CASE("smooth transition derivative matches finite differences") {
  const double h = 1e-6;
  for (double x : {0.1, 0.25, 0.4, 0.5, 0.66, 0.8, 0.93}) {
    const double fd = (smooth_transition(x + h) - smooth_transition(x - h)) / (2 * h);
    CHECK(smooth_transition_deriv(x) == doctest::Approx(fd).epsilon(1e-6));
  }
  CHECK(smooth_transition_deriv(-0.5) == 0.0);
  CHECK(smooth_transition_deriv(1.5) == 0.0);
}

TEST_CASE("r values from the construction") {
  CHECK(eval_r(5.0) == 1.0);      // plateau
  CHECK(eval_r(9.0) == 2.0);      // peak
  CHECK(eval_r(2.0) == 2.0);
  CHECK(eval_r(16.0) == 2.0);
  CHECK(eval_r(0.2) == -1.0);     // flat tail
  CHECK(eval_r(18.0) == -1.0);
  // r(1) = -1 + 3 psi(1/3)
  CHECK(eval_r(1.0) == doctest::Approx(-0.45272342858093098).epsilon(1e-14));
  CHECK(eval_r(1.0) <= 0.0);
  CHECK(eval_r(17.0) <= 0.0);
  CHECK(eval_r(2.5) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("phi values from the construction") {
  CHECK(eval_phi(5.5) == 102.0);
  CHECK(eval_phi(9.0) == 98.0);
  CHECK(eval_phi(15.0) == -2.0);
  CHECK(eval_phi(0.0) == -2.0);
  CHECK(eval_phi(12.5) == 102.0);
  const double half_pi = 1.5707963267948966;
  CHECK(eval_phi(5.5) > half_pi + 100.0);
  CHECK(eval_phi(9.0) < -half_pi + 100.0);
  CHECK(eval_phi(15.0) < -half_pi);
}

TEST_CASE("profile derivatives match finite differences") {
  const double h = 1e-6;
  for (double t : {1.2, 1.7, 2.4, 4.3, 6.5, 8.5, 9.5, 11.7, 13.5, 15.5, 16.7}) {
    const double fdr = (eval_r(t + h) - eval_r(t - h)) / (2 * h);
    CHECK(eval_r_deriv(t) == doctest::Approx(fdr).epsilon(1e-5));
    const double fdp = (eval_phi(t + h) - eval_phi(t - h)) / (2 * h);
    CHECK(eval_phi_deriv(t) == doctest::Approx(fdp).epsilon(1e-5));
  }
}

TEST_CASE("certification passes on the standard profile") {
  const ConstraintReport report = certify_profiles(1e-3);
  for (const auto& e : report.entries) {
    INFO(e.constraint_id, " margin ", e.margin, " at t=", e.worst_t);
    CHECK(e.pass);
    CHECK(e.margin > 1e-6);
  }
  CHECK(report.all_pass());
  // phi <= 108 holds with margin >= 6 (plateau max is 102)
  const auto* phi_upper = report.find("phi_max_108");
  REQUIRE(phi_upper != nullptr);
  CHECK(phi_upper->margin >= 6.0);
}

TEST_CASE("certification flags a corrupted peak") {
  // r(9) scaled down to 1.9: the exact-peak constraint must fail.
  const RadialProfile bad = RadialProfile::standard_with_peak_scale(0.9);
  CHECK(bad.r(9.0) == doctest::Approx(1.9).epsilon(1e-12));
  const ConstraintReport report = certify_profiles(bad, 1e-3);
  CHECK_FALSE(report.all_pass());
  const auto* peak = report.find("r_peak_values");
  REQUIRE(peak != nullptr);
  CHECK_FALSE(peak->pass);
  CHECK(peak->margin < 0.0);
}

TEST_CASE("node table serializes") {
  const RadialProfile p = RadialProfile::standard();
  const nlohmann::json j = p.node_table_json();
  CHECK(j.contains("r"));
  CHECK(j.contains("phi"));
  CHECK(j["r"].size() == 9);
  CHECK(j["phi"].size() == 8);
}
