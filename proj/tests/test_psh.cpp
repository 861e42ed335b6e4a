#include <doctest.h>

#include <cmath>
#include <complex>

#include "plurex/profiles.hpp"
#include "plurex/psh.hpp"

using namespace plurex;

namespace {
const double kPi = 3.141592653589793238462643383279502884;

complexd fiber_center(double t) { return std::polar(1.0, eval_phi(t)); }

DomainPoint random_branch_point(SampleRng& rng) {
  for (;;) {
    const double t = rng.u01() < 0.5 ? rng.uniform(3.0 + 1e-6, 8.0 - 1e-6)
                                     : rng.uniform(10.0 + 1e-6, 15.0 - 1e-6);
    const double s = std::sqrt(rng.u01()) * (1.0 - 1e-9);
    const complexd w = fiber_center(t) + std::polar(s, rng.uniform(0.0, 2.0 * kPi));
    const DomainPoint p = DomainPoint::reduced(t, w);
    if (classify(p, 1e-14) == RegionTag::Interior) return p;
  }
}
}  // namespace

TEST_CASE("branch at the fiber center returns phi") {
  const DomainPoint p = DomainPoint::reduced(5.0, fiber_center(5.0));
  const double theta = branch_arg(p).theta;
  CHECK(theta == doctest::Approx(102.0).epsilon(1e-12));
}

TEST_CASE("branch keeps a representative already in the interval") {
  const double t = 5.0;
  const double phi = eval_phi(t);  // 102
  const complexd w = std::polar(0.9, phi + kPi / 3.0);
  // |w - e^{i phi}| = sqrt(0.81 + 1 - 1.8 cos(pi/3)) = 0.953 < 1: inside
  const DomainPoint p = DomainPoint::reduced(t, w);
  REQUIRE(classify(p, 1e-12) == RegionTag::Interior);
  CHECK(branch_arg(p).theta == doctest::Approx(phi + kPi / 3.0).epsilon(1e-12));
}

TEST_CASE("branch outside the annular regions throws") {
  CHECK_THROWS_AS((void)branch_arg(DomainPoint::reduced(9.0, {0.05, 0.0})), OutsideBranchRegion);
  CHECK_THROWS_AS((void)branch_arg(DomainPoint::reduced(2.0, {0.0, 0.0})), OutsideBranchRegion);
}

TEST_CASE("branch representative property over many random points") {
  for (int k = 0; k < 100000; ++k) {
    SampleRng rng(123, static_cast<uint64_t>(k));
    const DomainPoint p = random_branch_point(rng);
    const double theta = branch_arg(p).theta;
    const double phi = eval_phi(p.t);
    CHECK(theta >= phi - kPi / 2.0 - 1e-12);
    CHECK(theta <= phi + kPi / 2.0 + 1e-12);
    const complexd unit = p.w / std::abs(p.w);
    CHECK(std::abs(std::polar(1.0, theta) - unit) <= 1e-12);
  }
}

TEST_CASE("f at reference points") {
  CHECK(eval_f(DomainPoint::reduced(9.0, {0.05, 0.0})) == 100.0);
  CHECK(eval_f(DomainPoint::reduced(2.5, fiber_center(2.5))) == 0.0);
  // mid-overlap at t=5.5: both pieces evaluate to h = 102 at the center
  const DomainPoint p = DomainPoint::reduced(5.5, fiber_center(5.5) * (1.0 - 1e-6));
  CHECK(eval_f(p) == doctest::Approx(102.0).epsilon(1e-9));
  // seam t = 14 belongs to the zero piece
  CHECK(eval_f(DomainPoint::reduced(14.0, fiber_center(14.0))) == 0.0);
}

TEST_CASE("f range and plateaus over random interior points") {
  for (int k = 0; k < 20000; ++k) {
    SampleRng rng(77, static_cast<uint64_t>(k));
    const DomainPoint p = sample_interior_point(rng);
    const double f = eval_f(p);
    CHECK(f >= 0.0);
    CHECK(f <= 110.0);
    if (p.t <= 3.0 || p.t >= 14.0) CHECK(f == 0.0);
    if (p.t > 7.0 && p.t < 11.0) CHECK(f == 100.0);
  }
}

TEST_CASE("f depends only on (|z|, w): quarter turns are bit-exact") {
  SampleRng rng(99, 0);
  for (int k = 0; k < 2000; ++k) {
    const DomainPoint p = sample_interior_point(rng);
    const double f0 = eval_f(p);
    for (complexd z : {complexd(0.0, p.t), complexd(-p.t, 0.0)}) {
      CHECK(eval_f(DomainPoint::from_zw(z, p.w)) == f0);
    }
  }
}

TEST_CASE("g values and range") {
  CHECK(eval_g(DomainPoint::reduced(9.0, {0.05, 0.0})) == -1.0 / 11.0);
  CHECK(eval_g(DomainPoint::reduced(2.5, fiber_center(2.5))) == -1.0);
  for (int k = 0; k < 20000; ++k) {
    SampleRng rng(31, static_cast<uint64_t>(k));
    const DomainPoint p = sample_interior_point(rng);
    const double g = eval_g(p);
    CHECK(g <= 0.0);
    CHECK(g >= -1.0);
  }
}

TEST_CASE("overlap consistency reports zero disagreement") {
  const ConstraintReport rep = overlap_consistency(1000, 42);
  CHECK(rep.entries.size() == 6);
  for (const auto& e : rep.entries) {
    INFO(e.constraint_id);
    CHECK(e.pass);
    CHECK(e.margin == doctest::Approx(1e-9).epsilon(1e-6));  // disagreement 0
  }
}

TEST_CASE("levi minimum eigenvalue on model functions") {
  const DomainPoint p = DomainPoint::reduced(9.0, {0.1, -0.2});
  const double step = 1e-3;
  const ScalarField sq_norm = [](const DomainPoint& q) {
    return std::norm(q.z) + std::norm(q.w);
  };
  CHECK(levi_min_eig(sq_norm, p, step) == doctest::Approx(1.0).epsilon(1e-6));
  const ScalarField re_zw = [](const DomainPoint& q) { return (q.z * q.w).real(); };
  CHECK(levi_min_eig(re_zw, p, step) == doctest::Approx(0.0).scale(1).epsilon(1e-6));
  const ScalarField neg_sq = [](const DomainPoint& q) { return -std::norm(q.z); };
  CHECK(levi_min_eig(neg_sq, p, step) == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("levi stencil outside the domain throws") {
  // a point within 2e-9 of the boundary: the 1e-3 stencil must poke out
  const DomainPoint p = DomainPoint::reduced(5.0, fiber_center(5.0) * 1e-9);
  REQUIRE(classify(p, 1e-14) == RegionTag::Interior);
  const ScalarField c = [](const DomainPoint&) { return 1.0; };
  CHECK_THROWS_AS((void)levi_min_eig(c, p, 1e-3), StencilOutsideDomain);
}

TEST_CASE("submean defect on model functions") {
  const DomainPoint p = DomainPoint::reduced(9.0, {0.1, -0.2});
  const auto& dirs = disc_directions();
  const ScalarField constant = [](const DomainPoint&) { return 3.25; };
  CHECK(submean_defect(constant, p, dirs[0], 0.05, 16) == 0.0);
  const ScalarField re_z = [](const DomainPoint& q) { return q.z.real(); };
  for (const auto& dir : dirs) {
    CHECK(std::abs(submean_defect(re_z, p, dir, 0.05, 16)) <= 1e-12);
  }
}

TEST_CASE("submean defect of f at a kink locus stays nonpositive") {
  // t = 6.5 has phi = 100, so the fiber center sits exactly on the h = 100
  // kink of max{100, h}; the max of pluriharmonic functions still satisfies
  // the sub-mean inequality.
  const double t = 6.5;
  REQUIRE(eval_phi(t) == doctest::Approx(100.0).epsilon(1e-12));
  const DomainPoint p = DomainPoint::reduced(t, fiber_center(t));
  const ScalarField f_field = [](const DomainPoint& q) { return eval_f(q); };
  const auto& dirs = disc_directions();
  for (double radius : {0.01, 0.02, 0.05}) {
    const double d = submean_defect(f_field, p, dirs[1], radius, 128);
    CHECK(d <= 1e-9);
  }
}

TEST_CASE("submean disc outside the domain throws") {
  const DomainPoint p = DomainPoint::reduced(5.0, fiber_center(5.0) * 0.02);
  const ScalarField c = [](const DomainPoint&) { return 1.0; };
  const auto& dirs = disc_directions();
  CHECK_THROWS_AS((void)submean_defect(c, p, dirs[1], 0.5, 16), DiscOutsideDomain);
}

TEST_CASE("psh stage on a reduced budget") {
  const PshStageReport rep = run_psh_stage(400, 0.025, 96, 42);
  INFO("defect f ", rep.max_defect_f, " defect g ", rep.max_defect_g, " levi f ", rep.min_levi_f,
       " levi g ", rep.min_levi_g, " levi points ", rep.n_levi_points);
  CHECK(rep.pass);
  CHECK(rep.max_defect_f <= 1e-9);
  CHECK(rep.max_defect_g <= 1e-9);
  CHECK(rep.min_levi_f >= -110.0 * 1e-6);
  CHECK(rep.min_levi_g >= -1e-6);
  CHECK(rep.n_levi_points > 0);
}

TEST_CASE("witness report on a reduced budget") {
  const WitnessReport rep = witness_report(0.05, 1500, 42);
  INFO("max_g ", rep.max_g, " dev_low ", rep.max_abs_dev_low, " dev_V ", rep.max_abs_dev_V,
       " defect ", rep.max_submean_defect);
  CHECK(rep.pass);
  CHECK(rep.g_on_V == -1.0 / 11.0);
  CHECK(rep.stated_alternative_g_on_V == doctest::Approx(-10.0 / 11.0));
  CHECK(rep.value_discrepancy_flag);
  CHECK(rep.max_g <= 0.0);
  CHECK(rep.max_abs_dev_low == 0.0);
  CHECK(rep.max_abs_dev_V == 0.0);
}
