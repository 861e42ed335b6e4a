#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include <json.hpp>

#include "plurex/domain.hpp"
#include "plurex/report.hpp"
#include "plurex/util.hpp"

namespace plurex {

// Representative of arg w in [phi(|z|) - pi/2, phi(|z|) + pi/2]; exists and
// is continuous on the two annular regions 3 < |z| < 8 and 10 < |z| < 15,
// where the fiber disc has radius 1 and keeps w away from the origin.
struct BranchValue {
  double theta;
};

BranchValue branch_arg(const DomainPoint& p);

// Piecewise function built from the branch:
//   0             if |z| < 4 or |z| >= 14
//   max{0, h}     if 3 < |z| < 6 or 12 < |z| < 14
//   max{100, h}   if 5 < |z| < 8 or 10 < |z| < 13
//   100           if 7 < |z| < 11
// All applicable pieces are evaluated and must agree to 1e-9 (PieceMismatch
// otherwise). The seam |z| = 14 is assigned to the 0 piece; phi < -pi/2
// there makes it the continuous extension.
double eval_f(const DomainPoint& p);

// g = (f - 110) / 110, in [-1, 0); equals -1 where f = 0 and -1/11 where
// f = 100.
double eval_g(const DomainPoint& p);

// Samples each overlap annulus of the piecewise definition and reports the
// maximal disagreement between applicable pieces; pass iff <= 1e-9.
ConstraintReport overlap_consistency(int n_samples, uint64_t seed);

// Complex directions used by disc tests: the two coordinate lines plus six
// fixed unit 2-vectors from a golden-ratio sequence.
struct DiscDirection {
  complexd a;  // z component
  complexd b;  // w component
};
const std::array<DiscDirection, 8>& disc_directions();

using ScalarField = std::function<double(const DomainPoint&)>;

// Smallest eigenvalue of the 2x2 complex Hessian estimated by central
// differences with the given spacing. Throws StencilOutsideDomain when a
// stencil point leaves the domain.
double levi_min_eig(const ScalarField& fun, const DomainPoint& p, double step);

// fun(p) minus the n-point average of fun over the circle p + radius *
// e^{i theta} * dir. Nonpositive (up to quadrature) for plurisubharmonic
// fun. Throws DiscOutsideDomain when the sampled disc leaves the domain.
double submean_defect(const ScalarField& fun, const DomainPoint& p, const DiscDirection& dir,
                      double radius, int n_samples);

// True when the disc p + zeta*dir, |zeta| <= radius*dilation, lies in the
// domain, checked on the center, a mid ring and the dilated ring.
bool disc_fits(const DomainPoint& p, const DiscDirection& dir, double radius, double dilation);

struct PshTestReport {
  DomainPoint point;
  double levi_min_eig = 0.0;
  double worst_submean_defect = 0.0;
  double test_radius = 0.0;
  int n_directions = 0;

  nlohmann::json to_json() const;
};

// Aggregate psh verification of f and g over random interior points:
// sub-mean defects over all directions and radii {h, 2h, 4h}, Levi minimum
// eigenvalue at smooth points (away from the max-kinks, the piece circles
// and the small-|w| zone where finite differences lose accuracy).
struct PshStageReport {
  int n_points = 0;
  int n_levi_points = 0;
  double max_defect_f = 0.0;
  double max_defect_g = 0.0;
  double min_levi_f = 0.0;
  double min_levi_g = 0.0;
  double base_radius = 0.0;
  bool pass = false;

  nlohmann::json to_json() const;
};

PshStageReport run_psh_stage(int n_points, double base_radius, int n_circle, uint64_t seed);

// Witness checks: g <= 0 on the domain, g = -1 on {t <= 3} and {t >= 14},
// g = -1/11 exactly on V, and sub-mean defects <= 1e-9 at interior samples.
// Reports both the formula value -1/11 and the -10/11 printed in the source
// material for the value of g on V (the formula is taken as authoritative).
struct WitnessReport {
  int n_samples = 0;
  double max_g = -1.0;                  // over random interior samples
  double max_abs_dev_low = 0.0;         // |g + 1| on {t<=3} u {t>=14}
  double max_abs_dev_V = 0.0;           // |g + 1/11| on V samples
  double max_submean_defect = 0.0;
  double g_on_V = 0.0;
  double stated_alternative_g_on_V = 0.0;
  bool value_discrepancy_flag = true;
  bool pass = false;

  nlohmann::json to_json() const;
};

WitnessReport witness_report(double delta, int n_samples, uint64_t seed);

// Uniform random interior point of the domain (fiber-disc sampling).
DomainPoint sample_interior_point(SampleRng& rng);

}  // namespace plurex
