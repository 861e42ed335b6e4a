#pragma once

#include <functional>
#include <string>
#include <vector>

#include "plurex/report.hpp"

namespace plurex {

// C-infinity step: psi(x) = s(x) / (s(x) + s(1-x)) with s(x) = exp(-1/x) for
// x > 0 and 0 otherwise. psi == 0 for x <= 0, == 1 for x >= 1, strictly
// increasing in between, flat to all orders at both ends.
double smooth_transition(double x);
double smooth_transition_deriv(double x);

// Radial profile of the Hartogs domain: the fiber radius-squared function r
// and the fiber rotation phase phi, both functions of t = |z|.
//
// r:   -1 on the tails, three bumps peaking at exactly 2 at t = 2, 9, 16,
//      plateaus at 1 on [3,8] and [10,15].
// phi: -2 on the tails, plateaus at 102 on [5,6] and [12,13], at 98 on
//      [7,11], glued with smooth_transition ramps.
double eval_r(double t);
double eval_r_deriv(double t);
double eval_phi(double t);
double eval_phi_deriv(double t);

struct ProfileNode {
  double t;
  double value;
};

struct RadialProfile {
  std::function<double(double)> r;
  std::function<double(double)> phi;
  std::vector<ProfileNode> r_nodes;    // anchor pairs of the construction
  std::vector<ProfileNode> phi_nodes;

  static RadialProfile standard();

  // Standard profile with the t=9 peak of r scaled by `peak_scale`
  // (fault-injection hook for the certification stage; 1.0 = untouched).
  static RadialProfile standard_with_peak_scale(double peak_scale);

  nlohmann::json node_table_json() const;
};

// Samples t in [0,18] at the given spacing and checks every profile
// constraint. Strict inequalities report their true margin; equality-type
// constraints (plateaus, peak values, attained range bounds) are certified
// against an explicit 1e-3 tolerance and report tolerance minus the worst
// observed deviation. Monotonicity and off-peak strictness are checked on
// intervals trimmed by 0.25 around the flat-to-all-orders ends, where
// double precision underflows the (mathematically strict) gaps.
ConstraintReport certify_profiles(const RadialProfile& profile, double step);
ConstraintReport certify_profiles(double step);

}  // namespace plurex
