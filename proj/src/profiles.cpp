#include "plurex/profiles.hpp"

#include <cmath>
#include <limits>

namespace plurex {

namespace {

// s(x) = exp(-1/x) for x > 0, 0 otherwise; s'(x) = s(x)/x^2.
double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
double bump_deriv(double x) { return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }

}  // namespace

double smooth_transition(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = bump(x);
  const double b = bump(1.0 - x);
  return a / (a + b);
}

double smooth_transition_deriv(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double a = bump(x);
  const double b = bump(1.0 - x);
  const double da = bump_deriv(x);
  const double db = bump_deriv(1.0 - x);
  const double denom = (a + b) * (a + b);
  return (da * b + a * db) / denom;
}

// r pieces, outermost first:
//   (-inf, 0.5]  -1
//   [0.5, 2]     -1 + 3 psi((t-0.5)/1.5)      rises to the peak r(2)=2
//   [2, 3]        1 + psi(3-t)                falls to the plateau
//   [3, 8]        1
//   [8, 9]        1 + psi(t-8)                peak r(9)=2
//   [9, 10]       1 + psi(10-t)
//   [10, 15]      1
//   [15, 16]      1 + psi(t-15)               peak r(16)=2
//   [16, 17.5]   -1 + 3 psi((17.5-t)/1.5)
//   [17.5, inf)  -1
double eval_r(double t) {
  if (t <= 0.5) return -1.0;
  if (t <= 2.0) return -1.0 + 3.0 * smooth_transition((t - 0.5) / 1.5);
  if (t <= 3.0) return 1.0 + smooth_transition(3.0 - t);
  if (t <= 8.0) return 1.0;
  if (t <= 9.0) return 1.0 + smooth_transition(t - 8.0);
  if (t <= 10.0) return 1.0 + smooth_transition(10.0 - t);
  if (t <= 15.0) return 1.0;
  if (t <= 16.0) return 1.0 + smooth_transition(t - 15.0);
  if (t <= 17.5) return -1.0 + 3.0 * smooth_transition((17.5 - t) / 1.5);
  return -1.0;
}

double eval_r_deriv(double t) {
  if (t <= 0.5) return 0.0;
  if (t <= 2.0) return 2.0 * smooth_transition_deriv((t - 0.5) / 1.5);
  if (t <= 3.0) return -smooth_transition_deriv(3.0 - t);
  if (t <= 8.0) return 0.0;
  if (t <= 9.0) return smooth_transition_deriv(t - 8.0);
  if (t <= 10.0) return -smooth_transition_deriv(10.0 - t);
  if (t <= 15.0) return 0.0;
  if (t <= 16.0) return smooth_transition_deriv(t - 15.0);
  if (t <= 17.5) return -2.0 * smooth_transition_deriv((17.5 - t) / 1.5);
  return 0.0;
}

// phi pieces:
//   (-inf, 4]   -2
//   [4, 5]      -2 + 104 psi(t-4)
//   [5, 6]      102
//   [6, 7]      102 - 4 psi(t-6)
//   [7, 11]     98
//   [11, 12]    98 + 4 psi(t-11)
//   [12, 13]    102
//   [13, 14]    102 - 104 psi(t-13)
//   [14, inf)   -2
double eval_phi(double t) {
  if (t <= 4.0) return -2.0;
  if (t <= 5.0) return -2.0 + 104.0 * smooth_transition(t - 4.0);
  if (t <= 6.0) return 102.0;
  if (t <= 7.0) return 102.0 - 4.0 * smooth_transition(t - 6.0);
  if (t <= 11.0) return 98.0;
  if (t <= 12.0) return 98.0 + 4.0 * smooth_transition(t - 11.0);
  if (t <= 13.0) return 102.0;
  if (t <= 14.0) return 102.0 - 104.0 * smooth_transition(t - 13.0);
  return -2.0;
}

double eval_phi_deriv(double t) {
  if (t <= 4.0) return 0.0;
  if (t <= 5.0) return 104.0 * smooth_transition_deriv(t - 4.0);
  if (t <= 6.0) return 0.0;
  if (t <= 7.0) return -4.0 * smooth_transition_deriv(t - 6.0);
  if (t <= 11.0) return 0.0;
  if (t <= 12.0) return 4.0 * smooth_transition_deriv(t - 11.0);
  if (t <= 13.0) return 0.0;
  if (t <= 14.0) return -104.0 * smooth_transition_deriv(t - 13.0);
  return 0.0;
}

RadialProfile RadialProfile::standard() {
  RadialProfile p;
  p.r = [](double t) { return eval_r(t); };
  p.phi = [](double t) { return eval_phi(t); };
  p.r_nodes = {{0.5, -1.0}, {2.0, 2.0},  {3.0, 1.0},  {8.0, 1.0},   {9.0, 2.0},
               {10.0, 1.0}, {15.0, 1.0}, {16.0, 2.0}, {17.5, -1.0}};
  p.phi_nodes = {{4.0, -2.0},  {5.0, 102.0}, {6.0, 102.0}, {7.0, 98.0},
                 {11.0, 98.0}, {12.0, 102.0}, {13.0, 102.0}, {14.0, -2.0}};
  return p;
}

RadialProfile RadialProfile::standard_with_peak_scale(double peak_scale) {
  RadialProfile p = standard();
  if (peak_scale == 1.0) return p;
  // Scale the bump above the plateau on [8,10]; r(9) becomes 1 + peak_scale.
  p.r = [peak_scale](double t) {
    if (t > 8.0 && t < 10.0) return 1.0 + peak_scale * (eval_r(t) - 1.0);
    return eval_r(t);
  };
  for (auto& n : p.r_nodes)
    if (n.t == 9.0) n.value = 1.0 + peak_scale;
  return p;
}

nlohmann::json RadialProfile::node_table_json() const {
  nlohmann::json r = nlohmann::json::array();
  for (const auto& n : r_nodes) r.push_back({{"t", n.t}, {"value", n.value}});
  nlohmann::json phi = nlohmann::json::array();
  for (const auto& n : phi_nodes) phi.push_back({{"t", n.t}, {"value", n.value}});
  return {{"r", r}, {"phi", phi}};
}

namespace {

constexpr double kEqualityTol = 1e-3;   // certification tolerance for exact-value constraints
constexpr double kPeakTrim = 0.25;      // exclusion window around flat-to-all-orders ends
constexpr double kHalfPi = 1.5707963267948966;
constexpr double kDerivBound = 1e6;     // sampled-derivative bound standing in for smoothness

struct Sampler {
  const std::function<double(double)>& f;
  double step;

  // Extremum of f over [a,b] sampled at `step`; sign=+1 for max, -1 for min.
  // Returns {extreme value, location}.
  std::pair<double, double> extreme(double a, double b, int sign) const {
    double best = -std::numeric_limits<double>::infinity();
    double where = a;
    const long n = std::lround((b - a) / step);
    for (long i = 0; i <= n; ++i) {
      const double t = a + static_cast<double>(i) * step;
      const double v = sign * f(t);
      if (v > best) {
        best = v;
        where = t;
      }
    }
    return {sign * best, where};
  }
};

// Smallest consecutive sampled difference of sign `dir` over [a,b].
std::pair<double, double> worst_step(const std::function<double(double)>& f, double a, double b,
                                     double step, int dir) {
  double worst = std::numeric_limits<double>::infinity();
  double where = a;
  const long n = std::lround((b - a) / step);
  double prev = f(a);
  for (long i = 1; i <= n; ++i) {
    const double t = a + static_cast<double>(i) * step;
    const double cur = f(t);
    const double d = dir * (cur - prev);
    if (d < worst) {
      worst = d;
      where = t;
    }
    prev = cur;
  }
  return {worst, where};
}

// Max |k-th sampled central difference| / h^k over [a,b] for k = 1..3.
double max_fd_deriv(const std::function<double(double)>& f, double a, double b, double step,
                    double h, double* where) {
  double worst = 0.0;
  const long n = std::lround((b - a) / step);
  for (long i = 0; i <= n; ++i) {
    const double t = a + static_cast<double>(i) * step;
    const double f2 = f(t + 2 * h), f1 = f(t + h), f0 = f(t), fm1 = f(t - h), fm2 = f(t - 2 * h);
    const double d1 = std::abs((f1 - fm1) / (2 * h));
    const double d2 = std::abs((f1 - 2 * f0 + fm1) / (h * h));
    const double d3 = std::abs((f2 - 2 * f1 + 2 * fm1 - fm2) / (2 * h * h * h));
    const double m = std::max({d1, d2, d3});
    if (m > worst) {
      worst = m;
      if (where) *where = t;
    }
  }
  return worst;
}

}  // namespace

ConstraintReport certify_profiles(const RadialProfile& profile, double step) {
  ConstraintReport report;
  auto add = [&report](const std::string& id, double margin, double worst_t) {
    report.entries.push_back({id, margin, worst_t, margin > 0.0});
  };
  Sampler r{profile.r, step};
  Sampler phi{profile.phi, step};

  // -1 <= r <= 2 everywhere (bounds attained by construction; certify that
  // no sample violates them beyond the equality tolerance).
  {
    auto [rmax, tmax] = r.extreme(0.0, 18.0, +1);
    auto [rmin, tmin] = r.extreme(0.0, 18.0, -1);
    const double viol = std::max({rmax - 2.0, -1.0 - rmin, 0.0});
    add("r_range", kEqualityTol - viol, rmax - 2.0 > -1.0 - rmin ? tmax : tmin);
  }

  // r <= 0 on the tails t <= 1 and t >= 17 (true margin ~0.45).
  {
    auto [m1, t1] = r.extreme(0.0, 1.0, +1);
    auto [m2, t2] = r.extreme(17.0, 18.0, +1);
    const double worst = std::max(m1, m2);
    add("r_nonpositive_tails", -worst, m1 >= m2 ? t1 : t2);
  }

  // r == 1 on [3,8] and [10,15].
  {
    double dev = 0.0, where = 3.0;
    for (auto [a, b] : {std::pair{3.0, 8.0}, std::pair{10.0, 15.0}}) {
      auto [hi, thi] = r.extreme(a, b, +1);
      auto [lo, tlo] = r.extreme(a, b, -1);
      if (std::abs(hi - 1.0) > dev) { dev = std::abs(hi - 1.0); where = thi; }
      if (std::abs(lo - 1.0) > dev) { dev = std::abs(lo - 1.0); where = tlo; }
    }
    add("r_plateau_one", kEqualityTol - dev, where);
  }

  // r == 2 exactly at the three peaks.
  {
    double dev = 0.0, where = 2.0;
    for (double tp : {2.0, 9.0, 16.0}) {
      const double d = std::abs(profile.r(tp) - 2.0);
      if (d > dev) { dev = d; where = tp; }
    }
    add("r_peak_values", kEqualityTol - dev, where);
  }

  // r < 2 strictly away from the peaks (outside the trim windows, where the
  // C-infinity gluing leaves a resolvable gap).
  {
    double worst = std::numeric_limits<double>::infinity();
    double where = 0.0;
    for (auto [a, b] : {std::pair{0.0, 2.0 - kPeakTrim}, std::pair{2.0 + kPeakTrim, 9.0 - kPeakTrim},
                        std::pair{9.0 + kPeakTrim, 16.0 - kPeakTrim},
                        std::pair{16.0 + kPeakTrim, 18.0}}) {
      auto [hi, thi] = r.extreme(a, b, +1);
      if (2.0 - hi < worst) { worst = 2.0 - hi; where = thi; }
    }
    add("r_below_two_off_peaks", worst, where);
  }

  // Strict monotonicity via sampled differences, trimmed at flat ends.
  {
    struct Interval { double a, b; int dir; const char* id; };
    const Interval intervals[] = {
        {1.0, 2.0 - kPeakTrim, +1, "r_increasing_1_2"},
        {8.0 + kPeakTrim, 9.0 - kPeakTrim, +1, "r_increasing_8_9"},
        {15.0 + kPeakTrim, 16.0 - kPeakTrim, +1, "r_increasing_15_16"},
        {2.0 + kPeakTrim, 3.0 - kPeakTrim, -1, "r_decreasing_2_3"},
        {9.0 + kPeakTrim, 10.0 - kPeakTrim, -1, "r_decreasing_9_10"},
        {16.0 + kPeakTrim, 17.0, -1, "r_decreasing_16_17"},
    };
    for (const auto& iv : intervals) {
      auto [m, t] = worst_step(profile.r, iv.a, iv.b, step, iv.dir);
      add(iv.id, m, t);
    }
  }

  // phi < -pi/2 on the tails t <= 4 and t >= 14.
  {
    auto [m1, t1] = phi.extreme(0.0, 4.0, +1);
    auto [m2, t2] = phi.extreme(14.0, 18.0, +1);
    const double worst = std::max(m1, m2);
    add("phi_below_neg_half_pi_tails", -kHalfPi - worst, m1 >= m2 ? t1 : t2);
  }

  // phi > pi/2 + 100 on [5,6] and [12,13].
  {
    auto [m1, t1] = phi.extreme(5.0, 6.0, -1);
    auto [m2, t2] = phi.extreme(12.0, 13.0, -1);
    const double worst = std::min(m1, m2);
    add("phi_above_high_plateau", worst - (kHalfPi + 100.0), m1 <= m2 ? t1 : t2);
  }

  // phi < -pi/2 + 100 on (7,11) (the extended overlap-consistency window).
  {
    auto [m, t] = phi.extreme(7.0 + step, 11.0 - step, +1);
    add("phi_below_mid_bound", (100.0 - kHalfPi) - m, t);
  }

  // phi <= 108 everywhere.
  {
    auto [m, t] = phi.extreme(0.0, 18.0, +1);
    add("phi_max_108", 108.0 - m, t);
  }

  // Smoothness stand-in: sampled central differences up to order 3 bounded.
  {
    const double h = 1e-2;
    double where = 0.0;
    const double mr = max_fd_deriv(profile.r, 0.0, 18.0, std::max(step, 1e-3), h, &where);
    add("r_derivatives_bounded", kDerivBound - mr, where);
    const double mp = max_fd_deriv(profile.phi, 0.0, 18.0, std::max(step, 1e-3), h, &where);
    add("phi_derivatives_bounded", kDerivBound - mp, where);
  }

  return report;
}

ConstraintReport certify_profiles(double step) {
  return certify_profiles(RadialProfile::standard(), step);
}

}  // namespace plurex
