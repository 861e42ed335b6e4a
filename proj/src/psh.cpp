#include "plurex/psh.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "plurex/profiles.hpp"

namespace plurex {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kHalfPi = kPi / 2.0;
constexpr double kPieceTol = 1e-9;

bool in_branch_region(double t) { return (t > 3.0 && t < 8.0) || (t > 10.0 && t < 15.0); }

}  // namespace

BranchValue branch_arg(const DomainPoint& p) {
  if (!in_branch_region(p.t)) {
    std::ostringstream msg;
    msg << "|z|=" << p.t << " outside branch region (3,8) u (10,15)";
    throw OutsideBranchRegion(msg.str());
  }
  if (p.w == complexd(0.0, 0.0)) {
    throw NoRepresentative("w = 0 has no argument (point not in the domain)");
  }
  const double phi = eval_phi(p.t);
  // Exact and branch-free: rotate w back by phi and take the principal angle.
  const double offset = std::arg(p.w * std::polar(1.0, -phi));
  if (std::abs(offset) > kHalfPi) {
    std::ostringstream msg;
    msg << "arg w offset " << offset << " outside [-pi/2, pi/2] at t=" << p.t
        << " (point not in the domain)";
    throw NoRepresentative(msg.str());
  }
  return {phi + offset};
}

double eval_f(const DomainPoint& p) {
  const double t = p.t;
  double values[4];
  int n = 0;
  if (t < 4.0 || t >= 14.0) values[n++] = 0.0;
  const bool piece_max0 = (t > 3.0 && t < 6.0) || (t > 12.0 && t < 14.0);
  const bool piece_max100 = (t > 5.0 && t < 8.0) || (t > 10.0 && t < 13.0);
  if (piece_max0 || piece_max100) {
    const double h = branch_arg(p).theta;
    if (piece_max0) values[n++] = std::max(0.0, h);
    if (piece_max100) values[n++] = std::max(100.0, h);
  }
  if (t > 7.0 && t < 11.0) values[n++] = 100.0;

  for (int i = 1; i < n; ++i) {
    if (std::abs(values[i] - values[0]) > kPieceTol) {
      std::ostringstream msg;
      msg << "pieces disagree at t=" << t << ": " << values[0] << " vs " << values[i];
      throw PieceMismatch(msg.str());
    }
  }
  return values[0];
}

double eval_g(const DomainPoint& p) { return (eval_f(p) - 110.0) / 110.0; }

ConstraintReport overlap_consistency(int n_samples, uint64_t seed) {
  ConstraintReport report;
  const std::pair<double, double> annuli[] = {{3.0, 4.0}, {5.0, 6.0},  {7.0, 8.0},
                                              {10.0, 11.0}, {12.0, 13.0}, {13.0, 14.0}};
  int annulus_index = 0;
  for (auto [a, b] : annuli) {
    double worst = 0.0;
    double worst_t = a;
    for (int k = 0; k < n_samples; ++k) {
      SampleRng rng(seed + 1000 * annulus_index, static_cast<uint64_t>(k));
      const double t = rng.uniform(a + 1e-6, b - 1e-6);
      const double rr = eval_r(t);
      const double phi = eval_phi(t);
      // random point of the open fiber disc
      const double s = std::sqrt(rng.u01() * rr) * (1.0 - 1e-9);
      const double ang = rng.uniform(0.0, 2.0 * kPi);
      const complexd w = std::polar(1.0, phi) + std::polar(s, ang);
      const DomainPoint p = DomainPoint::reduced(t, w);

      // evaluate every applicable piece directly
      double values[4];
      int n = 0;
      if (t < 4.0 || t >= 14.0) values[n++] = 0.0;
      double h = 0.0;
      bool has_h = false;
      if (in_branch_region(t)) {
        h = branch_arg(p).theta;
        has_h = true;
      }
      if ((t > 3.0 && t < 6.0) || (t > 12.0 && t < 14.0)) {
        values[n++] = std::max(0.0, h);
        if (!has_h) throw OutsideBranchRegion("piece requires branch outside its region");
      }
      if ((t > 5.0 && t < 8.0) || (t > 10.0 && t < 13.0)) values[n++] = std::max(100.0, h);
      if (t > 7.0 && t < 11.0) values[n++] = 100.0;

      double dis = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) dis = std::max(dis, std::abs(values[i] - values[j]));
      if (dis > worst) {
        worst = dis;
        worst_t = t;
      }
    }
    std::ostringstream id;
    id << "overlap_" << a << "_" << b;
    report.entries.push_back({id.str(), kPieceTol - worst, worst_t, worst <= kPieceTol});
    ++annulus_index;
  }
  return report;
}

const std::array<DiscDirection, 8>& disc_directions() {
  static const std::array<DiscDirection, 8> dirs = [] {
    std::array<DiscDirection, 8> d;
    d[0] = {complexd(1.0, 0.0), complexd(0.0, 0.0)};
    d[1] = {complexd(0.0, 0.0), complexd(1.0, 0.0)};
    // six diagonal unit 2-vectors from the golden-ratio sequence
    const double g = 0.6180339887498949;
    for (int k = 0; k < 6; ++k) {
      auto frac = [](double x) { return x - std::floor(x); };
      const double mix = 0.25 + 0.5 * frac((k + 1) * g * g * g);
      const double th1 = 2.0 * kPi * frac((k + 1) * g);
      const double th2 = 2.0 * kPi * frac((k + 1) * g * g);
      d[2 + k] = {std::polar(std::sqrt(mix), th1), std::polar(std::sqrt(1.0 - mix), th2)};
    }
    return d;
  }();
  return dirs;
}

bool disc_fits(const DomainPoint& p, const DiscDirection& dir, double radius, double dilation) {
  if (classify(p, 1e-14) != RegionTag::Interior) return false;
  const int n_check = 32;
  for (double rr : {radius * dilation, 0.5 * radius * dilation}) {
    for (int k = 0; k < n_check; ++k) {
      const complexd zeta = std::polar(rr, 2.0 * kPi * k / n_check);
      const DomainPoint q = DomainPoint::from_zw(p.z + zeta * dir.a, p.w + zeta * dir.b);
      if (classify(q, 1e-14) != RegionTag::Interior) return false;
    }
  }
  return true;
}

double submean_defect(const ScalarField& fun, const DomainPoint& p, const DiscDirection& dir,
                      double radius, int n_samples) {
  double sum = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    const complexd zeta = std::polar(radius, 2.0 * kPi * k / n_samples);
    const DomainPoint q = DomainPoint::from_zw(p.z + zeta * dir.a, p.w + zeta * dir.b);
    if (classify(q, 1e-14) != RegionTag::Interior) {
      std::ostringstream msg;
      msg << "circle sample leaves the domain at t=" << q.t << " radius=" << radius;
      throw DiscOutsideDomain(msg.str());
    }
    sum += fun(q);
  }
  return fun(p) - sum / static_cast<double>(n_samples);
}

double levi_min_eig(const ScalarField& fun, const DomainPoint& p, double step) {
  // 4-d stencil: all +-step moves in (Re z, Im z, Re w, Im w) plus the
  // mixed corners needed for the cross second differences.
  auto at = [&fun, &p, step](int ix, int iy, int iu, int iv) {
    const DomainPoint q = DomainPoint::from_zw(
        p.z + complexd(ix * step, iy * step), p.w + complexd(iu * step, iv * step));
    if (classify(q, 1e-14) != RegionTag::Interior) {
      std::ostringstream msg;
      msg << "stencil point leaves the domain at t=" << q.t;
      throw StencilOutsideDomain(msg.str());
    }
    return fun(q);
  };

  const double f0 = at(0, 0, 0, 0);
  const double h2 = step * step;

  // Diagonal entries: quarter Laplacians in each complex coordinate.
  const double hzz =
      (at(1, 0, 0, 0) + at(-1, 0, 0, 0) + at(0, 1, 0, 0) + at(0, -1, 0, 0) - 4.0 * f0) /
      (4.0 * h2);
  const double hww =
      (at(0, 0, 1, 0) + at(0, 0, -1, 0) + at(0, 0, 0, 1) + at(0, 0, 0, -1) - 4.0 * f0) /
      (4.0 * h2);

  // Mixed second differences for the off-diagonal entry
  //   d2/dz dwbar = 1/4 [ (u_xu + u_yv) + i (u_xv - u_yu) ].
  auto cross = [&](int a_axis, int b_axis) {
    auto shift = [&](int sa, int sb) {
      int d[4] = {0, 0, 0, 0};
      d[a_axis] += sa;
      d[b_axis] += sb;
      return at(d[0], d[1], d[2], d[3]);
    };
    return (shift(1, 1) - shift(1, -1) - shift(-1, 1) + shift(-1, -1)) / (4.0 * h2);
  };
  const double u_xu = cross(0, 2), u_yv = cross(1, 3), u_xv = cross(0, 3), u_yu = cross(1, 2);
  const complexd hzw(0.25 * (u_xu + u_yv), 0.25 * (u_xv - u_yu));

  // Hermitian 2x2 eigenvalues.
  const double mean = 0.5 * (hzz + hww);
  const double disc = std::sqrt(0.25 * (hzz - hww) * (hzz - hww) + std::norm(hzw));
  return mean - disc;
}

DomainPoint sample_interior_point(SampleRng& rng) {
  for (;;) {
    const double t = rng.uniform(1.05, 17.0);
    const double rr = eval_r(t);
    if (rr <= 1e-6) continue;
    const double phi = eval_phi(t);
    const double s = std::sqrt(rng.u01() * rr) * (1.0 - 1e-9);
    const double ang = rng.uniform(0.0, 2.0 * kPi);
    const complexd w = std::polar(1.0, phi) + std::polar(s, ang);
    const DomainPoint p = DomainPoint::reduced(t, w);
    if (classify(p, 1e-14) == RegionTag::Interior) return p;
  }
}

nlohmann::json PshTestReport::to_json() const {
  return {{"point", {{"re_z", point.z.real()}, {"im_z", point.z.imag()},
                     {"re_w", point.w.real()}, {"im_w", point.w.imag()}}},
          {"levi_min_eig", levi_min_eig},
          {"worst_submean_defect", worst_submean_defect},
          {"test_radius", test_radius},
          {"n_directions", n_directions}};
}

nlohmann::json PshStageReport::to_json() const {
  return {{"n_points", n_points},
          {"n_levi_points", n_levi_points},
          {"max_defect_f", max_defect_f},
          {"max_defect_g", max_defect_g},
          {"min_levi_f", min_levi_f},
          {"min_levi_g", min_levi_g},
          {"base_radius", base_radius},
          {"pass", pass}};
}

namespace {

// Smooth-sample filter for the Levi test: the Hessian stencil must stay in
// one smooth regime of f. Skips points near the piece circles, near the
// max-kink loci (h = 0 and h = 100; |grad h| = 1/|w|), and at small |w|
// where the fourth derivative of arg w dominates the finite differences.
bool levi_smooth_sample(const DomainPoint& p, double step) {
  const double t = p.t;
  const double circle_margin = 10.0 * step;
  for (double c : {3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 10.0, 11.0, 12.0, 13.0, 14.0}) {
    if (std::abs(t - c) <= circle_margin) return false;
  }
  if (std::abs(p.w) < 0.3) return false;
  if (in_branch_region(t)) {
    const double h = branch_arg(p).theta;
    const double kink_margin = 10.0 * step / std::abs(p.w);
    if (std::abs(h) <= kink_margin || std::abs(h - 100.0) <= kink_margin) return false;
  }
  return true;
}

}  // namespace

PshStageReport run_psh_stage(int n_points, double base_radius, int n_circle, uint64_t seed) {
  PshStageReport rep;
  rep.n_points = n_points;
  rep.base_radius = base_radius;

  const auto& dirs = disc_directions();
  const double radii[3] = {base_radius, 2.0 * base_radius, 4.0 * base_radius};
  const ScalarField f_field = [](const DomainPoint& q) { return eval_f(q); };
  const ScalarField g_field = [](const DomainPoint& q) { return eval_g(q); };

  const int workers = worker_count();
  std::vector<double> wmax_f(workers, -1.0), wmax_g(workers, -1.0);
  std::vector<double> wlevi_f(workers, 1e30), wlevi_g(workers, 1e30);
  std::vector<int> wlevi_count(workers, 0);
  const std::size_t chunk =
      (static_cast<std::size_t>(n_points) + workers - 1) / static_cast<std::size_t>(workers);

  parallel_for(static_cast<std::size_t>(n_points), [&](std::size_t lo, std::size_t hi) {
    const int wid = static_cast<int>(lo / chunk);
    for (std::size_t k = lo; k < hi; ++k) {
      SampleRng rng(seed, k);
      const DomainPoint p = sample_interior_point(rng);

      // sub-mean defects over every direction and radius whose dilated
      // disc fits; 1.25x dilation keeps the trapezoid error of the circle
      // average below 1e-12 for the argument-branch pieces.
      for (const auto& dir : dirs) {
        for (double radius : radii) {
          if (!disc_fits(p, dir, radius, 1.25)) continue;
          const double df = submean_defect(f_field, p, dir, radius, n_circle);
          const double dg = submean_defect(g_field, p, dir, radius, n_circle);
          wmax_f[wid] = std::max(wmax_f[wid], df);
          wmax_g[wid] = std::max(wmax_g[wid], dg);
        }
      }

      const double levi_step = 1e-3;
      if (levi_smooth_sample(p, levi_step)) {
        bool inside = true;
        try {
          const double lf = levi_min_eig(f_field, p, levi_step);
          const double lg = levi_min_eig(g_field, p, levi_step);
          wlevi_f[wid] = std::min(wlevi_f[wid], lf);
          wlevi_g[wid] = std::min(wlevi_g[wid], lg);
        } catch (const StencilOutsideDomain&) {
          inside = false;
        }
        if (inside) ++wlevi_count[wid];
      }
    }
  });

  rep.max_defect_f = *std::max_element(wmax_f.begin(), wmax_f.end());
  rep.max_defect_g = *std::max_element(wmax_g.begin(), wmax_g.end());
  rep.min_levi_f = *std::min_element(wlevi_f.begin(), wlevi_f.end());
  rep.min_levi_g = *std::min_element(wlevi_g.begin(), wlevi_g.end());
  for (int c : wlevi_count) rep.n_levi_points += c;

  // The -1e-6 eigenvalue floor is stated for g; f = 110 g + 110 carries a
  // 110-fold larger finite-difference truncation.
  rep.pass = rep.max_defect_f <= 1e-9 && rep.max_defect_g <= 1e-9 &&
             rep.min_levi_f >= -110.0 * 1e-6 && rep.min_levi_g >= -1e-6 && rep.n_levi_points > 0;
  return rep;
}

nlohmann::json WitnessReport::to_json() const {
  return {{"n_samples", n_samples},
          {"max_g", max_g},
          {"max_abs_dev_low", max_abs_dev_low},
          {"max_abs_dev_V", max_abs_dev_V},
          {"max_submean_defect", max_submean_defect},
          {"g_on_V", g_on_V},
          {"stated_alternative_g_on_V", stated_alternative_g_on_V},
          {"value_discrepancy_flag", value_discrepancy_flag},
          {"pass", pass}};
}

WitnessReport witness_report(double delta, int n_samples, uint64_t seed) {
  WitnessReport rep;
  rep.n_samples = n_samples;
  rep.g_on_V = -1.0 / 11.0;
  rep.stated_alternative_g_on_V = -10.0 / 11.0;
  rep.value_discrepancy_flag = true;

  const auto& dirs = disc_directions();
  const ScalarField g_field = [](const DomainPoint& q) { return eval_g(q); };

  const int workers = worker_count();
  std::vector<double> wmax_g(workers, -1.0), wdev_low(workers, 0.0), wdev_v(workers, 0.0),
      wdefect(workers, -1.0);
  const std::size_t chunk =
      (static_cast<std::size_t>(n_samples) + workers - 1) / static_cast<std::size_t>(workers);

  parallel_for(static_cast<std::size_t>(n_samples), [&](std::size_t lo, std::size_t hi) {
    const int wid = static_cast<int>(lo / chunk);
    for (std::size_t k = lo; k < hi; ++k) {
      SampleRng rng(seed ^ 0x5157ULL, k);

      // (a) g <= 0 on random interior points
      const DomainPoint p = sample_interior_point(rng);
      const double gp = eval_g(p);
      wmax_g[wid] = std::max(wmax_g[wid], gp);

      // (b) g = -1 on the low region t <= 3 or t >= 14
      {
        const double t = (k % 2 == 0) ? rng.uniform(1.2, 3.0) : rng.uniform(14.0, 16.8);
        const double rr = eval_r(t);
        if (rr > 1e-9) {
          const double s = std::sqrt(rng.u01() * rr) * (1.0 - 1e-9);
          const complexd w =
              std::polar(1.0, eval_phi(t)) + std::polar(s, rng.uniform(0.0, 2.0 * kPi));
          const double gv = eval_g(DomainPoint::reduced(t, w));
          wdev_low[wid] = std::max(wdev_low[wid], std::abs(gv + 1.0));
        }
      }

      // (c) g = -1/11 exactly on V
      {
        const double t = rng.uniform(8.3, 9.7);
        const double cap = std::min(delta, std::sqrt(eval_r(t)) - 1.0);
        if (cap > 0.0) {
          const complexd w = std::polar(rng.u01() * cap * (1.0 - 1e-9),
                                        rng.uniform(0.0, 2.0 * kPi));
          const DomainPoint pv = DomainPoint::reduced(t, w);
          if (in_V(pv, delta)) {
            const double gv = eval_g(pv);
            wdev_v[wid] = std::max(wdev_v[wid], std::abs(gv - (-1.0 / 11.0)));
          }
        }
      }

      // (d) sub-mean defect of g at interior points, all 8 directions
      const double radius = 0.025;
      for (const auto& dir : dirs) {
        if (!disc_fits(p, dir, radius, 1.25)) continue;
        wdefect[wid] = std::max(wdefect[wid], submean_defect(g_field, p, dir, radius, 128));
      }
    }
  });

  rep.max_g = *std::max_element(wmax_g.begin(), wmax_g.end());
  rep.max_abs_dev_low = *std::max_element(wdev_low.begin(), wdev_low.end());
  rep.max_abs_dev_V = *std::max_element(wdev_v.begin(), wdev_v.end());
  rep.max_submean_defect = *std::max_element(wdefect.begin(), wdefect.end());

  rep.pass = rep.max_g <= 0.0 && rep.max_abs_dev_low <= 1e-12 && rep.max_abs_dev_V <= 1e-12 &&
             rep.max_submean_defect <= 1e-9;
  return rep;
}

}  // namespace plurex
