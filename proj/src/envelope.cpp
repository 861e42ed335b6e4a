#include "plurex/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include "plurex/profiles.hpp"
#include "plurex/psh.hpp"
#include "plurex/util.hpp"

namespace plurex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.141592653589793238462643383279502884;

// One (direction, radius) pair of the disc family with its interpolation
// tables. The w-part of a sample (index offsets and fractional weights in
// the u/v axes) is translation invariant; the z-part (t-axis index and
// fraction of |t + zeta*a|) depends on the node's t and is tabulated per
// t-slice. jt = -1 marks samples whose t-support leaves the axis.
struct Slot {
  int kind = 0;  // 0 z-line, 1 w-line, 2 diagonal
  double radius = 0.0;
  int n = 0;
  std::vector<int> dju, djv;
  std::vector<double> fu, fv;
  std::vector<int> jt;      // n * nt, sample-major
  std::vector<double> ft;   // n * nt
  std::vector<uint8_t> z_ok;  // per t-slice: all samples valid
  int min_dju = 0, max_dju = 0, min_djv = 0, max_djv = 0;
};

struct RowInfo {
  int it = 0, iu = 0;
  int iv_lo = 0, iv_n = 0;
  std::size_t feas_base = 0;  // index of the first node's bits in feas
};

// Precomputed sweep machinery for one EnvelopeProblem.
class SweepEngine {
 public:
  explicit SweepEngine(const EnvelopeProblem& problem);

  // One Jacobi pass over the masked nodes; reads cur, commits the new
  // values back into cur afterwards, returns the max decrease. When
  // use_dirty is set, rows whose sampling footprint is unchanged since the
  // previous sweep are skipped (exact skip: recomputation would reproduce
  // their values).
  double sweep(std::vector<double>& cur, bool use_dirty);

  void reset_dirty() { std::fill(dirty_.begin(), dirty_.end(), 1); }

 private:
  const EnvelopeProblem& p_;
  const Grid3& g_;
  int nt_, nu_, nv_;
  std::size_t stride_t_, stride_u_;
  std::vector<Slot> slots_;
  std::vector<RowInfo> rows_;
  std::vector<uint32_t> feas_;
  std::vector<double> scratch_;
  std::vector<uint8_t> dirty_, changed_, tmp_flags_;
  int reach_t_ = 0, reach_u_ = 0;

  void build_slots();
  void build_rows_and_feasibility();
  void compute_row(const RowInfo& row, const std::vector<double>& cur, double* best) const;
};

SweepEngine::SweepEngine(const EnvelopeProblem& problem)
    : p_(problem), g_(*problem.grid), nt_(g_.t.n), nu_(g_.u.n), nv_(g_.v.n) {
  stride_t_ = static_cast<std::size_t>(nu_) * nv_;
  stride_u_ = static_cast<std::size_t>(nv_);
  build_slots();
  build_rows_and_feasibility();
  scratch_.assign(g_.size(), 0.0);
  dirty_.assign(static_cast<std::size_t>(nt_) * nu_, 1);
  changed_.assign(dirty_.size(), 0);
  tmp_flags_.assign(dirty_.size(), 0);
}

void SweepEngine::build_slots() {
  const auto& dirs = disc_directions();
  const int n = p_.n_circle_samples;
  const double dt = g_.t.spacing, du = g_.u.spacing, dv = g_.v.spacing;

  auto make_slot = [&](int kind, const DiscDirection& dir, double radius) {
    Slot s;
    s.kind = kind;
    s.radius = radius;
    s.n = n;
    s.dju.resize(n);
    s.djv.resize(n);
    s.fu.resize(n);
    s.fv.resize(n);
    const bool has_z = kind != 1;
    if (has_z) {
      s.jt.assign(static_cast<std::size_t>(n) * nt_, -1);
      s.ft.assign(static_cast<std::size_t>(n) * nt_, 0.0);
      s.z_ok.assign(nt_, 1);
    }
    for (int j = 0; j < n; ++j) {
      const complexd zeta = std::polar(radius, 2.0 * kPi * j / n);
      const complexd dw = zeta * dir.b;
      const double pu = dw.real() / du;
      const double pv = dw.imag() / dv;
      s.dju[j] = static_cast<int>(std::floor(pu));
      s.djv[j] = static_cast<int>(std::floor(pv));
      s.fu[j] = pu - s.dju[j];
      s.fv[j] = pv - s.djv[j];
      if (has_z) {
        const complexd dz = zeta * dir.a;
        for (int it = 0; it < nt_; ++it) {
          const double tprime = std::abs(complexd(g_.t.coord(it), 0.0) + dz);
          const double pt = (tprime - g_.t.min) / dt;
          const int jt = static_cast<int>(std::floor(pt));
          if (jt >= 0 && jt + 1 <= nt_ - 1) {
            s.jt[static_cast<std::size_t>(j) * nt_ + it] = jt;
            s.ft[static_cast<std::size_t>(j) * nt_ + it] = pt - jt;
          } else {
            s.z_ok[it] = 0;
          }
        }
      }
    }
    s.min_dju = *std::min_element(s.dju.begin(), s.dju.end());
    s.max_dju = *std::max_element(s.dju.begin(), s.dju.end());
    s.min_djv = *std::min_element(s.djv.begin(), s.djv.end());
    s.max_djv = *std::max_element(s.djv.begin(), s.djv.end());
    slots_.push_back(std::move(s));
  };

  for (double m : p_.disc_radii) make_slot(0, dirs[0], m * dt);
  for (double m : p_.disc_radii) make_slot(1, dirs[1], m * std::max(du, dv));
  const double diag_spacing = std::max(dt, std::max(du, dv));
  for (int d = 2; d < 8; ++d) {
    for (double m : p_.disc_radii) {
      if (m <= p_.diag_radius_cap) make_slot(2, dirs[d], m * diag_spacing);
    }
  }
  if (slots_.size() > 32) throw InvalidRange("disc family exceeds 32 slots");

  int rt = 1, ru = 1;
  for (const auto& s : slots_) {
    if (s.kind != 1) rt = std::max(rt, static_cast<int>(std::ceil(s.radius / g_.t.spacing)) + 1);
    ru = std::max({ru, std::abs(s.min_dju), std::abs(s.max_dju) + 1});
  }
  reach_t_ = rt;
  reach_u_ = ru;
}

void SweepEngine::build_rows_and_feasibility() {
  const auto& mask = *p_.domain_mask;
  // Collect rows (it, iu) holding masked nodes and their v-spans.
  for (int it = 0; it < nt_; ++it) {
    for (int iu = 0; iu < nu_; ++iu) {
      const std::size_t base = g_.idx(it, iu, 0);
      int lo = -1, hi = -1;
      for (int iv = 0; iv < nv_; ++iv) {
        if (mask[base + iv]) {
          if (lo < 0) lo = iv;
          hi = iv;
        }
      }
      if (lo >= 0) rows_.push_back({it, iu, lo, hi - lo + 1, 0});
    }
  }
  std::size_t total = 0;
  for (auto& row : rows_) {
    row.feas_base = total;
    total += static_cast<std::size_t>(row.iv_n);
  }
  feas_.assign(total, 0);

  // Feasibility bit per (node, slot): every circle sample of the slot has
  // its full interpolation support inside the domain mask.
  parallel_for(rows_.size(), [&](std::size_t rlo, std::size_t rhi) {
    for (std::size_t ri = rlo; ri < rhi; ++ri) {
      const RowInfo& row = rows_[ri];
      uint32_t* bits = nullptr;
      for (std::size_t sidx = 0; sidx < slots_.size(); ++sidx) {
        const Slot& s = slots_[sidx];
        const bool has_z = s.kind != 1;
        const bool has_w = s.kind != 0;
        if (has_z && !s.z_ok[row.it]) continue;
        if (has_w &&
            (row.iu + s.min_dju < 0 || row.iu + s.max_dju + 1 > nu_ - 1))
          continue;
        int sub_lo = row.iv_lo, sub_hi = row.iv_lo + row.iv_n - 1;
        if (has_w) {
          sub_lo = std::max(sub_lo, -s.min_djv);
          sub_hi = std::min(sub_hi, nv_ - 2 - s.max_djv);
        }
        for (int iv = sub_lo; iv <= sub_hi; ++iv) {
          if (!mask[g_.idx(row.it, row.iu, iv)]) continue;
          bool ok = true;
          for (int j = 0; j < s.n && ok; ++j) {
            if (s.kind == 0) {
              const int jt = s.jt[static_cast<std::size_t>(j) * nt_ + row.it];
              const std::size_t a = g_.idx(jt, row.iu, iv);
              ok = mask[a] && mask[a + stride_t_];
            } else if (s.kind == 1) {
              const std::size_t a = g_.idx(row.it, row.iu + s.dju[j], iv + s.djv[j]);
              ok = mask[a] && mask[a + 1] && mask[a + stride_u_] && mask[a + stride_u_ + 1];
            } else {
              const int jt = s.jt[static_cast<std::size_t>(j) * nt_ + row.it];
              const std::size_t a = g_.idx(jt, row.iu + s.dju[j], iv + s.djv[j]);
              const std::size_t b = a + stride_t_;
              ok = mask[a] && mask[a + 1] && mask[a + stride_u_] && mask[a + stride_u_ + 1] &&
                   mask[b] && mask[b + 1] && mask[b + stride_u_] && mask[b + stride_u_ + 1];
            }
          }
          if (ok) {
            bits = feas_.data() + row.feas_base;
            bits[iv - row.iv_lo] |= (1u << sidx);
          }
        }
      }
      (void)bits;
    }
  });
}

void SweepEngine::compute_row(const RowInfo& row, const std::vector<double>& cur,
                              double* best) const {
  const auto& mask = *p_.domain_mask;
  const int lo = row.iv_lo, nrow = row.iv_n;
  const std::size_t node0 = g_.idx(row.it, row.iu, lo);
  const uint32_t* bits = feas_.data() + row.feas_base;
  const double inv_n = 1.0 / p_.n_circle_samples;

  for (int k = 0; k < nrow; ++k) best[k] = cur[node0 + k];

  // Union of feasibility over the row: slots nobody needs are skipped.
  uint32_t row_bits = 0;
  for (int k = 0; k < nrow; ++k) row_bits |= bits[k];

  thread_local std::vector<double> acc;
  if (acc.size() < static_cast<std::size_t>(nrow)) acc.resize(nrow);

  for (std::size_t sidx = 0; sidx < slots_.size(); ++sidx) {
    if (!(row_bits & (1u << sidx))) continue;
    const Slot& s = slots_[sidx];
    int sub_lo = lo, sub_hi = lo + nrow - 1;
    if (s.kind != 0) {
      sub_lo = std::max(sub_lo, -s.min_djv);
      sub_hi = std::min(sub_hi, nv_ - 2 - s.max_djv);
    }
    if (sub_lo > sub_hi) continue;
    const int m = sub_hi - sub_lo + 1;
    std::fill(acc.begin(), acc.begin() + m, 0.0);

    for (int j = 0; j < s.n; ++j) {
      if (s.kind == 0) {
        const int jt = s.jt[static_cast<std::size_t>(j) * nt_ + row.it];
        const double f = s.ft[static_cast<std::size_t>(j) * nt_ + row.it];
        const double c0 = 1.0 - f, c1 = f;
        const double* A = cur.data() + g_.idx(jt, row.iu, sub_lo);
        const double* B = A + stride_t_;
        for (int k = 0; k < m; ++k) acc[k] += c0 * A[k] + c1 * B[k];
      } else if (s.kind == 1) {
        const double fu = s.fu[j], fv = s.fv[j];
        const double w00 = (1 - fu) * (1 - fv), w01 = (1 - fu) * fv;
        const double w10 = fu * (1 - fv), w11 = fu * fv;
        const double* P0 = cur.data() + g_.idx(row.it, row.iu + s.dju[j], sub_lo + s.djv[j]);
        const double* P1 = P0 + stride_u_;
        for (int k = 0; k < m; ++k)
          acc[k] += w00 * P0[k] + w01 * P0[k + 1] + w10 * P1[k] + w11 * P1[k + 1];
      } else {
        const int jt = s.jt[static_cast<std::size_t>(j) * nt_ + row.it];
        const double f = s.ft[static_cast<std::size_t>(j) * nt_ + row.it];
        const double fu = s.fu[j], fv = s.fv[j];
        const double w00 = (1 - fu) * (1 - fv), w01 = (1 - fu) * fv;
        const double w10 = fu * (1 - fv), w11 = fu * fv;
        const double c0 = 1.0 - f, c1 = f;
        const double* P00 = cur.data() + g_.idx(jt, row.iu + s.dju[j], sub_lo + s.djv[j]);
        const double* P10 = P00 + stride_u_;
        const double* Q00 = P00 + stride_t_;
        const double* Q10 = Q00 + stride_u_;
        for (int k = 0; k < m; ++k) {
          const double lowt = w00 * P00[k] + w01 * P00[k + 1] + w10 * P10[k] + w11 * P10[k + 1];
          const double hight = w00 * Q00[k] + w01 * Q00[k + 1] + w10 * Q10[k] + w11 * Q10[k + 1];
          acc[k] += c0 * lowt + c1 * hight;
        }
      }
    }

    const uint32_t bit = 1u << sidx;
    const int off = sub_lo - lo;
    for (int k = 0; k < m; ++k) {
      if (bits[off + k] & bit) best[off + k] = std::min(best[off + k], acc[k] * inv_n);
    }
  }

  // Clamp to the constraints; unmasked span nodes keep their values.
  for (int k = 0; k < nrow; ++k) {
    const std::size_t id = node0 + k;
    if (!mask[id]) {
      best[k] = cur[id];
      continue;
    }
    best[k] = std::min(best[k], p_.upper_bound.values[id]);
    best[k] = std::min(best[k], p_.obstacle.values[id]);
  }
}

double SweepEngine::sweep(std::vector<double>& cur, bool use_dirty) {
  const auto& mask = *p_.domain_mask;
  const int workers = worker_count();
  std::vector<double> worker_resid(workers, 0.0);
  const std::size_t chunk = (rows_.size() + workers - 1) / workers;
  std::fill(changed_.begin(), changed_.end(), 0);

  parallel_for(rows_.size(), [&](std::size_t rlo, std::size_t rhi) {
    const int wid = static_cast<int>(rlo / chunk);
    for (std::size_t ri = rlo; ri < rhi; ++ri) {
      const RowInfo& row = rows_[ri];
      const std::size_t flat = static_cast<std::size_t>(row.it) * nu_ + row.iu;
      if (use_dirty && !dirty_[flat]) continue;
      const std::size_t node0 = g_.idx(row.it, row.iu, row.iv_lo);
      compute_row(row, cur, scratch_.data() + node0);
      double resid = 0.0;
      bool any = false;
      for (int k = 0; k < row.iv_n; ++k) {
        const std::size_t id = node0 + k;
        if (!mask[id]) continue;
        const double d = cur[id] - scratch_[id];
        if (d > 0.0) {
          any = true;
          if (d > resid) resid = d;
        }
      }
      if (any) changed_[flat] = 1;
      worker_resid[wid] = std::max(worker_resid[wid], resid);
    }
  });

  // Commit phase: copy the recomputed rows back.
  parallel_for(rows_.size(), [&](std::size_t rlo, std::size_t rhi) {
    for (std::size_t ri = rlo; ri < rhi; ++ri) {
      const RowInfo& row = rows_[ri];
      const std::size_t flat = static_cast<std::size_t>(row.it) * nu_ + row.iu;
      if (use_dirty && !dirty_[flat]) continue;
      const std::size_t node0 = g_.idx(row.it, row.iu, row.iv_lo);
      std::memcpy(cur.data() + node0, scratch_.data() + node0, sizeof(double) * row.iv_n);
    }
  });

  // Next sweep recomputes every row whose footprint saw a change.
  const int rt = reach_t_, ru = reach_u_;
  for (int it = 0; it < nt_; ++it) {
    const uint8_t* src = changed_.data() + static_cast<std::size_t>(it) * nu_;
    uint8_t* dst = tmp_flags_.data() + static_cast<std::size_t>(it) * nu_;
    for (int iu = 0; iu < nu_; ++iu) {
      uint8_t flag = 0;
      const int a = std::max(0, iu - ru), b = std::min(nu_ - 1, iu + ru);
      for (int k = a; k <= b && !flag; ++k) flag = src[k];
      dst[iu] = flag;
    }
  }
  for (int iu = 0; iu < nu_; ++iu) {
    for (int it = 0; it < nt_; ++it) {
      uint8_t flag = 0;
      const int a = std::max(0, it - rt), b = std::min(nt_ - 1, it + rt);
      for (int k = a; k <= b && !flag; ++k)
        flag = tmp_flags_[static_cast<std::size_t>(k) * nu_ + iu];
      dirty_[static_cast<std::size_t>(it) * nu_ + iu] = flag;
    }
  }

  return *std::max_element(worker_resid.begin(), worker_resid.end());
}

GridField init_field(const EnvelopeProblem& p) {
  GridField field;
  field.mask = p.domain_mask;
  field.values.assign(p.grid->size(), kInf);
  const auto& mask = *p.domain_mask;
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    if (mask[i]) field.values[i] = std::min(p.upper_bound.values[i], p.obstacle.values[i]);
  }
  return field;
}

}  // namespace

std::pair<GridField, double> psh_projection_step(const GridField& field,
                                                 const EnvelopeProblem& problem) {
  SweepEngine engine(problem);
  GridField next = field;
  next.mask = problem.domain_mask;
  const double resid = engine.sweep(next.values, /*use_dirty=*/false);
  return {std::move(next), resid};
}

EnvelopeResult perron_sweep(const EnvelopeProblem& problem) {
  SweepEngine engine(problem);
  EnvelopeResult result;
  result.field = init_field(problem);
  result.converged = false;
  double resid = kInf;
  int iter = 0;
  while (iter < problem.max_iters) {
    resid = engine.sweep(result.field.values, /*use_dirty=*/true);
    ++iter;
    if (resid < problem.tol) {
      result.converged = true;
      break;
    }
  }
  result.iterations = iter;
  result.final_residual = resid;
  return result;
}

namespace {

EnvelopeProblem base_problem(const Grid3& grid, const std::vector<uint8_t>& mask,
                             const SolverOptions& opts) {
  EnvelopeProblem p;
  p.grid = &grid;
  p.domain_mask = &mask;
  p.disc_radii = opts.disc_radii;
  p.diag_radius_cap = opts.diag_radius_cap;
  p.n_circle_samples = opts.n_circle_samples;
  p.tol = opts.tol;
  p.max_iters = opts.max_iters;
  return p;
}

std::vector<double> collar_distances(const Grid3& grid) {
  std::vector<double> dist(grid.size());
  parallel_for(static_cast<std::size_t>(grid.t.n), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t it = lo; it < hi; ++it) {
      for (int iu = 0; iu < grid.u.n; ++iu) {
        for (int iv = 0; iv < grid.v.n; ++iv) {
          dist[grid.idx(static_cast<int>(it), iu, iv)] =
              dist_to_K(grid.point(static_cast<int>(it), iu, iv));
        }
      }
    }
  });
  return dist;
}

}  // namespace

EnvelopeResult solve_omega2(const Grid3& grid, double eta, const SolverOptions& opts) {
  if (eta < grid.grid_diagonal()) {
    throw InvalidRange("eta must be at least one grid diagonal so the collar is resolvable");
  }
  EnvelopeProblem p = base_problem(grid, grid.interior_mask, opts);
  p.upper_bound.mask = &grid.interior_mask;
  p.upper_bound.values.assign(grid.size(), kInf);
  p.obstacle.mask = &grid.interior_mask;
  p.obstacle.values.assign(grid.size(), kInf);
  const std::vector<double> dist = collar_distances(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid.interior_mask[i]) continue;
    p.upper_bound.values[i] = 0.0;
    if (dist[i] <= eta) p.obstacle.values[i] = -1.0;
  }
  return perron_sweep(p);
}

EnvelopeResult solve_omega1_proxy(const Grid3& grid, double epsilon, double eta,
                                  const SolverOptions& opts) {
  if (!(epsilon > 0.0 && epsilon < 5.0 / 11.0)) {
    throw InvalidRange("epsilon must be in (0, 5/11)");
  }
  if (eta < grid.grid_diagonal()) {
    throw InvalidRange("eta must be at least one grid diagonal so the collar is resolvable");
  }
  constexpr double kRoof = 8.0;  // finite stand-in for "unconstrained" on the shell
  EnvelopeProblem p = base_problem(grid, grid.enlarged_mask, opts);
  p.upper_bound.mask = &grid.enlarged_mask;
  p.upper_bound.values.assign(grid.size(), kInf);
  p.obstacle.mask = &grid.enlarged_mask;
  p.obstacle.values.assign(grid.size(), kInf);
  const std::vector<double> dist = collar_distances(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid.enlarged_mask[i]) continue;
    p.upper_bound.values[i] = grid.closure_mask[i] ? epsilon : kRoof;
    if (dist[i] <= eta) p.obstacle.values[i] = -1.0 + epsilon;
  }
  return perron_sweep(p);
}

GridField usc_regularize(const GridField& field, const Grid3& grid, int radius) {
  GridField out = field;
  const auto& mask = *field.mask;
  parallel_for(static_cast<std::size_t>(grid.t.n), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t its = lo; its < hi; ++its) {
      const int it = static_cast<int>(its);
      for (int iu = 0; iu < grid.u.n; ++iu) {
        for (int iv = 0; iv < grid.v.n; ++iv) {
          const std::size_t id = grid.idx(it, iu, iv);
          if (!mask[id]) continue;
          double m = field.values[id];
          for (int a = std::max(0, it - radius); a <= std::min(grid.t.n - 1, it + radius); ++a) {
            for (int b = std::max(0, iu - radius); b <= std::min(grid.u.n - 1, iu + radius); ++b) {
              for (int c = std::max(0, iv - radius); c <= std::min(grid.v.n - 1, iv + radius);
                   ++c) {
                const std::size_t q = grid.idx(a, b, c);
                if (mask[q]) m = std::max(m, field.values[q]);
              }
            }
          }
          out.values[id] = m;
        }
      }
    }
  });
  return out;
}

double nontangential_limsup(const GridField& field, const Grid3& grid, const DomainPoint& xi,
                            const std::vector<double>& alphas) {
  if (alphas.empty()) throw InvalidRange("alphas must be nonempty");
  const auto& mask = *field.mask;
  const double shell0 = 16.0 * grid.grid_diagonal();
  // Reduced-chart embedding: both points on the positive real z-axis.
  const DomainPoint xi_r = DomainPoint::reduced(xi.t, xi.w);

  struct Hit {
    double dist;
    double value;
  };
  double result = -kInf;
  bool any = false;

  const int it0 = std::max(0, static_cast<int>((xi.t - shell0 - grid.t.min) / grid.t.spacing));
  const int it1 = std::min(grid.t.n - 1,
                           static_cast<int>((xi.t + shell0 - grid.t.min) / grid.t.spacing) + 1);
  const int iu0 =
      std::max(0, static_cast<int>((xi.w.real() - shell0 - grid.u.min) / grid.u.spacing));
  const int iu1 = std::min(grid.u.n - 1,
                           static_cast<int>((xi.w.real() + shell0 - grid.u.min) / grid.u.spacing) + 1);
  const int iv0 =
      std::max(0, static_cast<int>((xi.w.imag() - shell0 - grid.v.min) / grid.v.spacing));
  const int iv1 = std::min(grid.v.n - 1,
                           static_cast<int>((xi.w.imag() + shell0 - grid.v.min) / grid.v.spacing) + 1);

  for (double alpha : alphas) {
    std::vector<Hit> hits;
    for (int it = it0; it <= it1; ++it) {
      for (int iu = iu0; iu <= iu1; ++iu) {
        for (int iv = iv0; iv <= iv1; ++iv) {
          const std::size_t id = grid.idx(it, iu, iv);
          if (!mask[id]) continue;
          const DomainPoint q = grid.point(it, iu, iv);
          const double dist = std::hypot(q.t - xi.t, std::abs(q.w - xi.w));
          if (dist > shell0 || dist == 0.0) continue;
          if (!in_approach_region(q, xi_r, alpha)) continue;
          hits.push_back({dist, field.values[id]});
        }
      }
    }
    if (hits.empty()) continue;
    any = true;
    double dmin = kInf;
    for (const auto& h : hits) dmin = std::min(dmin, h.dist);
    // innermost resolvable shell: everything within twice the closest hit
    double shell_max = -kInf;
    for (const auto& h : hits)
      if (h.dist <= 2.0 * dmin) shell_max = std::max(shell_max, h.value);
    result = std::max(result, shell_max);
  }
  if (!any) {
    std::ostringstream msg;
    msg << "no mask node falls in any approach region at t=" << xi.t;
    throw NoNodesInRegion(msg.str());
  }
  return result;
}

nlohmann::json EnvelopeResult::summary_json(const Grid3& grid, double delta) const {
  const auto& mask = *field.mask;
  auto nearest_index = [](const Axis& ax, double x) {
    int i = static_cast<int>(std::lround((x - ax.min) / ax.spacing));
    return std::clamp(i, 0, ax.n - 1);
  };
  nlohmann::json value_at = nullptr;
  {
    const int it = nearest_index(grid.t, 9.0);
    const int iu = nearest_index(grid.u, 0.0);
    const int iv = nearest_index(grid.v, 0.0);
    const std::size_t id = grid.idx(it, iu, iv);
    if (mask[id]) value_at = field.values[id];
  }
  double vmin = kInf, vmax = -kInf;
  int count = 0;
  for (int it = 0; it < grid.t.n; ++it) {
    for (int iu = 0; iu < grid.u.n; ++iu) {
      for (int iv = 0; iv < grid.v.n; ++iv) {
        const std::size_t id = grid.idx(it, iu, iv);
        if (!mask[id]) continue;
        if (!in_V(grid.point(it, iu, iv), delta)) continue;
        vmin = std::min(vmin, field.values[id]);
        vmax = std::max(vmax, field.values[id]);
        ++count;
      }
    }
  }
  nlohmann::json j = {{"iterations", iterations},
                      {"residual", final_residual},
                      {"converged", converged},
                      {"value_at_t9_w0", value_at},
                      {"n_v_nodes", count}};
  j["min_over_V"] = count > 0 ? nlohmann::json(vmin) : nlohmann::json(nullptr);
  j["max_over_V"] = count > 0 ? nlohmann::json(vmax) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json GapReport::to_json() const {
  return {{"n_v_nodes", n_v_nodes},
          {"no_nodes_in_v", no_nodes_in_v},
          {"min_gap", min_gap},
          {"max_gap", max_gap},
          {"omega1_max_on_v", omega1_max_on_v},
          {"omega2_min_on_v", omega2_min_on_v},
          {"omega1_theoretical_bound", omega1_theoretical_bound},
          {"omega2_theoretical_bound", omega2_theoretical_bound},
          {"separation_threshold", separation_threshold},
          {"pass", pass}};
}

GapReport gap_report(const EnvelopeResult& omega1_proxy, const EnvelopeResult& omega2,
                     const Grid3& grid, double delta, double epsilon,
                     double separation_threshold) {
  GapReport rep;
  rep.separation_threshold = separation_threshold;
  rep.omega1_theoretical_bound = -1.0 + 2.0 * epsilon;
  rep.omega2_theoretical_bound = -1.0 / 11.0;
  rep.min_gap = kInf;
  rep.max_gap = -kInf;
  rep.omega1_max_on_v = -kInf;
  rep.omega2_min_on_v = kInf;

  for (int it = 0; it < grid.t.n; ++it) {
    for (int iu = 0; iu < grid.u.n; ++iu) {
      for (int iv = 0; iv < grid.v.n; ++iv) {
        const std::size_t id = grid.idx(it, iu, iv);
        if (!grid.interior_mask[id]) continue;
        if (!in_V(grid.point(it, iu, iv), delta)) continue;
        const double v1 = omega1_proxy.field.values[id];
        const double v2 = omega2.field.values[id];
        const double gap = v2 - v1;
        rep.min_gap = std::min(rep.min_gap, gap);
        rep.max_gap = std::max(rep.max_gap, gap);
        rep.omega1_max_on_v = std::max(rep.omega1_max_on_v, v1);
        rep.omega2_min_on_v = std::min(rep.omega2_min_on_v, v2);
        ++rep.n_v_nodes;
      }
    }
  }
  rep.no_nodes_in_v = rep.n_v_nodes == 0;
  rep.pass = !rep.no_nodes_in_v && rep.min_gap >= separation_threshold;
  if (rep.no_nodes_in_v) {
    rep.min_gap = rep.max_gap = 0.0;
    rep.omega1_max_on_v = rep.omega2_min_on_v = 0.0;
  }
  return rep;
}

}  // namespace plurex
