#include "plurex/disc_oracle.hpp"

#include <cmath>
#include <limits>

namespace plurex {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kInf = std::numeric_limits<double>::infinity();

double poisson_kernel(std::complex<double> z, double theta) {
  const std::complex<double> e(std::cos(theta), std::sin(theta));
  return (1.0 - std::norm(z)) / std::norm(e - z);
}

// Distance from a point of the closed disc to the arc.
double dist_to_arc(std::complex<double> w, double th1, double th2) {
  const double aw = std::abs(w);
  if (aw > 0.0) {
    double ang = std::arg(w);
    // normalize ang into [th1, th1 + 2 pi)
    double rel = ang - th1;
    rel -= 2.0 * kPi * std::floor(rel / (2.0 * kPi));
    if (rel <= th2 - th1) return std::abs(aw - 1.0);
  }
  const std::complex<double> e1(std::cos(th1), std::sin(th1));
  const std::complex<double> e2(std::cos(th2), std::sin(th2));
  return std::min(std::abs(w - e1), std::abs(w - e2));
}

}  // namespace

double disc_oracle_harmonic_measure(std::complex<double> z0, double th1, double th2, int n_quad) {
  const double h = (th2 - th1) / n_quad;
  double sum = 0.5 * (poisson_kernel(z0, th1) + poisson_kernel(z0, th2));
  for (int k = 1; k < n_quad; ++k) sum += poisson_kernel(z0, th1 + k * h);
  return -(sum * h) / (2.0 * kPi);
}

Grid3 make_unit_disc_grid(int n) {
  Grid3 grid;
  grid.t = {0.0, 1.0, 1};
  const double spacing = 2.0 / (n - 1);
  grid.u = {-1.0, spacing, n};
  grid.v = grid.u;
  grid.interior_mask.assign(grid.size(), 0);
  for (int iu = 0; iu < n; ++iu) {
    for (int iv = 0; iv < n; ++iv) {
      const double x = grid.u.coord(iu), y = grid.v.coord(iv);
      grid.interior_mask[grid.idx(0, iu, iv)] = (x * x + y * y < 1.0) ? 1 : 0;
    }
  }
  grid.closure_mask = grid.interior_mask;
  grid.enlarged_mask = grid.interior_mask;
  return grid;
}

EnvelopeResult solve_unit_disc_arc(const Grid3& grid, double th1, double th2, double eta,
                                   const SolverOptions& opts) {
  // The node collar is an (eta + h/2)-dilation of whatever arc it is built
  // on; erode the target arc by that amount first so the collar footprint
  // matches the requested arc instead of widening it.
  {
    const double erosion =
        std::min(eta + 0.5 * grid.u.spacing, 0.5 * (th2 - th1) - grid.u.spacing);
    if (erosion > 0.0) {
      th1 += erosion;
      th2 -= erosion;
    }
  }
  EnvelopeProblem p;
  p.grid = &grid;
  p.domain_mask = &grid.interior_mask;
  p.disc_radii = opts.disc_radii;
  p.diag_radius_cap = opts.diag_radius_cap;
  p.n_circle_samples = opts.n_circle_samples;
  p.tol = opts.tol;
  p.max_iters = opts.max_iters;
  p.upper_bound.mask = &grid.interior_mask;
  p.upper_bound.values.assign(grid.size(), kInf);
  p.obstacle.mask = &grid.interior_mask;
  p.obstacle.values.assign(grid.size(), kInf);
  for (int iu = 0; iu < grid.u.n; ++iu) {
    for (int iv = 0; iv < grid.v.n; ++iv) {
      const std::size_t id = grid.idx(0, iu, iv);
      if (!grid.interior_mask[id]) continue;
      p.upper_bound.values[id] = 0.0;
      const std::complex<double> w(grid.u.coord(iu), grid.v.coord(iv));
      if (dist_to_arc(w, th1, th2) <= eta) p.obstacle.values[id] = -1.0;
    }
  }
  return perron_sweep(p);
}

}  // namespace plurex
