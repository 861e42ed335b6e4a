#pragma once

#include <complex>

#include "plurex/envelope.hpp"

namespace plurex {

// Minus the harmonic measure of the boundary arc {e^{i theta}, theta in
// [th1, th2]} of the unit disc seen from z0, by trapezoid quadrature of the
// Poisson kernel. The relative extremal function of the arc equals this,
// which makes it an independent 1-complex-dimensional oracle for the
// sweeping solver.
double disc_oracle_harmonic_measure(std::complex<double> z0, double th1, double th2, int n_quad);

// Unit-disc grid for the oracle cross-check: a single t-slice (so only
// w-line discs are feasible and the sweep reduces to one complex variable),
// (Re w, Im w) in [-1,1]^2 with n nodes per axis, mask = open unit disc.
Grid3 make_unit_disc_grid(int n);

// Relative extremal problem of the arc: upper bound 0, obstacle -1 on disc
// nodes within eta of the arc.
EnvelopeResult solve_unit_disc_arc(const Grid3& grid, double th1, double th2, double eta,
                                   const SolverOptions& opts = {});

}  // namespace plurex
