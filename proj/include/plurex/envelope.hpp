#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <json.hpp>

#include "plurex/grid.hpp"

namespace plurex {

// Discrete Perron-Bremermann problem on a Grid3. Fields are aligned with
// the grid; +infinity encodes "no constraint" / "outside mask".
//
// disc_radii holds multipliers of the per-axis spacing: a coordinate-line
// disc in z uses radius m * spacing_t, one in w uses m * spacing_w, the six
// diagonal directions use m * max(spacing_t, spacing_w) and only the
// multipliers <= diag_radius_cap. The long coordinate radii are what lets
// the sweep carry boundary information along the fiber discs and the
// annulus channel at a useful pace; any family of discs inside the mask
// yields valid constraints, so extending the family only tightens the
// discrete envelope.
struct EnvelopeProblem {
  const Grid3* grid = nullptr;
  const std::vector<uint8_t>* domain_mask = nullptr;
  GridField upper_bound;
  GridField obstacle;
  std::vector<double> disc_radii = {1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  double diag_radius_cap = 4.0;
  int n_circle_samples = 16;
  double tol = 1e-7;
  int max_iters = 5000;
};

struct EnvelopeResult {
  GridField field;
  int iterations = 0;
  double final_residual = 0.0;
  bool converged = false;

  nlohmann::json summary_json(const Grid3& grid, double delta) const;
};

// One Jacobi pass: every node of the domain mask takes the minimum of its
// value and the averages over all feasible disc circles (values by grid
// interpolation), clamped to the constraints. Reads only the input field.
std::pair<GridField, double> psh_projection_step(const GridField& field,
                                                 const EnvelopeProblem& problem);

// Iterates the projection step from min(upper_bound, obstacle) until the
// maximal decrease per sweep falls below tol or max_iters is reached. The
// iteration is pointwise non-increasing. Rows whose sampling footprint did
// not change in the previous sweep are skipped; the skip is exact (their
// recomputation would reproduce the same values), so the iterates equal
// plain Jacobi sweeps.
EnvelopeResult perron_sweep(const EnvelopeProblem& problem);

struct SolverOptions {
  std::vector<double> disc_radii = {1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  double diag_radius_cap = 4.0;
  int n_circle_samples = 16;
  double tol = 1e-7;
  int max_iters = 5000;
};

// Relative extremal envelope on the domain interior: upper bound 0,
// obstacle -1 on interior nodes within eta of K.
EnvelopeResult solve_omega2(const Grid3& grid, double eta, const SolverOptions& opts = {});

// Envelope bounding the continuous-family approximants on the enlarged
// domain: upper bound epsilon on the closure (finite roof on the shell),
// obstacle -1+epsilon within eta of K.
EnvelopeResult solve_omega1_proxy(const Grid3& grid, double epsilon, double eta,
                                  const SolverOptions& opts = {});

// Node-wise max over the (2r+1)^3 neighborhood within the mask; discrete
// stand-in for the upper semicontinuous regularization.
GridField usc_regularize(const GridField& field, const Grid3& grid, int radius = 1);

// Diagnostic boundary value along nontangential approach regions: for each
// alpha, the max of the field over mask nodes of A_alpha(xi) in the
// innermost nonempty distance shell; returns the sup over alphas. Distances
// use the rotation-reduced chart (both points placed on the positive real
// z-axis). Throws NoNodesInRegion when no node enters any region.
double nontangential_limsup(const GridField& field, const Grid3& grid, const DomainPoint& xi,
                            const std::vector<double>& alphas);

struct GapReport {
  int n_v_nodes = 0;
  bool no_nodes_in_v = true;
  double min_gap = 0.0;
  double max_gap = 0.0;
  double omega1_max_on_v = 0.0;
  double omega2_min_on_v = 0.0;
  double omega1_theoretical_bound = 0.0;  // -1 + 2 epsilon
  double omega2_theoretical_bound = 0.0;  // -1/11
  double separation_threshold = 0.0;
  bool pass = false;

  nlohmann::json to_json() const;
};

// Tabulates both envelopes on the V nodes and reports the separation.
GapReport gap_report(const EnvelopeResult& omega1_proxy, const EnvelopeResult& omega2,
                     const Grid3& grid, double delta, double epsilon,
                     double separation_threshold = 0.5);

}  // namespace plurex
