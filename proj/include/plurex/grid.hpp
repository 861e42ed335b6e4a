#pragma once

#include <cstdint>
#include <vector>

#include "plurex/domain.hpp"

namespace plurex {

struct Axis {
  double min = 0.0;
  double spacing = 1.0;
  int n = 0;

  double coord(int i) const { return min + spacing * i; }
  double max() const { return coord(n - 1); }
};

// Symmetry-reduced grid over (t, Re w, Im w) with the masks used by the
// envelope solves. interior subset of closure subset of enlarged.
struct Grid3 {
  Axis t, u, v;
  std::vector<uint8_t> interior_mask;
  std::vector<uint8_t> closure_mask;
  std::vector<uint8_t> enlarged_mask;
  double delta = 0.0;  // enlargement threshold used for enlarged_mask

  std::size_t size() const {
    return static_cast<std::size_t>(t.n) * static_cast<std::size_t>(u.n) *
           static_cast<std::size_t>(v.n);
  }
  std::size_t idx(int it, int iu, int iv) const {
    return (static_cast<std::size_t>(it) * u.n + iu) * v.n + iv;
  }
  DomainPoint point(int it, int iu, int iv) const {
    return DomainPoint::reduced(t.coord(it), complexd(u.coord(iu), v.coord(iv)));
  }
  double grid_diagonal() const {
    return std::sqrt(t.spacing * t.spacing + u.spacing * u.spacing + v.spacing * v.spacing);
  }
};

// Scalar field aligned with a Grid3; +infinity outside its mask.
struct GridField {
  std::vector<double> values;
  const std::vector<uint8_t>* mask = nullptr;
};

// Exact squared Euclidean distance transform (separable lower-envelope
// scan per axis) from the set of seed nodes, in physical units. Seeds get
// distance 0. Returns per-node distance.
std::vector<double> distance_transform(const Grid3& grid, const std::vector<uint8_t>& seeds);

// Builds the domain grid: interior/closure masks from the defining function
// at the nodes, enlarged mask from the distance transform of the closure at
// threshold delta. Ranges must cover [0,18] x [-2.6,2.6]^2.
Grid3 build_grid(double t_min, double t_max, double w_min, double w_max, double spacing_t,
                 double spacing_w, double delta);

}  // namespace plurex
