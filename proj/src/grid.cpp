#include "plurex/grid.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "plurex/util.hpp"

namespace plurex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1-d squared-distance lower envelope (Felzenszwalb-Huttenlocher) over a
// line of n samples with physical spacing h. f holds squared distances in,
// d squared distances out; workspace vectors are caller-provided.
void edt_1d(const double* f, double* d, int n, double h, std::vector<int>& v,
            std::vector<double>& z) {
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  auto sq = [](double x) { return x * x; };
  for (int q = 1; q < n; ++q) {
    if (f[q] == kInf) continue;
    if (f[v[0]] == kInf) {
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    double s;
    for (;;) {
      const int p = v[k];
      s = ((f[q] + sq(q * h)) - (f[p] + sq(p * h))) / (2.0 * h * (q - p));
      if (s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  if (f[v[0]] == kInf) {
    for (int q = 0; q < n; ++q) d[q] = kInf;
    return;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q * h) ++k;
    const double dx = (q - v[k]) * h;
    d[q] = dx * dx + f[v[k]];
  }
}

}  // namespace

std::vector<double> distance_transform(const Grid3& grid, const std::vector<uint8_t>& seeds) {
  const int nt = grid.t.n, nu = grid.u.n, nv = grid.v.n;
  std::vector<double> dist(grid.size());
  for (std::size_t i = 0; i < dist.size(); ++i) dist[i] = seeds[i] ? 0.0 : kInf;

  // Pass over v (contiguous), then u, then t.
  parallel_for(static_cast<std::size_t>(nt) * nu, [&](std::size_t lo, std::size_t hi) {
    std::vector<int> v_ws(nv + 1);
    std::vector<double> z_ws(nv + 1), out(nv);
    for (std::size_t row = lo; row < hi; ++row) {
      double* line = dist.data() + row * nv;
      edt_1d(line, out.data(), nv, grid.v.spacing, v_ws, z_ws);
      std::copy(out.begin(), out.end(), line);
    }
  });

  parallel_for(static_cast<std::size_t>(nt) * nv, [&](std::size_t lo, std::size_t hi) {
    std::vector<int> v_ws(nu + 1);
    std::vector<double> z_ws(nu + 1), in(nu), out(nu);
    for (std::size_t row = lo; row < hi; ++row) {
      const int it = static_cast<int>(row / nv);
      const int iv = static_cast<int>(row % nv);
      for (int iu = 0; iu < nu; ++iu) in[iu] = dist[grid.idx(it, iu, iv)];
      edt_1d(in.data(), out.data(), nu, grid.u.spacing, v_ws, z_ws);
      for (int iu = 0; iu < nu; ++iu) dist[grid.idx(it, iu, iv)] = out[iu];
    }
  });

  parallel_for(static_cast<std::size_t>(nu) * nv, [&](std::size_t lo, std::size_t hi) {
    std::vector<int> v_ws(nt + 1);
    std::vector<double> z_ws(nt + 1), in(nt), out(nt);
    for (std::size_t row = lo; row < hi; ++row) {
      const int iu = static_cast<int>(row / nv);
      const int iv = static_cast<int>(row % nv);
      for (int it = 0; it < nt; ++it) in[it] = dist[grid.idx(it, iu, iv)];
      edt_1d(in.data(), out.data(), nt, grid.t.spacing, v_ws, z_ws);
      for (int it = 0; it < nt; ++it) dist[grid.idx(it, iu, iv)] = out[it];
    }
  });

  for (auto& d : dist) d = (d == kInf) ? kInf : std::sqrt(d);
  return dist;
}

Grid3 build_grid(double t_min, double t_max, double w_min, double w_max, double spacing_t,
                 double spacing_w, double delta) {
  if (spacing_t <= 0.0 || spacing_w <= 0.0) throw InvalidRange("spacings must be positive");
  if (t_min > 0.0 || t_max < 18.0 || w_min > -2.6 || w_max < 2.6) {
    std::ostringstream msg;
    msg << "grid ranges must cover [0,18] x [-2.6,2.6]^2, got t [" << t_min << "," << t_max
        << "] w [" << w_min << "," << w_max << "]";
    throw InvalidRange(msg.str());
  }
  if (!(delta > 0.0 && delta <= 0.1)) throw InvalidRange("delta must be in (0, 0.1]");

  Grid3 grid;
  grid.t = {t_min, spacing_t, static_cast<int>(std::floor((t_max - t_min) / spacing_t + 0.5)) + 1};
  grid.u = {w_min, spacing_w, static_cast<int>(std::floor((w_max - w_min) / spacing_w + 0.5)) + 1};
  grid.v = grid.u;
  grid.delta = delta;

  const std::size_t total = grid.size();
  grid.interior_mask.assign(total, 0);
  grid.closure_mask.assign(total, 0);
  grid.enlarged_mask.assign(total, 0);

  parallel_for(static_cast<std::size_t>(grid.t.n), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t it = lo; it < hi; ++it) {
      for (int iu = 0; iu < grid.u.n; ++iu) {
        for (int iv = 0; iv < grid.v.n; ++iv) {
          const std::size_t id = grid.idx(static_cast<int>(it), iu, iv);
          const double value = rho_reduced(grid.t.coord(static_cast<int>(it)),
                                           complexd(grid.u.coord(iu), grid.v.coord(iv)));
          grid.interior_mask[id] = value < 0.0 ? 1 : 0;
          grid.closure_mask[id] = value <= 1e-12 ? 1 : 0;
        }
      }
    }
  });

  const std::vector<double> dist = distance_transform(grid, grid.closure_mask);
  for (std::size_t i = 0; i < total; ++i) grid.enlarged_mask[i] = dist[i] < delta ? 1 : 0;
  return grid;
}

}  // namespace plurex
