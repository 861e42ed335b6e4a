#include "plurex/domain.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "plurex/profiles.hpp"

namespace plurex {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

double rho_reduced(double t, complexd w) {
  const double phi = eval_phi(t);
  const complexd center(std::cos(phi), std::sin(phi));
  return std::norm(w - center) - eval_r(t);
}

double rho(const DomainPoint& p) { return rho_reduced(p.t, p.w); }

std::array<double, 4> grad_rho(const DomainPoint& p) {
  const double t = p.t;
  const double phi = eval_phi(t);
  const double cphi = std::cos(phi), sphi = std::sin(phi);
  const double u = p.w.real(), v = p.w.imag();
  // d/dt of |w - e^{i phi(t)}|^2 - r(t)
  const double drho_dt = 2.0 * eval_phi_deriv(t) * (u * sphi - v * cphi) - eval_r_deriv(t);
  double gx = 0.0, gy = 0.0;
  if (t > 0.0) {
    gx = drho_dt * p.z.real() / t;
    gy = drho_dt * p.z.imag() / t;
  }
  return {gx, gy, 2.0 * (u - cphi), 2.0 * (v - sphi)};
}

RegionTag classify(const DomainPoint& p, double tol) {
  const double value = rho(p);
  if (value < -tol) return RegionTag::Interior;
  if (value <= tol) return RegionTag::Boundary;
  return RegionTag::Exterior;
}

double dist_to_K(const DomainPoint& p) {
  double best = std::numeric_limits<double>::infinity();
  for (double tk : {2.0, 16.0}) {
    const double phi = eval_phi(tk);
    const complexd center(std::cos(phi), std::sin(phi));
    const double dw = std::abs(std::abs(p.w - center) - kSqrt2);
    best = std::min(best, std::hypot(p.t - tk, dw));
  }
  return best;
}

bool in_K(const DomainPoint& p, double eta) {
  if (eta == 0.0) {
    const bool on_circle = (p.t == 2.0 || p.t == 16.0);
    return on_circle && std::abs(rho(p)) <= 1e-12;
  }
  return dist_to_K(p) <= eta;
}

bool in_V(const DomainPoint& p, double delta) {
  if (!(p.t > 8.0 && p.t < 10.0)) return false;
  const double aw = std::abs(p.w);
  if (!(aw < delta)) return false;
  const double rr = eval_r(p.t);
  if (rr <= 0.0) return false;
  return aw < std::sqrt(rr) - 1.0;
}

bool in_annulus_Aw(const DomainPoint& p, complexd w0) {
  return p.w == w0 && p.t >= 2.0 && p.t <= 16.0;
}

double tangent_plane_distance(const DomainPoint& xi, const DomainPoint& q) {
  const auto g = grad_rho(xi);
  const double gnorm = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]);
  if (gnorm < 1e-12) {
    std::ostringstream msg;
    msg << "gradient of rho degenerate at t=" << xi.t << " (|grad|=" << gnorm << ")";
    throw DegenerateBoundaryPoint(msg.str());
  }
  const double d[4] = {q.z.real() - xi.z.real(), q.z.imag() - xi.z.imag(),
                       q.w.real() - xi.w.real(), q.w.imag() - xi.w.imag()};
  const double dot = g[0] * d[0] + g[1] * d[1] + g[2] * d[2] + g[3] * d[3];
  return std::abs(dot) / gnorm;
}

bool in_approach_region(const DomainPoint& q, const DomainPoint& xi, double alpha) {
  const double delta = tangent_plane_distance(xi, q);
  const double dist = std::sqrt(std::norm(q.z - xi.z) + std::norm(q.w - xi.w));
  return dist < alpha * delta;
}

}  // namespace plurex
