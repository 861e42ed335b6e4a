#pragma once

#include <array>
#include <complex>

#include "plurex/errors.hpp"

namespace plurex {

using complexd = std::complex<double>;

// A point of C^2 with the fiber coordinate t = |z| cached. The domain is
// invariant under z-rotations, so most quantities depend on (t, w) only;
// `reduced` places z on the positive real axis.
struct DomainPoint {
  complexd z;
  complexd w;
  double t;

  static DomainPoint from_zw(complexd z, complexd w) { return {z, w, std::abs(z)}; }
  static DomainPoint reduced(double t, complexd w) { return {complexd(t, 0.0), w, t}; }
};

enum class RegionTag { Interior, Boundary, Exterior };

// Defining function of the domain: rho = |w - e^{i phi(t)}|^2 - r(t),
// negative exactly on the interior.
double rho(const DomainPoint& p);
double rho_reduced(double t, complexd w);

// Real 4-d gradient of rho at p, ordered (Re z, Im z, Re w, Im w).
// Uses the closed-form derivatives of r and phi.
std::array<double, 4> grad_rho(const DomainPoint& p);

RegionTag classify(const DomainPoint& p, double tol);

// Distance from p to K = boundary circles over |z| = 2 and |z| = 16.
// Each component is a product of circles in orthogonal complex lines, so
// the distance is hypot(t - t_k, | |w - c_k| - sqrt(2) |).
double dist_to_K(const DomainPoint& p);
bool in_K(const DomainPoint& p, double eta);

// Open set V = {8 < |z| < 10, |w| < delta, |w| < sqrt(r(|z|)) - 1}. The
// sqrt form (rather than r - 1) is what guarantees V sits inside the domain:
// |w - e^{i phi}| <= |w| + 1 < sqrt(r).
bool in_V(const DomainPoint& p, double delta);

bool in_annulus_Aw(const DomainPoint& p, complexd w0);

// Distance from q to the tangent plane of the boundary at xi. Throws
// DegenerateBoundaryPoint when the gradient is below 1e-12 (cannot happen
// on the actual boundary; guards corrupted inputs).
double tangent_plane_distance(const DomainPoint& xi, const DomainPoint& q);

// Nontangential approach region A_alpha(xi): |q - xi| < alpha * dist to
// the tangent plane at xi.
bool in_approach_region(const DomainPoint& q, const DomainPoint& xi, double alpha);

}  // namespace plurex
