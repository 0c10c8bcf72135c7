#pragma once

#include <utility>
#include <vector>

#include "mixlab/errors.hpp"

namespace mixlab {

/// A state (rho, v, m, e) in R x R^d x R^d x R of the transport differential
/// inclusion. The ambient dimension is carried explicitly because the wave
/// cone answer changes between d = 2 and d >= 3.
struct HullPoint {
  double rho;
  std::vector<double> v;
  std::vector<double> m;
  double e;

  HullPoint(double rho_, std::vector<double> v_, std::vector<double> m_, double e_);

  int dim() const { return static_cast<int>(v.size()); }
};

/// Membership in K = {|rho| <= 1, m = rho v, |v|^2 = e} within tol.
bool in_K(const HullPoint& z, double tol);

/// Membership in the closed convex hull of K within tol: either
/// (i)  |rho| = 1, m = rho v, |v|^2 <= e, or
/// (ii) |rho| < 1 and |m - rho v|^2 <= (e - |v|^2)(1 - rho^2).
bool in_K_hull(const HullPoint& z, double tol);

/// Slack e (1 - rho^2) - m_1^2 of the zero-velocity hull inequality; it is
/// non-negative for every point of the hull with v_1 = 0. Positivity of the
/// slack alone does not certify hull membership.
double zero_velocity_inequality(const HullPoint& z);

/// Sufficient interior certificate for the energy-truncated hull: v = 0,
/// strict interior of the hull, and 4|m|^2/(1-rho^2)^2 + e < gamma.
bool in_K_gamma_interior(const HullPoint& z, double gamma, double tol);

/// For z in K_1 = {|rho| < 1, |m - rho v|^2 = (e - |v|^2)(1 - rho^2)}, the
/// segment through z in direction (1, (m - rho v)/(1-rho^2), (v - rho m)/(1-rho^2), e_hat)
/// reaches K at parameters 1 - rho and -1 - rho. Returns both endpoints.
std::pair<HullPoint, HullPoint> k1_segment(const HullPoint& z, double tol);

/// Wave cone membership: all of R^{1+d+d+1} for d >= 3; for d = 2 a
/// direction is excluded exactly when rho_hat = 0 and v_hat is not parallel
/// to m_hat. The e component is unconstrained and is ignored.
bool in_wave_cone(const HullPoint& zhat);

/// For z0 = (rho, 0, m, e) strictly inside the hull and satisfying the
/// gamma certificate, the segment z0 +- s (0, v_hat, rho v_hat, 0) with
/// s^2 = e - |m|^2/(1-rho^2) and v_hat the first Gram-Schmidt basis vector
/// orthogonal to m lands in K_1 with both endpoint energy checks below gamma.
std::pair<HullPoint, HullPoint> hull_gap_segment(const HullPoint& z0, double gamma);

}  // namespace mixlab
