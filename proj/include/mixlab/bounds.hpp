#pragma once

#include <vector>

#include "mixlab/torus_field.hpp"

namespace mixlab {

/// S(alpha) = (arcsin(alpha) + alpha*sqrt(1-alpha^2)) / 2, increasing from 0
/// to pi/4 on [0,1].
double S(double alpha);

/// Inverse of S on [0, pi/4], by bisection (S' degenerates at alpha = 1, so
/// Newton is avoided).
double S_inverse(double s);

/// alpha(r) = (1 - sqrt(1 - r^2))^{1/2} for r in [0,1].
double alpha_of_r(double r);

/// Classical mixing-time bound E^{-1/2} * ||rho_0||_{H^-1(T^d)}.
double old_bound(double h_norm_d, double E);

/// Improved bound E^{-1/2} * H_max * sqrt(2) * S(alpha(r0)) for
/// one-dimensional data with ratio r0 = ||rho_0||_{H^-1(T^d)} / H_max.
double new_bound(double r0, const MixParams& params);

/// Dimensionless gap delta(r0) = sqrt(2) S(alpha(r0)) - r0 between the two
/// bounds; multiply by E^{-1/2} H_max to recover time units.
double gap_delta(double r0);

/// Rate constant c = 2^{-1/2} E^{1/2} L^{-(d-1)/2} / h_max of the descent ODE.
double rate_constant(const MixParams& params);

/// Equality-case right-hand side of the decay inequality for y = q^2:
/// dy/dt = -2 (E/L^{d-1})^{1/2} h_max^{-1} (q^2 - (1 - sqrt(1-q^2))^2)^{1/2}.
double ode_rhs(double q, const MixParams& params);

struct BoundReport {
  double r0;
  double old_bound;
  double new_bound;
  double gap;
  MixParams params;
};

BoundReport make_bound_report(double r0, const MixParams& params);

/// Sampled trajectory of the descent ODE. Along any trace q^2 = alpha^2 (2 - alpha^2).
struct OdeTrace {
  std::vector<double> times;
  std::vector<double> q_values;
  std::vector<double> alpha_values;

  double terminal_time() const { return times.empty() ? 0.0 : times.back(); }
};

/// Exact equality-case trace alpha(t) = S^{-1}(S(alpha0) - c t) on `steps`
/// uniformly spaced times covering [0, S(alpha0)/c].
OdeTrace integrate_equality_case(double alpha0, const MixParams& params,
                                 std::size_t steps);

/// RK4 integration of the equality-case ODE in the variable y = q^2 with an
/// adaptive step and a floor stop at y < 1e-14 (the right-hand side is not
/// Lipschitz at q = 0 and q = 1). The reported terminal time includes the
/// analytic remainder S(alpha_floor)/c of the stopped tail.
OdeTrace integrate_ode_rk4(double q0, const MixParams& params,
                           std::size_t max_steps = 2'000'000);

}  // namespace mixlab
