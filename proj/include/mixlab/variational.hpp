#pragma once

#include <cstdint>

#include "mixlab/rearrange.hpp"
#include "mixlab/torus_field.hpp"

namespace mixlab {

/// F(w) = int_T (1 - w_x^2) w^2 dx with centered-difference w_x and midpoint
/// quadrature. Spectral differentiation is deliberately avoided: the
/// extremizers carry kinks that would Gibbs-pollute the slope factor.
double functional_F(const GridFunction& w);

/// F_1(w) = int_T w_x^2 w^2 dx, same discretization as functional_F, so
/// F + F_1 = int w^2 holds exactly on the grid.
double functional_F1(const GridFunction& w);

/// F_2(w) = int_{-L/4}^{L/4} w_x^2 w^2 dx with centered differences inside,
/// one-sided at the interval ends, and trapezoid quadrature.
double functional_F2(const CompactFunction& w);

/// Exact integrals of the piecewise-linear interpolant on the periodic
/// grid. A sampled w with cell slopes in [-1,1], exact zero mean and exact
/// L^2 mass h^2 is a genuine member of X_h, so F_pl(w) <= sup F is a
/// theorem, not a numerical coincidence; the certifier relies on this.
double l2sq_pl(const GridFunction& w);
double functional_F_pl(const GridFunction& w);
double functional_F1_pl(const GridFunction& w);

/// alpha(h): the unique root in [0,1] of h^2/h_max^2 = alpha^2 (2 - alpha^2),
/// i.e. (1 - sqrt(1 - h^2/h_max^2))^{1/2}.
double alpha_of_h(double h, double L);

/// Samples of the reduced-problem extremizer w^alpha on [-L/4, L/4]:
/// identity up to alpha^2 l/2, then the circular-arc profile, odd across 0.
CompactFunction extremizer_w_alpha(double alpha, double L, std::size_t n);

/// Analytic value and slope of w^alpha at x in [-L/4, L/4].
double w_alpha_value(double alpha, double L, double x);
double w_alpha_slope(double alpha, double L, double x);

/// sup_{X_h} F = h^2 - (L^3/48)(1 - sqrt(1 - h^2/(L^3/48)))^2.
double sup_F_closed_form(double h, double L);

/// inf over the reduced class of F_2: (h_max^2/2)(1 - sqrt(1 - h^2/h_max^2))^2.
double inf_F2_closed_form(double h, double L);

/// sup_{w in X} int w^2 = L^3/48, attained exactly at translates of the
/// triangle wave.
double sup_L2_over_X(double L);

/// Dense quadrature of F at the analytic extremizer profile; only the arc
/// branch contributes since the slope is exactly +-1 elsewhere.
double extremizer_F_dense(double alpha, double L);

struct VariationalReport {
  double h = 0.0;
  double closed_form_value = 0.0;
  double best_numeric_value = 0.0;
  GridFunction extremizer;
  double violation = 0.0;   // worst constraint residual among accepted samples
  std::size_t accepted = 0; // admissible samples after rejection
  double extremizer_value = 0.0; // dense quadrature of F at the lifted w^alpha
};

/// Stochastic certification of the supremum: draw n_samples random
/// piecewise-linear members of X_h (random slopes, cumulative sum, mean
/// projection, amplitude rescale, rejection on slope violation), improve
/// them through the two rearrangement pipelines, and report the best F
/// found together with the closed form. Throws SamplingExhausted when
/// rejection leaves fewer than 10 admissible samples.
VariationalReport certify_supremum(double h, double L, std::size_t n_samples,
                                   std::uint64_t seed = 12345,
                                   std::size_t n_grid = 64);

}  // namespace mixlab
