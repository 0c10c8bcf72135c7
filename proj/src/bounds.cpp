#include "mixlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mixlab {

namespace {
constexpr double kQuarterPi = std::numbers::pi / 4.0;

void check_unit_range(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0))
    fail(ErrorKind::OutOfRange, std::string(what) + " must lie in [0,1]");
}
}  // namespace

double S(double alpha) {
  check_unit_range(alpha, "alpha");
  return 0.5 * (std::asin(alpha) + alpha * std::sqrt(1.0 - alpha * alpha));
}

double S_inverse(double s) {
  if (!(s >= 0.0 && s <= kQuarterPi + 1e-15))
    fail(ErrorKind::OutOfRange, "s must lie in [0, pi/4]");
  // S' vanishes at alpha = 1, so bisection near the top endpoint loses
  // accuracy like eps^{2/3}; snap the exact boundary values instead.
  if (s <= 0.0) return 0.0;
  if (s >= kQuarterPi) return 1.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (S(mid) < s ? lo : hi) = mid;
  }
  double alpha = 0.5 * (lo + hi);
  // Newton polish inside the bracket: the plain bisection result carries an
  // absolute error ~1e-13, too coarse for relative accuracy at small alpha.
  // S' = sqrt(1 - alpha^2) stays healthy away from alpha = 1, where the
  // bracket endpoints confine the update anyway.
  for (int it = 0; it < 3; ++it) {
    const double deriv = std::sqrt(std::max(1e-8, 1.0 - alpha * alpha));
    alpha = std::clamp(alpha - (S(alpha) - s) / deriv, lo, hi);
  }
  return alpha;
}

double alpha_of_r(double r) {
  check_unit_range(r, "r");
  return std::sqrt(1.0 - std::sqrt(std::max(0.0, 1.0 - r * r)));
}

double old_bound(double h_norm_d, double E) {
  if (!(E > 0.0)) fail(ErrorKind::NonPositiveEnergy, "E must be positive");
  if (h_norm_d < 0.0) fail(ErrorKind::OutOfRange, "norm must be non-negative");
  return h_norm_d / std::sqrt(E);
}

double new_bound(double r0, const MixParams& params) {
  check_unit_range(r0, "r0");
  return H_max(params) / std::sqrt(params.E) * std::sqrt(2.0) * S(alpha_of_r(r0));
}

double gap_delta(double r0) {
  check_unit_range(r0, "r0");
  return std::sqrt(2.0) * S(alpha_of_r(r0)) - r0;
}

double rate_constant(const MixParams& params) {
  return std::sqrt(params.E) /
         (std::sqrt(2.0) * std::pow(params.L, 0.5 * (params.d - 1)) * h_max(params.L));
}

double ode_rhs(double q, const MixParams& params) {
  check_unit_range(q, "q");
  const double y = q * q;
  const double root = 1.0 - std::sqrt(std::max(0.0, 1.0 - y));
  const double radicand = std::max(0.0, y - root * root);
  return -2.0 * std::sqrt(params.E / std::pow(params.L, params.d - 1)) /
         h_max(params.L) * std::sqrt(radicand);
}

BoundReport make_bound_report(double r0, const MixParams& params) {
  BoundReport report{r0, old_bound(r0 * H_max(params), params.E),
                     new_bound(r0, params), 0.0, params};
  report.gap = gap_delta(r0) * H_max(params) / std::sqrt(params.E);
  return report;
}

OdeTrace integrate_equality_case(double alpha0, const MixParams& params,
                                 std::size_t steps) {
  if (!(alpha0 > 0.0 && alpha0 <= 1.0))
    fail(ErrorKind::OutOfRange, "alpha0 must lie in (0,1]");
  if (steps < 2) fail(ErrorKind::InvalidArgument, "need at least two samples");
  const double c = rate_constant(params);
  const double s0 = S(alpha0);
  const double T = s0 / c;
  OdeTrace trace;
  trace.times.reserve(steps);
  trace.q_values.reserve(steps);
  trace.alpha_values.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = T * static_cast<double>(i) / static_cast<double>(steps - 1);
    const double alpha = S_inverse(std::max(0.0, s0 - c * t));
    trace.times.push_back(t);
    trace.alpha_values.push_back(alpha);
    trace.q_values.push_back(alpha * std::sqrt(2.0 - alpha * alpha));
  }
  return trace;
}

OdeTrace integrate_ode_rk4(double q0, const MixParams& params,
                           std::size_t max_steps) {
  check_unit_range(q0, "q0");
  const double c = rate_constant(params);
  const double floor = 1e-14;

  auto rhs = [&params](double y) {
    const double q = std::sqrt(std::clamp(y, 0.0, 1.0));
    return ode_rhs(q, params);
  };

  OdeTrace trace;
  double t = 0.0;
  double y = q0 * q0;
  auto record = [&trace](double time, double y_val) {
    const double q = std::sqrt(std::max(0.0, y_val));
    trace.times.push_back(time);
    trace.q_values.push_back(q);
    trace.alpha_values.push_back(
        std::sqrt(std::max(0.0, 1.0 - std::sqrt(std::max(0.0, 1.0 - y_val)))));
  };
  record(t, y);

  const double h_base = 1e-3 / c;
  for (std::size_t step = 0; step < max_steps && y > floor; ++step) {
    const double f0 = rhs(y);
    // Shrink the step near both non-Lipschitz endpoints: never move y by
    // more than a small fraction of its distance to 0 or to 1.
    double h = h_base;
    if (f0 < 0.0) {
      h = std::min(h, 0.005 * y / -f0);
      h = std::min(h, 0.005 * std::max(1e-16, 1.0 - y) / -f0 + 1e-9 / c);
    }
    const double k1 = rhs(y);
    const double k2 = rhs(std::max(0.0, y + 0.5 * h * k1));
    const double k3 = rhs(std::max(0.0, y + 0.5 * h * k2));
    const double k4 = rhs(std::max(0.0, y + h * k3));
    y = std::max(0.0, y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    t += h;
    record(t, y);
  }
  if (y > floor)
    fail(ErrorKind::StepBudgetExhausted, "RK4 did not reach the floor");

  // Analytic remainder of the stopped tail, S(alpha_floor)/c.
  const double alpha_floor = trace.alpha_values.back();
  record(t + S(alpha_floor) / c, 0.0);
  return trace;
}

}  // namespace mixlab
