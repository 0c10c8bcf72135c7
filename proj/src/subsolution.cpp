#include "mixlab/subsolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace mixlab {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

// Analytic region of |x| in [0, l]: 0 identity, 1 arc, 2 reflection.
int region_of(double u, double a1, double a2) {
  if (u <= a1) return 0;
  if (u < a2) return 1;
  return 2;
}

// Map x to [-l, l) and return |x| together with the sign of W there.
double fold(double x, double L, double& sign) {
  const double l = 0.5 * L;
  double y = std::fmod(x + l, L);
  if (y < 0.0) y += L;
  y -= l;  // y in [-l, l)
  sign = y < 0.0 ? -1.0 : 1.0;
  return std::abs(y);
}

struct WGrid {
  GridFunction w;
  GridFunction rho;
};

// Sample W^alpha and its derivative on the periodic grid. rho uses the
// neighbor chords that stay inside one analytic region; where both chords
// qualify this reduces to the centered difference.
WGrid build_w_grid(double alpha, double L, std::size_t n) {
  GridFunction w = big_W_alpha(alpha, L, n);
  const double l = 0.5 * L;
  const double a1 = alpha * alpha * l / 2.0;
  const double a2 = l - a1;
  const double dx = w.dx();

  std::vector<double> rho(n);
  double sign;
  for (std::size_t j = 0; j < n; ++j) {
    const double xj = w.x(j);
    const std::size_t jp = (j + 1) % n;
    const std::size_t jm = (j + n - 1) % n;
    const double fwd = (w[jp] - w[j]) / dx;
    const double bwd = (w[j] - w[jm]) / dx;
    const int r_fwd = region_of(fold(xj + 0.5 * dx, L, sign), a1, a2);
    const int r_bwd = region_of(fold(xj - 0.5 * dx, L, sign), a1, a2);
    const int r_pt = region_of(fold(xj, L, sign), a1, a2);
    if (r_fwd == r_bwd)
      rho[j] = 0.5 * (fwd + bwd);
    else if (r_fwd == r_pt)
      rho[j] = fwd;
    else
      rho[j] = bwd;
  }
  return {std::move(w), GridFunction(L, std::move(rho))};
}

void check_interior_time(double t, double T) {
  if (!(t > 0.0 && t < T))
    fail(ErrorKind::OutOfTimeRange,
         "t = " + std::to_string(t) + " outside (0, " + std::to_string(T) + ")");
}

}  // namespace

double W_alpha_value(double alpha, double L, double x) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    fail(ErrorKind::OutOfRange, "alpha must lie in [0,1]");
  const double l = 0.5 * L;
  double sign;
  const double u = fold(x, L, sign);
  const double a1 = alpha * alpha * l / 2.0;
  double value;
  if (u <= a1) {
    value = u;
  } else if (u >= l - a1) {
    value = l - u;
  } else {
    const double r = 1.0 - u / (l / 2.0);
    value = alpha * l / 2.0 *
            std::sqrt(std::max(0.0, 1.0 - r * r / (1.0 - alpha * alpha)));
  }
  return sign * value;
}

double W_alpha_slope(double alpha, double L, double x) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    fail(ErrorKind::OutOfRange, "alpha must lie in [0,1]");
  const double l = 0.5 * L;
  double sign;
  const double u = fold(x, L, sign);
  if (alpha == 0.0) return 0.0;
  const double a1 = alpha * alpha * l / 2.0;
  if (u >= l - a1) return -1.0;
  if (u <= a1) return 1.0;
  const double r = 1.0 - u / (l / 2.0);
  const double root =
      std::sqrt(std::max(1e-300, 1.0 - r * r / (1.0 - alpha * alpha)));
  return alpha / root * r / (1.0 - alpha * alpha);
}

GridFunction big_W_alpha(double alpha, double L, std::size_t n) {
  return GridFunction::sample(
      L, n, [&](double x) { return W_alpha_value(alpha, L, x); });
}

double alpha_at(const SharpFamily& family, double t) {
  if (!(t >= 0.0 && t <= family.T))
    fail(ErrorKind::OutOfTimeRange, "t outside [0, T]");
  return S_inverse(kQuarterPi - family.c * t);
}

double lambda_closed_form(const SharpFamily& family, double t) {
  const double alpha = alpha_at(family, t);
  if (!(alpha > 0.0 && alpha < 1.0))
    fail(ErrorKind::DegenerateState, "lambda is only defined for alpha in (0,1)");
  return family.c / (alpha * std::sqrt(1.0 - alpha * alpha));
}

double lambda_integral_form(double alpha, const MixParams& params) {
  const double F = extremizer_F_dense(alpha, params.L);
  if (!(F > 1e-14))
    fail(ErrorKind::DegenerateState, "integral lambda undefined: F(w) ~ 0");
  return std::sqrt(params.E / std::pow(params.L, params.d - 1)) / std::sqrt(F);
}

SubsolutionSnapshot snapshot_at(double t, const SharpFamily& family,
                                std::size_t n) {
  check_interior_time(t, family.T);
  const double alpha = alpha_at(family, t);
  const double L = family.params.L;

  const double lambda = lambda_closed_form(family, t);
  const double lambda_int = lambda_integral_form(alpha, family.params);
  if (std::abs(lambda - lambda_int) > 1e-6)
    fail(ErrorKind::ConstraintViolation,
         "integral and closed-form lambda disagree: " +
             std::to_string(lambda) + " vs " + std::to_string(lambda_int));

  auto [w, rho] = build_w_grid(alpha, L, n);
  std::vector<double> m1(n), e(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double slack = 1.0 - rho[j] * rho[j];
    m1[j] = lambda * slack * w[j];
    e[j] = lambda * lambda * slack * w[j] * w[j];
  }
  return SubsolutionSnapshot{t,
                             std::move(rho),
                             GridFunction(L, std::move(m1)),
                             GridFunction(L, std::move(e)),
                             std::move(w),
                             lambda,
                             alpha};
}

double verify_hamilton_jacobi(const SharpFamily& family, double t,
                              std::size_t n, double dt_frac) {
  check_interior_time(t, family.T);
  const double dt = dt_frac * family.T;
  if (!(t - dt > 0.0 && t + dt < family.T))
    fail(ErrorKind::OutOfTimeRange, "t too close to the endpoints for dt");

  const double L = family.params.L;
  const double l = 0.5 * L;
  const double alpha0 = alpha_at(family, t);
  const double alpha_p = alpha_at(family, t + dt);
  const double alpha_m = alpha_at(family, t - dt);
  const double lambda = lambda_closed_form(family, t);

  // Substitution identity tau_dot = lambda with tau = -log alpha. The third
  // derivative of log alpha grows like c^3/alpha^3 towards the mixed state,
  // so this check scales its difference step with alpha^{3/2} to keep the
  // truncation error below the 1e-8 target at every interior time.
  const double dt_tau =
      std::min(dt, 1e-4 * std::pow(alpha0, 1.5) / rate_constant(family.params));
  const double tau_dot = -(std::log(alpha_at(family, t + dt_tau)) -
                           std::log(alpha_at(family, t - dt_tau))) /
                         (2.0 * dt_tau);
  if (std::abs(tau_dot - lambda) > 1e-8)
    fail(ErrorKind::ConstraintViolation,
         "tau_dot deviates from lambda by " + std::to_string(tau_dot - lambda));

  const auto grid = build_w_grid(alpha0, L, n);
  const double dx = grid.w.dx();
  // The seams move with alpha; stay 2 cells clear of their extreme positions.
  const double a1 = std::max(alpha_m * alpha_m, alpha0 * alpha0) * l / 2.0 + 2.0 * dx;
  const double a2 = l - a1;

  double residual = 0.0;
  double sign;
  for (std::size_t j = 0; j < n; ++j) {
    const double u = fold(grid.w.x(j), L, sign);
    if (!(u > a1 && u < a2)) continue;
    const double x = grid.w.x(j);
    const double dwdt = (W_alpha_value(alpha_p, L, x) - W_alpha_value(alpha_m, L, x)) /
                        (2.0 * dt);
    const double wx = grid.rho[j];
    residual = std::max(
        residual, std::abs(dwdt + lambda * (1.0 - wx * wx) * grid.w[j]));
  }
  return residual;
}

double weak_form_residual(const SharpFamily& family,
                          const SpaceTimeTestFunction& psi, std::size_t n,
                          std::size_t nt) {
  if (nt < 2 || n < 2) fail(ErrorKind::InvalidArgument, "need nt, n >= 2");
  const double L = family.params.L;
  const double T = family.T;
  const double dt = T / static_cast<double>(nt);
  const double dx = L / static_cast<double>(n);

  double total = 0.0;
  for (std::size_t i = 1; i < nt; ++i) {  // psi vanishes near t = 0 and t = T
    const double t = dt * static_cast<double>(i);
    const double alpha = alpha_at(family, t);
    if (!(alpha > 0.0 && alpha < 1.0)) continue;
    const double lambda = lambda_closed_form(family, t);
    double slab = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double x = -0.5 * L + dx * static_cast<double>(j);
      const double rho = W_alpha_slope(alpha, L, x);
      const double m1 = lambda * (1.0 - rho * rho) * W_alpha_value(alpha, L, x);
      slab += rho * psi.dt(t, x) + m1 * psi.dx(t, x);
    }
    total += slab;
  }
  return std::abs(total * dt * dx);
}

double epsilon_gap_T(double eps, const MixParams& params) {
  if (!(eps > 0.0 && eps < 0.5 * params.E))
    fail(ErrorKind::OutOfRange, "eps must lie in (0, E/2)");
  const MixParams reduced(params.L, params.E - 2.0 * eps, params.d);
  return std::numbers::pi / (4.0 * rate_constant(reduced));
}

SubsolutionSnapshot epsilon_gap_family(double eps, const MixParams& params,
                                       double t, std::size_t n) {
  if (!(eps > 0.0 && eps < 0.5 * params.E))
    fail(ErrorKind::OutOfRange, "eps must lie in (0, E/2)");
  const MixParams reduced(params.L, params.E - 2.0 * eps, params.d);
  const SharpFamily base(reduced);
  check_interior_time(t, base.T);

  const double alpha = alpha_at(base, t);
  const double lambda_m = lambda_closed_form(base, t);
  const double lambda_e =
      lambda_m * std::sqrt((params.E - eps) / (params.E - 2.0 * eps));

  auto [w, rho] = build_w_grid(alpha, params.L, n);
  std::vector<double> m1(n), e(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double slack = 1.0 - rho[j] * rho[j];
    m1[j] = lambda_m * slack * w[j];
    e[j] = lambda_e * lambda_e * slack * w[j] * w[j];
  }
  return SubsolutionSnapshot{t,
                             std::move(rho),
                             GridFunction(params.L, std::move(m1)),
                             GridFunction(params.L, std::move(e)),
                             std::move(w),
                             lambda_m,
                             alpha};
}

double gamma_of(const SubsolutionSnapshot& snapshot, double eps,
                const MixParams& params) {
  const double l = 0.5 * params.L;
  const double lambda_m = snapshot.lambda;
  return 5.0 * params.E / (4.0 * (params.E - 2.0 * eps)) * lambda_m * lambda_m *
         snapshot.alpha * snapshot.alpha * l * l;
}

double gamma_certificate(const SubsolutionSnapshot& snapshot, double eps,
                         const MixParams& params) {
  const double L = params.L;
  const double l = 0.5 * L;
  const double a1 = snapshot.alpha * snapshot.alpha * l / 2.0;
  const double a2 = l - a1;
  const double gamma = gamma_of(snapshot, eps, params);

  double margin = std::numeric_limits<double>::infinity();
  bool any = false;
  double sign;
  for (std::size_t j = 0; j < snapshot.rho.size(); ++j) {
    const double u = fold(snapshot.rho.x(j), L, sign);
    if (!(u > a1 && u < a2)) continue;
    const double slack = 1.0 - snapshot.rho[j] * snapshot.rho[j];
    if (!(slack > 0.0)) continue;
    const double ratio = snapshot.m1[j] / slack;
    any = true;
    margin = std::min(margin, gamma - (4.0 * ratio * ratio + snapshot.e[j]));
  }
  if (!any)
    fail(ErrorKind::EmptyMixingZone, "no grid points inside the mixing zone");
  return margin;
}

}  // namespace mixlab
