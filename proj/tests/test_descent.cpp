#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mixlab/bounds.hpp"
#include "mixlab/descent.hpp"
#include "mixlab/subsolution.hpp"
#include "mixlab/variational.hpp"

using namespace mixlab;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("lambda_of_state values and degeneracies") {
  const MixParams params(2.0 * pi, 1.0, 2);
  const double L = params.L;

  // At the explicit profile, lambda = c / (alpha sqrt(1 - alpha^2)).
  const double alpha = 0.6;
  const GridFunction w = big_W_alpha(alpha, L, 1 << 14);
  const double c = rate_constant(params);
  CHECK(lambda_of_state(w, params) ==
        doctest::Approx(c / (alpha * std::sqrt(1.0 - alpha * alpha))).epsilon(1e-6));

  // Triangle wave: slopes +-1 a.e., so F vanishes and lambda is undefined.
  const GridFunction tri = big_W_alpha(1.0, L, 1024);
  CHECK(functional_F_pl(tri) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(lambda_of_state(tri, params), Error);

  const GridFunction zero = GridFunction::sample(L, 64, [](double) { return 0.0; });
  CHECK_THROWS_AS(lambda_of_state(zero, params), Error);
}

TEST_CASE("w = 0 is a fixed point of the step") {
  const MixParams params(2.0 * pi, 1.0, 2);
  const GridFunction zero = GridFunction::sample(params.L, 64, [](double) { return 0.0; });
  const EvolutionState state = evolution_state_from_w(0.0, zero, params);
  CHECK(state.lambda == 0.0);
  const EvolutionState next = step_hamilton_jacobi(state, 1e-4, params);
  CHECK(next.t == doctest::Approx(1e-4));
  for (std::size_t j = 0; j < next.w.size(); ++j) CHECK(next.w[j] == 0.0);

  // Degenerate but nonzero states are refused.
  const GridFunction tri = big_W_alpha(1.0, params.L, 256);
  const EvolutionState degenerate = evolution_state_from_w(0.0, tri, params);
  CHECK(degenerate.lambda == 0.0);
  CHECK_THROWS_AS(step_hamilton_jacobi(degenerate, 1e-4, params), Error);
}

TEST_CASE("one step stays near the exact family") {
  const MixParams params(2.0 * pi, 1.0, 2);
  const SharpFamily family(params);
  const std::size_t n = 1024;
  const double t0 = (pi / 4.0 - S(0.7)) / family.c;

  const GridFunction w0 = big_W_alpha(alpha_at(family, t0), params.L, n);
  EvolutionState state = evolution_state_from_w(t0, w0, params);

  const double dt = 1e-4;
  const EvolutionState next = step_hamilton_jacobi(state, dt, params);

  const GridFunction w_exact = big_W_alpha(alpha_at(family, t0 + dt), params.L, n);
  double sup = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    sup = std::max(sup, std::abs(next.w[j] - w_exact[j]));
  CHECK(sup < 10.0 * (dt * dt + dt * w0.dx()));

  // CFL violation is rejected.
  CHECK_THROWS_AS(step_hamilton_jacobi(state, 1.0, params), Error);

  // Mass conservation: rho keeps exact zero mean, w keeps zero mean.
  CHECK(std::abs(mean(next.rho)) < 1e-14);
  CHECK(std::abs(mean(next.w)) < 1e-14);
  CHECK(next.h == doctest::Approx(l2_norm(next.w)).epsilon(1e-14));
}

TEST_CASE("step convergence order on the exact family") {
  const MixParams params(2.0 * pi, 1.0, 2);
  const SharpFamily family(params);
  const double t0 = (pi / 4.0 - S(0.7)) / family.c;
  const double t1 = t0 + 0.05;

  auto error_at = [&](std::size_t n) {
    GridFunction w = big_W_alpha(alpha_at(family, t0), params.L, n);
    EvolutionState state = evolution_state_from_w(t0, w, params);
    const double dt = 0.2 * state.w.dx();  // fixed ratio dt/dx
    double t = t0;
    while (t + dt <= t1) {
      state = step_hamilton_jacobi(state, dt, params);
      t += dt;
    }
    const GridFunction exact = big_W_alpha(alpha_at(family, t), params.L, n);
    double sup = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      sup = std::max(sup, std::abs(state.w[j] - exact[j]));
    return sup;
  };

  const double e_512 = error_at(512);
  const double e_1024 = error_at(1024);
  CHECK(e_1024 < e_512 / 1.8);
}

TEST_CASE("evolution from smooth data respects the lower bound and decays") {
  const MixParams params(2.0 * pi, 1.0, 2);
  const std::size_t n = 512;
  const GridFunction rho0 = GridFunction::sample(
      params.L, n, [&](double x) { return 0.9 * std::sin(2.0 * pi * x / params.L); });

  EvolveOptions options;
  options.snapshot_stride = 8;
  const double h_stop = 0.05 * h_max(params.L);
  const EvolveResult run = evolve_to_mixed(rho0, params, h_stop, options);

  CHECK(run.stop_time > 0.0);
  CHECK(run.states.size() >= 3);

  // h decays monotonically (within a tiny slack per step).
  for (std::size_t i = 1; i < run.states.size(); ++i)
    CHECK(run.states[i].h <= run.states[i - 1].h + 1e-8);

  // Slope bound is preserved within scheme drift.
  for (const auto& s : run.states)
    CHECK(lipschitz_seminorm(s.w) <= 1.0 + 1e-3);

  // Telemetry h = ||w||_2 agrees with the mixing norm of rho = w_x.
  for (std::size_t i = 0; i < run.states.size(); i += 7) {
    const auto& s = run.states[i];
    CHECK(hminus1_norm_1d(s.rho) == doctest::Approx(s.h).epsilon(1e-3));
  }

  // The decay identity holds along the trajectory at first order.
  const double residual = verify_steepest_descent_identity(run.states);
  CHECK(residual < 0.1);

  // Theorem-level sanity: the time to reach q_stop from q0 is at least
  // (S(alpha(q0)) - S(alpha(q_stop)))/c for any subsolution.
  const double q0 = hminus1_norm_lift(rho0, params) / H_max(params);
  const double q_stop = h_stop / h_max(params.L);
  const double bound =
      (S(alpha_of_r(q0)) - S(alpha_of_r(q_stop))) / rate_constant(params);
  CHECK(run.stop_time >= bound * 0.98);
}

TEST_CASE("square-wave run at n = 1024 keeps the slope bound and decays") {
  const MixParams params(2.0 * pi, 1.0, 2);
  const GridFunction rho0 = GridFunction::square_wave(params.L, 1024);
  EvolveOptions opts;
  opts.snapshot_stride = 16;
  const EvolveResult run =
      evolve_to_mixed(rho0, params, 0.01 * h_max(params.L), opts);
  for (const auto& s : run.states)
    CHECK(lipschitz_seminorm(s.w) <= 1.0 + 1e-3);
  for (std::size_t i = 1; i < run.states.size(); ++i)
    CHECK(run.states[i].h <= run.states[i - 1].h + 1e-8);
}

TEST_CASE("zero datum stops immediately") {
  const MixParams params(2.0 * pi, 1.0, 2);
  const GridFunction zero = GridFunction::sample(params.L, 64, [](double) { return 0.0; });
  const EvolveResult run = evolve_to_mixed(zero, params, 0.01, {});
  CHECK(run.stop_time == 0.0);
  CHECK(run.steps == 0);
}

TEST_CASE("degenerate non-square data is refused") {
  const MixParams params(2.0 * pi, 1.0, 2);
  // A two-period square pattern has |rho| = 1 a.e. and F(w) = 0, but it is
  // not a translate of the balanced square wave, so the analytic start does
  // not apply and the flow must refuse it.
  const std::size_t n = 256;
  std::vector<double> vals(n);
  for (std::size_t j = 0; j < n; ++j)
    vals[j] = (j / (n / 4)) % 2 == 0 ? 1.0 : -1.0;
  const GridFunction two_period(params.L, vals);
  CHECK_THROWS_AS(evolve_to_mixed(two_period, params, 1e-6, {}), Error);
}

TEST_CASE("steepest descent identity on a stationary zero family") {
  const MixParams params(2.0 * pi, 1.0, 2);
  const GridFunction zero = GridFunction::sample(params.L, 64, [](double) { return 0.0; });
  std::vector<EvolutionState> states;
  for (int k = 0; k < 4; ++k)
    states.push_back(evolution_state_from_w(0.1 * k, zero, params));
  CHECK(verify_steepest_descent_identity(states) == 0.0);
}

TEST_CASE("identity residual of the simulated run refines with the grid") {
  // Away from the start and stop transients the residual is first order in
  // the grid, so doubling n drops it by well over 1.5x.
  const MixParams params(2.0 * pi, 1.0, 2);
  auto mid_residual = [&](std::size_t n) {
    const GridFunction rho0 = GridFunction::square_wave(params.L, n);
    EvolveOptions opts;
    opts.snapshot_stride = 8;
    const EvolveResult run =
        evolve_to_mixed(rho0, params, 0.01 * h_max(params.L), opts);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < run.states.size(); ++i) {
      const auto& prev = run.states[i - 1];
      const auto& cur = run.states[i];
      const auto& next = run.states[i + 1];
      if (cur.t < 0.15 * run.stop_time || cur.t > 0.85 * run.stop_time) continue;
      const double dh2 =
          (next.h * next.h - prev.h * prev.h) / (next.t - prev.t);
      worst = std::max(worst,
                       std::abs(dh2 + 2.0 * cur.lambda * functional_F(cur.w)));
    }
    return worst;
  };
  const double res_512 = mid_residual(512);
  const double res_1024 = mid_residual(1024);
  CHECK(res_1024 <= res_512 / 1.5);
}

TEST_CASE("steepest descent identity on exact family snapshots") {
  const MixParams params(2.0 * pi, 1.0, 2);
  const SharpFamily family(params);
  const std::size_t n = 2048;

  auto make = [&](double t) {
    return evolution_state_from_w(t, big_W_alpha(alpha_at(family, t), params.L, n),
                                  params);
  };
  const double t_mid = family.T / 2.0;

  std::vector<EvolutionState> states;
  const double dt = 1e-4;
  for (int k = -2; k <= 2; ++k) states.push_back(make(t_mid + k * dt));
  const double coarse = verify_steepest_descent_identity(states);
  CHECK(coarse < 1e-3);

  std::vector<EvolutionState> finer;
  const double dt2 = dt / 4.0;
  for (int k = -2; k <= 2; ++k) finer.push_back(make(t_mid + k * dt2));
  CHECK(verify_steepest_descent_identity(finer) < coarse);

  CHECK_THROWS_AS(verify_steepest_descent_identity({states[0], states[1]}), Error);
}
