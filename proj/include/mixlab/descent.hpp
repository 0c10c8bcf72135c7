#pragma once

#include <vector>

#include "mixlab/torus_field.hpp"

namespace mixlab {

/// One instant of the steepest-descent evolution. w is the potential
/// derivative, rho = w_x (centered), lambda the saturation factor and h the
/// current mixing norm, equal to the L^2 norm of w.
struct EvolutionState {
  double t;
  GridFunction w;
  GridFunction rho;
  double lambda;
  double h;
};

/// lambda = (E/L^{d-1})^{1/2} F(w)^{-1/2}, with F the exact integral of the
/// piecewise-linear state. Throws DegenerateState when F(w) <= 1e-14, which
/// happens exactly where the saturation factor is only formally defined
/// (|rho| = 1 a.e. or w ~ 0); no regularization is attempted.
double lambda_of_state(const GridFunction& w, const MixParams& params);

/// Assemble a state from w; lambda is set to 0 on degenerate states (used
/// only for terminal records, stepping from them is refused).
EvolutionState evolution_state_from_w(double t, GridFunction w,
                                      const MixParams& params);

/// One explicit step of dw/dt = -lambda [(1 - w_x^2) w - avg((1 - w_x^2) w)]
/// with a local Lax-Friedrichs Hamiltonian and Heun time stepping; lambda is
/// frozen over the step. The mean flux term keeps int w = 0, so rho = w_x
/// keeps exact zero mean and w stays the potential derivative of rho.
/// Throws CflViolation when dt exceeds cfl * dx / nu.
EvolutionState step_hamilton_jacobi(const EvolutionState& state, double dt,
                                    const MixParams& params, double cfl = 0.4);

struct EvolveOptions {
  std::size_t step_budget = 5'000'000;
  double cfl = 0.4;
  std::size_t snapshot_stride = 32;
};

struct EvolveResult {
  double stop_time = 0.0;
  std::vector<EvolutionState> states;
  std::size_t steps = 0;
};

/// Integrate the steepest descent from rho0 until h(t) <= h_stop. For data
/// with |rho0| = 1 a.e. (square-wave translates) the exact lambda blows up
/// at t = 0; the run then starts on the explicit profile at alpha = 1 - 1e-3
/// and the skipped initial sliver enters stop_time analytically. Other
/// degenerate data raise DegenerateState.
EvolveResult evolve_to_mixed(const GridFunction& rho0, const MixParams& params,
                             double h_stop, const EvolveOptions& options = {});

/// Max over interior samples of |d(h^2)/dt + 2 int m1 phi_x dx| with the
/// time derivative by centered differences of consecutive states; the
/// decay-rate identity satisfied along the descent flow.
double verify_steepest_descent_identity(const std::vector<EvolutionState>& states);

}  // namespace mixlab
