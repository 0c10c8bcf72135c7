#pragma once

#include <functional>

#include "mixlab/bounds.hpp"
#include "mixlab/torus_field.hpp"
#include "mixlab/variational.hpp"

namespace mixlab {

/// The explicit mixing family: parameters, rate constant
/// c = 2^{-1/2} E^{1/2} L^{-(d-1)/2} / h_max and mixing time T = pi/(4c).
struct SharpFamily {
  MixParams params;
  double c;
  double T;

  explicit SharpFamily(const MixParams& p)
      : params(p), c(rate_constant(p)), T(0.0) {
    T = std::numbers::pi / (4.0 * c);
  }
};

/// Time-stamped averaged state (rho, m1, e, w, lambda, alpha).
struct SubsolutionSnapshot {
  double t;
  GridFunction rho;
  GridFunction m1;
  GridFunction e;
  GridFunction w;
  double lambda;
  double alpha;
};

/// Periodic profile W^alpha: identity on [0, alpha^2 l/2], circular arc in
/// the middle, reflection l - x near l, extended oddly and L-periodically.
double W_alpha_value(double alpha, double L, double x);
double W_alpha_slope(double alpha, double L, double x);
GridFunction big_W_alpha(double alpha, double L, std::size_t n);

double alpha_at(const SharpFamily& family, double t);
double lambda_closed_form(const SharpFamily& family, double t);

/// lambda through the defining integral (E/L^{d-1})^{1/2} F(w)^{-1/2}, with
/// F evaluated by dense quadrature of the analytic profile.
double lambda_integral_form(double alpha, const MixParams& params);

/// Full averaged state at an interior time. rho = w_x is differenced one
/// sided within each analytic region, never across the seams; the stored
/// lambda is the closed form, cross-checked against the integral form to
/// 1e-6 before the snapshot is returned.
SubsolutionSnapshot snapshot_at(double t, const SharpFamily& family,
                                std::size_t n);

/// Sup over the interior of the arc region of |dw/dt + lambda (1-w_x^2) w|
/// with a centered time difference of the profile (step dt_frac * T) and
/// sampled spatial chords. Also checks d(-log alpha)/dt = lambda to 1e-8.
double verify_hamilton_jacobi(const SharpFamily& family, double t,
                              std::size_t n, double dt_frac = 1e-5);

/// Smooth space-time test function with its two partial derivatives.
struct SpaceTimeTestFunction {
  std::function<double(double t, double x)> value;
  std::function<double(double t, double x)> dt;
  std::function<double(double t, double x)> dx;
};

/// |int int rho dpsi/dt + m1 dpsi/dx dx dt| by tensor-product quadrature on
/// an (nt+1) x n grid; psi must vanish near t = 0 and t = T.
double weak_form_residual(const SharpFamily& family,
                          const SpaceTimeTestFunction& psi, std::size_t n,
                          std::size_t nt);

/// Mixing time of the strict family, T_eps = h_max (L^{d-1}/(E-2 eps))^{1/2} sqrt(2) pi/4.
double epsilon_gap_T(double eps, const MixParams& params);

/// Strict subsolution of the eps-gap construction: the profile and momentum
/// run at reduced energy E - 2 eps while the energy density runs at E - eps,
/// so the hull inequality is strict on the mixing zone and the total energy
/// integrates to E - eps. The stored lambda is the momentum factor.
SubsolutionSnapshot epsilon_gap_family(double eps, const MixParams& params,
                                       double t, std::size_t n);

/// gamma(t) = 5E/(4(E-2eps)) * lambda_m^2 alpha^2 l^2 for the snapshot.
double gamma_of(const SubsolutionSnapshot& snapshot, double eps,
                const MixParams& params);

/// Minimum over mixing-zone grid points of gamma(t) - (4 m1^2/(1-rho^2)^2 + e);
/// strictly positive for the eps-gap family.
double gamma_certificate(const SubsolutionSnapshot& snapshot, double eps,
                         const MixParams& params);

}  // namespace mixlab
