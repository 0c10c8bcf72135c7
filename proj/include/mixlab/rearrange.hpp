#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "mixlab/torus_field.hpp"

namespace mixlab {

/// Samples of a function on the compact interval [-a, a]: n + 1 values at
/// x_j = -a + 2 a j / n. n must be even and >= 16 so that x = 0 is a sample.
class CompactFunction {
 public:
  CompactFunction(double half_width, std::vector<double> values);

  double half_width() const { return half_width_; }
  std::size_t cells() const { return values_.size() - 1; }
  double dx() const { return 2.0 * half_width_ / static_cast<double>(cells()); }
  double x(std::size_t j) const {
    return -half_width_ + static_cast<double>(j) * dx();
  }

  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }
  double at_origin() const { return values_[cells() / 2]; }

  /// Value of the piecewise-linear interpolant at any point of [-a, a].
  double interp(double x) const;

  static CompactFunction sample(double half_width, std::size_t n,
                                const std::function<double(double)>& f);

 private:
  double half_width_;
  std::vector<double> values_;
};

/// Exact integrals of the piecewise-linear interpolant. These are the
/// discrete functionals used by the rearrangement contracts: the odd
/// rearrangement is computed exactly on the interpolant, so conservation
/// laws hold for these integrals up to resampling error alone.
double pl_integral(const CompactFunction& f);      // int f dx
double pl_integral_sq(const CompactFunction& f);   // int f^2 dx
double pl_dirichlet_f2(const CompactFunction& f);  // int (f')^2 f^2 dx

/// Riemann sum with equal weights over all samples; invariant under any
/// permutation of the values, hence exact for the sort-based rearrangement.
double grid_lp_pth_power(const CompactFunction& f, int p);

/// Discrete sup-slope of the samples.
double lipschitz_seminorm(const CompactFunction& f);

/// Symmetric decreasing rearrangement: sort the samples in decreasing order
/// and place them at x = 0 first, then alternately right and left. The
/// value multiset is preserved exactly. Requires f >= 0 (tolerance 1e-12).
CompactFunction symmetric_decreasing(const CompactFunction& f);

/// Even, non-increasing-on-[0, L/2) competitor of a mean-zero 1-Lipschitz
/// periodic function: rotate a near-zero sample to the domain edge, split
/// into positive and negative parts, rearrange each, and recombine as
/// v(x) = v_+(x) - v_-(x - L/2) - v_-(x + L/2). The value multiset is
/// preserved, so the midpoint-rule integrals of w^2 and the forward
/// difference Dirichlet integral of w^2/2 never increase.
GridFunction symmetric_competitor(const GridFunction& w);

/// Odd rearrangement of a strictly increasing, anti-balanced function:
/// the inverse of (f^{-1} + (f^{-1})_*) / 2 with g_*(x) = -g(-x). Computed
/// exactly on the piecewise-linear interpolant and sampled back onto the
/// input grid, so the output samples are exact values of the continuum
/// rearrangement of the interpolant.
CompactFunction odd_rearrangement(const CompactFunction& f);

/// Competitor with w(0) = 0 for a function with slopes in [0,1] and zero
/// mean: find a balance point x0 with w(-x0) = -w(x0), tilt by eps*x, odd
/// rearrange on [-x0, x0] and keep w outside. The output is sampled on
/// n_out cells (n_out = 0 keeps the input resolution); the piecewise-linear
/// integrals converge to the conserved values at second order in 1/n_out.
CompactFunction odd_competitor(const CompactFunction& w, std::size_t n_out = 0);

}  // namespace mixlab
