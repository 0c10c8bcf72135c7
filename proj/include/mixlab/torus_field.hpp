#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "mixlab/errors.hpp"

namespace mixlab {

/// Absolute tolerance below which a grid mean counts as zero. Chosen to
/// separate genuine nonzero means from FFT round-off.
inline constexpr double kMeanTolerance = 1e-10;

/// Uniform periodic samples of a real function on the circle of length L.
/// Sample j sits at x_j = -L/2 + j*L/n. n must be a power of two >= 16 so
/// that every spectral operation can run on a plain radix-2 grid.
class GridFunction {
 public:
  GridFunction(double period_L, std::vector<double> values);

  double period() const { return period_L_; }
  std::size_t size() const { return values_.size(); }
  double dx() const { return period_L_ / static_cast<double>(values_.size()); }
  double x(std::size_t j) const {
    return -0.5 * period_L_ + static_cast<double>(j) * dx();
  }

  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }

  /// Sample f at the canonical grid points.
  static GridFunction sample(double period_L, std::size_t n,
                             const std::function<double(double)>& f);

  /// The balanced square wave: +1 on the first half of the samples, -1 on
  /// the second. Jumps fall between grid points, so every sample is exactly
  /// +-1 and the discrete mean is exactly zero.
  static GridFunction square_wave(double period_L, std::size_t n);

 private:
  double period_L_;
  std::vector<double> values_;
};

/// Fourier-coefficient view of a GridFunction with the convention
///   f(x) = sum_k c_k exp(2*pi*i*k*x/L),  c_k = (1/n) sum_j f_j exp(-2*pi*i*k*x_j/L).
/// Coefficients are stored for k = 0..n-1 with k > n/2 meaning k - n.
class SpectralField {
 public:
  SpectralField(double period_L, std::vector<std::complex<double>> coeffs);

  double period() const { return period_L_; }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<std::complex<double>>& coeffs() const { return coeffs_; }
  std::vector<std::complex<double>>& coeffs() { return coeffs_; }

  /// Signed frequency for slot k.
  long signed_index(std::size_t k) const {
    const long n = static_cast<long>(coeffs_.size());
    const long kl = static_cast<long>(k);
    return kl <= n / 2 ? kl : kl - n;
  }

  /// Largest deviation from Hermitian symmetry c_{-k} = conj(c_k).
  double hermitian_defect() const;

 private:
  double period_L_;
  std::vector<std::complex<double>> coeffs_;
};

/// Box side, energy budget and ambient dimension (L, E, d).
struct MixParams {
  double L;
  double E;
  int d;

  MixParams(double L_, double E_, int d_) : L(L_), E(E_), d(d_) {
    if (!(L > 0.0)) fail(ErrorKind::InvalidArgument, "MixParams: L must be positive");
    if (!(E > 0.0)) fail(ErrorKind::InvalidArgument, "MixParams: E must be positive");
    if (d < 2) fail(ErrorKind::InvalidArgument, "MixParams: d must be >= 2");
  }
};

/// Largest H^-1(T) norm of a mean-zero density with |rho| <= 1: L^{3/2}/sqrt(48).
double h_max(double L);

/// d-dimensional lift of h_max: L^{(d+2)/2}/sqrt(48).
double H_max(const MixParams& params);

SpectralField to_spectral(const GridFunction& f);
GridFunction to_grid(const SpectralField& f);

/// Discrete average (1/n) sum_j f_j; exact midpoint quadrature on the circle.
double mean(const GridFunction& f);

/// L^2(T) norm by the midpoint rule.
double l2_norm(const GridFunction& f);

/// Centered-difference derivative with periodic wrap.
GridFunction derivative_centered(const GridFunction& f);

/// Spectral solve of phi'' = rho with mean(phi) = 0. Requires mean(rho) ~ 0.
GridFunction solve_potential(const GridFunction& rho);

/// w = phi_x for the potential of rho, computed spectrally in one pass.
GridFunction potential_derivative(const GridFunction& rho);

/// Mixing norm on the circle: (L sum_{k!=0} |c_k|^2 (L/(2 pi k))^2)^{1/2},
/// equal to the L^2 norm of the potential derivative.
double hminus1_norm_1d(const GridFunction& rho);

/// Mixing norm on the d-torus for one-dimensional data:
/// L^{(d-1)/2} * hminus1_norm_1d.
double hminus1_norm_lift(const GridFunction& rho, const MixParams& params);

/// Discrete sup-slope max_j |f_{j+1} - f_j| / dx with periodic wrap.
double lipschitz_seminorm(const GridFunction& f);

}  // namespace mixlab
