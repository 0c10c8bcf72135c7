#include "mixlab/torus_field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace mixlab {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void check_grid_size(std::size_t n) {
  if (n < 16 || !is_pow2(n))
    fail(ErrorKind::InvalidArgument,
         "grid size must be a power of two >= 16, got " + std::to_string(n));
}

// FFTW's planner is not thread-safe; execution of a plan is. Plans are
// created per call with FFTW_ESTIMATE under a lock, which keeps all
// operations pure and callable from any thread.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& in,
                                      int sign) {
  const std::size_t n = in.size();
  std::vector<std::complex<double>> out(n);
  auto* in_ptr = reinterpret_cast<fftw_complex*>(
      const_cast<std::complex<double>*>(in.data()));
  auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), in_ptr, out_ptr, sign,
                            FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

GridFunction::GridFunction(double period_L, std::vector<double> values)
    : period_L_(period_L), values_(std::move(values)) {
  if (!(period_L_ > 0.0))
    fail(ErrorKind::InvalidArgument, "GridFunction: period must be positive");
  check_grid_size(values_.size());
  for (double v : values_)
    if (!std::isfinite(v))
      fail(ErrorKind::InvalidArgument, "GridFunction: non-finite sample");
}

GridFunction GridFunction::sample(double period_L, std::size_t n,
                                  const std::function<double(double)>& f) {
  check_grid_size(n);
  std::vector<double> values(n);
  const double dx = period_L / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j)
    values[j] = f(-0.5 * period_L + static_cast<double>(j) * dx);
  return GridFunction(period_L, std::move(values));
}

GridFunction GridFunction::square_wave(double period_L, std::size_t n) {
  check_grid_size(n);
  std::vector<double> values(n);
  for (std::size_t j = 0; j < n; ++j) values[j] = j < n / 2 ? 1.0 : -1.0;
  return GridFunction(period_L, std::move(values));
}

SpectralField::SpectralField(double period_L,
                             std::vector<std::complex<double>> coeffs)
    : period_L_(period_L), coeffs_(std::move(coeffs)) {
  if (!(period_L_ > 0.0))
    fail(ErrorKind::InvalidArgument, "SpectralField: period must be positive");
  check_grid_size(coeffs_.size());
}

double SpectralField::hermitian_defect() const {
  const std::size_t n = coeffs_.size();
  double worst = 0.0;
  for (std::size_t k = 1; k < n; ++k)
    worst = std::max(worst, std::abs(coeffs_[k] - std::conj(coeffs_[n - k])));
  worst = std::max(worst, std::abs(coeffs_[0].imag()));
  return worst;
}

double h_max(double L) {
  if (!(L > 0.0)) fail(ErrorKind::InvalidArgument, "h_max: L must be positive");
  return std::pow(L, 1.5) / std::sqrt(48.0);
}

double H_max(const MixParams& params) {
  return std::pow(params.L, 0.5 * (params.d + 2)) / std::sqrt(48.0);
}

SpectralField to_spectral(const GridFunction& f) {
  const std::size_t n = f.size();
  std::vector<std::complex<double>> in(n);
  for (std::size_t j = 0; j < n; ++j) in[j] = f[j];
  auto out = dft(in, FFTW_FORWARD);
  // The grid starts at x = -L/2, so the plain DFT picks up a phase (-1)^k
  // relative to coefficients in the exp(2 pi i k x / L) convention.
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    out[k] *= sign * inv_n;
  }
  return SpectralField(f.period(), std::move(out));
}

GridFunction to_grid(const SpectralField& f) {
  const std::size_t n = f.size();
  std::vector<std::complex<double>> in(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    in[k] = sign * f.coeffs()[k];
  }
  auto out = dft(in, FFTW_BACKWARD);
  std::vector<double> values(n);
  for (std::size_t j = 0; j < n; ++j) values[j] = out[j].real();
  return GridFunction(f.period(), std::move(values));
}

double mean(const GridFunction& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v;
  return sum / static_cast<double>(f.size());
}

double l2_norm(const GridFunction& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v * v;
  return std::sqrt(sum * f.dx());
}

GridFunction derivative_centered(const GridFunction& f) {
  const std::size_t n = f.size();
  const double inv_2dx = 0.5 / f.dx();
  std::vector<double> d(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t jp = (j + 1) % n;
    const std::size_t jm = (j + n - 1) % n;
    d[j] = (f[jp] - f[jm]) * inv_2dx;
  }
  return GridFunction(f.period(), std::move(d));
}

GridFunction solve_potential(const GridFunction& rho) {
  if (std::abs(mean(rho)) > kMeanTolerance)
    fail(ErrorKind::NonZeroMean, "solve_potential requires a mean-zero density");
  SpectralField hat = to_spectral(rho);
  const double L = rho.period();
  const std::size_t n = hat.size();
  hat.coeffs()[0] = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(hat.signed_index(k));
    const double factor = L / (2.0 * std::numbers::pi * kk);
    hat.coeffs()[k] *= -factor * factor;
  }
  return to_grid(hat);
}

GridFunction potential_derivative(const GridFunction& rho) {
  if (std::abs(mean(rho)) > kMeanTolerance)
    fail(ErrorKind::NonZeroMean, "potential_derivative requires a mean-zero density");
  SpectralField hat = to_spectral(rho);
  const double L = rho.period();
  const std::size_t n = hat.size();
  hat.coeffs()[0] = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(hat.signed_index(k));
    const double factor = L / (2.0 * std::numbers::pi * kk);
    hat.coeffs()[k] *= std::complex<double>(0.0, -factor);
  }
  return to_grid(hat);
}

double hminus1_norm_1d(const GridFunction& rho) {
  if (std::abs(mean(rho)) > kMeanTolerance)
    fail(ErrorKind::NonZeroMean, "hminus1_norm_1d requires a mean-zero density");
  const SpectralField hat = to_spectral(rho);
  const double L = rho.period();
  const std::size_t n = hat.size();
  double sum = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(hat.signed_index(k));
    const double factor = L / (2.0 * std::numbers::pi * kk);
    sum += std::norm(hat.coeffs()[k]) * factor * factor;
  }
  return std::sqrt(L * sum);
}

double hminus1_norm_lift(const GridFunction& rho, const MixParams& params) {
  return std::pow(params.L, 0.5 * (params.d - 1)) * hminus1_norm_1d(rho);
}

double lipschitz_seminorm(const GridFunction& f) {
  const std::size_t n = f.size();
  const double inv_dx = 1.0 / f.dx();
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t jp = (j + 1) % n;
    worst = std::max(worst, std::abs(f[jp] - f[j]) * inv_dx);
  }
  return worst;
}

}  // namespace mixlab
