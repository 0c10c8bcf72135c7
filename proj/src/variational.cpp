#include "mixlab/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace mixlab {

namespace {

void check_h_range(double h, double L) {
  if (!(L > 0.0)) fail(ErrorKind::OutOfRange, "L must be positive");
  if (!(h >= 0.0 && h <= h_max(L) * (1.0 + 1e-12)))
    fail(ErrorKind::OutOfRange, "h must lie in [0, h_max]");
}

// Periodic cell slopes from the sample values.
std::vector<double> cell_slopes(const GridFunction& w) {
  const std::size_t n = w.size();
  const double inv_dx = 1.0 / w.dx();
  std::vector<double> s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = (w[(j + 1) % n] - w[j]) * inv_dx;
  return s;
}

double cell_sq(double a, double b) { return (a * a + a * b + b * b) / 3.0; }

}  // namespace

double functional_F(const GridFunction& w) {
  const GridFunction wx = derivative_centered(w);
  double sum = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j)
    sum += (1.0 - wx[j] * wx[j]) * w[j] * w[j];
  return sum * w.dx();
}

double functional_F1(const GridFunction& w) {
  const GridFunction wx = derivative_centered(w);
  double sum = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j)
    sum += wx[j] * wx[j] * w[j] * w[j];
  return sum * w.dx();
}

double functional_F2(const CompactFunction& w) {
  const std::size_t n = w.cells();
  const double h = w.dx();
  std::vector<double> wx(n + 1);
  wx[0] = (w[1] - w[0]) / h;
  wx[n] = (w[n] - w[n - 1]) / h;
  for (std::size_t j = 1; j < n; ++j) wx[j] = (w[j + 1] - w[j - 1]) / (2.0 * h);
  double sum = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double weight = (j == 0 || j == n) ? 0.5 : 1.0;
    sum += weight * wx[j] * wx[j] * w[j] * w[j];
  }
  return sum * h;
}

double l2sq_pl(const GridFunction& w) {
  const std::size_t n = w.size();
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) sum += cell_sq(w[j], w[(j + 1) % n]);
  return sum * w.dx();
}

double functional_F_pl(const GridFunction& w) {
  const std::size_t n = w.size();
  const auto s = cell_slopes(w);
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    sum += (1.0 - s[j] * s[j]) * cell_sq(w[j], w[(j + 1) % n]);
  return sum * w.dx();
}

double functional_F1_pl(const GridFunction& w) {
  const std::size_t n = w.size();
  const auto s = cell_slopes(w);
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    sum += s[j] * s[j] * cell_sq(w[j], w[(j + 1) % n]);
  return sum * w.dx();
}

double alpha_of_h(double h, double L) {
  check_h_range(h, L);
  const double r = std::min(1.0, h / h_max(L));
  return std::sqrt(1.0 - std::sqrt(std::max(0.0, 1.0 - r * r)));
}

double w_alpha_value(double alpha, double L, double x) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    fail(ErrorKind::OutOfRange, "alpha must lie in [0,1]");
  const double l = 0.5 * L;
  const double u = std::abs(x);
  const double seam = alpha * alpha * l / 2.0;
  double value;
  if (u <= seam || alpha == 1.0) {
    value = u;
  } else {
    const double r = 1.0 - u / (l / 2.0);
    value = alpha * l / 2.0 *
            std::sqrt(std::max(0.0, 1.0 - r * r / (1.0 - alpha * alpha)));
  }
  return x < 0.0 ? -value : value;
}

double w_alpha_slope(double alpha, double L, double x) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    fail(ErrorKind::OutOfRange, "alpha must lie in [0,1]");
  if (alpha == 0.0) return 0.0;
  const double l = 0.5 * L;
  const double u = std::abs(x);
  const double seam = alpha * alpha * l / 2.0;
  if (u <= seam || alpha == 1.0) return 1.0;
  const double r = 1.0 - u / (l / 2.0);
  const double root =
      std::sqrt(std::max(1e-300, 1.0 - r * r / (1.0 - alpha * alpha)));
  return alpha / root * r / (1.0 - alpha * alpha);
}

CompactFunction extremizer_w_alpha(double alpha, double L, std::size_t n) {
  return CompactFunction::sample(
      0.25 * L, n, [&](double x) { return w_alpha_value(alpha, L, x); });
}

double sup_F_closed_form(double h, double L) {
  check_h_range(h, L);
  const double hm2 = L * L * L / 48.0;
  const double root = std::sqrt(std::max(0.0, 1.0 - h * h / hm2));
  return h * h - hm2 * (1.0 - root) * (1.0 - root);
}

double inf_F2_closed_form(double h, double L) {
  check_h_range(h, L);
  const double hm2 = L * L * L / 48.0;
  const double root = std::sqrt(std::max(0.0, 1.0 - h * h / hm2));
  return 0.5 * hm2 * (1.0 - root) * (1.0 - root);
}

double sup_L2_over_X(double L) {
  if (!(L > 0.0)) fail(ErrorKind::OutOfRange, "L must be positive");
  return L * L * L / 48.0;
}

namespace {

// Periodic extremizer of F over X_h: W^alpha from the sharp construction,
// equal to a translate of the even lift of w^alpha. Uses the symmetry
// W(l - u) = W(u) on [0, l].
GridFunction lifted_extremizer(double alpha, double L, std::size_t n) {
  const double l = 0.5 * L;
  return GridFunction::sample(L, n, [&](double x) {
    double u = std::abs(x);
    const double sign = x < 0.0 ? -1.0 : 1.0;
    if (u > l / 2.0) u = l - u;  // may go negative for |x| > l; W odd there
    return sign * (u >= 0.0 ? w_alpha_value(alpha, L, u)
                            : -w_alpha_value(alpha, L, -u));
  });
}

}  // namespace

double extremizer_F_dense(double alpha, double L) {
  if (alpha <= 0.0 || alpha >= 1.0) return 0.0;
  const double l = 0.5 * L;
  const double a1 = alpha * alpha * l / 2.0;
  const double b1 = l / 2.0;
  auto integrand = [&](double u) {
    const double wv = w_alpha_value(alpha, L, u);
    const double ws = w_alpha_slope(alpha, L, u);
    return (1.0 - ws * ws) * wv * wv;
  };
  const std::size_t panels = 1 << 14;
  const double h = (b1 - a1) / static_cast<double>(2 * panels);
  double sum = integrand(a1) + integrand(b1);
  for (std::size_t j = 1; j < 2 * panels; ++j)
    sum += integrand(a1 + static_cast<double>(j) * h) * (j % 2 == 1 ? 4.0 : 2.0);
  // Four congruent arc pieces per period: odd in x and symmetric about l/2.
  return 4.0 * sum * h / 3.0;
}

VariationalReport certify_supremum(double h, double L, std::size_t n_samples,
                                   std::uint64_t seed, std::size_t n_grid) {
  check_h_range(h, L);
  const double target_sq = h * h;
  const double dx = L / static_cast<double>(n_grid);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> block_count(2, 8);
  std::uniform_int_distribution<std::size_t> cut(0, n_grid - 1);

  VariationalReport report{h,
                           sup_F_closed_form(h, L),
                           -std::numeric_limits<double>::infinity(),
                           GridFunction(L, std::vector<double>(n_grid, 0.0)),
                           0.0,
                           0,
                           0.0};

  // Projection of raw samples onto X_h: exact mean removal, exact L^2
  // rescale, then a strict slope re-check. Everything that survives is a
  // genuine member of X_h as a piecewise-linear function, so its exact F
  // is bounded by the closed form. Returns false on rejection.
  auto project = [&](std::vector<double>& vals) {
    double m = 0.0;
    for (double v : vals) m += v;
    m /= static_cast<double>(n_grid);
    for (double& v : vals) v -= m;
    GridFunction w0(L, vals);
    const double mass = l2sq_pl(w0);
    if (h == 0.0) {
      std::fill(vals.begin(), vals.end(), 0.0);
      return true;
    }
    if (mass <= 0.0) return false;
    const double scale = std::sqrt(target_sq / mass);
    for (double& v : vals) v *= scale;
    GridFunction w1(L, vals);
    // 1e-12 of slope headroom absorbs the rounding of the rescale; it
    // perturbs F by at most 2e-12 * h^2, far under the certification gap.
    return lipschitz_seminorm(w1) <= 1.0 + 1e-12;
  };

  auto consider = [&](const GridFunction& w) {
    const double value = functional_F_pl(w);
    report.violation = std::max(
        {report.violation, std::abs(l2sq_pl(w) - target_sq),
         std::abs(mean(w)), std::max(0.0, lipschitz_seminorm(w) - 1.0)});
    ++report.accepted;
    if (value > report.best_numeric_value) {
      report.best_numeric_value = value;
      report.extremizer = w;
    }
  };

  // Improvement pipeline: symmetric competitor, then the odd-rearrangement
  // reduction on the half-period restriction, each re-projected onto X_h.
  auto improve = [&](const GridFunction& w) {
    GridFunction sym = symmetric_competitor(w);
    std::vector<double> vals = sym.values();
    if (project(vals)) consider(GridFunction(L, vals));

    const std::size_t half = n_grid / 2;
    std::vector<double> restricted(sym.values().begin(),
                                   sym.values().begin() + half + 1);
    CompactFunction s(0.25 * L, std::move(restricted));
    // Shift out the residual mean; the reduced class only constrains slopes.
    const double shift = pl_integral(s) / (0.5 * L);
    std::vector<double> shifted = s.values();
    for (double& v : shifted) v -= shift;
    CompactFunction v0(0.25 * L, std::move(shifted));
    CompactFunction odd = odd_competitor(v0);

    std::vector<double> rebuilt(n_grid);
    for (std::size_t j = 0; j <= half; ++j) rebuilt[j] = odd[j];
    for (std::size_t j = half + 1; j < n_grid; ++j)
      rebuilt[j] = rebuilt[n_grid - j];
    if (project(rebuilt)) consider(GridFunction(L, rebuilt));
  };

  for (std::size_t sample = 0; sample < n_samples; ++sample) {
    const int blocks = block_count(rng);
    std::vector<std::size_t> cuts = {0};
    for (int b = 1; b < blocks; ++b) cuts.push_back(cut(rng));
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> slopes(n_grid);
    std::size_t edge = 0;
    double current = unit(rng);
    for (std::size_t j = 0; j < n_grid; ++j) {
      while (edge + 1 < cuts.size() && j >= cuts[edge + 1]) {
        ++edge;
        current = unit(rng);
      }
      slopes[j] = current;
    }

    // Remove the slope mean so the profile closes up periodically, then
    // renormalize into the unit slope ball before the X_h projection.
    double slope_mean = 0.0;
    for (double s : slopes) slope_mean += s;
    slope_mean /= static_cast<double>(n_grid);
    for (double& s : slopes) s -= slope_mean;

    std::vector<double> vals(n_grid, 0.0);
    for (std::size_t j = 1; j < n_grid; ++j)
      vals[j] = vals[j - 1] + slopes[j - 1] * dx;
    const double lip = lipschitz_seminorm(GridFunction(L, vals));
    if (lip > 1.0)
      for (double& v : vals) v /= lip;

    if (!project(vals)) continue;
    GridFunction w(L, vals);
    consider(w);
    try {
      improve(w);
    } catch (const Error&) {
      // Improvement is best-effort enrichment; a failed pipeline step
      // (e.g. no balance point on a degenerate sample) just skips it.
    }
  }

  // Translates of the sampled extremizer. At h = h_max the triangle wave is
  // grid-exact and these are the only admissible states at all.
  const double alpha = alpha_of_h(h, L);
  const GridFunction lifted = lifted_extremizer(alpha, L, n_grid);
  for (std::size_t r = 0; r < 16; ++r) {
    std::vector<double> rotated(n_grid);
    for (std::size_t j = 0; j < n_grid; ++j)
      rotated[j] = lifted[(j + r * n_grid / 16) % n_grid];
    if (project(rotated)) consider(GridFunction(L, rotated));
  }

  if (report.accepted < 10)
    fail(ErrorKind::SamplingExhausted,
         "only " + std::to_string(report.accepted) + " admissible samples");

  report.extremizer_value = extremizer_F_dense(alpha, L);
  return report;
}

}  // namespace mixlab
