#include "mixlab/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mixlab {

namespace {

// A piecewise-linear function given by its breakpoints; xs strictly
// increasing. All rearrangement algebra below is exact on this
// representation, floating-point rounding aside.
struct Polyline {
  std::vector<double> xs;
  std::vector<double> ys;

  double eval(double x) const {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double dx = xs[i + 1] - xs[i];
    if (dx <= 0.0) return ys[i];
    const double s = (x - xs[i]) / dx;
    return ys[i] + s * (ys[i + 1] - ys[i]);
  }
};

// Inverse of a strictly increasing polyline: swap the roles of x and y,
// dropping zero-width steps that floating point may have produced.
Polyline invert(const Polyline& f) {
  Polyline g;
  g.xs.reserve(f.xs.size());
  g.ys.reserve(f.xs.size());
  for (std::size_t i = 0; i < f.xs.size(); ++i) {
    if (!g.xs.empty() && !(f.ys[i] > g.xs.back())) continue;
    g.xs.push_back(f.ys[i]);
    g.ys.push_back(f.xs[i]);
  }
  return g;
}

// g_*(x) = -g(-x).
Polyline point_flip(const Polyline& g) {
  Polyline r;
  const std::size_t n = g.xs.size();
  r.xs.resize(n);
  r.ys.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.xs[i] = -g.xs[n - 1 - i];
    r.ys[i] = -g.ys[n - 1 - i];
  }
  return r;
}

std::vector<double> merge_grids(const std::vector<double>& a,
                                const std::vector<double>& b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end(),
                        [](double x, double y) { return !(y > x); }),
            out.end());
  return out;
}

// Core odd rearrangement on the polyline level: inverse of
// (f^{-1} + (f^{-1})_*) / 2. Requires strictly increasing ys with
// ys.front() = -ys.back(); a sub-tolerance imbalance is split evenly.
Polyline polyline_odd_rearrangement(Polyline f) {
  const double shift = 0.5 * (f.ys.front() + f.ys.back());
  for (double& y : f.ys) y -= shift;

  const Polyline inv = invert(f);
  const Polyline inv_flipped = point_flip(inv);

  Polyline g;
  g.xs = merge_grids(inv.xs, inv_flipped.xs);
  g.ys.reserve(g.xs.size());
  for (double y : g.xs)
    g.ys.push_back(0.5 * inv.eval(y) + 0.5 * inv_flipped.eval(y));
  return invert(g);
}

std::vector<std::size_t> zigzag_order(std::size_t count, std::size_t center,
                                      std::size_t modulus) {
  std::vector<std::size_t> order;
  order.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const long off = (k % 2 == 1) ? static_cast<long>((k + 1) / 2)
                                  : -static_cast<long>(k / 2);
    long idx = static_cast<long>(center) + off;
    idx %= static_cast<long>(modulus);
    if (idx < 0) idx += static_cast<long>(modulus);
    order.push_back(static_cast<std::size_t>(idx));
  }
  return order;
}

}  // namespace

CompactFunction::CompactFunction(double half_width, std::vector<double> values)
    : half_width_(half_width), values_(std::move(values)) {
  if (!(half_width_ > 0.0))
    fail(ErrorKind::InvalidArgument, "CompactFunction: half width must be positive");
  const std::size_t n = values_.size() - 1;
  if (values_.size() < 17 || n % 2 != 0)
    fail(ErrorKind::InvalidArgument,
         "CompactFunction: need an even cell count >= 16, got " + std::to_string(n));
  for (double v : values_)
    if (!std::isfinite(v))
      fail(ErrorKind::InvalidArgument, "CompactFunction: non-finite sample");
}

double CompactFunction::interp(double x) const {
  const double a = half_width_;
  if (x <= -a) return values_.front();
  if (x >= a) return values_.back();
  const double h = dx();
  const double pos = (x + a) / h;
  std::size_t i = static_cast<std::size_t>(pos);
  i = std::min(i, cells() - 1);
  const double s = pos - static_cast<double>(i);
  return values_[i] + s * (values_[i + 1] - values_[i]);
}

CompactFunction CompactFunction::sample(double half_width, std::size_t n,
                                        const std::function<double(double)>& f) {
  std::vector<double> values(n + 1);
  const double h = 2.0 * half_width / static_cast<double>(n);
  for (std::size_t j = 0; j <= n; ++j)
    values[j] = f(-half_width + static_cast<double>(j) * h);
  return CompactFunction(half_width, std::move(values));
}

double pl_integral(const CompactFunction& f) {
  const double h = f.dx();
  double sum = 0.0;
  for (std::size_t j = 0; j < f.cells(); ++j) sum += 0.5 * (f[j] + f[j + 1]);
  return sum * h;
}

double pl_integral_sq(const CompactFunction& f) {
  const double h = f.dx();
  double sum = 0.0;
  for (std::size_t j = 0; j < f.cells(); ++j) {
    const double a = f[j], b = f[j + 1];
    sum += (a * a + a * b + b * b) / 3.0;
  }
  return sum * h;
}

double pl_dirichlet_f2(const CompactFunction& f) {
  const double h = f.dx();
  double sum = 0.0;
  for (std::size_t j = 0; j < f.cells(); ++j) {
    const double a = f[j], b = f[j + 1];
    const double s = (b - a) / h;
    sum += s * s * (a * a + a * b + b * b) / 3.0;
  }
  return sum * h;
}

double grid_lp_pth_power(const CompactFunction& f, int p) {
  if (p < 1) fail(ErrorKind::InvalidArgument, "p must be >= 1");
  double sum = 0.0;
  for (double v : f.values()) sum += std::pow(std::abs(v), p);
  return sum * 2.0 * f.half_width() / static_cast<double>(f.values().size());
}

double lipschitz_seminorm(const CompactFunction& f) {
  const double inv_h = 1.0 / f.dx();
  double worst = 0.0;
  for (std::size_t j = 0; j < f.cells(); ++j)
    worst = std::max(worst, std::abs(f[j + 1] - f[j]) * inv_h);
  return worst;
}

CompactFunction symmetric_decreasing(const CompactFunction& f) {
  for (double v : f.values())
    if (v < -1e-12)
      fail(ErrorKind::NegativeInput, "symmetric rearrangement needs f >= 0");

  std::vector<double> sorted = f.values();
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());

  const std::size_t count = f.values().size();
  std::vector<double> placed(count, 0.0);
  const auto order = zigzag_order(count, f.cells() / 2, count);
  for (std::size_t k = 0; k < count; ++k) placed[order[k]] = sorted[k];
  return CompactFunction(f.half_width(), std::move(placed));
}

GridFunction symmetric_competitor(const GridFunction& w) {
  if (std::abs(mean(w)) > kMeanTolerance)
    fail(ErrorKind::ConstraintViolation, "competitor input must have zero mean");
  if (lipschitz_seminorm(w) > 1.0 + 1e-9)
    fail(ErrorKind::ConstraintViolation, "competitor input must be 1-Lipschitz");

  const std::size_t n = w.size();

  // Rotate a sample of minimal modulus to the domain edge; this plays the
  // role of the translation making w(+-L/2) = 0 and is an exact cyclic
  // permutation of the values.
  std::size_t j0 = 0;
  for (std::size_t j = 1; j < n; ++j)
    if (std::abs(w[j]) < std::abs(w[j0])) j0 = j;

  std::vector<double> pos(n), neg(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = w[(i + j0) % n];
    pos[i] = std::max(u, 0.0);
    neg[i] = std::max(-u, 0.0);
  }

  auto zigzag = [n](std::vector<double> vals) {
    std::sort(vals.begin(), vals.end(), std::greater<double>());
    std::vector<double> placed(n, 0.0);
    const auto order = zigzag_order(n, n / 2, n);
    for (std::size_t k = 0; k < n; ++k) placed[order[k]] = vals[k];
    return placed;
  };
  const std::vector<double> vp = zigzag(std::move(pos));
  const std::vector<double> vm = zigzag(std::move(neg));

  // v(x) = v_+(x) - v_-(x - L/2) - v_-(x + L/2); on the periodic grid both
  // shifts coincide with a half-period rotation.
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = vp[i] - vm[(i + n / 2) % n];
  return GridFunction(w.period(), std::move(out));
}

CompactFunction odd_rearrangement(const CompactFunction& f) {
  const std::size_t n = f.cells();
  const double h = f.dx();
  double min_slope = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j)
    min_slope = std::min(min_slope, (f[j + 1] - f[j]) / h);
  if (!(min_slope >= 1e-9))
    fail(ErrorKind::NotIncreasing, "odd rearrangement needs min slope >= 1e-9");
  if (std::abs(f.front() + f.back()) > 1e-9)
    fail(ErrorKind::NotAntiBalanced, "odd rearrangement needs f(-a) = -f(a)");

  Polyline p;
  p.xs.resize(n + 1);
  p.ys = f.values();
  for (std::size_t j = 0; j <= n; ++j) p.xs[j] = f.x(j);

  const Polyline out = polyline_odd_rearrangement(std::move(p));
  std::vector<double> samples(n + 1);
  for (std::size_t j = 0; j <= n; ++j) samples[j] = out.eval(f.x(j));
  return CompactFunction(f.half_width(), std::move(samples));
}

CompactFunction odd_competitor(const CompactFunction& w, std::size_t n_out) {
  const std::size_t n = w.cells();
  const double a = w.half_width();
  const double h = w.dx();
  if (n_out == 0) n_out = n;
  if (n_out % 2 != 0)
    fail(ErrorKind::InvalidArgument, "odd_competitor: n_out must be even");

  double min_slope = std::numeric_limits<double>::infinity();
  double max_slope = -min_slope;
  for (std::size_t j = 0; j < n; ++j) {
    const double s = (w[j + 1] - w[j]) / h;
    min_slope = std::min(min_slope, s);
    max_slope = std::max(max_slope, s);
  }
  if (min_slope < -1e-9 || max_slope > 1.0 + 1e-9)
    fail(ErrorKind::ConstraintViolation, "odd_competitor: slopes must lie in [0,1]");
  if (std::abs(pl_integral(w)) > 1e-8 * std::max(1.0, a * a))
    fail(ErrorKind::ConstraintViolation, "odd_competitor: input must have zero mean");

  auto resample = [&](const Polyline& p) {
    std::vector<double> samples(n_out + 1);
    const double hh = 2.0 * a / static_cast<double>(n_out);
    for (std::size_t j = 0; j <= n_out; ++j)
      samples[j] = p.eval(-a + static_cast<double>(j) * hh);
    return CompactFunction(a, std::move(samples));
  };

  Polyline base;
  base.xs.resize(n + 1);
  base.ys = w.values();
  for (std::size_t j = 0; j <= n; ++j) base.xs[j] = w.x(j);

  // Already in the w(0) = 0 class: nothing to do.
  if (std::abs(w.at_origin()) <= 1e-12) return resample(base);

  // Balance point: first root of g(x) = w(x) + w(-x) on (0, a]. g is
  // piecewise linear on the half grid, so the root inside the sign-change
  // cell is exact.
  const std::size_t c = n / 2;
  double x0 = -1.0;
  double g_prev = 2.0 * w.at_origin();
  for (std::size_t k = 1; k <= c; ++k) {
    const double g_k = w[c + k] + w[c - k];
    if (g_prev * g_k <= 0.0) {
      const double xl = static_cast<double>(k - 1) * h;
      x0 = (g_k == g_prev) ? xl : xl + h * g_prev / (g_prev - g_k);
      if (x0 <= 0.0) x0 = std::min(static_cast<double>(k) * h, a);
      break;
    }
    g_prev = g_k;
  }
  if (x0 <= 0.0)
    fail(ErrorKind::NoBalancePoint, "no sign change of w(x) + w(-x) found");

  // Tilt by eps*x so the restriction is strictly increasing. eps only has
  // to clear the slope floor; the polyline inversion is exact, so it can
  // stay far below the contract tolerances.
  double eps = 1e-12;
  if (min_slope < 0.0) eps = std::max(eps, -2.0 * min_slope);

  Polyline tilted = base;
  for (std::size_t j = 0; j <= n; ++j) tilted.ys[j] += eps * tilted.xs[j];

  Polyline restricted;
  restricted.xs.push_back(-x0);
  restricted.ys.push_back(tilted.eval(-x0));
  for (std::size_t j = 0; j <= n; ++j) {
    if (tilted.xs[j] > -x0 && tilted.xs[j] < x0) {
      restricted.xs.push_back(tilted.xs[j]);
      restricted.ys.push_back(tilted.ys[j]);
    }
  }
  restricted.xs.push_back(x0);
  restricted.ys.push_back(tilted.eval(x0));

  const Polyline inner = polyline_odd_rearrangement(std::move(restricted));

  Polyline pasted;
  for (std::size_t j = 0; j <= n; ++j) {
    if (tilted.xs[j] >= -x0) break;
    pasted.xs.push_back(tilted.xs[j]);
    pasted.ys.push_back(tilted.ys[j]);
  }
  for (std::size_t j = 0; j < inner.xs.size(); ++j) {
    pasted.xs.push_back(inner.xs[j]);
    pasted.ys.push_back(inner.ys[j]);
  }
  for (std::size_t j = 0; j <= n; ++j) {
    if (tilted.xs[j] <= x0) continue;
    pasted.xs.push_back(tilted.xs[j]);
    pasted.ys.push_back(tilted.ys[j]);
  }
  return resample(pasted);
}

}  // namespace mixlab
