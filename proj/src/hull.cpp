#include "mixlab/hull.hpp"

#include <cmath>
#include <string>

namespace mixlab {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return dot(a, a); }

std::vector<double> axpy(const std::vector<double>& a, double s,
                         const std::vector<double>& b) {
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * b[i];
  return r;
}

// |m - rho v|^2 - (e - |v|^2)(1 - rho^2); zero on K_1.
double k1_defect(const HullPoint& z) {
  const double one_minus = 1.0 - z.rho * z.rho;
  return norm2(axpy(z.m, -z.rho, z.v)) - (z.e - norm2(z.v)) * one_minus;
}

}  // namespace

HullPoint::HullPoint(double rho_, std::vector<double> v_, std::vector<double> m_,
                     double e_)
    : rho(rho_), v(std::move(v_)), m(std::move(m_)), e(e_) {
  if (v.size() != m.size())
    fail(ErrorKind::DimensionMismatch, "HullPoint: v and m dimensions differ");
  if (v.size() < 2)
    fail(ErrorKind::DimensionMismatch, "HullPoint: dimension must be >= 2");
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(rho) || !finite(e))
    fail(ErrorKind::InvalidArgument, "HullPoint: non-finite entry");
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!finite(v[i]) || !finite(m[i]))
      fail(ErrorKind::InvalidArgument, "HullPoint: non-finite entry");
}

bool in_K(const HullPoint& z, double tol) {
  if (tol < 0.0) fail(ErrorKind::InvalidArgument, "tol must be non-negative");
  if (std::abs(z.rho) > 1.0 + tol) return false;
  if (std::sqrt(norm2(axpy(z.m, -z.rho, z.v))) > tol) return false;
  return std::abs(norm2(z.v) - z.e) <= tol;
}

bool in_K_hull(const HullPoint& z, double tol) {
  if (tol < 0.0) fail(ErrorKind::InvalidArgument, "tol must be non-negative");
  const double abs_rho = std::abs(z.rho);
  // Condition (i): the |rho| = 1 face.
  if (std::abs(abs_rho - 1.0) <= tol &&
      std::sqrt(norm2(axpy(z.m, -z.rho, z.v))) <= tol &&
      norm2(z.v) <= z.e + tol)
    return true;
  // Condition (ii): the open slab |rho| < 1.
  if (abs_rho < 1.0 && k1_defect(z) <= tol) return true;
  return false;
}

double zero_velocity_inequality(const HullPoint& z) {
  if (std::abs(z.v[0]) > 1e-12)
    fail(ErrorKind::NonzeroFirstVelocity,
         "slack formula requires v_1 = 0, got " + std::to_string(z.v[0]));
  return z.e * (1.0 - z.rho * z.rho) - z.m[0] * z.m[0];
}

bool in_K_gamma_interior(const HullPoint& z, double gamma, double tol) {
  if (!(gamma > 0.0)) fail(ErrorKind::OutOfRange, "gamma must be positive");
  if (std::sqrt(norm2(z.v)) > 1e-12)
    fail(ErrorKind::NonzeroVelocity, "certificate requires v = 0");
  const double one_minus = 1.0 - z.rho * z.rho;
  if (!(std::abs(z.rho) < 1.0 - tol)) return false;
  if (!(norm2(z.m) < z.e * one_minus - tol)) return false;
  return 4.0 * norm2(z.m) / (one_minus * one_minus) + z.e < gamma - tol;
}

std::pair<HullPoint, HullPoint> k1_segment(const HullPoint& z, double tol) {
  if (tol < 0.0) fail(ErrorKind::InvalidArgument, "tol must be non-negative");
  if (!(std::abs(z.rho) < 1.0) || std::abs(k1_defect(z)) > tol)
    fail(ErrorKind::NotInK1, "point does not satisfy the K_1 defining equality");

  const double one_minus = 1.0 - z.rho * z.rho;
  const std::vector<double> v_hat = [&] {
    auto r = axpy(z.m, -z.rho, z.v);
    for (double& x : r) x /= one_minus;
    return r;
  }();
  const std::vector<double> m_hat = [&] {
    auto r = axpy(z.v, -z.rho, z.m);
    for (double& x : r) x /= one_minus;
    return r;
  }();
  const double e_hat = norm2(axpy(z.m, 1.0, z.v)) / (one_minus * (1.0 + z.rho)) -
                       z.e / (1.0 - z.rho);

  auto endpoint = [&](double s) {
    return HullPoint(z.rho + s, axpy(z.v, s, v_hat), axpy(z.m, s, m_hat),
                     z.e + s * e_hat);
  };
  return {endpoint(1.0 - z.rho), endpoint(-1.0 - z.rho)};
}

bool in_wave_cone(const HullPoint& zhat) {
  if (zhat.dim() >= 3) return true;
  if (std::abs(zhat.rho) > 1e-12) return true;
  // d = 2, rho_hat = 0: need a nonzero xi orthogonal to both v_hat and
  // m_hat, which exists exactly when the two are parallel.
  const double cross = zhat.v[0] * zhat.m[1] - zhat.v[1] * zhat.m[0];
  const double scale = std::sqrt(norm2(zhat.v) * norm2(zhat.m));
  return std::abs(cross) <= 1e-12 * std::max(1.0, scale);
}

std::pair<HullPoint, HullPoint> hull_gap_segment(const HullPoint& z0, double gamma) {
  if (!(gamma > 0.0)) fail(ErrorKind::OutOfRange, "gamma must be positive");
  if (std::sqrt(norm2(z0.v)) > 1e-12)
    fail(ErrorKind::HypothesisViolated, "segment construction requires v = 0");
  const double one_minus = 1.0 - z0.rho * z0.rho;
  if (!(std::abs(z0.rho) < 1.0) || !(norm2(z0.m) < z0.e * one_minus))
    fail(ErrorKind::HypothesisViolated, "point is not strictly inside the hull");
  if (!(4.0 * norm2(z0.m) / (one_minus * one_minus) + z0.e < gamma))
    fail(ErrorKind::HypothesisViolated, "gamma certificate condition fails");

  // First standard basis vector orthogonal to m, Gram-Schmidt with
  // lowest-index tie break; any unit vector works when m = 0.
  const int d = z0.dim();
  std::vector<double> v_hat(d, 0.0);
  const double m_norm2 = norm2(z0.m);
  if (m_norm2 <= 1e-28) {
    v_hat[0] = 1.0;
  } else {
    for (int i = 0; i < d; ++i) {
      std::vector<double> u(d, 0.0);
      u[i] = 1.0;
      const double proj = z0.m[i] / m_norm2;
      for (int j = 0; j < d; ++j) u[j] -= proj * z0.m[j];
      const double len = std::sqrt(norm2(u));
      if (len > 1e-9) {
        for (double& x : u) x /= len;
        v_hat = std::move(u);
        break;
      }
    }
  }

  const double s = std::sqrt(z0.e - m_norm2 / one_minus);
  auto endpoint = [&](double sign) {
    return HullPoint(z0.rho, axpy(z0.v, sign * s, v_hat),
                     axpy(z0.m, sign * s * z0.rho, v_hat), z0.e);
  };
  return {endpoint(1.0), endpoint(-1.0)};
}

}  // namespace mixlab
