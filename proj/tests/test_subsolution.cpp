#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mixlab/io.hpp"
#include "mixlab/subsolution.hpp"

using namespace mixlab;

namespace {
constexpr double pi = std::numbers::pi;

// Dense quadrature of int e dx1 for the snapshot fields by per-region
// Simpson on the analytic profile (the sampled e is exact there).
double energy_integral(double alpha, double L, double lambda_e) {
  const double l = 0.5 * L;
  const double a1 = alpha * alpha * l / 2.0;
  const double a2 = l - a1;
  auto integrand = [&](double u) {
    const double wv = W_alpha_value(alpha, L, u);
    const double ws = W_alpha_slope(alpha, L, u);
    return lambda_e * lambda_e * (1.0 - ws * ws) * wv * wv;
  };
  const std::size_t m = 1 << 13;
  const double h = (a2 - a1) / static_cast<double>(2 * m);
  double sum = integrand(a1) + integrand(a2);
  for (std::size_t j = 1; j < 2 * m; ++j)
    sum += integrand(a1 + static_cast<double>(j) * h) * (j % 2 == 1 ? 4.0 : 2.0);
  return 2.0 * sum * h / 3.0;  // two arc regions per period
}

}  // namespace

TEST_CASE("sharp family constants") {
  const MixParams params(2.0 * pi, 1.0, 2);
  const SharpFamily family(params);
  const double expected_T = h_max(params.L) *
                            std::sqrt(std::pow(params.L, params.d - 1) / params.E) *
                            std::sqrt(2.0) * pi / 4.0;
  CHECK(family.T == doctest::Approx(expected_T).epsilon(1e-12));
  CHECK(family.T == doctest::Approx(pi / (4.0 * family.c)).epsilon(1e-14));
}

TEST_CASE("big_W_alpha degenerate and generic profiles") {
  const double L = 2.0 * pi;
  const double l = 0.5 * L;
  const std::size_t n = 1024;

  // alpha = 1: triangle with peak l/2 at x = l/2.
  const GridFunction w1 = big_W_alpha(1.0, L, n);
  double peak = 0.0;
  for (std::size_t j = 0; j < n; ++j) peak = std::max(peak, w1[j]);
  CHECK(peak == doctest::Approx(l / 2.0).epsilon(1e-10));
  CHECK(lipschitz_seminorm(w1) <= 1.0 + 1e-12);

  // alpha = 0: identically zero.
  const GridFunction w0 = big_W_alpha(0.0, L, n);
  for (std::size_t j = 0; j < n; ++j) CHECK(w0[j] == 0.0);

  // alpha = 0.5: peak value alpha l / 2 = pi/4 at x = l/2.
  CHECK(W_alpha_value(0.5, L, l / 2.0) == doctest::Approx(0.25 * l).epsilon(1e-12));
  CHECK(W_alpha_value(0.5, L, l / 2.0) == doctest::Approx(pi / 4.0).epsilon(1e-12));

  // Odd symmetry and periodicity.
  for (double x : {0.3, 1.1, 2.9}) {
    CHECK(W_alpha_value(0.7, L, -x) == doctest::Approx(-W_alpha_value(0.7, L, x)));
    CHECK(W_alpha_value(0.7, L, x + L) == doctest::Approx(W_alpha_value(0.7, L, x)));
  }
}

TEST_CASE("snapshot invariants at interior times") {
  const MixParams params(2.0 * pi, 1.0, 2);
  const SharpFamily family(params);
  const std::size_t n = 1024;

  for (int i = 1; i <= 50; ++i) {
    const double t = family.T * static_cast<double>(i) / 51.0;
    const SubsolutionSnapshot snap = snapshot_at(t, family, n);

    // |rho| <= 1 pointwise and the hull inequality holds with saturation.
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(std::abs(snap.rho[j]) <= 1.0 + 1e-12);
      const double slack = snap.e[j] * (1.0 - snap.rho[j] * snap.rho[j]);
      CHECK(snap.m1[j] * snap.m1[j] <= slack + 1e-9);
      CHECK(snap.m1[j] * snap.m1[j] == doctest::Approx(slack).epsilon(1e-9));
    }

    // lambda closed form equals c / (alpha sqrt(1 - alpha^2)).
    const double expected_lambda =
        family.c / (snap.alpha * std::sqrt(1.0 - snap.alpha * snap.alpha));
    CHECK(snap.lambda == doctest::Approx(expected_lambda).epsilon(1e-12));

    // Energy budget saturated: L^{d-1} int e dx1 = E.
    const double total = std::pow(params.L, params.d - 1) *
                         energy_integral(snap.alpha, params.L, snap.lambda);
    CHECK(total == doctest::Approx(params.E).epsilon(1e-6));

    // h(t) = h_max alpha sqrt(2 - alpha^2) via the L^2 norm of w.
    const double h_expected =
        h_max(params.L) * snap.alpha * std::sqrt(2.0 - snap.alpha * snap.alpha);
    CHECK(l2_norm(snap.w) == doctest::Approx(h_expected).epsilon(1e-6));
  }
}

TEST_CASE("snapshot at alpha = 1/sqrt(2) has lambda = 2c") {
  const MixParams params(2.0 * pi, 1.0, 2);
  const SharpFamily family(params);
  const double t = (pi / 4.0 - S(1.0 / std::sqrt(2.0))) / family.c;
  const SubsolutionSnapshot snap = snapshot_at(t, family, 2048);
  CHECK(snap.alpha == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK(snap.lambda == doctest::Approx(2.0 * family.c).epsilon(1e-9));
}

TEST_CASE("density and mixing norm vanish as t approaches T") {
  const MixParams params(2.0 * pi, 1.0, 2);
  const SharpFamily family(params);
  const SubsolutionSnapshot snap = snapshot_at(family.T * 0.9999, family, 512);
  CHECK(snap.alpha < 2e-4);
  CHECK(l2_norm(snap.w) < 1e-3);  // h(t) -> 0
  CHECK(l2_norm(snap.rho) < 1e-2);
  // The energy budget stays saturated: e does not vanish, it spreads.
  CHECK(l2_norm(snap.e) > 0.0);
  CHECK_THROWS_AS(snapshot_at(family.T * 1.5, family, 512), Error);
  CHECK_THROWS_AS(snapshot_at(0.0, family, 512), Error);
}

TEST_CASE("initial datum recovery: rho at t -> 0 approaches the shifted square wave") {
  const MixParams params(2.0 * pi, 1.0, 2);
  const SharpFamily family(params);
  const std::size_t n = 2048;
  const SubsolutionSnapshot snap = snapshot_at(family.T * 1e-4, family, n);
  // L1 distance to the shifted square wave rho_hat(. - L/4) = W^1_x.
  double l1 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double target = W_alpha_slope(1.0, params.L, snap.rho.x(j));
    l1 += std::abs(snap.rho[j] - target) * snap.rho.dx();
  }
  CHECK(l1 < 0.05 * params.L);
}

TEST_CASE("Hamilton-Jacobi residual on the arc region") {
  const MixParams params(2.0 * pi, 1.0, 2);
  const SharpFamily family(params);
  const double t = (pi / 4.0 - S(0.6)) / family.c;  // alpha = 0.6

  const double res_1024 = verify_hamilton_jacobi(family, t, 1024);
  CHECK(res_1024 <= 1e-3);
  const double res_2048 = verify_hamilton_jacobi(family, t, 2048);
  CHECK(res_2048 <= res_1024 / 1.5);

  // Linear regions contribute nothing: residual stays small at coarse n too.
  const double res_256 = verify_hamilton_jacobi(family, t, 256);
  CHECK(res_256 < 0.05);
}

TEST_CASE("weak form residual with separable test functions") {
  const MixParams params(2.0 * pi, 1.0, 2);
  const SharpFamily family(params);
  const double T = family.T;

  // Smooth bump in time, vanishing to all orders at 0 and T.
  auto chi = [T](double t) {
    const double s = t / T;
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return std::exp(-1.0 / (s * (1.0 - s)));
  };
  auto chi_dot = [T, chi](double t) {
    const double s = t / T;
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double d = (1.0 - 2.0 * s) / (s * s * (1.0 - s) * (1.0 - s));
    return chi(t) * d / T;
  };

  // psi independent of x: residual reduces to the conserved mean of rho.
  SpaceTimeTestFunction flat{[&](double t, double) { return chi(t); },
                             [&](double t, double) { return chi_dot(t); },
                             [](double, double) { return 0.0; }};
  CHECK(weak_form_residual(family, flat, 256, 256) < 1e-10);

  // psi = chi(t) sin(2 pi x / L + 1): the phase breaks the parity of the
  // fields, otherwise the quadrature cancels to the rounding floor and no
  // convergence ratio is measurable.
  const double L = params.L;
  SpaceTimeTestFunction wave{
      [&](double t, double x) { return chi(t) * std::sin(2.0 * pi * x / L + 1.0); },
      [&](double t, double x) {
        return chi_dot(t) * std::sin(2.0 * pi * x / L + 1.0);
      },
      [&](double t, double x) {
        return chi(t) * 2.0 * pi / L * std::cos(2.0 * pi * x / L + 1.0);
      }};
  const double res_512 = weak_form_residual(family, wave, 512, 512);
  CHECK(res_512 <= 1e-3);
  const double res_1024 = weak_form_residual(family, wave, 1024, 1024);
  CHECK(res_1024 <= res_512 / 1.5);
}

TEST_CASE("epsilon gap family: strictness, energy and limits") {
  const MixParams params(2.0 * pi, 1.0, 2);
  const double E = params.E;
  const double eps = E / 4.0;
  const double T_eps = epsilon_gap_T(eps, params);

  // T_eps exceeds the sharp time and decreases to it as eps -> 0.
  const SharpFamily sharp(params);
  CHECK(T_eps > sharp.T);
  CHECK(T_eps == doctest::Approx(h_max(params.L) *
                                 std::sqrt(params.L / (E - 2.0 * eps)) *
                                 std::sqrt(2.0) * pi / 4.0)
                     .epsilon(1e-12));
  CHECK(epsilon_gap_T(1e-9, params) == doctest::Approx(sharp.T).epsilon(1e-6));

  const std::size_t n = 1024;
  for (int i = 1; i <= 20; ++i) {
    const double t = T_eps * static_cast<double>(i) / 21.0;
    const SubsolutionSnapshot snap = epsilon_gap_family(eps, params, t, n);

    // e-to-m ratio is (E - eps)/(E - 2 eps) = 1.5 uniformly on the zone.
    const double l = 0.5 * params.L;
    const double a1 = snap.alpha * snap.alpha * l / 2.0;
    const double a2 = l - a1;
    for (std::size_t j = 0; j < n; ++j) {
      double x = snap.rho.x(j);
      double u = std::abs(x);
      if (u > l) u = 2.0 * l - u;
      if (!(u > a1 + 1e-6 && u < a2 - 1e-6)) continue;
      if (std::abs(snap.w[j]) < 1e-8) continue;
      const double strict = snap.e[j] * (1.0 - snap.rho[j] * snap.rho[j]);
      CHECK(snap.m1[j] * snap.m1[j] < strict);
      CHECK(strict / (snap.m1[j] * snap.m1[j]) ==
            doctest::Approx(1.5).epsilon(1e-9));
    }

    // Total energy is E - eps.
    const double lambda_e = snap.lambda * std::sqrt((E - eps) / (E - 2.0 * eps));
    const double total = std::pow(params.L, params.d - 1) *
                         energy_integral(snap.alpha, params.L, lambda_e);
    CHECK(total == doctest::Approx(E - eps).epsilon(1e-6));

    // gamma certificate strictly positive.
    const double margin = gamma_certificate(snap, eps, params);
    CHECK(margin > 0.0);
  }

  // eps -> 0 pointwise convergence to the sharp family.
  const double t_mid = sharp.T / 2.0;
  const SubsolutionSnapshot tiny = epsilon_gap_family(1e-10, params, t_mid, 256);
  const SubsolutionSnapshot ref = snapshot_at(t_mid, sharp, 256);
  for (std::size_t j = 0; j < 256; ++j) {
    CHECK(tiny.w[j] == doctest::Approx(ref.w[j]).epsilon(1e-6));
    CHECK(tiny.m1[j] == doctest::Approx(ref.m1[j]).epsilon(1e-4));
  }

  CHECK_THROWS_AS(epsilon_gap_family(E, params, 0.1, 256), Error);
  CHECK_THROWS_AS(epsilon_gap_family(0.6 * E, params, 0.1, 256), Error);
}

TEST_CASE("gamma blows up as t -> 0 while the margin stays positive") {
  const MixParams params(2.0 * pi, 1.0, 2);
  const double eps = params.E / 4.0;
  const double T_eps = epsilon_gap_T(eps, params);
  const SubsolutionSnapshot mid =
      epsilon_gap_family(eps, params, 0.5 * T_eps, 1 << 14);
  const SubsolutionSnapshot early =
      epsilon_gap_family(eps, params, 1e-5 * T_eps, 1 << 14);
  CHECK(early.alpha > 0.999);
  // gamma ~ C/(1 - alpha^2) grows without bound as t -> 0.
  CHECK(gamma_of(early, eps, params) > 20.0 * gamma_of(mid, eps, params));
  CHECK(gamma_certificate(early, eps, params) > 0.0);
  CHECK(gamma_certificate(mid, eps, params) > 0.0);
}

TEST_CASE("empty mixing zone is reported") {
  const MixParams params(2.0 * pi, 1.0, 2);
  const SharpFamily family(params);
  // Synthetic snapshot at alpha = 0: the zone (alpha^2 l/2, l - alpha^2 l/2)
  // contains grid points, but a degenerate alpha = 1 zone does not.
  SubsolutionSnapshot snap = snapshot_at(family.T / 2.0, family, 256);
  snap.alpha = 1.0;
  CHECK_THROWS_AS(gamma_certificate(snap, 0.25, params), Error);
}

TEST_CASE("snapshot export formats") {
  const MixParams params(2.0 * pi, 1.0, 2);
  const SharpFamily family(params);
  const SubsolutionSnapshot snap = snapshot_at(family.T / 3.0, family, 64);
  const std::string csv = snapshot_to_csv(snap);
  CHECK(csv.rfind("x,rho,m1,e,w\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 65);
  const std::string manifest = snapshot_manifest_json(snap, family.T);
  CHECK(manifest.find("\"alpha\"") != std::string::npos);
}
