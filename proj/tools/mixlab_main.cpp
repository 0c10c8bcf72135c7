// mixlab: command-line laboratory for energy-constrained mixing of
// one-dimensional data. Subcommands cover bound tables, the steepest
// descent simulation, subsolution verification, the variational certifier,
// rearrangement contract sweeps, hull probes and the descent ODE.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mixlab/bounds.hpp"
#include "mixlab/descent.hpp"
#include "mixlab/hull.hpp"
#include "mixlab/io.hpp"
#include "mixlab/rearrange.hpp"
#include "mixlab/subsolution.hpp"
#include "mixlab/torus_field.hpp"
#include "mixlab/variational.hpp"

using namespace mixlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitParse = 3;
constexpr int kExitDegenerate = 4;
constexpr int kExitInvariant = 5;
constexpr int kExitHull = 6;

struct CommonConfig {
  double L = 2.0 * std::numbers::pi;
  double E = 1.0;
  int d = 2;
  std::size_t n = 1024;
  std::uint64_t seed = 12345;
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonConfig& cfg, const std::string& default_out) {
  cfg.out = default_out;
  cmd->add_option("--L", cfg.L, "box side length");
  cmd->add_option("--E", cfg.E, "energy budget");
  cmd->add_option("--d", cfg.d, "ambient dimension (>= 2)");
  cmd->add_option("--n", cfg.n, "grid size (power of two >= 16)");
  cmd->add_option("--seed", cfg.seed, "random seed");
  cmd->add_option("--out", cfg.out, "output path");
  cmd->add_option("--format", cfg.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

MixParams params_of(const CommonConfig& cfg) {
  if (cfg.n < 16 || (cfg.n & (cfg.n - 1)) != 0)
    fail(ErrorKind::InvalidArgument, "--n must be a power of two >= 16");
  return MixParams(cfg.L, cfg.E, cfg.d);
}

unsigned thread_cap() {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MIXLAB_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed >= 1) cap = std::min<unsigned>(cap, static_cast<unsigned>(parsed));
  }
  return cap;
}

// Run `shards` independent jobs on at most thread_cap() threads. The shard
// decomposition is fixed, so results do not depend on the thread count.
template <typename Fn>
void run_sharded(std::size_t shards, Fn&& fn) {
  const unsigned workers = std::min<unsigned>(thread_cap(), shards);
  if (workers <= 1) {
    for (std::size_t s = 0; s < shards; ++s) fn(s);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t s = next++; s < shards; s = next++) fn(s);
    });
  for (auto& t : pool) t.join();
}

int run_bounds(const CommonConfig& cfg) {
  const MixParams params = params_of(cfg);
  std::ostringstream csv;
  nlohmann::json rows = nlohmann::json::array();
  csv << "r0,old_bound,new_bound,gap\n";
  for (int i = 0; i <= 20; ++i) {
    const double r0 = static_cast<double>(i) / 20.0;
    const BoundReport row = make_bound_report(r0, params);
    csv << format_double(row.r0) << ',' << format_double(row.old_bound) << ','
        << format_double(row.new_bound) << ',' << format_double(row.gap) << '\n';
    rows.push_back({{"r0", row.r0},
                    {"old_bound", row.old_bound},
                    {"new_bound", row.new_bound},
                    {"gap", row.gap}});
  }
  atomic_write(cfg.out, cfg.format == "csv" ? csv.str() : rows.dump(2) + "\n");
  return kExitOk;
}

int run_simulate(const CommonConfig& cfg, const std::string& rho0_path,
                 double h_stop_frac, std::size_t dump_states) {
  const MixParams params = params_of(cfg);
  GridFunction rho0 = [&] {
    try {
      return read_grid(rho0_path);
    } catch (const Error&) {
      throw Error(ErrorKind::IoFailure, "cannot parse " + rho0_path);
    }
  }();
  if (std::abs(mean(rho0)) > kMeanTolerance || lipschitz_seminorm(rho0) < 0.0)
    fail(ErrorKind::IoFailure, "initial density must have zero mean");

  const double h_stop = h_stop_frac * h_max(params.L);
  const EvolveResult run = evolve_to_mixed(rho0, params, h_stop);
  if (run.steps == 0)
    fail(ErrorKind::DegenerateState, "initial datum is already mixed");

  std::ostringstream csv;
  csv << "t,h,q,alpha_eff,lambda\n";
  for (const auto& s : run.states) {
    const double q = std::min(1.0, s.h / h_max(params.L));
    csv << format_double(s.t) << ',' << format_double(s.h) << ','
        << format_double(q) << ',' << format_double(alpha_of_r(q)) << ','
        << format_double(s.lambda) << '\n';
  }
  atomic_write(cfg.out, csv.str());

  if (dump_states > 0) {
    const std::size_t stride =
        std::max<std::size_t>(1, run.states.size() / dump_states);
    std::size_t index = 0;
    for (std::size_t i = 0; i < run.states.size(); i += stride) {
      write_grid(cfg.out + ".state" + std::to_string(index++) + "." + cfg.format,
                 run.states[i].rho, cfg.format);
    }
  }

  const double r0 = hminus1_norm_lift(rho0, params) / H_max(params);
  nlohmann::json summary;
  summary["T_sim"] = run.stop_time;
  summary["T_lower_bound"] = new_bound(std::min(1.0, r0), params);
  summary["ratio"] = run.stop_time / new_bound(std::min(1.0, r0), params);
  atomic_write(cfg.out + ".summary.json", summary.dump(2) + "\n");
  return kExitOk;
}

int run_verify_subsolution(const CommonConfig& cfg, double eps,
                           std::size_t times, bool dump_snapshots) {
  const MixParams params = params_of(cfg);
  if (eps < 0.0 || eps >= 0.5 * params.E)
    fail(ErrorKind::InvalidArgument, "--eps must lie in [0, E/2)");

  const bool strict = eps > 0.0;
  const double T = strict ? epsilon_gap_T(eps, params)
                          : SharpFamily(params).T;
  const SharpFamily family(params);

  std::ostringstream csv;
  csv << "t,alpha,lambda,min_hull_slack,energy_defect,lambda_defect,hj_residual,"
         "gamma_margin,pass\n";
  std::string first_failure;
  double worst_slack = 0.0, worst_energy = 0.0, worst_lambda = 0.0;
  double worst_hj = 0.0, min_gamma = 1e300;

  for (std::size_t i = 1; i <= times; ++i) {
    const double t = T * static_cast<double>(i) / static_cast<double>(times + 1);
    const SubsolutionSnapshot snap =
        strict ? epsilon_gap_family(eps, params, t, cfg.n)
               : snapshot_at(t, family, cfg.n);

    double min_slack = 1e300;
    bool pointwise_ok = true;
    for (std::size_t j = 0; j < cfg.n; ++j) {
      if (std::abs(snap.rho[j]) > 1.0 + 1e-12) pointwise_ok = false;
      const double slack =
          snap.e[j] * (1.0 - snap.rho[j] * snap.rho[j]) - snap.m1[j] * snap.m1[j];
      min_slack = std::min(min_slack, slack);
      if (slack < -1e-9) pointwise_ok = false;
    }

    // Energy budget via the quadrature-consistent lambda identity.
    const double scale = strict ? (params.E - eps) : params.E;
    const double lambda_e =
        strict ? snap.lambda * std::sqrt((params.E - eps) / (params.E - 2.0 * eps))
               : snap.lambda;
    const double F_dense = extremizer_F_dense(snap.alpha, params.L);
    const double energy = std::pow(params.L, params.d - 1) * lambda_e * lambda_e *
                          F_dense;
    const double energy_defect = energy - scale;

    const MixParams eff(params.L, strict ? params.E - 2.0 * eps : params.E,
                        params.d);
    const double lambda_defect =
        std::abs(snap.lambda - lambda_integral_form(snap.alpha, eff));

    double hj_residual = 0.0;
    if (!strict && t > 1e-4 * T && t < (1.0 - 1e-4) * T)
      hj_residual = verify_hamilton_jacobi(family, t, cfg.n);

    double gamma_margin = 0.0;
    if (strict) gamma_margin = gamma_certificate(snap, eps, params);

    worst_slack = std::min(worst_slack, min_slack);
    worst_energy = std::max(worst_energy, std::abs(energy_defect));
    worst_lambda = std::max(worst_lambda, lambda_defect);
    worst_hj = std::max(worst_hj, hj_residual);
    if (strict) min_gamma = std::min(min_gamma, gamma_margin);

    const bool pass = pointwise_ok && std::abs(energy_defect) <= 1e-6 &&
                      lambda_defect <= 1e-6 && hj_residual <= 1e-3 &&
                      (!strict || gamma_margin > 0.0);
    if (!pass && first_failure.empty()) {
      std::ostringstream why;
      why << "t=" << t << " pointwise=" << pointwise_ok
          << " energy_defect=" << energy_defect
          << " lambda_defect=" << lambda_defect << " hj=" << hj_residual
          << " gamma=" << gamma_margin;
      first_failure = why.str();
    }

    csv << format_double(t) << ',' << format_double(snap.alpha) << ','
        << format_double(snap.lambda) << ',' << format_double(min_slack) << ','
        << format_double(energy_defect) << ',' << format_double(lambda_defect)
        << ',' << format_double(hj_residual) << ','
        << format_double(gamma_margin) << ',' << (pass ? 1 : 0) << '\n';

    if (dump_snapshots) {
      const std::string stem = cfg.out + ".snapshot" + std::to_string(i);
      atomic_write(stem + ".csv", snapshot_to_csv(snap));
      atomic_write(stem + ".json", snapshot_manifest_json(snap, T));
    }
  }

  // Distributional form of the conservation law, checked once per run for
  // the sharp family against a smooth separable test function.
  double weak_residual = 0.0;
  if (!strict) {
    const double Tf = family.T;
    auto chi = [Tf](double t) {
      const double s = t / Tf;
      if (s <= 0.0 || s >= 1.0) return 0.0;
      return std::exp(-1.0 / (s * (1.0 - s)));
    };
    auto chi_dot = [Tf, chi](double t) {
      const double s = t / Tf;
      if (s <= 0.0 || s >= 1.0) return 0.0;
      return chi(t) * (1.0 - 2.0 * s) /
             (s * s * (1.0 - s) * (1.0 - s)) / Tf;
    };
    const double Lbox = params.L;
    const double two_pi = 2.0 * std::numbers::pi;
    SpaceTimeTestFunction psi{
        [&](double t, double x) { return chi(t) * std::sin(two_pi * x / Lbox + 1.0); },
        [&](double t, double x) {
          return chi_dot(t) * std::sin(two_pi * x / Lbox + 1.0);
        },
        [&](double t, double x) {
          return chi(t) * two_pi / Lbox * std::cos(two_pi * x / Lbox + 1.0);
        }};
    weak_residual = weak_form_residual(family, psi, 512, 512);
    if (weak_residual > 1e-3 && first_failure.empty())
      first_failure = "weak form residual " + std::to_string(weak_residual);
  }

  nlohmann::json summary;
  summary["eps"] = eps;
  summary["times"] = times;
  summary["worst_hull_slack_defect"] = std::max(0.0, -worst_slack);
  summary["worst_energy_defect"] = worst_energy;
  summary["worst_lambda_defect"] = worst_lambda;
  summary["worst_hj_residual"] = worst_hj;
  summary["weak_form_residual"] = weak_residual;
  if (strict) summary["min_gamma_margin"] = min_gamma;
  summary["pass"] = first_failure.empty();

  atomic_write(cfg.out, csv.str());
  atomic_write(cfg.out + ".summary.json", summary.dump(2) + "\n");
  if (!first_failure.empty()) {
    std::cerr << "invariant failure: " << first_failure << "\n";
    return kExitInvariant;
  }
  return kExitOk;
}

int run_variational(const CommonConfig& cfg, std::size_t samples,
                    std::vector<double> h_fracs) {
  const MixParams params = params_of(cfg);
  if (h_fracs.empty()) h_fracs = {0.25, 0.5, 0.75};
  nlohmann::json all = nlohmann::json::array();
  for (double frac : h_fracs) {
    const VariationalReport report =
        certify_supremum(frac * h_max(params.L), params.L, samples, cfg.seed, 64);
    all.push_back(nlohmann::json::parse(variational_report_to_json(report)));
  }
  atomic_write(cfg.out, all.dump(2) + "\n");
  return kExitOk;
}

int run_rearrange(const CommonConfig& cfg, std::size_t samples) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> up(0.0, 1.0);
  const double L = cfg.L;
  const std::size_t n = 64;

  double worst_sym_l2 = 0.0, worst_sym_f1 = 0.0;
  double worst_odd_l2 = 0.0, worst_odd_f1 = 0.0;

  for (std::size_t trial = 0; trial < samples; ++trial) {
    // Periodic Lipschitz sample for the symmetric competitor: mean-free
    // random slopes, then renormalized into the unit slope ball.
    std::vector<double> slopes(n);
    double slope_mean = 0.0;
    for (double& s : slopes) {
      s = u(rng);
      slope_mean += s;
    }
    slope_mean /= static_cast<double>(n);
    for (double& s : slopes) s -= slope_mean;
    std::vector<double> vals(n, 0.0);
    const double dx = L / static_cast<double>(n);
    for (std::size_t j = 1; j < n; ++j) vals[j] = vals[j - 1] + slopes[j - 1] * dx;
    const double lip = lipschitz_seminorm(GridFunction(L, vals));
    if (lip > 1.0)
      for (double& v : vals) v /= lip;
    double m = 0.0;
    for (double v : vals) m += v;
    m /= static_cast<double>(n);
    for (double& v : vals) v -= m;
    const GridFunction w(L, vals);
    const GridFunction sym = symmetric_competitor(w);

    auto grid_l2sq = [](const GridFunction& g) {
      double s = 0.0;
      for (double v : g.values()) s += v * v;
      return s * g.dx();
    };
    auto forward_f1 = [](const GridFunction& g) {
      double s = 0.0;
      const std::size_t count = g.size();
      for (std::size_t j = 0; j < count; ++j) {
        const double du =
            0.5 * (g[(j + 1) % count] * g[(j + 1) % count] - g[j] * g[j]);
        s += du * du;
      }
      return s / g.dx();
    };
    worst_sym_l2 = std::max(worst_sym_l2, std::abs(grid_l2sq(sym) - grid_l2sq(w)));
    worst_sym_f1 = std::max(worst_sym_f1, forward_f1(sym) - forward_f1(w));

    // Reduced-class sample for the odd competitor.
    const double a = 0.25 * L;
    std::vector<double> cvals(n + 1, 0.0);
    const double h_cell = 2.0 * a / static_cast<double>(n);
    for (std::size_t j = 1; j <= n; ++j) cvals[j] = cvals[j - 1] + up(rng) * h_cell;
    CompactFunction raw(a, cvals);
    const double shift = pl_integral(raw) / (2.0 * a);
    for (double& v : cvals) v -= shift;
    const CompactFunction cw(a, cvals);
    const CompactFunction odd = odd_competitor(cw, 1 << 18);
    worst_odd_l2 =
        std::max(worst_odd_l2, std::abs(pl_integral_sq(odd) - pl_integral_sq(cw)));
    worst_odd_f1 =
        std::max(worst_odd_f1, pl_dirichlet_f2(odd) - pl_dirichlet_f2(cw));
  }

  std::ostringstream csv;
  csv << "contract,worst_abs_deviation\n";
  csv << "symmetric_l2," << format_double(worst_sym_l2) << '\n';
  csv << "symmetric_f1_increase," << format_double(worst_sym_f1) << '\n';
  csv << "odd_l2," << format_double(worst_odd_l2) << '\n';
  csv << "odd_f1_increase," << format_double(worst_odd_f1) << '\n';
  atomic_write(cfg.out, csv.str());

  const double tol = 1e-9;
  if (worst_sym_l2 > tol || worst_sym_f1 > tol || worst_odd_l2 > tol ||
      worst_odd_f1 > tol) {
    std::cerr << "rearrangement contract violated beyond " << tol << "\n";
    return kExitInvariant;
  }
  return kExitOk;
}

int run_hull_probe(const CommonConfig& cfg, std::size_t probes,
                   bool inject_violation) {
  const int d = cfg.d;
  constexpr std::size_t kShards = 16;
  struct ShardResult {
    double worst_hull_defect = -1e300;   // max over combos of (ii) residual
    double worst_k1_defect = 0.0;        // max endpoint distance from K
    std::size_t violations = 0;
    std::string first_violation;
  };
  std::vector<ShardResult> results(kShards);

  run_sharded(kShards, [&](std::size_t shard) {
    std::mt19937_64 rng(cfg.seed + shard);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> pos(0.0, 1.0);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_int_distribution<int> count(2, 6);
    ShardResult& res = results[shard];

    auto random_k_point = [&]() {
      const double rho = u(rng);
      std::vector<double> v(d), mvec(d);
      double e = 0.0;
      for (int i = 0; i < d; ++i) v[i] = g(rng);
      double norm = 0.0;
      for (double x : v) norm += x * x;
      const double r = 2.0 * std::pow(pos(rng), 1.0 / d);
      norm = std::sqrt(norm);
      for (double& x : v) x *= (norm > 0.0 ? r / norm : 0.0);
      for (int i = 0; i < d; ++i) {
        mvec[i] = rho * v[i];
        e += v[i] * v[i];
      }
      return HullPoint(rho, v, mvec, e);
    };

    const std::size_t local = probes / kShards + 1;
    for (std::size_t trial = 0; trial < local; ++trial) {
      // Convex combination soundness.
      const int k = count(rng);
      std::vector<double> weights(k);
      double total = 0.0;
      for (double& wgt : weights) {
        wgt = pos(rng);
        total += wgt;
      }
      double rho = 0.0, e = 0.0;
      std::vector<double> v(d, 0.0), mvec(d, 0.0);
      for (int i = 0; i < k; ++i) {
        const HullPoint z = random_k_point();
        const double wgt = weights[i] / total;
        rho += wgt * z.rho;
        e += wgt * z.e;
        for (int c = 0; c < d; ++c) {
          v[c] += wgt * z.v[c];
          mvec[c] += wgt * z.m[c];
        }
      }
      const HullPoint combo(rho, v, mvec, e);
      if (!in_K_hull(combo, 1e-9)) {
        ++res.violations;
        if (res.first_violation.empty()) {
          nlohmann::json j;
          j["rho"] = combo.rho;
          j["v"] = combo.v;
          j["m"] = combo.m;
          j["e"] = combo.e;
          res.first_violation = j.dump();
        }
      }
      // Track the worst hull residual for the report.
      double mv = 0.0, v2 = 0.0;
      for (int c = 0; c < d; ++c) {
        const double r = combo.m[c] - combo.rho * combo.v[c];
        mv += r * r;
        v2 += combo.v[c] * combo.v[c];
      }
      res.worst_hull_defect =
          std::max(res.worst_hull_defect,
                   mv - (combo.e - v2) * (1.0 - combo.rho * combo.rho));

      // K_1 segment endpoints.
      const HullPoint base = random_k_point();
      if (std::abs(base.rho) < 0.999) {
        auto [p, q] = k1_segment(base, 1e-9);
        for (const HullPoint* end : {&p, &q}) {
          double me = 0.0, ve = 0.0;
          for (int c = 0; c < d; ++c) {
            const double r = end->m[c] - end->rho * end->v[c];
            me += r * r;
            ve += end->v[c] * end->v[c];
          }
          const double defect =
              std::max(std::sqrt(me), std::abs(ve - end->e));
          res.worst_k1_defect = std::max(res.worst_k1_defect, defect);
          if (!in_K(*end, 1e-8)) ++res.violations;
        }
      }

      // Wave cone: always inside for d >= 3.
      if (d >= 3) {
        std::vector<double> vv(d), mm(d);
        for (int c = 0; c < d; ++c) {
          vv[c] = g(rng);
          mm[c] = g(rng);
        }
        if (!in_wave_cone(HullPoint(u(rng), vv, mm, g(rng)))) ++res.violations;
      }
    }
  });

  ShardResult merged;
  merged.worst_hull_defect = -1e300;
  for (const auto& r : results) {
    merged.worst_hull_defect = std::max(merged.worst_hull_defect, r.worst_hull_defect);
    merged.worst_k1_defect = std::max(merged.worst_k1_defect, r.worst_k1_defect);
    merged.violations += r.violations;
    if (merged.first_violation.empty()) merged.first_violation = r.first_violation;
  }

  if (inject_violation) {
    // Negative control: a point violating condition (ii) must be rejected.
    std::vector<double> zero(d, 0.0), mvec(d, 0.0);
    mvec[0] = 1.001;
    const HullPoint bad(0.0, zero, mvec, 1.0);
    if (!in_K_hull(bad, 1e-9)) {
      ++merged.violations;
      nlohmann::json j;
      j["rho"] = bad.rho;
      j["v"] = bad.v;
      j["m"] = bad.m;
      j["e"] = bad.e;
      merged.first_violation = j.dump();
    }
  }

  std::ostringstream csv;
  csv << "metric,value\n";
  csv << "seed," << cfg.seed << '\n';
  csv << "probes," << probes << '\n';
  csv << "violations," << merged.violations << '\n';
  csv << "worst_hull_defect," << format_double(merged.worst_hull_defect) << '\n';
  csv << "worst_k1_defect," << format_double(merged.worst_k1_defect) << '\n';
  atomic_write(cfg.out, csv.str());

  if (merged.violations > 0) {
    std::cerr << "hull violation: " << merged.first_violation << "\n";
    return kExitHull;
  }
  return kExitOk;
}

int run_ode(const CommonConfig& cfg, double alpha0, std::size_t steps) {
  const MixParams params = params_of(cfg);
  const OdeTrace exact = integrate_equality_case(alpha0, params, steps);
  atomic_write(cfg.out, cfg.format == "csv" ? ode_trace_to_csv(exact)
                                            : ode_trace_to_json(exact));

  // q = 1 is a degenerate equilibrium of the equality-case ODE; start the
  // numeric check just below it, as the closed form does implicitly.
  const double q0 =
      std::min(1.0 - 1e-6, alpha0 * std::sqrt(2.0 - alpha0 * alpha0));
  const OdeTrace numeric = integrate_ode_rk4(q0, params);
  const double c = rate_constant(params);
  const double s_num = S(numeric.alpha_values.front());
  double sup_err = 0.0;
  for (std::size_t i = 0; i < numeric.times.size(); ++i) {
    const double ref = S_inverse(std::max(0.0, s_num - c * numeric.times[i]));
    sup_err = std::max(sup_err, std::abs(numeric.alpha_values[i] - ref));
  }

  nlohmann::json summary;
  summary["terminal_time_closed_form"] = exact.terminal_time();
  summary["terminal_time_rk4"] = numeric.terminal_time();
  summary["alpha_sup_error"] = sup_err;
  atomic_write(cfg.out + ".summary.json", summary.dump(2) + "\n");
  return kExitOk;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"numerical laboratory for energy-constrained optimal mixing"};
  app.require_subcommand(1);

  CommonConfig cfg_bounds, cfg_sim, cfg_verify, cfg_var, cfg_re, cfg_hull, cfg_ode;

  auto* bounds_cmd = app.add_subcommand("bounds", "lower-bound table over r0");
  add_common(bounds_cmd, cfg_bounds, "bounds.csv");

  auto* sim_cmd = app.add_subcommand("simulate", "steepest-descent evolution");
  add_common(sim_cmd, cfg_sim, "trajectory.csv");
  std::string rho0_path;
  double h_stop_frac = 0.01;
  std::size_t dump_states = 0;
  sim_cmd->add_option("--rho0", rho0_path, "initial density file (csv or json)")
      ->required();
  sim_cmd->add_option("--h-stop", h_stop_frac, "stop when h <= h_stop * h_max");
  sim_cmd->add_option("--dump-states", dump_states,
                      "also write about this many density snapshots");

  auto* verify_cmd =
      app.add_subcommand("verify-subsolution", "checks for the explicit families");
  add_common(verify_cmd, cfg_verify, "verify.csv");
  double eps = 0.0;
  std::size_t times = 50;
  bool dump_snapshots = false;
  verify_cmd->add_option("--eps", eps, "energy gap (0 = sharp family)");
  verify_cmd->add_option("--times", times, "number of interior sample times");
  verify_cmd->add_flag("--dump-snapshots", dump_snapshots,
                       "write x,rho,m1,e,w tables plus manifests per time");

  auto* var_cmd = app.add_subcommand("variational", "stochastic sup certification");
  add_common(var_cmd, cfg_var, "variational.json");
  std::size_t samples = 2000;
  std::vector<double> h_fracs;
  var_cmd->add_option("--samples", samples, "random admissible samples per h");
  var_cmd->add_option("--h-frac", h_fracs, "h as fractions of h_max");

  auto* re_cmd = app.add_subcommand("rearrange", "rearrangement contract sweep");
  add_common(re_cmd, cfg_re, "rearrange.csv");
  std::size_t re_samples = 500;
  re_cmd->add_option("--samples", re_samples, "random inputs per contract");

  auto* hull_cmd = app.add_subcommand("hull-probe", "randomized hull soundness");
  add_common(hull_cmd, cfg_hull, "hull.csv");
  std::size_t probes = 100000;
  bool inject = false;
  hull_cmd->add_option("--probes", probes, "number of random probes");
  hull_cmd->add_flag("--inject-violation", inject,
                     "negative control: feed a known bad point");

  auto* ode_cmd = app.add_subcommand("ode", "descent ODE trace and RK4 check");
  add_common(ode_cmd, cfg_ode, "ode.csv");
  double alpha0 = 1.0;
  std::size_t ode_steps = 1001;
  ode_cmd->add_option("--alpha0", alpha0, "initial alpha in (0, 1]");
  ode_cmd->add_option("--steps", ode_steps, "trace sample count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (bounds_cmd->parsed())
      return run_bounds(cfg_bounds);
    if (sim_cmd->parsed())
      return run_simulate(cfg_sim, rho0_path, h_stop_frac, dump_states);
    if (verify_cmd->parsed())
      return run_verify_subsolution(cfg_verify, eps, times, dump_snapshots);
    if (var_cmd->parsed()) return run_variational(cfg_var, samples, h_fracs);
    if (re_cmd->parsed()) return run_rearrange(cfg_re, re_samples);
    if (hull_cmd->parsed()) return run_hull_probe(cfg_hull, probes, inject);
    if (ode_cmd->parsed()) return run_ode(cfg_ode, alpha0, ode_steps);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::IoFailure:
        return kExitParse;
      case ErrorKind::DegenerateState:
        return kExitDegenerate;
      case ErrorKind::ConstraintViolation:
      case ErrorKind::EmptyMixingZone:
      case ErrorKind::TooFewStates:
        return kExitInvariant;
      default:
        return kExitConfig;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) { return dispatch(argc, argv); }
