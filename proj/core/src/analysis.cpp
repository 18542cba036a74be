#include "ftpellet/analysis.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "ftpellet/errors.hpp"

namespace ftpellet {

namespace {

double wall_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Index-sharded parallel loop. Exceptions from workers are rethrown on the
// calling thread after all workers join.
void parallel_for(int n, int jobs, const std::function<void(int)>& body) {
  if (n <= 0) return;
  int threads = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 0) threads = 1;
  if (threads > n) threads = n;
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
        next.store(n);  // starve the other workers
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double integrate_radial(const std::vector<double>& f, double R_p) {
  const size_t n = f.size();
  if (n < 2) throw OutOfRange("radial integral needs at least 2 samples");
  const double h = R_p / static_cast<double>(n - 1);
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double r = R_p * static_cast<double>(i) / static_cast<double>(n - 1);
    const double g = f[i] * 4.0 * std::numbers::pi * r * r;
    acc += (i == 0 || i == n - 1) ? 0.5 * g : g;
  }
  return acc * h;
}

DerivedQuantities derived_quantities(const Profile& profile, const BoundaryConditions& bc,
                                     const PelletConfig& config, const KineticParameters& params,
                                     const SiteBackend& backend) {
  const size_t n = profile.w_CO.size();
  if (n < 2 || profile.w_H2.size() != n || profile.w_H2O.size() != n)
    throw OutOfRange("profile fields must share a grid of at least 2 points");

  const double bar_to_unit = 1.0 / params.unit_to_bar();
  std::vector<double> consumption(n, 0.0);  // -R_CO, mol/(kg s)
  std::vector<double> mol_all(n, 0.0);      // total product molecule rate
  std::vector<double> mol_c5(n, 0.0);       // n >= 5 share of the same

  for (size_t i = 0; i < n; ++i) {
    const double pco_bar = std::max(profile.w_CO[i], 0.0) * config.c_ref * config.H_CO;
    const double ph2_bar = std::max(profile.w_H2[i], 0.0) * config.c_ref * config.H_H2;
    if (pco_bar <= 0.0 || ph2_bar <= 0.0) continue;
    const double ph2o_bar = std::max(profile.w_H2O[i], 0.0) * config.c_ref * config.H_H2O;

    Conditions cond;
    cond.P_CO = pco_bar * bar_to_unit;
    cond.P_H2 = ph2_bar * bar_to_unit;
    cond.P_H2O = ph2o_bar * bar_to_unit;
    cond.T = bc.T;

    const AggregatedCoefficients k = aggregate(params, cond);
    const double S = backend.site_fraction(params, cond);
    const RateBundle rb = product_rates(k, S, params);
    consumption[i] = -rb.R_CO;

    double all = 0.0, c5 = 0.0;
    for (size_t j = 0; j < rb.paraffin.size(); ++j) {
      all += rb.paraffin[j];
      if (j + 1 >= 5) c5 += rb.paraffin[j];  // paraffin[j] is chain length j+1
    }
    for (size_t j = 0; j < rb.olefin.size(); ++j) {
      all += rb.olefin[j];
      if (j + 2 >= 5) c5 += rb.olefin[j];  // olefin[j] is chain length j+2
    }
    // Chains beyond the truncation length are geometric; their molecule
    // count closes in the same way the consumption tails do. Everything
    // past N_max is C5+ material.
    const double xp = alpha_n(k, S, params.N_max + 1);
    const double xo = std::exp(k.c) * xp;
    if (!rb.paraffin.empty() && xp < 1.0) {
      const double tail_p = rb.paraffin.back() * xp / (1.0 - xp);
      all += tail_p;
      c5 += tail_p;
    }
    if (!rb.olefin.empty() && xo < 1.0) {
      const double tail_o = rb.olefin.back() * xo / (1.0 - xo);
      all += tail_o;
      c5 += tail_o;
    }
    mol_all[i] = all;
    mol_c5[i] = c5;
  }

  DerivedQuantities out;
  const double integral = integrate_radial(consumption, config.R_p);  // mol/(kg s) * m^3
  const double volume = 4.0 / 3.0 * std::numbers::pi * config.R_p * config.R_p * config.R_p;
  out.R_tot_CO_mol_s = integral * config.rho_cat;
  out.R_tot_CO_mol_skg = integral / volume;

  const double surface_rate = consumption[n - 1];
  if (surface_rate == 0.0)
    throw ZeroSurfaceRate("effectiveness factor undefined: surface CO rate is zero");
  out.eta_CO = integral / (volume * surface_rate);

  const double den = integrate_radial(mol_all, config.R_p);
  if (den == 0.0)
    throw ZeroDenominator("product split undefined: no production anywhere in the pellet");
  out.c5plus = integrate_radial(mol_c5, config.R_p) / den;
  return out;
}

GuessErrorPct guess_error(const Profile& guess, const Profile& final_profile) {
  const size_t n = final_profile.w_CO.size();
  if (guess.w_CO.size() != n || guess.w_H2.size() != n)
    throw OutOfRange("guess and final profile must share a grid");
  const double bc_co = final_profile.w_CO[n - 1];
  const double bc_h2 = final_profile.w_H2[n - 1];
  if (bc_co == 0.0 || bc_h2 == 0.0)
    throw ZeroBoundary("guess error is measured relative to nonzero surface values");
  GuessErrorPct e;
  for (size_t i = 0; i < n; ++i) {
    e.co = std::max(e.co, std::abs(final_profile.w_CO[i] - guess.w_CO[i]));
    e.h2 = std::max(e.h2, std::abs(final_profile.w_H2[i] - guess.w_H2[i]));
  }
  e.co = e.co / bc_co * 100.0;
  e.h2 = e.h2 / bc_h2 * 100.0;
  return e;
}

namespace {

std::vector<BoundaryConditions> sweep_grid(const SweepSpec& spec) {
  std::vector<BoundaryConditions> grid;
  grid.reserve(static_cast<size_t>(spec.n_CO) * spec.n_H2);
  for (int i = 1; i <= spec.n_CO; ++i) {
    for (int j = 1; j <= spec.n_H2; ++j) {
      BoundaryConditions bc;
      bc.P_CO = spec.P_CO_max * static_cast<double>(i) / spec.n_CO;
      bc.P_H2 = spec.P_H2_max * static_cast<double>(j) / spec.n_H2;
      bc.P_H2O = spec.P_H2O;
      bc.T = spec.T;
      grid.push_back(bc);
    }
  }
  return grid;
}

}  // namespace

std::vector<SweepCase> run_sweep(const SweepSpec& spec, const PelletConfig& config,
                                 const KineticParameters& params, const SiteBackend& backend,
                                 int jobs, const SolveOptions& options) {
  const std::vector<BoundaryConditions> grid = sweep_grid(spec);
  std::vector<SweepCase> cases(grid.size());

  parallel_for(static_cast<int>(grid.size()), jobs, [&](int idx) {
    const auto t0 = std::chrono::steady_clock::now();
    SweepCase& cs = cases[idx];
    cs.bc = grid[idx];

    Profile start;
    SolveReport guess_report;
    try {
      std::tie(start, guess_report) = initial_guess(cs.bc, config, params, backend);
      cs.guess_ok = true;
    } catch (const GuessFailed&) {
      start = constant_profile(cs.bc, config);
      guess_report.guess_iterations = 250;
      cs.guess_ok = false;
    }

    auto [profile, report] = solve_bvp(cs.bc, config, params, backend, start, options);
    report.guess_iterations = guess_report.guess_iterations;
    cs.report = std::move(report);
    cs.guess_err = guess_error(start, profile);
    if (cs.report.converged)
      cs.derived = derived_quantities(profile, cs.bc, config, params, backend);
    cs.wall_seconds = wall_since(t0);
  });
  return cases;
}

std::vector<GammaRow> gamma_experiment(const SweepSpec& spec, const std::vector<double>& gammas,
                                       const PelletConfig& config, const KineticParameters& params,
                                       const SiteBackend& backend, int jobs,
                                       const SolveOptions& options) {
  const std::vector<BoundaryConditions> grid = sweep_grid(spec);
  std::vector<std::optional<Profile>> targets(grid.size());

  parallel_for(static_cast<int>(grid.size()), jobs, [&](int idx) {
    try {
      auto [profile, report] = solve_pellet(grid[idx], config, params, backend, options);
      if (report.converged) targets[idx] = std::move(profile);
    } catch (const GuessFailed&) {
      // no exact solution for this case; it drops out of the experiment
    }
  });

  std::vector<int> included;
  for (size_t i = 0; i < targets.size(); ++i)
    if (targets[i]) included.push_back(static_cast<int>(i));

  std::vector<GammaRow> rows;
  rows.reserve(gammas.size());
  for (double gamma : gammas) {
    GammaRow row;
    row.gamma = gamma;
    row.cases = static_cast<int>(included.size());
    std::vector<SolveReport> reports(included.size());
    const auto t0 = std::chrono::steady_clock::now();
    parallel_for(static_cast<int>(included.size()), jobs, [&](int k) {
      const int idx = included[k];
      const Profile start =
          blend_profiles(constant_profile(grid[idx], config), *targets[idx], gamma);
      reports[k] = solve_bvp(grid[idx], config, params, backend, start, options).second;
    });
    row.wall_seconds = wall_since(t0);
    int conv = 0, strict = 0, relaxed = 0;
    double iter_sum = 0.0;
    for (const SolveReport& r : reports) {
      conv += r.converged ? 1 : 0;
      strict += r.strict_positive ? 1 : 0;
      relaxed += r.relaxed_positive ? 1 : 0;
      iter_sum += r.refine_iterations;
    }
    if (!included.empty()) {
      const double n = static_cast<double>(included.size());
      row.converged_fraction = conv / n;
      row.strict_positive_fraction = strict / n;
      row.relaxed_positive_fraction = relaxed / n;
      row.mean_iterations = iter_sum / n;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string profile_csv(const Profile& profile, const PelletConfig& config) {
  std::ostringstream out;
  out << "x,r_m,w_CO,w_H2,w_H2O\n";
  for (size_t i = 0; i < profile.x.size(); ++i) {
    out << num(profile.x[i]) << "," << num(profile.x[i] * config.R_p) << ","
        << num(profile.w_CO[i]) << "," << num(profile.w_H2[i]) << ","
        << num(profile.w_H2O[i]) << "\n";
  }
  return out.str();
}

std::string sweep_csv(const std::vector<SweepCase>& cases) {
  std::ostringstream out;
  out << "x_CO,x_H2,P_CO_MPa,P_H2_MPa,P_H2O_MPa,T_K,converged,guess_ok,guess_iterations,"
         "refine_iterations,outer_iterations,residual,residual_tol,strict_positive,"
         "relaxed_positive,guess_err_co_pct,guess_err_h2_pct,R_tot_CO_mol_s,"
         "R_tot_CO_mol_skg,eta_CO,c5plus,wall_seconds\n";
  for (const SweepCase& c : cases) {
    out << num(c.bc.P_CO / 6.0) << "," << num(c.bc.P_H2 / 6.0) << "," << num(c.bc.P_CO) << ","
        << num(c.bc.P_H2) << "," << num(c.bc.P_H2O) << "," << num(c.bc.T) << ","
        << (c.report.converged ? 1 : 0) << "," << (c.guess_ok ? 1 : 0) << ","
        << c.report.guess_iterations << "," << c.report.refine_iterations << ","
        << c.report.outer_iterations << "," << num(c.report.residual_norm) << ","
        << num(c.report.residual_tol) << "," << (c.report.strict_positive ? 1 : 0) << ","
        << (c.report.relaxed_positive ? 1 : 0) << "," << num(c.guess_err.co) << ","
        << num(c.guess_err.h2) << "," << num(c.derived.R_tot_CO_mol_s) << ","
        << num(c.derived.R_tot_CO_mol_skg) << "," << num(c.derived.eta_CO) << ","
        << num(c.derived.c5plus) << "," << num(c.wall_seconds) << "\n";
  }
  return out.str();
}

std::string gamma_csv(const std::vector<GammaRow>& rows) {
  std::ostringstream out;
  out << "gamma,cases,converged_fraction,strict_positive_fraction,relaxed_positive_fraction,"
         "mean_iterations,wall_seconds\n";
  for (const GammaRow& r : rows) {
    out << num(r.gamma) << "," << r.cases << "," << num(r.converged_fraction) << ","
        << num(r.strict_positive_fraction) << "," << num(r.relaxed_positive_fraction) << ","
        << num(r.mean_iterations) << "," << num(r.wall_seconds) << "\n";
  }
  return out.str();
}

}  // namespace ftpellet
