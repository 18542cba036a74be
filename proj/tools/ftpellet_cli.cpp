// Command-line front end: site-balance solves, asymptotics probes, single
// pellet solves, parameter sweeps, the start-blend experiment, the toy
// problem, and input-file validation. Tabular results go to stdout, or to
// CSV files under --out when given; --json switches the scalar summaries
// to machine-readable output.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ftpellet/analysis.hpp"
#include "ftpellet/errors.hpp"
#include "ftpellet/kinetics.hpp"
#include "ftpellet/pellet.hpp"
#include "ftpellet/site_solver.hpp"
#include "ftpellet/surrogate.hpp"
#include "ftpellet/toy.hpp"
#include "ftpellet/weights.hpp"

using namespace ftpellet;
using nlohmann::json;

namespace {

struct CommonOpts {
  std::string params_path;
  std::string weights_path;
  std::string backend = "exact";
  std::string out_dir;
  bool as_json = false;
  int jobs = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_backend = true) {
  cmd->add_option("--params", o.params_path, "kinetic parameter file (default: built-in set)");
  cmd->add_option("--out", o.out_dir, "directory for CSV output (default: stdout)");
  cmd->add_flag("--json", o.as_json, "print summaries as JSON");
  cmd->add_option("--jobs", o.jobs, "worker threads for sweeps (0 = auto)");
  if (with_backend) {
    cmd->add_option("--backend", o.backend,
                    "site-fraction backend: exact | weights[:path] | plateau[:y0] | "
                    "baseline10y[:y0]");
    cmd->add_option("--weights", o.weights_path, "weight file for --backend weights");
  }
}

KineticParameters load_params(const CommonOpts& o) {
  return o.params_path.empty() ? KineticParameters::placeholder()
                               : KineticParameters::load(o.params_path);
}

// Writes content under the --out directory, creating it on demand, or to
// stdout when no directory was requested.
void emit_table(const CommonOpts& o, const std::string& filename, const std::string& content) {
  if (o.out_dir.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::create_directories(o.out_dir);
  const std::filesystem::path path = std::filesystem::path(o.out_dir) / filename;
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write " + path.string());
  out << content;
  std::cerr << "wrote " << path.string() << "\n";
}

void emit_summary(const CommonOpts& o, const json& j, const std::string& text) {
  if (o.as_json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

json report_json(const SolveReport& r) {
  return json{{"converged", r.converged},
              {"residual", r.residual_norm},
              {"residual_tol", r.residual_tol},
              {"guess_iterations", r.guess_iterations},
              {"refine_iterations", r.refine_iterations},
              {"outer_iterations", r.outer_iterations},
              {"strict_positive", r.strict_positive},
              {"relaxed_positive", r.relaxed_positive}};
}

int cmd_site(const CommonOpts& o, const Conditions& cond) {
  const KineticParameters params = load_params(o);
  const SiteSolution sol = solve_site_fraction(params, cond);
  const json j{{"S", sol.S},
               {"J", sol.J},
               {"residual", sol.residual},
               {"iterations", sol.iterations},
               {"series_terms", sol.terms_used}};
  char text[256];
  std::snprintf(text, sizeof(text),
                "S = %.12g\nJ = %.12g\nresidual = %.3g\niterations = %d\nseries_terms = %lld\n",
                sol.S, sol.J, sol.residual, sol.iterations,
                static_cast<long long>(sol.terms_used));
  emit_summary(o, j, text);
  return 0;
}

int cmd_probe(const CommonOpts& o, const Conditions& cond, double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2)
    throw OutOfRange("probe needs 0 < --ph2-min < --ph2-max and --points >= 2");
  const KineticParameters params = load_params(o);
  std::vector<double> pressures;
  for (int i = 0; i < points; ++i)
    pressures.push_back(lo * std::pow(hi / lo, i / (points - 1.0)));
  const auto rows = asymptotic_probe(params, cond, pressures);

  std::string csv = "P_H2,S,S_over_PH2sq\n";
  char line[128];
  for (const ProbeRow& r : rows) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", r.P_H2, r.S, r.S_over_PH2sq);
    csv += line;
  }
  emit_table(o, "probe.csv", csv);
  return 0;
}

int cmd_pellet(const CommonOpts& o, const BoundaryConditions& bc, int grid, double tol) {
  const KineticParameters params = load_params(o);
  PelletConfig cfg;
  if (grid > 0) cfg.N_grid = grid;
  SolveOptions options;
  if (tol > 0.0) options.rtol = tol;
  const auto backend = make_backend(o.backend, o.weights_path);

  const auto [profile, report] = solve_pellet(bc, cfg, params, *backend, options);
  json j{{"backend", backend->name()}, {"report", report_json(report)}};
  std::string text;
  if (report.converged) {
    const DerivedQuantities d = derived_quantities(profile, bc, cfg, params, *backend);
    j["derived"] = {{"R_tot_CO_mol_s", d.R_tot_CO_mol_s},
                    {"R_tot_CO_mol_skg", d.R_tot_CO_mol_skg},
                    {"eta_CO", d.eta_CO},
                    {"c5plus", d.c5plus}};
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "converged (residual %.3g <= %.3g)\nguess/refine/outer iterations: %d/%d/%d\n"
                  "eta_CO = %.6g\nc5plus = %.6g\nR_tot_CO = %.6g mol/s (%.6g mol/(s kg))\n",
                  report.residual_norm, report.residual_tol, report.guess_iterations,
                  report.refine_iterations, report.outer_iterations, d.eta_CO, d.c5plus,
                  d.R_tot_CO_mol_s, d.R_tot_CO_mol_skg);
    text = buf;
  } else {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "NOT converged (residual %.3g > %.3g after %d steps)\n",
                  report.residual_norm, report.residual_tol, report.refine_iterations);
    text = buf;
  }
  emit_summary(o, j, text);
  emit_table(o, "profile.csv", profile_csv(profile, cfg));
  return report.converged ? 0 : 1;
}

int cmd_sweep(const CommonOpts& o, const SweepSpec& spec, int grid, double tol) {
  const KineticParameters params = load_params(o);
  PelletConfig cfg;
  if (grid > 0) cfg.N_grid = grid;
  SolveOptions options;
  if (tol > 0.0) options.rtol = tol;
  const auto backend = make_backend(o.backend, o.weights_path);

  const auto cases = run_sweep(spec, cfg, params, *backend, o.jobs, options);
  int converged = 0;
  for (const SweepCase& c : cases) converged += c.report.converged ? 1 : 0;

  emit_table(o, "sweep.csv", sweep_csv(cases));
  const json j{{"cases", cases.size()}, {"converged", converged}, {"backend", backend->name()}};
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d/%zu cases converged\n", converged, cases.size());
  emit_summary(o, j, buf);
  return converged == static_cast<int>(cases.size()) ? 0 : 1;
}

int cmd_gamma(const CommonOpts& o, const SweepSpec& spec, const std::vector<double>& gammas,
              int grid, double tol) {
  const KineticParameters params = load_params(o);
  PelletConfig cfg;
  if (grid > 0) cfg.N_grid = grid;
  SolveOptions options;
  if (tol > 0.0) options.rtol = tol;
  const auto backend = make_backend(o.backend, o.weights_path);

  const auto rows = gamma_experiment(spec, gammas, cfg, params, *backend, o.jobs, options);
  emit_table(o, "gamma.csv", gamma_csv(rows));

  json jr = json::array();
  std::string text;
  for (const GammaRow& r : rows) {
    jr.push_back({{"gamma", r.gamma},
                  {"cases", r.cases},
                  {"converged_fraction", r.converged_fraction},
                  {"strict_positive_fraction", r.strict_positive_fraction},
                  {"relaxed_positive_fraction", r.relaxed_positive_fraction},
                  {"mean_iterations", r.mean_iterations}});
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "gamma %.2f: converged %.3f strict+ %.3f relaxed+ %.3f mean_iters %.1f\n",
                  r.gamma, r.converged_fraction, r.strict_positive_fraction,
                  r.relaxed_positive_fraction, r.mean_iterations);
    text += buf;
  }
  emit_summary(o, json{{"rows", jr}}, text);
  return 0;
}

int cmd_toy(const CommonOpts& o, const std::string& variant, int grid, double tol, int max_iter) {
  ToyVariant v;
  if (variant == "exact")
    v = ToyVariant::exact;
  else if (variant == "approx1")
    v = ToyVariant::approx1;
  else if (variant == "approx2")
    v = ToyVariant::approx2;
  else
    throw SchemaError("toy variant must be exact | approx1 | approx2");

  const ToyResult r = solve_toy(v, grid, tol, max_iter);
  std::string csv = "x,c\n";
  char line[80];
  for (size_t i = 0; i < r.x.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g\n", r.x[i], r.c[i]);
    csv += line;
  }
  emit_table(o, "toy_" + variant + ".csv", csv);

  const json j{{"variant", variant},
               {"converged", r.converged},
               {"iterations", r.iterations},
               {"residual", r.residual},
               {"min_c", r.min_c}};
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s: converged=%d iterations=%d residual=%.3g min_c=%.6g\n",
                variant.c_str(), r.converged ? 1 : 0, r.iterations, r.residual, r.min_c);
  emit_summary(o, j, buf);
  return r.converged ? 0 : 1;
}

int cmd_validate(const CommonOpts& o) {
  if (o.params_path.empty() && o.weights_path.empty())
    throw SchemaError("validate needs --params and/or --weights");
  if (!o.params_path.empty()) {
    KineticParameters::load(o.params_path);  // throws on any schema problem
    std::cout << "params ok: " << o.params_path << "\n";
  }
  if (!o.weights_path.empty()) {
    WeightFile::load(o.weights_path);
    std::cout << "weights ok: " << o.weights_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fischer-Tropsch catalyst pellet pipeline"};
  app.require_subcommand(1);

  // site
  CommonOpts o_site;
  Conditions c_site{30.0, 30.0, 5.0, 493.15};
  auto* site = app.add_subcommand("site", "solve the vacant-site balance at one state point");
  add_common(site, o_site, false);
  site->add_option("--pco", c_site.P_CO, "CO pressure (parameter-file unit)");
  site->add_option("--ph2", c_site.P_H2, "H2 pressure (parameter-file unit)");
  site->add_option("--ph2o", c_site.P_H2O, "H2O pressure (parameter-file unit)");
  site->add_option("--temp", c_site.T, "temperature, K");

  // probe
  CommonOpts o_probe;
  Conditions c_probe{1.0, 0.0, 0.1, 493.15};
  double probe_lo = 1e-5, probe_hi = 1e-3;
  int probe_points = 9;
  auto* probe =
      app.add_subcommand("probe", "site fraction across a log-spaced H2 pressure range");
  add_common(probe, o_probe, false);
  probe->add_option("--pco", c_probe.P_CO, "fixed CO pressure (parameter-file unit)");
  probe->add_option("--ph2o", c_probe.P_H2O, "fixed H2O pressure (parameter-file unit)");
  probe->add_option("--temp", c_probe.T, "temperature, K");
  probe->add_option("--ph2-min", probe_lo, "lowest H2 pressure");
  probe->add_option("--ph2-max", probe_hi, "highest H2 pressure");
  probe->add_option("--points", probe_points, "number of log-spaced points");

  // pellet
  CommonOpts o_pellet;
  BoundaryConditions bc{3.0, 3.0, 0.5, 493.15};
  int pellet_grid = 0;
  double pellet_tol = 0.0;
  auto* pellet = app.add_subcommand("pellet", "solve one pellet boundary value problem");
  add_common(pellet, o_pellet);
  pellet->add_option("--pco", bc.P_CO, "surface CO pressure, MPa");
  pellet->add_option("--ph2", bc.P_H2, "surface H2 pressure, MPa");
  pellet->add_option("--ph2o", bc.P_H2O, "surface H2O pressure, MPa");
  pellet->add_option("--temp", bc.T, "temperature, K");
  pellet->add_option("--grid", pellet_grid, "radial grid points (default 100)");
  pellet->add_option("--tol", pellet_tol, "residual tolerance (default 1e-8)");

  // sweep
  CommonOpts o_sweep;
  SweepSpec spec;
  int sweep_grid = 0;
  double sweep_tol = 0.0;
  auto* sweep = app.add_subcommand("sweep", "full pipeline over a CO/H2 pressure grid");
  add_common(sweep, o_sweep);
  sweep->add_option("--n-co", spec.n_CO, "CO grid points (default 10)");
  sweep->add_option("--n-h2", spec.n_H2, "H2 grid points (default 10)");
  sweep->add_option("--pco-max", spec.P_CO_max, "CO pressure ceiling, MPa");
  sweep->add_option("--ph2-max", spec.P_H2_max, "H2 pressure ceiling, MPa");
  sweep->add_option("--ph2o", spec.P_H2O, "water pressure, MPa");
  sweep->add_option("--temp", spec.T, "temperature, K");
  sweep->add_option("--grid", sweep_grid, "radial grid points (default 100)");
  sweep->add_option("--tol", sweep_tol, "residual tolerance (default 1e-8)");

  // gamma
  CommonOpts o_gamma;
  SweepSpec gspec;
  std::vector<double> gammas{0.0, 0.25, 0.5, 0.75, 0.9, 1.0};
  int gamma_grid = 0;
  double gamma_tol = 0.0;
  auto* gamma =
      app.add_subcommand("gamma", "start-quality experiment: re-solve from blended starts");
  add_common(gamma, o_gamma);
  gamma->add_option("--n-co", gspec.n_CO, "CO grid points (default 10)");
  gamma->add_option("--n-h2", gspec.n_H2, "H2 grid points (default 10)");
  gamma->add_option("--pco-max", gspec.P_CO_max, "CO pressure ceiling, MPa");
  gamma->add_option("--ph2-max", gspec.P_H2_max, "H2 pressure ceiling, MPa");
  gamma->add_option("--ph2o", gspec.P_H2O, "water pressure, MPa");
  gamma->add_option("--temp", gspec.T, "temperature, K");
  gamma->add_option("--gammas", gammas, "blend factors to test");
  gamma->add_option("--grid", gamma_grid, "radial grid points (default 100)");
  gamma->add_option("--tol", gamma_tol, "residual tolerance (default 1e-8)");

  // toy
  CommonOpts o_toy;
  std::string toy_variant = "exact";
  int toy_grid = 201, toy_max_iter = 500;
  double toy_tol = 1e-10;
  auto* toy = app.add_subcommand("toy", "one-dimensional model problem of the source handling");
  add_common(toy, o_toy, false);
  toy->add_option("--variant", toy_variant, "exact | approx1 | approx2");
  toy->add_option("--grid", toy_grid, "grid points (default 201)");
  toy->add_option("--tol", toy_tol, "residual tolerance (default 1e-10)");
  toy->add_option("--max-iter", toy_max_iter, "iteration budget (default 500)");

  // validate
  CommonOpts o_validate;
  auto* validate = app.add_subcommand("validate", "check parameter and weight files");
  add_common(validate, o_validate);

  CLI11_PARSE(app, argc, argv);

  try {
    if (site->parsed()) return cmd_site(o_site, c_site);
    if (probe->parsed()) return cmd_probe(o_probe, c_probe, probe_lo, probe_hi, probe_points);
    if (pellet->parsed()) return cmd_pellet(o_pellet, bc, pellet_grid, pellet_tol);
    if (sweep->parsed()) return cmd_sweep(o_sweep, spec, sweep_grid, sweep_tol);
    if (gamma->parsed()) return cmd_gamma(o_gamma, gspec, gammas, gamma_grid, gamma_tol);
    if (toy->parsed()) return cmd_toy(o_toy, toy_variant, toy_grid, toy_tol, toy_max_iter);
    if (validate->parsed()) return cmd_validate(o_validate);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
