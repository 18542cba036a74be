#pragma once

#include <string>
#include <vector>

#include "ftpellet/pellet.hpp"

namespace ftpellet {

// Trapezoid rule for int_0^Rp f(r) 4 pi r^2 dr on the uniform grid the
// field lives on (endpoints included).
double integrate_radial(const std::vector<double>& f, double R_p);

struct DerivedQuantities {
  double R_tot_CO_mol_s = 0.0;      // whole-pellet CO consumption, mol/s
  double R_tot_CO_mol_skg = 0.0;    // same per kg of catalyst
  double eta_CO = 0.0;              // effectiveness factor
  double c5plus = 0.0;              // >= C5 share of production
};

// Pointwise rates over the profile, volume-integrated. eta_CO compares the
// integrated CO consumption with the surface-rate-filled pellet; c5plus is
// the ratio of integrated production sums for n >= 5 over all n, tail
// corrections included in both. Throws ZeroSurfaceRate / ZeroDenominator
// on degenerate inputs.
DerivedQuantities derived_quantities(const Profile& profile, const BoundaryConditions& bc,
                                     const PelletConfig& config, const KineticParameters& params,
                                     const SiteBackend& backend);

struct GuessErrorPct {
  double co = 0.0;
  double h2 = 0.0;
};

// max_r |final - guess| / w(1), per species, in percent. Throws
// ZeroBoundary when a surface value is zero.
GuessErrorPct guess_error(const Profile& guess, const Profile& final_profile);

struct SweepSpec {
  int n_CO = 10;
  int n_H2 = 10;
  double P_CO_max = 6.0;   // MPa; grid points at P_max * i/n, i = 1..n
  double P_H2_max = 6.0;
  double P_H2O = 0.5;      // MPa
  double T = 493.15;       // K
};

struct SweepCase {
  BoundaryConditions bc;
  SolveReport report;
  DerivedQuantities derived;   // valid only when report.converged
  GuessErrorPct guess_err;
  bool guess_ok = false;       // initial_guess met its own stop rule
  double wall_seconds = 0.0;
};

// Full pipeline over the pressure grid: guess, refine, derived quantities.
// Cases run concurrently on up to `jobs` threads (0 = hardware pick);
// results are indexed by case, so the output order is deterministic.
std::vector<SweepCase> run_sweep(const SweepSpec& spec, const PelletConfig& config,
                                 const KineticParameters& params, const SiteBackend& backend,
                                 int jobs = 0, const SolveOptions& options = {});

struct GammaRow {
  double gamma = 0.0;
  int cases = 0;
  double converged_fraction = 0.0;
  double strict_positive_fraction = 0.0;   // final fields all > 0
  double relaxed_positive_fraction = 0.0;  // final fields all > -1.2e-7
  double mean_iterations = 0.0;            // refinement steps, converged or not
  double wall_seconds = 0.0;
};

// Start-quality experiment: for each gamma, every case is re-solved from
// w_BC + (w_exact - w_BC) * gamma and the outcome fractions are recorded.
// The exact solutions are computed up front; cases without one (the full
// pipeline failed there) drop out of every row.
std::vector<GammaRow> gamma_experiment(const SweepSpec& spec, const std::vector<double>& gammas,
                                       const PelletConfig& config, const KineticParameters& params,
                                       const SiteBackend& backend, int jobs = 0,
                                       const SolveOptions& options = {});

// CSV writers shared by the CLI and the test harnesses. All numbers are
// printed with %.17g so files round-trip to the exact doubles.
std::string profile_csv(const Profile& profile, const PelletConfig& config);
std::string sweep_csv(const std::vector<SweepCase>& cases);
std::string gamma_csv(const std::vector<GammaRow>& rows);

}  // namespace ftpellet
