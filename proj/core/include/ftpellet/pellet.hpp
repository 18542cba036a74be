#pragma once

#include <utility>
#include <vector>

#include "ftpellet/kinetics.hpp"
#include "ftpellet/surrogate.hpp"

namespace ftpellet {

// Pellet geometry and transport constants. Diffusivity defaults are the
// bulk values 1.3e-8 / 3.6e-8 / 1.7e-8 m^2/s (CO, H2, H2O) times
// porosity/tortuosity 0.62/2. Henry constants in bar m^3/mol.
struct PelletConfig {
  double R_p = 0.85e-3;        // m
  double D_CO = 1.3e-8 * 0.62 / 2.0;
  double D_H2 = 3.6e-8 * 0.62 / 2.0;
  double D_H2O = 1.7e-8 * 0.62 / 2.0;
  double H_CO = 0.165;
  double H_H2 = 0.222;
  double H_H2O = 0.0291;
  double rho_cat = 1980.0;     // kg/m^3
  double c_ref = 1526.5;       // mol/m^3
  int N_grid = 100;
};

// Surface conditions. Pressures in MPa (converted internally: Henry
// constants are per bar, kinetics per the parameter file's unit).
struct BoundaryConditions {
  double P_CO = 0.0;
  double P_H2 = 0.0;
  double P_H2O = 0.0;
  double T = 0.0;
};

// Non-dimensional concentration fields w = c/c_ref on the uniform radial
// grid x in [0, 1]. w_H2O is not an unknown: it is reconstructed from
// w_CO through the diffusivity-weighted invariant (see eliminate_h2o).
struct Profile {
  std::vector<double> x;
  std::vector<double> w_CO;
  std::vector<double> w_H2;
  std::vector<double> w_H2O;
};

struct SolveReport {
  bool converged = false;
  double residual_norm = 0.0;   // max over interior rows and species of |L w + s|
  double residual_tol = 0.0;    // threshold the norm was compared against
  int guess_iterations = 0;     // solver iterations spent building the guess
  int refine_iterations = 0;    // implicit steps in the refinement phase
  int outer_iterations = 0;     // refinement cascades (0 when the start already solves)
  std::vector<double> tau_history;  // tau after each accepted step
  bool strict_positive = false;     // final fields all > 0
  bool relaxed_positive = false;    // final fields all > -1.2e-7
};

struct SolveOptions {
  double rtol = 1e-8;    // residual tolerance, scaled by max(||s||_inf, 1)
  int max_iterations = 2000;
};

// Tridiagonal operator rows. Row 0 is the regularized center row, row n-1
// is a placeholder the solvers overwrite with the Dirichlet condition.
struct Tridiag {
  int n = 0;
  std::vector<double> lo, di, up;
};

// Second-order finite differences for the Laplacian on a uniform grid of
// x in [0, 1]. Spherical form (1/x^2)(x^2 w')' by default; the planar
// variant serves the one-dimensional toy problem. The center row encodes
// the symmetry limit: 6 (w1 - w0)/h^2 spherical, 2 (w1 - w0)/h^2 planar.
Tridiag build_laplacian(int N_grid, bool spherical = true);

// In-place Thomas elimination. rhs becomes the solution. Throws
// SingularSystem on a vanishing pivot.
void thomas_solve(const Tridiag& A, std::vector<double>& rhs);

// out = A v (row n-1 computed like any other row; callers that replaced it
// with a BC row must ignore that entry).
void apply_tridiag(const Tridiag& A, const std::vector<double>& v, std::vector<double>& out);

// Precomputed per-problem state: grid, operator, boundary values in w
// units, source scales. Immutable; shared freely across threads.
class PelletProblem {
 public:
  PelletProblem(const BoundaryConditions& bc, const PelletConfig& config,
                const KineticParameters& params, const SiteBackend& backend);

  // Surface values of the non-dimensional fields.
  double w_bc_CO() const { return wbc_co_; }
  double w_bc_H2() const { return wbc_h2_; }
  double w_bc_H2O() const { return wbc_h2o_; }

  // Non-dimensional sources at one point. Non-positive for physical
  // inputs; identically zero when either field is <= 0.
  std::pair<double, double> source_at(double w_co, double w_h2) const;

  // Vectorized over the grid.
  void sources(const std::vector<double>& w_co, const std::vector<double>& w_h2,
               std::vector<double>& s_co, std::vector<double>& s_h2) const;

  // max over interior rows and both species of |L w + s(w)|, plus the
  // matching tolerance scale max(||s||_inf, 1).
  std::pair<double, double> residual(const std::vector<double>& w_co,
                                     const std::vector<double>& w_h2) const;

  const Tridiag& laplacian() const { return L_; }
  const PelletConfig& config() const { return config_; }
  const BoundaryConditions& bc() const { return bc_; }
  const KineticParameters& params() const { return *params_; }

  // Initial time-step heuristic: 0.1 * min_j w_bc_j / (-s_j(w_bc)), over
  // species with negative boundary source. Returns 0 when both boundary
  // sources vanish (nothing to relax: constant fields already solve).
  double tau0() const;

 private:
  BoundaryConditions bc_;
  PelletConfig config_;
  const KineticParameters* params_;
  const SiteBackend* backend_;
  Tridiag L_;
  double wbc_co_ = 0.0, wbc_h2_ = 0.0, wbc_h2o_ = 0.0;
  double scale_co_ = 0.0, scale_h2_ = 0.0;  // R_p^2 rho / (D_j c_ref)
};

// One implicit pseudo-transient step for a single species: solves
// (L + diag(s/w_old - 1/tau)) w_new = -w_old/tau with the surface row
// pinned to w_surface. The s/w ratio is taken as 0 wherever w_old <= 0.
// Other species enter only through s_old (lagged coupling).
void implicit_step(const Tridiag& L, const std::vector<double>& w_old,
                   const std::vector<double>& s_old, double tau, double w_surface,
                   std::vector<double>& w_new);

// Initial-guess construction: start from constant boundary fields and run
// the adaptive implicit iteration until the per-step relative change in w
// drops below 1%. Step acceptance needs componentwise non-negativity and
// a bounded (< 25%) change of the s/w ratios; rejected steps halve tau,
// accepted steps double it. Throws GuessFailed after 250 iterations.
std::pair<Profile, SolveReport> initial_guess(const BoundaryConditions& bc,
                                              const PelletConfig& config,
                                              const KineticParameters& params,
                                              const SiteBackend& backend);

// Continues the same iteration from an arbitrary starting profile until
// the steady-state residual passes, stalls, or the budget runs out.
// Non-convergence is reported in the SolveReport, not thrown, so sweep
// harnesses can count failures.
std::pair<Profile, SolveReport> solve_bvp(const BoundaryConditions& bc,
                                          const PelletConfig& config,
                                          const KineticParameters& params,
                                          const SiteBackend& backend, const Profile& start,
                                          const SolveOptions& options = {});

// Convenience: initial_guess then solve_bvp, with the two reports merged.
std::pair<Profile, SolveReport> solve_pellet(const BoundaryConditions& bc,
                                             const PelletConfig& config,
                                             const KineticParameters& params,
                                             const SiteBackend& backend,
                                             const SolveOptions& options = {});

// Water field from the CO field: w_H2O(x) = (D_CO/D_H2O) (w_CO(1) - w_CO(x))
// + w_H2O(1). Exact steady-state relation, valid because both species obey
// the same transport equation with proportional sources.
std::vector<double> eliminate_h2o(const std::vector<double>& w_co,
                                  const BoundaryConditions& bc, const PelletConfig& config);

// Constant-in-x profile at the boundary values. The naive guess, also the
// gamma = 0 end of the blend experiment.
Profile constant_profile(const BoundaryConditions& bc, const PelletConfig& config);

// start + gamma * (target - start), fieldwise.
Profile blend_profiles(const Profile& start, const Profile& target, double gamma);

// Residual of the reconstructed water field in its own transport equation,
// max over interior rows of |L w_H2O + s_H2O|. Bounded by D_CO/D_H2O times
// the reported CO residual; exposed for the verification suite.
double h2o_residual(const Profile& profile, const BoundaryConditions& bc,
                    const PelletConfig& config, const KineticParameters& params,
                    const SiteBackend& backend);

}  // namespace ftpellet
