#pragma once

#include <vector>

namespace ftpellet {

// One-dimensional planar reaction-diffusion demo: c'' = -s(c) on [0, 1]
// with c'(0) = 0, c(1) = 1. The exact source is linear; the two
// approximations mimic a fitted model that was never trained near c = 0
// and therefore extrapolates wrongly there. Running them shows how bad
// source asymptotics push the solution into negative concentrations.
enum class ToyVariant { exact, approx1, approx2 };

struct ToyParams {
  double k = 50.0;
  double theta = 0.04;
};

// Source value. exact: -k c everywhere. approx1: flat -k*theta below
// theta. approx2: additionally replaces the c < 0 branch with -k |c|/25,
// a shallow pull that keeps dragging the solution down once it crosses
// zero (and jumps at c = 0, so no steady state exists at the default
// parameters; see the solver notes).
double toy_source(ToyVariant v, double c, const ToyParams& p = {});

// Piecewise-analytic slope ds/dc used by the linearized implicit step.
double toy_source_slope(ToyVariant v, double c, const ToyParams& p = {});

struct ToyResult {
  std::vector<double> x;
  std::vector<double> c;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;   // max interior |c'' + s(c)| at the final iterate
  double min_c = 0.0;      // most negative value of the final profile
};

// Adaptive pseudo-transient solve with the source linearized around the
// current iterate (Taylor slope, not s/w: the point of the exercise is to
// let approximation-driven negatives through, so no positivity device is
// used). Steps that grow the interior residual are rejected and halve tau;
// accepted steps double it. For the exact variant this is plain implicit
// Euler and converges in a handful of steps. Non-convergence is reported,
// not thrown: approx2 genuinely has no solution to converge to.
ToyResult solve_toy(ToyVariant v, int N_grid = 201, double tol = 1e-10, int max_iterations = 500,
                    const ToyParams& p = {});

}  // namespace ftpellet
