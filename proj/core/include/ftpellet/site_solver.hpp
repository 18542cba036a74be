#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ftpellet/kinetics.hpp"

namespace ftpellet {

struct SiteSolution {
  double S = 0.0;          // vacant-site fraction, 0 < S <= 1/c0
  double J = 1.0;          // chain series sum, >= 1 (+inf if the series diverges
                           // on a branch where it is not needed)
  double residual = 0.0;   // |1/S - rhs(S)| at the returned S
  int iterations = 0;      // root-finder iterations
  std::int64_t terms_used = 0;  // explicit series terms in the last J evaluation
};

// Sum of the cumulative chain-probability products, 1 + a2 + a2*a3 + ...
// Terms are summed explicitly until the geometric bound on the remainder
// (current product * alpha_inf/(1-alpha_inf)) drops below rel_tol times the
// partial sum; the bound is then added as the tail. Explicit terms are
// capped at 100000. Throws TailDiverges when alpha_inf = 1 (eps = 0) and
// InvalidSite when S <= 0.
std::pair<double, std::int64_t> series_J(const AggregatedCoefficients& k, double S,
                                         double rel_tol = 1e-14);

// Solves the site balance 1/S = c0 + cS*alpha1*J(S) for S.
//
// The right side is non-decreasing in S while 1/S is strictly decreasing,
// so the root is unique in (0, 1/c0]. The bracket [S_lo, 1/c0] is found by
// geometric shrinking of S_lo; bisection with secant acceleration runs
// until |dS|/S <= tol. When cS*alpha1 = 0 the equation is explicit and
// S = 1/c0 is returned without iteration.
//
// Throws NoBracket if no sign change exists (corrupted parameters) and
// propagates DegenerateConditions from aggregate().
SiteSolution solve_site_fraction(const KineticParameters& params, const Conditions& cond,
                                 double tol = 1e-12);

// Same, starting from precomputed coefficients.
SiteSolution solve_site_fraction(const AggregatedCoefficients& k, double tol = 1e-12);

struct ProbeRow {
  double P_H2 = 0.0;
  double S = 0.0;
  double S_over_PH2sq = 0.0;
};

// Re-solves the site balance across a list of H2 pressures with the other
// conditions held fixed. Feeds the low-pressure asymptotics checks: S is
// expected to scale as P_H2^2 at the bottom of the range, so the third
// column flattens there.
std::vector<ProbeRow> asymptotic_probe(const KineticParameters& params,
                                       const Conditions& cond_template,
                                       const std::vector<double>& pressures,
                                       double tol = 1e-12);

}  // namespace ftpellet
