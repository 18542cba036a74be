#pragma once

#include <utility>
#include <vector>

#include "ftpellet/params.hpp"

namespace ftpellet {

// Thermodynamic state at one point. Pressures are in the unit the
// parameter file declares; temperature in K.
struct Conditions {
  double P_CO = 0.0;
  double P_H2 = 0.0;
  double P_H2O = 0.0;
  double T = 0.0;
};

// Everything about the microkinetics that depends on conditions but not on
// the vacant-site fraction. Computed once per state point, then shared by
// the chain-probability, rate and site-balance evaluations.
struct AggregatedCoefficients {
  double kappa_growth = 0.0;     // chain growth, k3*K1*P_CO
  double kappa_par_long = 0.0;   // paraffin termination, n >= 2
  double kappa_ole_long = 0.0;   // olefin desorption prefactor, n >= 3
  double kappa_par_short = 0.0;  // methane termination
  double kappa_ole_short = 0.0;  // ethene desorption prefactor
  double c = 0.0;                // dE/(R*T), > 0
  double c0 = 0.0;               // site balance constant term, >= 1
  double cS = 0.0;               // site balance S-dependent prefactor
  double alpha1 = 0.0;           // first growth probability
  double eps = 0.0;              // kappa_par_long / kappa_growth (+inf when P_CO = 0)
  double alpha_inf = 0.0;        // 1/(1+eps), supremum of alpha_n over n
};

// Populates all coefficient fields. Throws DegenerateConditions when the
// water term of cS would be infinite (P_H2 = 0 with P_H2O > 0). P_CO = 0 is
// legal: kappa_growth = alpha1 = 0 and eps is +inf, which short-circuits
// every rate to zero.
AggregatedCoefficients aggregate(const KineticParameters& params, const Conditions& cond);

// Growth probability for chain length n >= 2. n = 2 uses the short-chain
// olefin constant, n >= 3 the long-chain one. Increasing in both S and n;
// always in [0, 1). Throws InvalidSite if S <= 0.
double alpha_n(const AggregatedCoefficients& k, double S, int n);

// Per-product and total rates at one state point. Sign convention:
// per-product rates are >= 0 (production), totals R_CO/R_H2 are <= 0
// (consumption). dR_* are the truncation-tail corrections, stored as the
// non-negative amounts added to the consumption magnitudes.
struct RateBundle {
  std::vector<double> paraffin;  // n = 1..N_max
  std::vector<double> olefin;    // n = 2..N_max
  double R_CO = 0.0;
  double R_H2 = 0.0;
  double dR_CO = 0.0;
  double dR_H2 = 0.0;
};

// Evaluates all product rates and assembles the totals including tail
// corrections. The cumulative alpha products are built incrementally; when
// a partial product underflows below 1e-300 the remaining factors are
// accumulated in log space. Throws InvalidSite (S <= 0) and TailDiverges
// (chain tail ratio >= 1).
RateBundle product_rates(const AggregatedCoefficients& k, double S,
                         const KineticParameters& params);

// Closed form of the weighted geometric tail sum_{j>=1} (N0 + j) x^j.
// Throws TailDiverges for x >= 1. x < 0 is rejected the same way (the
// series alternates there and the model never produces it).
double L_function(double x, double N0);

// Tail corrections (dR_CO, dR_H2) beyond n = N_max, recomputed from
// scratch. product_rates embeds the same arithmetic; this entry point
// exists for tests and diagnostics.
std::pair<double, double> tail_corrections(const AggregatedCoefficients& k, double S,
                                           const KineticParameters& params);

}  // namespace ftpellet
