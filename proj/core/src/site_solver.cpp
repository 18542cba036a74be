#include "ftpellet/site_solver.hpp"

#include <cmath>
#include <limits>

#include "ftpellet/errors.hpp"

namespace ftpellet {

std::pair<double, std::int64_t> series_J(const AggregatedCoefficients& k, double S,
                                         double rel_tol) {
  if (!(S > 0.0)) throw InvalidSite("series_J needs S > 0");
  if (k.kappa_growth == 0.0) return {1.0, 1};  // all alpha_n vanish
  if (!(k.alpha_inf < 1.0))
    throw TailDiverges("chain series needs alpha_inf < 1 (eps = 0 diverges)");

  constexpr std::int64_t cap = 100000;
  const double tail_factor = k.alpha_inf / (1.0 - k.alpha_inf);
  const double fac = std::exp(-k.c);

  double J = 1.0;
  double prod = 1.0;
  double e_minus_nc = std::exp(-2.0 * k.c);
  std::int64_t terms = 1;
  for (int n = 2; terms < cap; ++n) {
    const double kole = (n == 2) ? k.kappa_ole_short : k.kappa_ole_long;
    const double a = k.kappa_growth /
                     (k.kappa_growth + k.kappa_par_long + e_minus_nc * kole / S);
    prod *= a;
    J += prod;
    ++terms;
    e_minus_nc *= fac;
    // alpha_n <= alpha_inf for every n, so the remainder is below a plain
    // geometric tail started at the current product.
    const double tail = prod * tail_factor;
    if (tail < rel_tol * J) return {J + tail, terms};
  }
  return {J + prod * tail_factor, terms};
}

SiteSolution solve_site_fraction(const AggregatedCoefficients& k, double tol) {
  SiteSolution sol;
  const double hi = 1.0 / k.c0;

  if (k.alpha1 == 0.0 || k.cS == 0.0) {
    // The S-dependent term is absent and the balance is explicit.
    sol.S = hi;
    if (k.alpha1 > 0.0 && k.alpha_inf < 1.0) {
      auto [J, terms] = series_J(k, sol.S);
      sol.J = J;
      sol.terms_used = terms;
    } else {
      sol.J = (k.alpha1 == 0.0) ? 1.0 : std::numeric_limits<double>::infinity();
      sol.terms_used = k.alpha1 == 0.0 ? 1 : 0;
    }
    sol.residual = 0.0;
    return sol;
  }

  auto F = [&](double S) {
    auto [J, terms] = series_J(k, S);
    (void)terms;
    return 1.0 / S - (k.c0 + k.cS * k.alpha1 * J);
  };

  // F(hi) = -cS alpha1 J < 0 in exact arithmetic. When the S-dependent term
  // sits below rounding noise the sign can flip; the correction to 1/c0 is
  // then unresolvable and 1/c0 is the answer.
  if (!(F(hi) < 0.0)) {
    sol.S = hi;
    auto [J, terms] = series_J(k, sol.S);
    sol.J = J;
    sol.terms_used = terms;
    sol.residual = std::abs(F(hi));
    sol.iterations = 0;
    return sol;
  }
  double lo = hi;
  while (true) {
    lo *= 0.5;
    if (F(lo) > 0.0) break;  // 1/S grows without bound, so this terminates
    if (lo < 1e-300)
      throw NoBracket("site balance never becomes positive while shrinking S");
  }

  // F is strictly decreasing in S (every alpha_n grows with S), so the root
  // is unique in [lo, hi]. Alternate bisection with a guarded secant step;
  // the forced midpoints keep the bracket halving at least every other pass.
  double a = lo, b = hi;
  double x_prev = a, f_prev = F(a);
  double x = b, fx = F(b);
  int it = 0;
  for (; it < 200; ++it) {
    double xs = 0.5 * (a + b);
    if (it % 2 == 1) {
      const double denom = fx - f_prev;
      if (denom != 0.0) {
        const double xsec = x - fx * (x - x_prev) / denom;
        if (a < xsec && xsec < b) xs = xsec;
      }
    }
    const double fs = F(xs);
    x_prev = x;
    f_prev = fx;
    x = xs;
    fx = fs;
    if (fs > 0.0) {
      a = xs;
    } else {
      b = xs;
    }
    if ((b - a) / b < tol) break;
  }

  sol.S = 0.5 * (a + b);
  auto [J, terms] = series_J(k, sol.S);
  sol.J = J;
  sol.terms_used = terms;
  sol.residual = std::abs(1.0 / sol.S - (k.c0 + k.cS * k.alpha1 * J));
  sol.iterations = it + 1;
  return sol;
}

SiteSolution solve_site_fraction(const KineticParameters& params, const Conditions& cond,
                                 double tol) {
  return solve_site_fraction(aggregate(params, cond), tol);
}

std::vector<ProbeRow> asymptotic_probe(const KineticParameters& params,
                                       const Conditions& cond_template,
                                       const std::vector<double>& pressures, double tol) {
  std::vector<ProbeRow> rows;
  rows.reserve(pressures.size());
  for (double ph2 : pressures) {
    Conditions cond = cond_template;
    cond.P_H2 = ph2;
    const double S = solve_site_fraction(params, cond, tol).S;
    rows.push_back({ph2, S, S / (ph2 * ph2)});
  }
  return rows;
}

}  // namespace ftpellet
