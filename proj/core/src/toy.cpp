#include "ftpellet/toy.hpp"

#include <algorithm>
#include <cmath>

#include "ftpellet/pellet.hpp"

namespace ftpellet {

double toy_source(ToyVariant v, double c, const ToyParams& p) {
  switch (v) {
    case ToyVariant::exact:
      return -p.k * c;
    case ToyVariant::approx1:
      return c < p.theta ? -p.k * p.theta : -p.k * c;
    case ToyVariant::approx2:
      if (c < 0.0) return -p.k * (-c) / 25.0;
      return c < p.theta ? -p.k * p.theta : -p.k * c;
  }
  return 0.0;
}

double toy_source_slope(ToyVariant v, double c, const ToyParams& p) {
  switch (v) {
    case ToyVariant::exact:
      return -p.k;
    case ToyVariant::approx1:
      return c < p.theta ? 0.0 : -p.k;
    case ToyVariant::approx2:
      if (c < 0.0) return p.k / 25.0;
      return c < p.theta ? 0.0 : -p.k;
  }
  return 0.0;
}

ToyResult solve_toy(ToyVariant v, int N_grid, double tol, int max_iterations,
                    const ToyParams& p) {
  const Tridiag L = build_laplacian(N_grid, /*spherical=*/false);
  const int n = N_grid;

  std::vector<double> c(n, 1.0);
  const double s_surface = toy_source(v, 1.0, p);
  double tau = s_surface != 0.0 ? 0.1 / std::abs(s_surface) : 1.0;

  std::vector<double> lc;
  auto resid = [&](const std::vector<double>& cv) {
    double r = 0.0;
    double scale = 1.0;
    apply_tridiag(L, cv, lc);
    for (int i = 0; i < n; ++i) {
      const double s = toy_source(v, cv[i], p);
      if (i < n - 1) r = std::max(r, std::abs(lc[i] + s));
      scale = std::max(scale, std::abs(s));
    }
    return std::pair<double, double>(r, scale);
  };

  auto [rn, sc] = resid(c);
  int it = 0;
  bool converged = rn <= tol * sc;
  std::vector<double> cn(n), sv(n), sl(n);
  while (!converged && it < max_iterations) {
    ++it;
    for (int i = 0; i < n; ++i) {
      sv[i] = toy_source(v, c[i], p);
      sl[i] = toy_source_slope(v, c[i], p);
    }
    Tridiag A = L;
    for (int i = 0; i < n; ++i) A.di[i] += sl[i] - 1.0 / tau;
    for (int i = 0; i < n; ++i) cn[i] = -c[i] / tau + sl[i] * c[i] - sv[i];
    A.lo[n - 1] = 0.0;
    A.di[n - 1] = 1.0;
    A.up[n - 1] = 0.0;
    cn[n - 1] = 1.0;
    thomas_solve(A, cn);

    const auto [rn_new, sc_new] = resid(cn);
    // Damped acceptance: a step may not grow the interior residual. The
    // tiny slack absorbs round-off ties near the floor.
    if (rn_new <= rn * 1.0001) {
      c = cn;
      rn = rn_new;
      sc = sc_new;
      tau = std::min(tau * 2.0, 1e30);
      if (rn <= tol * sc) {
        converged = true;
        break;
      }
    } else {
      tau *= 0.5;
    }
  }

  ToyResult result;
  result.x.resize(n);
  for (int i = 0; i < n; ++i) result.x[i] = static_cast<double>(i) / (n - 1);
  result.c = c;
  result.converged = converged;
  result.iterations = it;
  result.residual = rn;
  result.min_c = *std::min_element(c.begin(), c.end());
  return result;
}

}  // namespace ftpellet
