#include "ftpellet/pellet.hpp"

#include <algorithm>
#include <cmath>

#include "ftpellet/errors.hpp"

namespace ftpellet {

Tridiag build_laplacian(int N_grid, bool spherical) {
  if (N_grid < 3) throw OutOfRange("grid needs at least 3 points");
  Tridiag A;
  A.n = N_grid;
  A.lo.assign(N_grid, 0.0);
  A.di.assign(N_grid, 0.0);
  A.up.assign(N_grid, 0.0);
  const double h = 1.0 / (N_grid - 1);
  const double inv_h2 = 1.0 / (h * h);
  // Center row from the symmetry condition w'(0) = 0; the spherical
  // operator picks up the extra factor 3 from the 2w'/x limit.
  const double center = spherical ? 6.0 : 2.0;
  A.di[0] = -center * inv_h2;
  A.up[0] = center * inv_h2;
  for (int i = 1; i < N_grid - 1; ++i) {
    const double x = i * h;
    const double curv = spherical ? 1.0 / (x * h) : 0.0;
    A.lo[i] = inv_h2 - curv;
    A.di[i] = -2.0 * inv_h2;
    A.up[i] = inv_h2 + curv;
  }
  // Surface row stays zero; the solvers overwrite it with the Dirichlet
  // condition and residual evaluations skip it.
  return A;
}

void thomas_solve(const Tridiag& A, std::vector<double>& rhs) {
  const int n = A.n;
  std::vector<double> cp(n), dp(n);
  if (A.di[0] == 0.0) throw SingularSystem("zero pivot in row 0");
  cp[0] = A.up[0] / A.di[0];
  dp[0] = rhs[0] / A.di[0];
  for (int i = 1; i < n; ++i) {
    const double m = A.di[i] - A.lo[i] * cp[i - 1];
    if (m == 0.0) throw SingularSystem("zero pivot in row " + std::to_string(i));
    cp[i] = A.up[i] / m;
    dp[i] = (rhs[i] - A.lo[i] * dp[i - 1]) / m;
  }
  rhs[n - 1] = dp[n - 1];
  for (int i = n - 2; i >= 0; --i) rhs[i] = dp[i] - cp[i] * rhs[i + 1];
}

void apply_tridiag(const Tridiag& A, const std::vector<double>& v, std::vector<double>& out) {
  const int n = A.n;
  out.assign(n, 0.0);
  out[0] = A.di[0] * v[0] + A.up[0] * v[1];
  for (int i = 1; i < n - 1; ++i)
    out[i] = A.lo[i] * v[i - 1] + A.di[i] * v[i] + A.up[i] * v[i + 1];
  out[n - 1] = A.lo[n - 1] * v[n - 2] + A.di[n - 1] * v[n - 1];
}

PelletProblem::PelletProblem(const BoundaryConditions& bc, const PelletConfig& config,
                             const KineticParameters& params, const SiteBackend& backend)
    : bc_(bc), config_(config), params_(&params), backend_(&backend) {
  L_ = build_laplacian(config.N_grid, true);
  // Surface pressures arrive in MPa; Henry constants are per bar.
  wbc_co_ = bc.P_CO * 10.0 / config.H_CO / config.c_ref;
  wbc_h2_ = bc.P_H2 * 10.0 / config.H_H2 / config.c_ref;
  wbc_h2o_ = bc.P_H2O * 10.0 / config.H_H2O / config.c_ref;
  const double rp2_rho = config.R_p * config.R_p * config.rho_cat;
  scale_co_ = rp2_rho / (config.D_CO * config.c_ref);
  scale_h2_ = rp2_rho / (config.D_H2 * config.c_ref);
}

std::pair<double, double> PelletProblem::source_at(double w_co, double w_h2) const {
  const double pco_bar = std::max(w_co, 0.0) * config_.c_ref * config_.H_CO;
  const double ph2_bar = std::max(w_h2, 0.0) * config_.c_ref * config_.H_H2;
  if (pco_bar <= 0.0 || ph2_bar <= 0.0) return {0.0, 0.0};
  // Water never leaves the steady-state invariant tied to the CO field,
  // so its local value follows from w_co alone. Negative reconstructed
  // water (possible mid-iteration) contributes zero pressure.
  const double wh2o = config_.D_CO / config_.D_H2O * (wbc_co_ - w_co) + wbc_h2o_;
  const double ph2o_bar = std::max(wh2o, 0.0) * config_.c_ref * config_.H_H2O;

  const double bar_to_unit = 1.0 / params_->unit_to_bar();
  Conditions cond;
  cond.P_CO = pco_bar * bar_to_unit;
  cond.P_H2 = ph2_bar * bar_to_unit;
  cond.P_H2O = ph2o_bar * bar_to_unit;
  cond.T = bc_.T;

  const AggregatedCoefficients k = aggregate(*params_, cond);
  const double S = backend_->site_fraction(*params_, cond);
  double r_co = 0.0, r_h2 = 0.0;
  try {
    const RateBundle rb = product_rates(k, S, *params_);
    r_co = rb.R_CO;
    r_h2 = rb.R_H2;
  } catch (const TailDiverges&) {
    // Out of the model's domain (chain tail ratio >= 1, only reachable
    // through stress backends). Fall back to the bare truncated sums so
    // the solver can keep moving and report the failure as divergence.
    if (S <= 0.0) throw;
    double sum_co = 0.0, sum_h2 = 0.0;
    if (k.alpha1 > 0.0) {
      double prod = k.alpha1;
      sum_co = k.kappa_par_short * k.alpha1 * S * S;
      sum_h2 = 3.0 * sum_co;
      double ecn = std::exp(2.0 * k.c);
      const double ec = std::exp(k.c);
      for (int n = 2; n <= params_->N_max; ++n) {
        prod *= alpha_n(k, S, n);
        const double kole = (n == 2) ? k.kappa_ole_short : k.kappa_ole_long;
        const double rp = k.kappa_par_long * prod * S * S;
        const double ro = kole * ecn * prod * S;
        sum_co += n * (rp + ro);
        sum_h2 += (2.0 * n + 1.0) * rp + 2.0 * n * ro;
        ecn *= ec;
      }
    }
    r_co = -sum_co;
    r_h2 = -sum_h2;
  }
  return {scale_co_ * r_co, scale_h2_ * r_h2};
}

void PelletProblem::sources(const std::vector<double>& w_co, const std::vector<double>& w_h2,
                            std::vector<double>& s_co, std::vector<double>& s_h2) const {
  const size_t n = w_co.size();
  s_co.assign(n, 0.0);
  s_h2.assign(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const auto [sc, sh] = source_at(w_co[i], w_h2[i]);
    s_co[i] = sc;
    s_h2[i] = sh;
  }
}

std::pair<double, double> PelletProblem::residual(const std::vector<double>& w_co,
                                                  const std::vector<double>& w_h2) const {
  std::vector<double> s_co, s_h2, l_co, l_h2;
  sources(w_co, w_h2, s_co, s_h2);
  apply_tridiag(L_, w_co, l_co);
  apply_tridiag(L_, w_h2, l_h2);
  double r = 0.0;
  double smax = 1.0;
  for (int i = 0; i < L_.n - 1; ++i) {
    r = std::max(r, std::abs(l_co[i] + s_co[i]));
    r = std::max(r, std::abs(l_h2[i] + s_h2[i]));
  }
  for (int i = 0; i < L_.n; ++i) {
    smax = std::max(smax, std::abs(s_co[i]));
    smax = std::max(smax, std::abs(s_h2[i]));
  }
  return {r, smax};
}

double PelletProblem::tau0() const {
  const auto [s_co, s_h2] = source_at(wbc_co_, wbc_h2_);
  double tau = 0.0;
  bool found = false;
  if (s_co < 0.0) {
    tau = wbc_co_ / (-s_co);
    found = true;
  }
  if (s_h2 < 0.0) {
    const double t = wbc_h2_ / (-s_h2);
    tau = found ? std::min(tau, t) : t;
    found = true;
  }
  return found ? 0.1 * tau : 0.0;
}

void implicit_step(const Tridiag& L, const std::vector<double>& w_old,
                   const std::vector<double>& s_old, double tau, double w_surface,
                   std::vector<double>& w_new) {
  const int n = L.n;
  Tridiag A = L;
  for (int i = 0; i < n; ++i) {
    const double ratio = (w_old[i] > 0.0) ? s_old[i] / w_old[i] : 0.0;
    A.di[i] += ratio - 1.0 / tau;
  }
  w_new.resize(n);
  for (int i = 0; i < n; ++i) w_new[i] = -w_old[i] / tau;
  A.lo[n - 1] = 0.0;
  A.di[n - 1] = 1.0;
  A.up[n - 1] = 0.0;
  w_new[n - 1] = w_surface;
  thomas_solve(A, w_new);
}

namespace {

struct Fields {
  std::vector<double> co, h2;
};

// Shared inner move of both solver phases: mask negatives out of the
// linearization, take one implicit step per species, and decide acceptance
// from non-negativity plus the interior change of the s/w ratios.
struct StepOutcome {
  bool accepted = false;
  double dw = 0.0;
  Fields w_new;
  std::vector<double> s_new_co, s_new_h2;  // sources at w_new, reusable
};

std::vector<double> ratios(const std::vector<double>& w, const std::vector<double>& s) {
  std::vector<double> r(w.size(), 0.0);
  for (size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) r[i] = s[i] / w[i];
  return r;
}

double ratio_change(const std::vector<double>& w_old, const std::vector<double>& w_new,
                    const std::vector<double>& r_old, const std::vector<double>& r_new) {
  double rel = 0.0;
  for (size_t i = 0; i + 1 < w_old.size(); ++i) {  // interior rows only
    if (w_old[i] < 0.0 || w_new[i] < 0.0) continue;
    const double denom = std::max(std::abs(r_old[i]), 1e-300);
    rel = std::max(rel, std::abs(r_new[i] - r_old[i]) / denom);
  }
  return rel;
}

StepOutcome try_step(const PelletProblem& prob, const Fields& w, double tau) {
  const Tridiag& L = prob.laplacian();
  const size_t n = w.co.size();

  // Negative components are masked to a small positive value for the
  // linearization and excluded from the source terms.
  Fields w_old = w;
  std::vector<bool> neg_co(n, false), neg_h2(n, false);
  for (size_t i = 0; i < n; ++i) {
    if (w_old.co[i] < 0.0) {
      w_old.co[i] = 1e-5;
      neg_co[i] = true;
    }
    if (w_old.h2[i] < 0.0) {
      w_old.h2[i] = 1e-5;
      neg_h2[i] = true;
    }
  }
  std::vector<double> s_co, s_h2;
  prob.sources(w_old.co, w_old.h2, s_co, s_h2);
  for (size_t i = 0; i < n; ++i) {
    if (neg_co[i]) s_co[i] = 0.0;
    if (neg_h2[i]) s_h2[i] = 0.0;
  }
  const std::vector<double> r_old_co = ratios(w_old.co, s_co);
  const std::vector<double> r_old_h2 = ratios(w_old.h2, s_h2);

  StepOutcome out;
  implicit_step(L, w_old.co, s_co, tau, prob.w_bc_CO(), out.w_new.co);
  implicit_step(L, w_old.h2, s_h2, tau, prob.w_bc_H2(), out.w_new.h2);

  prob.sources(out.w_new.co, out.w_new.h2, out.s_new_co, out.s_new_h2);
  const std::vector<double> r_new_co = ratios(out.w_new.co, out.s_new_co);
  const std::vector<double> r_new_h2 = ratios(out.w_new.h2, out.s_new_h2);

  bool nonneg = true;
  for (size_t i = 0; i < n && nonneg; ++i)
    nonneg = out.w_new.co[i] >= 0.0 && out.w_new.h2[i] >= 0.0;
  const double rel = std::max(ratio_change(w_old.co, out.w_new.co, r_old_co, r_new_co),
                              ratio_change(w_old.h2, out.w_new.h2, r_old_h2, r_new_h2));
  out.accepted = nonneg && rel < 0.25;
  if (out.accepted) {
    double dw = 0.0;
    for (size_t i = 0; i < n; ++i) {
      dw = std::max(dw, std::abs(out.w_new.co[i] - w.co[i]) /
                            std::max(std::abs(w.co[i]), 1e-300));
      dw = std::max(dw, std::abs(out.w_new.h2[i] - w.h2[i]) /
                            std::max(std::abs(w.h2[i]), 1e-300));
    }
    out.dw = dw;
  }
  return out;
}

void fill_positivity(SolveReport& report, const Fields& w) {
  bool strict = true, relaxed = true;
  for (double v : w.co) {
    strict = strict && v > 0.0;
    relaxed = relaxed && v > -1.2e-7;
  }
  for (double v : w.h2) {
    strict = strict && v > 0.0;
    relaxed = relaxed && v > -1.2e-7;
  }
  report.strict_positive = strict;
  report.relaxed_positive = relaxed;
}

Profile to_profile(const Fields& w, const BoundaryConditions& bc, const PelletConfig& config) {
  Profile p;
  const int n = static_cast<int>(w.co.size());
  p.x.resize(n);
  for (int i = 0; i < n; ++i) p.x[i] = static_cast<double>(i) / (n - 1);
  p.w_CO = w.co;
  p.w_H2 = w.h2;
  p.w_H2O = eliminate_h2o(w.co, bc, config);
  return p;
}

}  // namespace

std::pair<Profile, SolveReport> initial_guess(const BoundaryConditions& bc,
                                              const PelletConfig& config,
                                              const KineticParameters& params,
                                              const SiteBackend& backend) {
  PelletProblem prob(bc, config, params, backend);
  const int n = config.N_grid;
  Fields w{std::vector<double>(n, prob.w_bc_CO()), std::vector<double>(n, prob.w_bc_H2())};

  SolveReport report;
  const double tau_init = prob.tau0();
  if (tau_init == 0.0) {
    // Zero boundary sources: the constant fields already solve the system.
    report.converged = true;
    report.guess_iterations = 1;
    auto [r, smax] = prob.residual(w.co, w.h2);
    report.residual_norm = r;
    report.residual_tol = SolveOptions{}.rtol * smax;
    fill_positivity(report, w);
    return {to_profile(w, bc, config), report};
  }

  double tau = tau_init;
  for (int it = 1; it <= 250; ++it) {
    StepOutcome step = try_step(prob, w, tau);
    if (step.accepted) {
      w = std::move(step.w_new);
      tau *= 2.0;
      report.tau_history.push_back(tau);
      if (step.dw < 0.01) {
        report.converged = true;
        report.guess_iterations = it;
        auto [r, smax] = prob.residual(w.co, w.h2);
        report.residual_norm = r;
        report.residual_tol = SolveOptions{}.rtol * smax;
        fill_positivity(report, w);
        return {to_profile(w, bc, config), report};
      }
    } else {
      tau *= 0.5;
    }
  }
  throw GuessFailed("initial guess did not settle within 250 iterations");
}

std::pair<Profile, SolveReport> solve_bvp(const BoundaryConditions& bc,
                                          const PelletConfig& config,
                                          const KineticParameters& params,
                                          const SiteBackend& backend, const Profile& start,
                                          const SolveOptions& options) {
  if (static_cast<int>(start.w_CO.size()) != config.N_grid ||
      static_cast<int>(start.w_H2.size()) != config.N_grid)
    throw OutOfRange("start profile length must match N_grid");

  PelletProblem prob(bc, config, params, backend);
  const Tridiag& L = prob.laplacian();
  Fields w{start.w_CO, start.w_H2};

  SolveReport report;
  const double tau_init = prob.tau0() > 0.0 ? prob.tau0() : 1.0;

  auto [r, smax] = prob.residual(w.co, w.h2);
  double tol = options.rtol * smax;
  int steps = 0;
  int outer = 0;

  std::vector<double> l_co, l_h2;
  while (r > tol && outer < 8 && steps < options.max_iterations) {
    ++outer;
    double tau = tau_init;
    int stagnant = 0;
    while (steps < options.max_iterations) {
      ++steps;
      StepOutcome step = try_step(prob, w, tau);
      if (!step.accepted) {
        tau *= 0.5;
        continue;
      }
      w = std::move(step.w_new);
      tau = std::min(tau * 2.0, 1e30);
      report.tau_history.push_back(tau);

      // The accepted state's sources are already in hand, so the interior
      // residual costs two matrix applications here.
      apply_tridiag(L, w.co, l_co);
      apply_tridiag(L, w.h2, l_h2);
      double rr = 0.0;
      double sm = 1.0;
      for (int i = 0; i < L.n - 1; ++i) {
        rr = std::max(rr, std::abs(l_co[i] + step.s_new_co[i]));
        rr = std::max(rr, std::abs(l_h2[i] + step.s_new_h2[i]));
      }
      for (int i = 0; i < L.n; ++i) {
        sm = std::max(sm, std::abs(step.s_new_co[i]));
        sm = std::max(sm, std::abs(step.s_new_h2[i]));
      }
      if (rr <= options.rtol * sm) break;
      if (step.dw < 1e-12) {
        if (++stagnant >= 2) break;  // round-off floor, retry the cascade
      } else {
        stagnant = 0;
      }
    }
    std::tie(r, smax) = prob.residual(w.co, w.h2);
    tol = options.rtol * smax;
    if (r <= tol) break;
  }

  report.converged = r <= tol;
  report.residual_norm = r;
  report.residual_tol = tol;
  report.refine_iterations = steps;
  report.outer_iterations = outer;
  fill_positivity(report, w);
  return {to_profile(w, bc, config), report};
}

std::pair<Profile, SolveReport> solve_pellet(const BoundaryConditions& bc,
                                             const PelletConfig& config,
                                             const KineticParameters& params,
                                             const SiteBackend& backend,
                                             const SolveOptions& options) {
  auto [guess, guess_report] = initial_guess(bc, config, params, backend);
  auto [profile, report] = solve_bvp(bc, config, params, backend, guess, options);
  report.guess_iterations = guess_report.guess_iterations;
  report.tau_history.insert(report.tau_history.begin(), guess_report.tau_history.begin(),
                            guess_report.tau_history.end());
  return {std::move(profile), report};
}

std::vector<double> eliminate_h2o(const std::vector<double>& w_co,
                                  const BoundaryConditions& bc, const PelletConfig& config) {
  const double wbc_co = bc.P_CO * 10.0 / config.H_CO / config.c_ref;
  const double wbc_h2o = bc.P_H2O * 10.0 / config.H_H2O / config.c_ref;
  const double d_ratio = config.D_CO / config.D_H2O;
  std::vector<double> out(w_co.size());
  for (size_t i = 0; i < w_co.size(); ++i)
    out[i] = d_ratio * (wbc_co - w_co[i]) + wbc_h2o;
  return out;
}

Profile constant_profile(const BoundaryConditions& bc, const PelletConfig& config) {
  const int n = config.N_grid;
  Profile p;
  p.x.resize(n);
  for (int i = 0; i < n; ++i) p.x[i] = static_cast<double>(i) / (n - 1);
  p.w_CO.assign(n, bc.P_CO * 10.0 / config.H_CO / config.c_ref);
  p.w_H2.assign(n, bc.P_H2 * 10.0 / config.H_H2 / config.c_ref);
  p.w_H2O.assign(n, bc.P_H2O * 10.0 / config.H_H2O / config.c_ref);
  return p;
}

Profile blend_profiles(const Profile& start, const Profile& target, double gamma) {
  const size_t n = start.x.size();
  for (const Profile* p : {&start, &target})
    if (p->x.size() != n || p->w_CO.size() != n || p->w_H2.size() != n || p->w_H2O.size() != n)
      throw OutOfRange("blend needs complete profiles on the same grid");
  Profile p = start;
  for (size_t i = 0; i < p.x.size(); ++i) {
    p.w_CO[i] += gamma * (target.w_CO[i] - start.w_CO[i]);
    p.w_H2[i] += gamma * (target.w_H2[i] - start.w_H2[i]);
    p.w_H2O[i] += gamma * (target.w_H2O[i] - start.w_H2O[i]);
  }
  return p;
}

double h2o_residual(const Profile& profile, const BoundaryConditions& bc,
                    const PelletConfig& config, const KineticParameters& params,
                    const SiteBackend& backend) {
  PelletProblem prob(bc, config, params, backend);
  std::vector<double> s_co, s_h2;
  prob.sources(profile.w_CO, profile.w_H2, s_co, s_h2);

  // One water molecule is produced per CO consumed, so the water source is
  // the CO source rescaled by the diffusivity/normalization factor ratio.
  const double scale_co = config.R_p * config.R_p * config.rho_cat / (config.D_CO * config.c_ref);
  const double scale_h2o =
      config.R_p * config.R_p * config.rho_cat / (config.D_H2O * config.c_ref);

  std::vector<double> l_h2o;
  apply_tridiag(prob.laplacian(), profile.w_H2O, l_h2o);
  double r = 0.0;
  for (int i = 0; i < prob.laplacian().n - 1; ++i) {
    const double r_co = s_co[i] / scale_co;  // physical rate, <= 0
    const double s_h2o = scale_h2o * (-r_co);
    r = std::max(r, std::abs(l_h2o[i] + s_h2o));
  }
  return r;
}

}  // namespace ftpellet
