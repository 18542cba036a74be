#include "ftpellet/kinetics.hpp"

#include <cmath>
#include <limits>

#include "ftpellet/errors.hpp"

namespace ftpellet {

AggregatedCoefficients aggregate(const KineticParameters& p, const Conditions& cond) {
  if (!(cond.T > 0.0)) throw DegenerateConditions("temperature must be > 0");
  if (cond.P_CO < 0.0 || cond.P_H2 < 0.0 || cond.P_H2O < 0.0)
    throw DegenerateConditions("partial pressures must be >= 0");

  const double T = cond.T;
  const double K1 = p.K1.at(T, p.R);
  const double K2 = p.K2.at(T, p.R);
  const double K4 = p.K4.at(T, p.R);
  const double K5 = p.K5.at(T, p.R);
  const double K6 = p.K6.at(T, p.R);
  const double sqrtK2PH2 = std::sqrt(K2 * cond.P_H2);

  AggregatedCoefficients k;
  k.kappa_growth = p.k3.at(T, p.R) * K1 * cond.P_CO;
  k.kappa_par_long = p.k7.at(T, p.R) * sqrtK2PH2;
  k.kappa_ole_long = p.k8_0.at(T, p.R);
  k.kappa_par_short = p.k7M.at(T, p.R) * sqrtK2PH2;
  k.kappa_ole_short = p.k8E_0.at(T, p.R);
  k.c = p.dE / (p.R * T);
  k.c0 = 1.0 + K1 * cond.P_CO + sqrtK2PH2;

  if (cond.P_H2O > 0.0) {
    if (cond.P_H2 <= 0.0)
      throw DegenerateConditions("site balance water term is infinite at P_H2 = 0, P_H2O > 0");
    k.cS = cond.P_H2O / (K2 * K2 * K4 * K5 * K6 * cond.P_H2 * cond.P_H2) + sqrtK2PH2;
  } else {
    k.cS = sqrtK2PH2;
  }

  if (k.kappa_growth > 0.0) {
    k.alpha1 = k.kappa_growth / (k.kappa_growth + k.kappa_par_short);
    k.eps = k.kappa_par_long / k.kappa_growth;
    k.alpha_inf = 1.0 / (1.0 + k.eps);
  } else {
    k.alpha1 = 0.0;
    k.eps = std::numeric_limits<double>::infinity();
    k.alpha_inf = 0.0;
  }
  return k;
}

double alpha_n(const AggregatedCoefficients& k, double S, int n) {
  if (!(S > 0.0)) throw InvalidSite("alpha_n needs S > 0");
  if (k.kappa_growth == 0.0) return 0.0;
  const double kole = (n == 2) ? k.kappa_ole_short : k.kappa_ole_long;
  return k.kappa_growth /
         (k.kappa_growth + k.kappa_par_long + std::exp(-n * k.c) * kole / S);
}

double L_function(double x, double N0) {
  if (!(x >= 0.0 && x < 1.0)) throw TailDiverges("L-function ratio outside [0, 1)");
  const double g = 1.0 / (1.0 - x);
  return (N0 + g) * x * g;
}

namespace {

// Shared by product_rates and tail_corrections: evaluation state at n=N_max.
struct ChainTail {
  double Rp_last = 0.0;  // paraffin rate at n = N_max
  double Ro_last = 0.0;  // olefin rate at n = N_max
  double a_next = 0.0;   // alpha_{N_max + 1}
};

std::pair<double, double> tails_from(const ChainTail& t, const AggregatedCoefficients& k,
                                     int N_max) {
  const double xp = t.a_next;
  const double xo = std::exp(k.c) * t.a_next;
  // L_function throws TailDiverges for xo >= 1 (xp < xo always, c > 0)
  const double Lp = L_function(xp, N_max);
  const double Lo = L_function(xo, N_max);
  const double dco = Lp * t.Rp_last + Lo * t.Ro_last;
  const double dh2 = 2.0 * Lp * t.Rp_last + t.Rp_last * xp / (1.0 - xp) + 2.0 * Lo * t.Ro_last;
  return {dco, dh2};
}

}  // namespace

RateBundle product_rates(const AggregatedCoefficients& k, double S,
                         const KineticParameters& p) {
  if (!(S > 0.0)) throw InvalidSite("product_rates needs S > 0");
  const int N = p.N_max;

  RateBundle r;
  r.paraffin.assign(N, 0.0);
  r.olefin.assign(N - 1, 0.0);
  if (k.alpha1 == 0.0) return r;  // no CO feed, nothing is produced

  // Cumulative product alpha_1 * ... * alpha_n, tracked directly while it
  // stays representable and in log space after it underflows.
  double prod = k.alpha1;
  double log_prod = 0.0;
  bool in_log = false;

  r.paraffin[0] = k.kappa_par_short * k.alpha1 * S * S;
  double sum_co = 1.0 * r.paraffin[0];
  double sum_h2 = 3.0 * r.paraffin[0];

  const double fac = std::exp(-k.c);
  double e_minus_nc = std::exp(-2.0 * k.c);  // e^{-n c} at the current n
  double e_plus_nc = std::exp(2.0 * k.c);
  const double e_c = std::exp(k.c);
  ChainTail tail;

  for (int n = 2; n <= N; ++n) {
    const double kole = (n == 2) ? k.kappa_ole_short : k.kappa_ole_long;
    const double a = k.kappa_growth /
                     (k.kappa_growth + k.kappa_par_long + e_minus_nc * kole / S);
    if (!in_log) {
      prod *= a;
      if (prod < 1e-300 && prod > 0.0) {
        in_log = true;
        log_prod = std::log(prod);
      }
    } else {
      log_prod += std::log(a);
    }
    const double pr = in_log ? std::exp(log_prod) : prod;  // may flush to 0, fine
    const double Rp = k.kappa_par_long * pr * S * S;
    const double Ro = kole * e_plus_nc * pr * S;
    r.paraffin[n - 1] = Rp;
    r.olefin[n - 2] = Ro;
    sum_co += n * (Rp + Ro);
    sum_h2 += (2.0 * n + 1.0) * Rp + 2.0 * n * Ro;
    e_minus_nc *= fac;
    e_plus_nc *= e_c;
  }

  tail.Rp_last = r.paraffin[N - 1];
  tail.Ro_last = r.olefin[N - 2];
  tail.a_next = alpha_n(k, S, N + 1);
  auto [dco, dh2] = tails_from(tail, k, N);
  r.dR_CO = dco;
  r.dR_H2 = dh2;
  r.R_CO = -(sum_co + dco);
  r.R_H2 = -(sum_h2 + dh2);
  return r;
}

std::pair<double, double> tail_corrections(const AggregatedCoefficients& k, double S,
                                           const KineticParameters& p) {
  if (!(S > 0.0)) throw InvalidSite("tail_corrections needs S > 0");
  if (k.alpha1 == 0.0) return {0.0, 0.0};
  const int N = p.N_max;

  double prod = k.alpha1;
  for (int n = 2; n <= N; ++n) prod *= alpha_n(k, S, n);

  ChainTail tail;
  tail.Rp_last = k.kappa_par_long * prod * S * S;
  tail.Ro_last = k.kappa_ole_long * std::exp(N * k.c) * prod * S;
  tail.a_next = alpha_n(k, S, N + 1);
  return tails_from(tail, k, N);
}

}  // namespace ftpellet
