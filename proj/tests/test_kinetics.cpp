#include <cmath>
#include <vector>

#include "doctest.h"
#include "ftpellet/errors.hpp"
#include "ftpellet/kinetics.hpp"

using namespace ftpellet;

namespace {

const double T = 493.15;

Conditions cond_bar(double pco, double ph2, double ph2o) {
  return Conditions{pco, ph2, ph2o, T};
}

double brute_L(double x, double N0) {
  double acc = 0.0, xp = 1.0;
  for (int j = 1; j <= 4000; ++j) {
    xp *= x;
    acc += (N0 + j) * xp;
  }
  return acc;
}

}  // namespace

TEST_SUITE("kinetics") {

TEST_CASE("aggregate matches the closed-form coefficient definitions") {
  const KineticParameters p = KineticParameters::placeholder();
  const Conditions cond = cond_bar(30.0, 30.0, 5.0);
  const AggregatedCoefficients k = aggregate(p, cond);

  const double K1 = p.K1.at(T, p.R);
  const double K2 = p.K2.at(T, p.R);
  const double K4 = p.K4.at(T, p.R);
  const double K5 = p.K5.at(T, p.R);
  const double K6 = p.K6.at(T, p.R);

  CHECK(k.kappa_growth == doctest::Approx(p.k3.at(T, p.R) * K1 * 30.0).epsilon(1e-14));
  CHECK(k.kappa_par_long ==
        doctest::Approx(p.k7.at(T, p.R) * std::sqrt(K2 * 30.0)).epsilon(1e-14));
  CHECK(k.kappa_par_short ==
        doctest::Approx(p.k7M.at(T, p.R) * std::sqrt(K2 * 30.0)).epsilon(1e-14));
  CHECK(k.kappa_ole_long == doctest::Approx(p.k8_0.at(T, p.R)).epsilon(1e-14));
  CHECK(k.kappa_ole_short == doctest::Approx(p.k8E_0.at(T, p.R)).epsilon(1e-14));
  CHECK(k.c == doctest::Approx(p.dE / (p.R * T)).epsilon(1e-14));
  CHECK(k.c0 == doctest::Approx(1.0 + K1 * 30.0 + std::sqrt(K2 * 30.0)).epsilon(1e-14));
  CHECK(k.cS == doctest::Approx(5.0 / (K2 * K2 * K4 * K5 * K6 * 30.0 * 30.0) +
                                std::sqrt(K2 * 30.0))
                    .epsilon(1e-14));
  CHECK(k.alpha1 ==
        doctest::Approx(k.kappa_growth / (k.kappa_growth + k.kappa_par_short)).epsilon(1e-14));
  CHECK(k.eps == doctest::Approx(k.kappa_par_long / k.kappa_growth).epsilon(1e-14));
  CHECK(k.alpha_inf == doctest::Approx(1.0 / (1.0 + k.eps)).epsilon(1e-14));
}

TEST_CASE("water term drops out at zero water pressure") {
  const KineticParameters p = KineticParameters::placeholder();
  const AggregatedCoefficients k = aggregate(p, cond_bar(30.0, 30.0, 0.0));
  const double K2 = p.K2.at(T, p.R);
  CHECK(k.cS == doctest::Approx(std::sqrt(K2 * 30.0)).epsilon(1e-14));
}

TEST_CASE("degenerate condition guards") {
  const KineticParameters p = KineticParameters::placeholder();
  CHECK_THROWS_AS(aggregate(p, cond_bar(30.0, 0.0, 5.0)), DegenerateConditions);
  CHECK_NOTHROW(aggregate(p, cond_bar(30.0, 0.0, 0.0)));
  CHECK_THROWS_AS(aggregate(p, Conditions{30.0, 30.0, 5.0, 0.0}), DegenerateConditions);
  CHECK_THROWS_AS(aggregate(p, cond_bar(-1.0, 30.0, 5.0)), DegenerateConditions);
}

TEST_CASE("zero CO pressure short-circuits growth") {
  const KineticParameters p = KineticParameters::placeholder();
  const AggregatedCoefficients k = aggregate(p, cond_bar(0.0, 30.0, 5.0));
  CHECK(k.kappa_growth == 0.0);
  CHECK(k.alpha1 == 0.0);
  CHECK(std::isinf(k.eps));
  CHECK(k.alpha_inf == 0.0);
}

TEST_CASE("growth probabilities are in (0,1), increase with n and S") {
  const KineticParameters p = KineticParameters::placeholder();
  const AggregatedCoefficients k = aggregate(p, cond_bar(30.0, 30.0, 5.0));
  const double S = 0.3;
  double prev = 0.0;
  for (int n = 2; n <= 40; ++n) {
    const double a = alpha_n(k, S, n);
    CHECK(a > 0.0);
    CHECK(a < 1.0);
    CHECK(a >= prev);  // the length-dependent desorption term decays with n
    prev = a;
  }
  CHECK(alpha_n(k, 0.5, 5) > alpha_n(k, 0.1, 5));
  CHECK(alpha_n(k, 0.3, 1000) < k.alpha_inf + 1e-12);
  CHECK_THROWS_AS(alpha_n(k, 0.0, 2), InvalidSite);
  CHECK_THROWS_AS(alpha_n(k, -0.2, 3), InvalidSite);
}

TEST_CASE("n = 2 uses the short-chain olefin constant") {
  const KineticParameters p = KineticParameters::placeholder();
  const AggregatedCoefficients k = aggregate(p, cond_bar(30.0, 30.0, 5.0));
  const double S = 0.3;
  const double a2 = alpha_n(k, S, 2);
  const double by_hand = k.kappa_growth /
                         (k.kappa_growth + k.kappa_par_long +
                          std::exp(-2.0 * k.c) * k.kappa_ole_short / S);
  CHECK(a2 == doctest::Approx(by_hand).epsilon(1e-14));
  // and n = 3 switches to the long-chain constant
  const double a3 = alpha_n(k, S, 3);
  const double by_hand3 = k.kappa_growth /
                          (k.kappa_growth + k.kappa_par_long +
                           std::exp(-3.0 * k.c) * k.kappa_ole_long / S);
  CHECK(a3 == doctest::Approx(by_hand3).epsilon(1e-14));
}

TEST_CASE("closed-form weighted geometric tail equals its series") {
  for (double x : {0.1, 0.5, 0.9, 0.95}) {
    for (double N0 : {1.0, 10.0, 100.0}) {
      CHECK(L_function(x, N0) == doctest::Approx(brute_L(x, N0)).epsilon(1e-12));
    }
  }
  CHECK(L_function(0.0, 50.0) == 0.0);
  CHECK_THROWS_AS(L_function(1.0, 10.0), TailDiverges);
  CHECK_THROWS_AS(L_function(1.5, 10.0), TailDiverges);
  CHECK_THROWS_AS(L_function(-0.1, 10.0), TailDiverges);
}

TEST_CASE("rate bundle shape and assembly identities") {
  const KineticParameters p = KineticParameters::placeholder();
  const AggregatedCoefficients k = aggregate(p, cond_bar(30.0, 30.0, 5.0));
  const double S = 0.25;
  const RateBundle rb = product_rates(k, S, p);

  REQUIRE(rb.paraffin.size() == static_cast<size_t>(p.N_max));
  REQUIRE(rb.olefin.size() == static_cast<size_t>(p.N_max - 1));

  // methane channel
  CHECK(rb.paraffin[0] ==
        doctest::Approx(k.kappa_par_short * k.alpha1 * S * S).epsilon(1e-14));

  // paraffin recursion: R(n+1)/R(n) = alpha_{n+1} for n >= 2
  for (int n = 2; n < 20; ++n) {
    const double ratio = rb.paraffin[n] / rb.paraffin[n - 1];
    CHECK(ratio == doctest::Approx(alpha_n(k, S, n + 1)).epsilon(1e-12));
  }

  // totals are the weighted sums of the per-product rates plus the tails
  double sum_co = 0.0, sum_h2 = 0.0;
  sum_co += 1.0 * rb.paraffin[0];
  sum_h2 += 3.0 * rb.paraffin[0];
  for (int n = 2; n <= p.N_max; ++n) {
    const double rp = rb.paraffin[n - 1];
    const double ro = rb.olefin[n - 2];
    sum_co += n * (rp + ro);
    sum_h2 += (2.0 * n + 1.0) * rp + 2.0 * n * ro;
  }
  CHECK(-rb.R_CO == doctest::Approx(sum_co + rb.dR_CO).epsilon(1e-12));
  CHECK(-rb.R_H2 == doctest::Approx(sum_h2 + rb.dR_H2).epsilon(1e-12));
  CHECK(rb.R_CO < 0.0);
  CHECK(rb.R_H2 < rb.R_CO);  // stoichiometry: hydrogen burns faster

  // the standalone tail entry point agrees with the embedded one
  const auto [dco, dh2] = tail_corrections(k, S, p);
  CHECK(dco == doctest::Approx(rb.dR_CO).epsilon(1e-13));
  CHECK(dh2 == doctest::Approx(rb.dR_H2).epsilon(1e-13));
  CHECK(dco > 0.0);
  CHECK(dh2 > dco);
}

TEST_CASE("zero CO pressure produces identically zero rates") {
  const KineticParameters p = KineticParameters::placeholder();
  const AggregatedCoefficients k = aggregate(p, cond_bar(0.0, 30.0, 5.0));
  const RateBundle rb = product_rates(k, 0.5, p);
  CHECK(rb.R_CO == 0.0);
  CHECK(rb.R_H2 == 0.0);
  CHECK(rb.dR_CO == 0.0);
  for (double v : rb.paraffin) CHECK(v == 0.0);
}

TEST_CASE("tiny site fraction stays finite through the underflow fallback") {
  const KineticParameters p = KineticParameters::placeholder();
  const AggregatedCoefficients k = aggregate(p, cond_bar(30.0, 30.0, 5.0));
  const RateBundle rb = product_rates(k, 1e-180, p);
  CHECK(std::isfinite(rb.R_CO));
  CHECK(std::isfinite(rb.R_H2));
  for (double v : rb.paraffin) {
    CHECK(std::isfinite(v));
    CHECK(v >= 0.0);
  }
  CHECK_THROWS_AS(product_rates(k, 0.0, p), InvalidSite);
}

}  // TEST_SUITE
