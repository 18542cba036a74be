// Microbenchmarks for the hot path: coefficient aggregation, the site
// balance, the rate sums, grid-wide source evaluation, one implicit step,
// and the full pellet solve.

#include <benchmark/benchmark.h>

#include <vector>

#include "ftpellet/kinetics.hpp"
#include "ftpellet/pellet.hpp"
#include "ftpellet/site_solver.hpp"
#include "ftpellet/surrogate.hpp"

using namespace ftpellet;

namespace {

const Conditions kCond{30.0, 30.0, 5.0, 493.15};        // bar
const BoundaryConditions kBC{3.0, 3.0, 0.5, 493.15};    // MPa

void BM_aggregate(benchmark::State& state) {
  const KineticParameters params = KineticParameters::placeholder();
  for (auto _ : state) benchmark::DoNotOptimize(aggregate(params, kCond));
}
BENCHMARK(BM_aggregate);

void BM_site_solve(benchmark::State& state) {
  const KineticParameters params = KineticParameters::placeholder();
  const AggregatedCoefficients k = aggregate(params, kCond);
  for (auto _ : state) benchmark::DoNotOptimize(solve_site_fraction(k).S);
}
BENCHMARK(BM_site_solve);

void BM_product_rates(benchmark::State& state) {
  const KineticParameters params = KineticParameters::placeholder();
  const AggregatedCoefficients k = aggregate(params, kCond);
  const double S = solve_site_fraction(k).S;
  for (auto _ : state) benchmark::DoNotOptimize(product_rates(k, S, params).R_CO);
}
BENCHMARK(BM_product_rates);

void BM_sources_grid(benchmark::State& state) {
  const KineticParameters params = KineticParameters::placeholder();
  const PelletConfig cfg;
  const ExactSiteBackend backend;
  const PelletProblem prob(kBC, cfg, params, backend);
  const Profile flat = constant_profile(kBC, cfg);
  std::vector<double> s_co, s_h2;
  for (auto _ : state) {
    prob.sources(flat.w_CO, flat.w_H2, s_co, s_h2);
    benchmark::DoNotOptimize(s_co.data());
  }
}
BENCHMARK(BM_sources_grid)->Unit(benchmark::kMicrosecond);

void BM_implicit_step(benchmark::State& state) {
  const KineticParameters params = KineticParameters::placeholder();
  const PelletConfig cfg;
  const ExactSiteBackend backend;
  const PelletProblem prob(kBC, cfg, params, backend);
  const Profile flat = constant_profile(kBC, cfg);
  std::vector<double> s_co, s_h2, out;
  prob.sources(flat.w_CO, flat.w_H2, s_co, s_h2);
  for (auto _ : state) {
    implicit_step(prob.laplacian(), flat.w_CO, s_co, 1e-3, prob.w_bc_CO(), out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_implicit_step);

void BM_solve_pellet(benchmark::State& state) {
  const KineticParameters params = KineticParameters::placeholder();
  const PelletConfig cfg;
  const ExactSiteBackend backend;
  for (auto _ : state) {
    const auto [profile, report] = solve_pellet(kBC, cfg, params, backend);
    benchmark::DoNotOptimize(report.converged);
  }
}
BENCHMARK(BM_solve_pellet)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
