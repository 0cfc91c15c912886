#include <benchmark/benchmark.h>

#include <cmath>
#include <map>

#include "fblab/counterexamples.hpp"
#include "fblab/identity.hpp"
#include "fblab/monotonicity.hpp"
#include "fblab/montecarlo.hpp"
#include "fblab/operators.hpp"
#include "fblab/solver.hpp"

using namespace fblab;

namespace {

// solved fields are cached per n
const SolveResult& solved(int n) {
  static std::map<int, SolveResult> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, solve_navier(quadratic_benchmark(n))).first;
  return it->second;
}

ScalarField2D smooth(int n) {
  return ScalarField2D::rectangle(Grid2D::square(n, -1.0, 1.0),
                                  [](double x, double y) { return std::sin(3 * x) * std::sin(2 * y); });
}

void BM_Laplacian(benchmark::State& st) {
  const auto f = smooth(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(laplacian(f));
  st.SetComplexityN(st.range(0) * st.range(0));
}
BENCHMARK(BM_Laplacian)->Arg(65)->Arg(129)->Arg(257)->Complexity(benchmark::oN);

void BM_Bilaplacian(benchmark::State& st) {
  const auto f = smooth(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(bilaplacian(f));
}
BENCHMARK(BM_Bilaplacian)->Arg(65)->Arg(129)->Arg(257);

void BM_SolveNavier(benchmark::State& st) {
  const auto p = quadratic_benchmark(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(solve_navier(p));
}
BENCHMARK(BM_SolveNavier)->Arg(33)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

void BM_IdentitySuite(benchmark::State& st) {
  const auto& s = solved(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(identity_suite(s.u, 0.05, 20, 7));
}
BENCHMARK(BM_IdentitySuite)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

void BM_MonotonicityCheck(benchmark::State& st) {
  const auto& s = solved(static_cast<int>(st.range(0)));
  const Point2 c = detect_free_boundary_point(s.u, 0.2, Point2{0.7071, 0.7071});
  const auto radii = geometric_radii(0.05, 0.15, 6);
  for (auto _ : st) benchmark::DoNotOptimize(monotonicity_check(s.u, 0.05, c, radii));
}
BENCHMARK(BM_MonotonicityCheck)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

void BM_SimulateWalk(benchmark::State& st) {
  const Grid2D g = Grid2D::square(33, -1.0, 1.0);
  GameConfig cfg(ScalarField2D::rectangle(g, [](double x, double y) { return x * y; }),
                 ScalarField2D::rectangle(g, 0.0));
  cfg.samples = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(simulate_walk(cfg, 16, 16));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_SimulateWalk)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_ContrProfile(benchmark::State& st) {
  double x = 0.0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(contr_u(x, 0.01));
    x = x > 1.0 ? 0.0 : x + 1e-3;
  }
}
BENCHMARK(BM_ContrProfile);

void BM_ContrBlowupReport(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(contr_blowup_report({0.1, 0.03, 0.01, 0.003, 0.001}));
}
BENCHMARK(BM_ContrBlowupReport)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
