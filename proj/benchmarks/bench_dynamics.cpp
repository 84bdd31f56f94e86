#include <benchmark/benchmark.h>

#include "herglotz/connections.hpp"
#include "herglotz/dynamics.hpp"
#include "herglotz/invariants.hpp"
#include "herglotz/scenarios.hpp"

using namespace herglotz;

namespace {

Scenario pick(int id) {
  switch (id) {
    case 0: return rayleigh_scenario();
    case 1: return rigid_body_scenario();
    case 2: return wong_scenario();
    default: return magnetic_scenario();
  }
}

void BM_ElhRhs(benchmark::State& st) {
  const Scenario s = pick(static_cast<int>(st.range(0)));
  const IntegratorConfig cfg = s.default_config();
  st.SetLabel(s.name);
  for (auto _ : st) {
    benchmark::DoNotOptimize(elh_rhs(s.chart, s.lagrangian, s.initial, cfg));
  }
}
BENCHMARK(BM_ElhRhs)->DenseRange(0, 3);

void BM_IntegrateRk4(benchmark::State& st) {
  const Scenario s = pick(static_cast<int>(st.range(0)));
  const IntegratorConfig cfg = s.default_config(1e-3);
  st.SetLabel(s.name);
  for (auto _ : st) {
    benchmark::DoNotOptimize(integrate(s.chart, s.lagrangian, s.initial, 1.0, cfg));
  }
  st.SetItemsProcessed(st.iterations() * 1000);
}
BENCHMARK(BM_IntegrateRk4)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_IntegrateAdaptive(benchmark::State& st) {
  const Scenario s = rigid_body_scenario();
  IntegratorConfig cfg = s.default_config(1e-2);
  cfg.method = Method::rk45_adaptive;
  for (auto _ : st) {
    benchmark::DoNotOptimize(integrate(s.chart, s.lagrangian, s.initial, 10.0, cfg));
  }
}
BENCHMARK(BM_IntegrateAdaptive)->Unit(benchmark::kMillisecond);

void BM_ElhResidual(benchmark::State& st) {
  const Scenario s = wong_scenario();
  const Trajectory t =
      integrate(s.chart, s.lagrangian, s.initial, 1.0, s.default_config(1e-3));
  for (auto _ : st) {
    benchmark::DoNotOptimize(elh_residual(s.chart, s.lagrangian, t));
  }
}
BENCHMARK(BM_ElhResidual)->Unit(benchmark::kMillisecond);

void BM_ConnectionIndependence(benchmark::State& st) {
  const Scenario s = wong_scenario();
  const Trajectory t =
      integrate(s.chart, s.lagrangian, s.initial, 1.0, s.default_config(1e-3));
  const Index n = s.chart.base_dim(), r = s.chart.fiber_rank();
  const auto a = TMConnection::trivial(n, r);
  const auto b = TMConnection::random_constant(n, r, 1);
  for (auto _ : st) {
    benchmark::DoNotOptimize(connection_independence(a, b, s.chart, s.lagrangian, t));
  }
}
BENCHMARK(BM_ConnectionIndependence)->Unit(benchmark::kMillisecond);

void BM_InvariantLog(benchmark::State& st) {
  const Scenario s = rigid_body_scenario();
  const Trajectory t =
      integrate(s.chart, s.lagrangian, s.initial, 10.0, s.default_config(1e-3));
  for (auto _ : st) {
    benchmark::DoNotOptimize(build_invariant_log(s.chart, s.lagrangian, s.sections, t));
  }
}
BENCHMARK(BM_InvariantLog)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
