#include <benchmark/benchmark.h>

#include "inls/analysis.hpp"
#include "inls/cutoff.hpp"
#include "inls/diagnostics.hpp"
#include "inls/evolve.hpp"
#include "inls/groundstate.hpp"

using namespace inls;

namespace {

const ModelParams& ref() {
  static const ModelParams p = derive_params(3, 0.5, 0.6);
  return p;
}

Field radial_gaussian(int n) {
  return make_field(Geometry::radial(3, 10.0, n, 6.0), ref(), GaussianProfile{6.0, 1.0, {0, 0, 0}});
}

Field cartesian_gaussian(int n) {
  return make_field(Geometry::cartesian3d(4.0, n), ref(), GaussianProfile{6.0, 1.0, {0.125, 0, 0}});
}

// fixed-step strang steps, no records besides the first and last
void run_steps(benchmark::State& state, const Field& u, int steps) {
  EvolutionConfig c;
  c.dt0 = c.dt_max = 1e-6;
  c.growth = 1.0;
  c.cfl = 1e12;
  c.t_end = steps * 1e-6;
  c.record_every = 1 << 30;
  c.grad_ceiling = 1e12;
  for (auto _ : state) benchmark::DoNotOptimize(evolve_run(u, c).steps);
  state.SetItemsProcessed(state.iterations() * steps);
}

}  // namespace

static void BM_RadialSteps(benchmark::State& state) { run_steps(state, radial_gaussian(state.range(0)), 100); }
BENCHMARK(BM_RadialSteps)->Arg(500)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

static void BM_CartesianSteps(benchmark::State& state) { run_steps(state, cartesian_gaussian(state.range(0)), 4); }
BENCHMARK(BM_CartesianSteps)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_KineticCartesian(benchmark::State& state) {
  const Field u = cartesian_gaussian(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kinetic_step(u, 1e-4).values.data());
}
BENCHMARK(BM_KineticCartesian)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_RecordRadial(benchmark::State& state) {
  const Field u = radial_gaussian(state.range(0));
  EvolutionConfig c;
  const RecordContext ctx = record_context(u, c);
  for (auto _ : state) benchmark::DoNotOptimize(make_record(u, 1e-6, ctx).grad_l2);
}
BENCHMARK(BM_RecordRadial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_HdotRadial(benchmark::State& state) {
  const Field u = radial_gaussian(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hdot_norm(u, 0.25));
}
BENCHMARK(BM_HdotRadial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_RhoSeminorm(benchmark::State& state) {
  const Field u = radial_gaussian(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rho_seminorm(u, 0.1).value);
}
BENCHMARK(BM_RhoSeminorm)->Arg(500)->Arg(2000)->Unit(benchmark::kMicrosecond);

static void BM_VirialQuantities(benchmark::State& state) {
  const Field u = radial_gaussian(state.range(0));
  const auto phi = CutoffProfile::virial();
  for (auto _ : state) benchmark::DoNotOptimize(virial_quantities(u, 1.0, phi).zpp);
}
BENCHMARK(BM_VirialQuantities)->Arg(500)->Arg(2000)->Unit(benchmark::kMicrosecond);

static void BM_GroundState(benchmark::State& state) {
  GroundStateOptions opt;
  opt.resolution = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_ground_state(ref(), 1e-8, opt).sharp_constant);
}
BENCHMARK(BM_GroundState)->Arg(2000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
