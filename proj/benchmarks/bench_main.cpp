#include <benchmark/benchmark.h>

#include "harvest/field/correlator.hpp"
#include "harvest/measures/measures.hpp"
#include "harvest/nonperturbative/exact.hpp"
#include "harvest/perturbative/state.hpp"
#include "harvest/scan/scan.hpp"

using namespace harvest;
using field::SmearingProfile;
using scenario::ScenarioKind;

namespace {

scenario::ScenarioConfig delta(ScenarioKind kind, int n, SmearingProfile prof, double s, double T) {
  scenario::DetectorParams d;
  d.gap = 3.0;
  d.profile = prof;
  scenario::Geometry g;
  g.separation = s;
  g.branch_offset = T;
  g.delay = 1e-5;
  return scenario::make_config(kind, n, d, scenario::WindowKind::delta, 1.0, g);
}

void BM_KernelGaussian(benchmark::State& st) {
  numerics::QuadratureSpec spec;
  const auto p = SmearingProfile::gaussian(1.0);
  for (auto _ : st) benchmark::DoNotOptimize(field::wightman_kernel(3, p, p, 1.3, 2.1, spec));
}
BENCHMARK(BM_KernelGaussian);

void BM_KernelDisk(benchmark::State& st) {
  numerics::QuadratureSpec spec;
  const auto p = SmearingProfile::uniform_disk(1.0);
  for (auto _ : st) benchmark::DoNotOptimize(field::wightman_kernel(2, p, p, 1.3, 4.1, spec));
}
BENCHMARK(BM_KernelDisk);

void BM_ElementsDisk(benchmark::State& st) {
  const auto c = delta(ScenarioKind::PF, 2, SmearingProfile::uniform_disk(1.0), 4.0, 1.5);
  for (auto _ : st) benchmark::DoNotOptimize(perturbative::compute_elements(c, {}, true));
}
BENCHMARK(BM_ElementsDisk)->Unit(benchmark::kMillisecond);

void BM_ElementsCosinePointlike(benchmark::State& st) {
  scenario::DetectorParams d;
  d.gap = 3.0;
  scenario::Geometry g;
  g.separation = 2.0;
  g.branch_offset = 1.0;
  const auto c = scenario::make_config(ScenarioKind::CE, 3, d, scenario::WindowKind::cosine, 1.0, g);
  for (auto _ : st) benchmark::DoNotOptimize(perturbative::compute_elements(c, {}));
}
BENCHMARK(BM_ElementsCosinePointlike)->Unit(benchmark::kMillisecond);

void BM_ExactLattice(benchmark::State& st) {
  const auto c = delta(ScenarioKind::CE, 3, SmearingProfile::gaussian(9.0), 5.0, 3.0);
  const auto e = nonperturbative::compute_overlaps(c, {});
  for (auto _ : st) benchmark::DoNotOptimize(nonperturbative::assemble_rho_CE(e));
}
BENCHMARK(BM_ExactLattice);

void BM_Concurrence(benchmark::State& st) {
  MatrixXc m = MatrixXc::Zero(4, 4);
  m(0, 0) = 0.85;
  m(1, 1) = m(2, 2) = m(3, 3) = 0.05;
  m(0, 3) = m(3, 0) = 0.1;
  const DensityMatrix rho(m, true);
  for (auto _ : st) benchmark::DoNotOptimize(measures::concurrence(rho));
}
BENCHMARK(BM_Concurrence);

void BM_ScanPoint(benchmark::State& st) {
  scan::ScanGrid g;
  g.model.scenario = ScenarioKind::PF;
  g.model.spatial_dim = 2;
  g.model.detector.gap = 3.0;
  g.model.detector.profile = SmearingProfile::uniform_disk(1.0);
  g.model.geometry.delay = 1e-5;
  g.s = {0.1, 8.0, 40};
  g.T = {0.05, 8.0, 40};
  g.treatments = {perturbative::Treatment::trace, perturbative::Treatment::project_plus};
  for (auto _ : st) benchmark::DoNotOptimize(scan::evaluate_point(g, 30, 12));
}
BENCHMARK(BM_ScanPoint)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
