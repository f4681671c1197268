#include <benchmark/benchmark.h>

#include "svanish/cloakmap.hpp"
#include "svanish/designer.hpp"
#include "svanish/farfield.hpp"
#include "svanish/lowfreq.hpp"
#include "svanish/multilayer.hpp"
#include "svanish/specfun.hpp"

namespace {

using namespace svanish;

LayeredStructure six_layers() {
  return LayeredStructure(default_radii(6), {0.1, 1.1113, 0.2977, 2.0436, 0.1, 1.826},
                          {0.4356, 1.1461, 0.2899, 1.8199, 0.1, 3.1233});
}

void BM_ScaledCoefficient(benchmark::State& state) {
  const LayeredStructure s = six_layers();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scaled_coefficient(s, n, Polarization::TE, 0.05));
}
BENCHMARK(BM_ScaledCoefficient)->Arg(1)->Arg(4)->Arg(16);

void BM_LowFreqTable(benchmark::State& state) {
  const LayeredStructure s = six_layers();
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lowfreq_coefficients(s, order));
}
BENCHMARK(BM_LowFreqTable)->DenseRange(1, 4);

void BM_DesignerJacobian(benchmark::State& state) {
  const DesignProblem p = make_default_problem(6, 2);
  for (auto _ : state) benchmark::DoNotOptimize(jacobian(p, p.mu, p.eps));
}
BENCHMARK(BM_DesignerJacobian);

void BM_Design(benchmark::State& state) {
  DesignProblem p = make_default_problem(6, 2);
  p.ordering = TransferOrdering::reversed;
  for (auto _ : state) benchmark::DoNotOptimize(design(p));
}
BENCHMARK(BM_Design)->Unit(benchmark::kMillisecond);

void BM_CrossSection(benchmark::State& state) {
  const LayeredStructure s = six_layers();
  for (auto _ : state) {
    benchmark::DoNotOptimize(scattering_cross_section(s, static_cast<double>(state.range(0)) / 10.0, Vec3::UnitX(),
                                                      Direction(Vec3::UnitZ())));
  }
}
BENCHMARK(BM_CrossSection)->Arg(1)->Arg(10)->Arg(30)->Unit(benchmark::kMicrosecond);

void BM_PushForward(benchmark::State& state) {
  const LayeredStructure s = six_layers();
  const Eigen::Vector3d y(0.7, 0.6, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(push_forward(s, 0.1, y));
}
BENCHMARK(BM_PushForward);

}  // namespace

BENCHMARK_MAIN();
