#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "vibrelab/vibrelab.hpp"

using namespace vibrelab;

namespace {

std::vector<double> noise(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> x(n);
  for (double& v : x) v = g(rng);
  return x;
}

void BM_DftPowerOfTwo(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dft(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DftPowerOfTwo)->RangeMultiplier(4)->Range(64, 65536)->Complexity(benchmark::oNLogN);

void BM_DftPrime(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dft(x));
}
BENCHMARK(BM_DftPrime)->Arg(61)->Arg(1021)->Arg(4093)->Arg(65521);

void BM_FirLowpass(benchmark::State& state) {
  const Signal s(2000.0, noise(20000), Unit::meter_per_s2);
  const FilterSpec spec{FilterKind::lowpass, 150.0, 0.0, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(filter(s, spec));
}
BENCHMARK(BM_FirLowpass)->Arg(31)->Arg(101)->Arg(401);

void BM_AcquireTriaxial(benchmark::State& state) {
  const VibrationModel m{{{1e-3, 10.0, 0.0, 0.02}, {2e-4, 63.0, 0.5, 0.01}}, ""};
  SensorModel sensor;
  sensor.sensitivity_v_per_ms2 = 0.102;
  sensor.noise_rms_v = 0.001;
  sensor.axes = 3;
  const AdcModel adc{16, 5.0, 1000.0};
  for (auto _ : state) benchmark::DoNotOptimize(acquire(m, sensor, adc, 10.0, 7));
}
BENCHMARK(BM_AcquireTriaxial);

void BM_Pipeline(benchmark::State& state) {
  const auto spec = load_pipeline(std::string(VIBRELAB_SOURCE_DIR) + "/pipelines/fig2_accel.json");
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(spec));
}
BENCHMARK(BM_Pipeline);

}  // namespace

BENCHMARK_MAIN();
