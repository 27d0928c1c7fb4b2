#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "qcomp/comparison.hpp"
#include "qcomp/detection.hpp"
#include "qcomp/fock_oracle.hpp"
#include "qcomp/linear_core.hpp"
#include "qcomp/lockkey.hpp"

namespace {

using qcomp::Amplitude;

std::vector<Amplitude> ramp(std::size_t n) {
  std::vector<Amplitude> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = std::polar(1.0, 0.7 * static_cast<double>(j));
  return v;
}

void BM_ApplyMultiport(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto net = qcomp::make_balanced_multiport(n);
  const qcomp::CoherentRegister in(ramp(n));
  for (auto _ : state) benchmark::DoNotOptimize(qcomp::apply_network(net, in));
}
BENCHMARK(BM_ApplyMultiport)->Arg(2)->Arg(8)->Arg(64);

void BM_PSymmetric(benchmark::State& state) {
  const auto amps = ramp(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qcomp::p_symmetric(amps));
}
BENCHMARK(BM_PSymmetric)->DenseRange(4, 8, 2);

void BM_FockBeamSplitter(benchmark::State& state) {
  const int cutoff = static_cast<int>(state.range(0));
  const auto in = qcomp::tensor_product(qcomp::coherent_fock({1.0, 0.5}, cutoff),
                                        qcomp::coherent_fock({-0.3, 1.2}, cutoff));
  for (auto _ : state) benchmark::DoNotOptimize(qcomp::apply_bs_fock(in, 0.5));
}
BENCHMARK(BM_FockBeamSplitter)->Arg(20)->Arg(40);

void BM_RunTrials(benchmark::State& state) {
  const std::size_t watched[] = {1};
  const qcomp::CoherentRegister in({Amplitude{1.0, 0.0}, Amplitude{0.0, 1.0}});
  const auto bs = qcomp::make_beam_splitter(0.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        qcomp::run_trials(in, bs, watched, {}, static_cast<std::uint64_t>(state.range(0)), 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunTrials)->Arg(100000);

void BM_OptimalAttack(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(qcomp::optimal_coherent_attack(5.0));
}
BENCHMARK(BM_OptimalAttack);

}  // namespace

BENCHMARK_MAIN();
