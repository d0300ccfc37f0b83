#include <benchmark/benchmark.h>

#include "dtsr/harness.hpp"
#include "dtsr/instances.hpp"
#include "dtsr/reductions.hpp"

using namespace dtsr;

namespace {

void BM_BuildSelector(benchmark::State& state) {
  const HittingSetInstance inst =
      complete_instance(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) {
    auto sel = build_selector(inst);
    benchmark::DoNotOptimize(sel.tree.node_count());
  }
}
BENCHMARK(BM_BuildSelector)->Arg(6)->Arg(8)->Arg(10);

void BM_SoundnessScan(benchmark::State& state) {
  const HittingSetInstance inst =
      complete_instance(static_cast<std::size_t>(state.range(0)), 3);
  const SelectorResult sel = build_selector(inst);
  for (auto _ : state) {
    auto scan = scan_selector_maximum(inst, sel);
    benchmark::DoNotOptimize(scan.full_max.exponent());
  }
}
BENCHMARK(BM_SoundnessScan)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_MaxSatBruteforce(benchmark::State& state) {
  const HittingSetInstance inst =
      complete_instance(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) {
    auto r = max_sat_fraction_bruteforce(inst);
    benchmark::DoNotOptimize(r.best_count);
  }
}
BENCHMARK(BM_MaxSatBruteforce)->Arg(10)->Arg(12)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_BinomialTail(benchmark::State& state) {
  const AmplifierParams p =
      choose_params(BigRational(1, 2), BigRational(1, state.range(0)));
  const Dyadic seven_eighths(7, 3);
  for (auto _ : state) {
    auto v = binomial_tail(p.copies, p.threshold_count, seven_eighths);
    benchmark::DoNotOptimize(v.exponent());
  }
  state.counters["copies"] = static_cast<double>(p.copies);
}
BENCHMARK(BM_BinomialTail)->Arg(8)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace
