#include <benchmark/benchmark.h>

#include "dtsr/rng.hpp"
#include "dtsr/tree.hpp"

using namespace dtsr;

namespace {

NodeId grow(TreeBuilder& b, SeededRng& rng, std::size_t num_vars, std::size_t depth) {
  if (depth == 0 || rng.below(4) == 0) return b.leaf(rng.coin());
  return b.node(rng.below(num_vars), grow(b, rng, num_vars, depth - 1),
                grow(b, rng, num_vars, depth - 1));
}

DecisionTree bench_tree(std::size_t num_vars, std::size_t depth) {
  for (std::uint64_t seed = 1;; ++seed) {
    SeededRng rng(seed);
    TreeBuilder b(num_vars);
    DecisionTree t = b.take(grow(b, rng, num_vars, depth));
    if (t.node_count() >= 64) return t;
  }
}

PartialInput bench_partial(std::size_t n) {
  SeededRng rng(2);
  std::vector<Trit> v(n);
  for (auto& t : v) {
    const auto r = rng.below(3);
    t = r == 0 ? Trit::Zero : (r == 1 ? Trit::One : Trit::Undef);
  }
  return PartialInput(std::move(v));
}

void BM_EvalPartial(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const DecisionTree t = bench_tree(n, 12);
  const PartialInput y = bench_partial(n);
  for (auto _ : state) {
    auto v = eval_partial(t, y);
    benchmark::DoNotOptimize(v);
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(t.node_count()));
}
BENCHMARK(BM_EvalPartial)->Arg(8)->Arg(12)->Arg(16)->Complexity();

void BM_EvalPartialBruteforce(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const DecisionTree t = bench_tree(n, 10);
  const PartialInput y = PartialInput::undef(n);
  for (auto _ : state) {
    auto v = eval_partial_bruteforce(t, y);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_EvalPartialBruteforce)->Arg(8)->Arg(12)->Arg(16);

void BM_EvalComplete(benchmark::State& state) {
  const DecisionTree t = bench_tree(16, 14);
  Bits x(16, 1);
  for (auto _ : state) {
    auto v = eval_complete(t, x);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_EvalComplete);

}  // namespace

BENCHMARK_MAIN();
