#include "colloq/approx.hpp"
#include "colloq/avgcase.hpp"
#include "colloq/blockcoding.hpp"
#include "colloq/core.hpp"
#include "colloq/huffman.hpp"
#include "colloq/ordering.hpp"
#include "colloq/worstcase.hpp"

#include <benchmark/benchmark.h>

using namespace colloq;

namespace {

ProbProfile random_profile(int n, std::uint64_t seed = 1) {
  Rng rng(seed);
  return ProbProfile(rng.sorted_uniforms(static_cast<std::size_t>(n)));
}

void BM_SolveDp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto profile = random_profile(n);
  for (auto _ : state) {
    auto table = ordering::solve_dp(profile, n / 2, CostKind::BinaryEntropy);
    benchmark::DoNotOptimize(table.root_cost());
  }
}
BENCHMARK(BM_SolveDp)->Arg(8)->Arg(12)->Arg(16);

void BM_VerifyRule(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto profile = random_profile(n);
  for (auto _ : state) benchmark::DoNotOptimize(ordering::verify_rule(profile, n / 2, CostKind::Unit).holds);
}
BENCHMARK(BM_VerifyRule)->Arg(6)->Arg(8)->Arg(12);

void BM_AppendixInequalities(benchmark::State& state) {
  const auto profile = random_profile(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ordering::check_appendix_inequalities(profile, CostKind::BinaryEntropy).checked);
  }
}
BENCHMARK(BM_AppendixInequalities)->Arg(4)->Arg(7);

void BM_BudgetDp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto profile = random_profile(n);
  for (auto _ : state) {
    auto table = approx::budget_dp(profile, n / 2, n / 3, approx::Metric::Entropy);
    benchmark::DoNotOptimize(table.root_value());
  }
}
BENCHMARK(BM_BudgetDp)->Arg(8)->Arg(12)->Arg(16);

void BM_ParityBruteforce(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto profile = random_profile(n);
  for (auto _ : state) benchmark::DoNotOptimize(approx::parity_bruteforce(profile, n / 2).residual_entropy);
}
BENCHMARK(BM_ParityBruteforce)->Arg(12)->Arg(16);

void BM_SimulateBlock(benchmark::State& state) {
  const auto profile = random_profile(5);
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(blockcoding::simulate_block(profile, 3, n, 7).total_bits);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_SimulateBlock)->Arg(1 << 12)->Arg(1 << 16);

void BM_SimulateDiscard(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(avgcase::simulate_discard(20, 3, 0.3, n, 7).rate);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_SimulateDiscard)->Arg(1 << 12)->Arg(1 << 16);

void BM_SubblockEncode(benchmark::State& state) {
  Rng rng(3);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(state.range(0)));
  for (auto& b : bits) b = rng.bernoulli(0.2) ? 1 : 0;
  const huffman::SubblockCoder coder;
  for (auto _ : state) {
    huffman::BitWriter w;
    coder.encode(bits, w);
    benchmark::DoNotOptimize(w.size());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bits.size() / 8));
}
BENCHMARK(BM_SubblockEncode)->Arg(1 << 10)->Arg(1 << 16);

void BM_FoolingSetCheck(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = FunctionSpec::threshold(n, n / 2);
  const auto set = worstcase::max_fooling_set(spec);
  for (auto _ : state) benchmark::DoNotOptimize(worstcase::is_fooling_set(spec, set.columns).valid);
}
BENCHMARK(BM_FoolingSetCheck)->Arg(6)->Arg(10);

void BM_GenPoly(benchmark::State& state) {
  const std::vector<int> alphabet(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(worstcase::gen_threshold_fooling_count(10, alphabet));
}
BENCHMARK(BM_GenPoly)->Arg(8)->Arg(32);

void BM_ConjectureGrid(benchmark::State& state) {
  const auto grid = blockcoding::probability_grid({0.1, 0.3, 0.5, 0.7, 0.9}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(blockcoding::conjecture_check(2, grid).max_abs_diff);
}
BENCHMARK(BM_ConjectureGrid);

void BM_TaylorCheck(benchmark::State& state) {
  const auto grid = avgcase::default_taylor_grid();
  for (auto _ : state) benchmark::DoNotOptimize(avgcase::check_taylor_identity(8, grid).max_abs_error);
}
BENCHMARK(BM_TaylorCheck);

}  // namespace

BENCHMARK_MAIN();
