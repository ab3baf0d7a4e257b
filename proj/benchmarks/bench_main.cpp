#include <benchmark/benchmark.h>

#include "vmvt/counting.hpp"
#include "vmvt/moments.hpp"
#include "vmvt/phases.hpp"

namespace {

using namespace vmvt;

phases::PhaseVector sample_alpha(int d) {
  std::vector<double> a;
  for (int i = 1; i <= d; ++i) a.push_back(0.1234567 * i + 0.0314159 * i * i);
  return phases::PhaseVector::from_ascending(a);
}

void BM_EvalF(benchmark::State& state, phases::SumMethod method) {
  auto const alpha = sample_alpha(static_cast<int>(state.range(0)));
  std::int64_t const N = state.range(1);
  for (auto _ : state) benchmark::DoNotOptimize(phases::eval_f(alpha, N, std::nullopt, method));
  state.SetItemsProcessed(state.iterations() * N);
}

void BM_EvalFDirect(benchmark::State& state) { BM_EvalF(state, phases::SumMethod::kDirect); }
void BM_EvalFRecurrence(benchmark::State& state) { BM_EvalF(state, phases::SumMethod::kRecurrence); }

BENCHMARK(BM_EvalFDirect)->ArgsProduct({{2, 3, 5}, {64, 4096, 1 << 16}});
BENCHMARK(BM_EvalFRecurrence)->ArgsProduct({{2, 3, 5}, {64, 4096, 1 << 16}});

void BM_CountMitm(benchmark::State& state) {
  counting::SystemSpec spec;
  spec.d = 3;
  spec.s = 3;
  spec.N = state.range(0);
  spec.zero_powers = {1, 2, 3};
  counting::Options opts;
  opts.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(counting::count_mitm(spec, opts).count);
}
BENCHMARK(BM_CountMitm)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_MomentExactEven(benchmark::State& state) {
  moments::MomentSpec spec;
  spec.d = 2;
  spec.p = 6;
  spec.u = 0.5;
  spec.N = state.range(0);
  counting::Options opts;
  opts.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(moments::moment_exact_even(spec, opts).value);
}
BENCHMARK(BM_MomentExactEven)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
