#include <benchmark/benchmark.h>

#include "entmon/certify.hpp"
#include "entmon/locc.hpp"

namespace {

using namespace entmon;

void BM_Eigensystem(benchmark::State& state) {
  Rng rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto rho = random_density(n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigensystem(rho));
}
BENCHMARK(BM_Eigensystem)->Arg(4)->Arg(9)->Arg(18)->Arg(27);

void BM_Negativity(benchmark::State& state) {
  Rng rng(2);
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto rho = random_state({d, d}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(negativity(rho));
}
BENCHMARK(BM_Negativity)->Arg(2)->Arg(3)->Arg(4);

void BM_Ree(benchmark::State& state) {
  Rng rng(3);
  const auto db = static_cast<std::size_t>(state.range(0));
  const auto rho = random_state({2, db}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ree(rho).value);
}
BENCHMARK(BM_Ree)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_PptBound(benchmark::State& state) {
  Rng rng(4);
  const auto db = static_cast<std::size_t>(state.range(0));
  const auto rho = random_state({2, db}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ppt_relative_entropy(rho).value);
}
BENCHMARK(BM_PptBound)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_TwirlDecouple(benchmark::State& state) {
  Rng rng(5);
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto rho = random_state({2, d}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(twirl_decouple(rho, "B"));
}
BENCHMARK(BM_TwirlDecouple)->Arg(2)->Arg(4)->Arg(6);

void BM_CertifyNegativityCheck(benchmark::State& state) {
  CheckConfig cfg;
  cfg.trials = 20;
  cfg.threads = 1;
  const auto f = negativity_measure();
  for (auto _ : state) benchmark::DoNotOptimize(run_check("flags", f, cfg));
}
BENCHMARK(BM_CertifyNegativityCheck)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
