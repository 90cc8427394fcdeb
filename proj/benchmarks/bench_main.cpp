#include <random>

#include <benchmark/benchmark.h>

#include "selfsim/group.hpp"
#include "selfsim/quotient.hpp"
#include "selfsim/rist.hpp"

namespace {

const selfsim::Group& grigorchuk() {
  static const selfsim::Group g(selfsim::grigorchuk_preset());
  return g;
}

std::vector<selfsim::GroupWord> random_words(std::size_t count, std::size_t length) {
  const auto& g = grigorchuk();
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::uint16_t> pick(0, 3);
  std::vector<selfsim::GroupWord> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<selfsim::Letter> letters;
    for (std::size_t j = 0; j < length; ++j) letters.push_back({pick(rng), 1});
    out.push_back(g.reduce(letters));
  }
  return out;
}

void BM_IsIdentity(benchmark::State& state) {
  const auto words = random_words(64, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    for (const auto& w : words) benchmark::DoNotOptimize(grigorchuk().is_identity(w));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(words.size()));
}
BENCHMARK(BM_IsIdentity)->Arg(20)->Arg(80)->Arg(320);

void BM_ElementOrder(benchmark::State& state) {
  const auto words = random_words(16, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    for (const auto& w : words) benchmark::DoNotOptimize(grigorchuk().element_order(w));
  }
}
BENCHMARK(BM_ElementOrder)->Arg(10)->Arg(40);

void BM_QuotientOrder(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(selfsim::quotient_order(grigorchuk(), n));
}
BENCHMARK(BM_QuotientOrder)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_RistSearch(benchmark::State& state) {
  const auto v = selfsim::zeros(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(selfsim::rist_element_search(grigorchuk(), v, 200000));
  }
}
BENCHMARK(BM_RistSearch)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
