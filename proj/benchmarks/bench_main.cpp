#include <benchmark/benchmark.h>

#include <random>

#include "confset/abelian.hpp"
#include "confset/config.hpp"
#include "confset/invariants.hpp"
#include "confset/smith.hpp"

using namespace confset;

static void BM_BallUnitriangular(benchmark::State& state) {
  const auto g = GroupDescriptor::unitriangular(4);
  const auto gens = GeneratingSequence::standard(g);
  const auto r = static_cast<unsigned>(state.range(0));
  std::size_t size = 0;
  for (auto _ : state) {
    auto b = ball(gens, r);
    size = b.size();
    benchmark::DoNotOptimize(b);
  }
  state.counters["elements"] = static_cast<double>(size);
}
BENCHMARK(BM_BallUnitriangular)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

static void BM_BallDihedral(benchmark::State& state) {
  const auto g = GroupDescriptor::dihedral();
  const auto gens = GeneratingSequence::standard(g);
  for (auto _ : state) benchmark::DoNotOptimize(ball(gens, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_BallDihedral)->RangeMultiplier(4)->Range(16, 1024);

static void BM_ConfigOrthant(benchmark::State& state) {
  const auto g = parse_group("Z^3 x C(2)");
  const auto gens = GeneratingSequence::standard(g);
  const auto p = Partition::orthant(g);
  const auto workers = static_cast<unsigned>(state.range(1));
  std::size_t size = 0;
  for (auto _ : state) {
    const auto s = compute_config_set(gens, p, static_cast<unsigned>(state.range(0)), {workers});
    size = s.size();
  }
  state.counters["tuples"] = static_cast<double>(size);
}
BENCHMARK(BM_ConfigOrthant)->ArgsProduct({{4, 6, 8}, {1, 4}})->Unit(benchmark::kMillisecond);

static void BM_ConfigUserPartition(benchmark::State& state) {
  const auto g = parse_group("Z^2");
  const auto gens = GeneratingSequence::standard(g);
  const auto p = Partition::parse(g, "origin := elem((0,0))\nright := pos(1) and not neg(2)\nrest := otherwise\n");
  for (auto _ : state) benchmark::DoNotOptimize(compute_config_set(gens, p, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_ConfigUserPartition)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_Smith5x5(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long> entry(-9, 9);
  IntMatrix m(5, 5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) m(i, j) = entry(rng);
  for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(m));
}
BENCHMARK(BM_Smith5x5);

static void BM_LawCheck(benchmark::State& state) {
  const auto g = GroupDescriptor::unitriangular(3);
  const auto gens = GeneratingSequence::standard(g);
  const auto law = LawSpec::parse("v1 v2^2 = v2^2 v1");
  for (auto _ : state) benchmark::DoNotOptimize(check_law(gens, law, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_LawCheck)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
