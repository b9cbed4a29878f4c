#include <benchmark/benchmark.h>

#include "hypforge/oracle.hpp"
#include "hypforge/parser.hpp"
#include "hypforge/pddl.hpp"
#include "hypforge/random_model.hpp"
#include "hypforge/ground_truth.hpp"
#include "hypforge/search.hpp"

using namespace hypforge;

namespace {

const std::string& malware_source() {
  static const std::string src = read_text_file(HYPFORGE_MODELS_DIR "/malware.lts");
  return src;
}

void BM_ParseMalware(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse(malware_source()));
}
BENCHMARK(BM_ParseMalware);

void BM_TokenizeMalware(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(tokenize(malware_source()));
}
BENCHMARK(BM_TokenizeMalware);

void BM_CompileMalware(benchmark::State& state) {
  const ModelSpec m = *parse(malware_source()).model;
  const Trace t = Trace::from_symbols({"blacklisted-download", "irc-increase", "ad-traffic-increase"});
  for (auto _ : state) benchmark::DoNotOptimize(compile(m, t, CostParams{}));
}
BENCHMARK(BM_CompileMalware);

void BM_TopKMalware(benchmark::State& state) {
  const ModelSpec m = *parse(malware_source()).model;
  const Trace t = Trace::from_symbols({"blacklisted-download", "irc-increase", "ad-traffic-increase"});
  const PlanningProblem p = compile(m, t, CostParams{});
  SearchConfig sc;
  sc.k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(find_top_k(p, sc));
}
BENCHMARK(BM_TopKMalware)->Arg(10)->Arg(50);

// Random instance: states x walk length.
PlanningProblem random_problem(std::size_t states, std::size_t obs, std::uint64_t seed) {
  const ModelSpec m = generate_random_model(states, 0.6, seed);
  const GroundTruth gt = generate_ground_truth(m, obs, NoiseParams{}, seed);
  return compile(m, gt.trace, CostParams{});
}

void BM_TopKRandom(benchmark::State& state) {
  const PlanningProblem p = random_problem(static_cast<std::size_t>(state.range(0)),
                                           static_cast<std::size_t>(state.range(1)), 7);
  SearchConfig sc;
  sc.k = 20;
  for (auto _ : state) benchmark::DoNotOptimize(find_top_k(p, sc));
}
BENCHMARK(BM_TopKRandom)->Args({10, 8})->Args({50, 10})->Args({100, 10})->Unit(benchmark::kMillisecond);

void BM_OracleRandom(benchmark::State& state) {
  const PlanningProblem p = random_problem(10, static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(exact_oracle(p, 20));
}
BENCHMARK(BM_OracleRandom)->Arg(5)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_PddlRoundTrip(benchmark::State& state) {
  const PlanningProblem p = random_problem(10, 8, 3);
  for (auto _ : state) {
    const PddlFiles f = export_pddl(p);
    benchmark::DoNotOptimize(read_pddl(f.domain, f.problem));
  }
}
BENCHMARK(BM_PddlRoundTrip)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
