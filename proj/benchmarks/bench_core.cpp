// Microbenchmarks for the hot paths: hub extraction, correlation, the
// permutation test (serial and parallel), digesting, and history scans.
#include <benchmark/benchmark.h>

#include <cstdint>
#include <string>
#include <vector>

#include "proxlaw/extract.hpp"
#include "proxlaw/graph.hpp"
#include "proxlaw/metrics.hpp"
#include "proxlaw/prereg.hpp"
#include "proxlaw/rng.hpp"
#include "proxlaw/sha256.hpp"
#include "proxlaw/stats.hpp"

namespace {

using namespace proxlaw;

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  Pcg32 rng(substream_seed(seed, 0));
  std::vector<double> out(n);
  for (double& x : out) x = rng.uniform01();
  return out;
}

void BM_DegreeVector(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const MultilayerGraph g = generate_random_control(n, 3, 0.1, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(degree_vector(g, "L2", false));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DegreeVector)->Range(64, 4096)->Complexity();

void BM_Pearson(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::vector<double> a = random_values(n, 1);
  const std::vector<double> b = random_values(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pearson(a, b));
  }
}
BENCHMARK(BM_Pearson)->Range(16, 16384);

void BM_Spearman(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::vector<double> a = random_values(n, 1);
  const std::vector<double> b = random_values(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spearman(a, b));
  }
}
BENCHMARK(BM_Spearman)->Range(16, 16384);

void BM_PermutationSampled(benchmark::State& state) {
  const auto workers = static_cast<unsigned>(state.range(0));
  const std::vector<double> a = random_values(30, 1);
  const std::vector<double> b = random_values(30, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(permutation_test(
        a, b, 10000, 42, PermutationMode::sampled,
        CountingRule::greater_or_equal, workers));
  }
}
BENCHMARK(BM_PermutationSampled)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

void BM_PermutationExhaustive(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::vector<double> a = random_values(n, 1);
  const std::vector<double> b = random_values(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        permutation_test(a, b, 0, 42, PermutationMode::exhaustive));
  }
}
BENCHMARK(BM_PermutationExhaustive)->DenseRange(5, 8);

void BM_BinomTail(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(binom_tail(n / 2, n));
  }
}
BENCHMARK(BM_BinomTail)->Arg(12)->Arg(64)->Arg(512)->Arg(4096);

void BM_Sha256(benchmark::State& state) {
  const std::string data(static_cast<std::size_t>(state.range(0)), 'x');
  for (auto _ : state) {
    benchmark::DoNotOptimize(sha256_hex(data));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                          state.range(0));
}
BENCHMARK(BM_Sha256)->Range(64, 1 << 20);

void BM_Digest(benchmark::State& state) {
  HypothesisDoc doc;
  doc.experiment_id = "exp_bench";
  doc.statement_texts = {"h1: hub ranks on the similar pair correlate",
                         "h2: the dissimilar pair stays quiet"};
  doc.similar_pair = {"L1", "L2", PairClass::similar};
  doc.dissimilar_pair = LayerPair{"L1", "L3", PairClass::dissimilar};
  doc.thresholds = {{"alpha", 0.05}, {"delta_r_floor", 0.2}};
  doc.author = "bench";
  for (auto _ : state) {
    benchmark::DoNotOptimize(digest(doc));
  }
}
BENCHMARK(BM_Digest);

void BM_CochangeExtraction(benchmark::State& state) {
  const auto n_commits = static_cast<std::uint32_t>(state.range(0));
  Pcg32 rng(substream_seed(11, 0));
  std::string log;
  for (std::uint32_t c = 0; c < n_commits; ++c) {
    log += "c" + std::to_string(c) + "\t" + std::to_string(1000 + c) + "\n";
    const std::uint32_t n_files = 1 + rng.bounded(8);
    for (std::uint32_t f = 0; f < n_files; ++f) {
      log += "src/m" + std::to_string(rng.bounded(40)) + ".py\n";
    }
    log += "\n";
  }
  const std::vector<CommitRecord> commits = parse_git_log(log);
  const ModuleMap map{{}, ModuleMapDefault::basename};
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_cochange_layer(commits, map));
  }
}
BENCHMARK(BM_CochangeExtraction)->Range(64, 4096);

}  // namespace

BENCHMARK_MAIN();
