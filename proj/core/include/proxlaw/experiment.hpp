#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "proxlaw/graph.hpp"
#include "proxlaw/stats.hpp"

namespace proxlaw {

enum class PairClass { similar, dissimilar };

struct LayerPair {
  std::string layer_a;
  std::string layer_b;
  PairClass classification = PairClass::similar;

  bool operator==(const LayerPair&) const = default;
};

enum class Criterion { legacy_directional, thresholded_v2 };
enum class Verdict { CONFIRMED, PARTIAL, DENIED };
enum class Tier { A, B, C, D };  // reporting metadata, never branched on

std::string_view verdict_name(Verdict v);
std::string_view criterion_name(Criterion c);
std::string_view tier_name(Tier t);

struct ExperimentConfig {
  std::string graph_name;
  LayerPair similar{.classification = PairClass::similar};
  LayerPair dissimilar{.classification = PairClass::dissimilar};
  bool use_weights = false;
  // n_permutations = 0 disables the permutation test; the verdict then
  // falls back to the analytical t p-value.
  std::uint64_t n_permutations = 200;
  std::uint64_t seed = 42;
  Criterion criterion = Criterion::thresholded_v2;
  double delta_r_floor = 0.20;
  double alpha = 0.05;
  std::string prereg_digest;  // optional 64-hex commitment
  Tier tier = Tier::A;

  bool operator==(const ExperimentConfig&) const = default;
};

struct PairResult {
  double r = 0.0;
  double rho = 0.0;
  double p_permutation = 0.0;  // NaN when the permutation test is disabled
  double p_t_fallback = 0.0;   // NaN when n < 3
  std::size_t n = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  PairResult sim;
  PairResult dis;
  double delta_r = 0.0;  // sim.r - dis.r, exact
  Verdict verdict = Verdict::PARTIAL;
  bool sign_agreement = false;  // Pearson and Spearman same sign on sim pair
  Tier tier = Tier::A;
  std::string timestamp_utc;
};

// legacy_directional: CONFIRMED iff delta_r > 0, else DENIED.
// thresholded_v2 partitions the (delta_r, p) plane:
//   delta_r < 0                            -> DENIED
//   delta_r >= delta_r_floor and p < alpha -> CONFIRMED
//   otherwise                              -> PARTIAL
Verdict classify_verdict(double delta_r, double p_sim, Criterion criterion,
                         double delta_r_floor = 0.20, double alpha = 0.05);

// Full pre-registered run: hub vectors for both pairs, Pearson and Spearman,
// permutation p, t fallback, delta r, verdict. Deterministic given
// (graph, config); the timestamp honors SOURCE_DATE_EPOCH.
ExperimentReport run_experiment(const MultilayerGraph& graph,
                                const ExperimentConfig& config);

struct ReplayRow {
  std::string domain;
  double r_sim = 0.0;
  double r_dis = 0.0;
  double p_sim = 0.0;
  std::size_t n = 0;
};

struct ReplayResult {
  std::string domain;
  double delta_r = 0.0;  // rounded to 3 decimals
  Verdict verdict = Verdict::PARTIAL;
};

// Recomputes delta r (3 decimals) and the legacy verdict per row.
std::vector<ReplayResult> replay_table(std::span<const ReplayRow> rows);

// The twelve canonical evidence rows the regression suite replays.
const std::vector<ReplayRow>& canonical_rows();

ExperimentConfig parse_experiment_config(std::string_view json_text);
std::string serialize_experiment_config(const ExperimentConfig& config);
ExperimentReport parse_experiment_report(std::string_view json_text);
std::string serialize_experiment_report(const ExperimentReport& report);

}  // namespace proxlaw
