#include <cmath>
#include <cstdlib>
#include <map>
#include <string>

#include "doctest.h"
#include "proxlaw/errors.hpp"
#include "proxlaw/experiment.hpp"
#include "proxlaw/graph.hpp"

using namespace proxlaw;

namespace {

// Six nodes; L1 and L2 are the same star around a, L3 is a star around f,
// so hub ranks agree on (L1, L2) and invert on (L1, L3).
MultilayerGraph star_graph() {
  return parse_graph(R"({
    "name": "stars",
    "nodes": [{"id": "a"}, {"id": "b"}, {"id": "c"},
              {"id": "d"}, {"id": "e"}, {"id": "f"}],
    "layers": [
      {"name": "L1", "directed": false, "weighted": false,
       "edges": [{"src": "a", "dst": "b"}, {"src": "a", "dst": "c"},
                 {"src": "a", "dst": "d"}, {"src": "a", "dst": "e"},
                 {"src": "a", "dst": "f"}]},
      {"name": "L2", "directed": false, "weighted": false,
       "edges": [{"src": "a", "dst": "b"}, {"src": "a", "dst": "c"},
                 {"src": "a", "dst": "d"}, {"src": "a", "dst": "e"},
                 {"src": "a", "dst": "f"}]},
      {"name": "L3", "directed": false, "weighted": false,
       "edges": [{"src": "f", "dst": "a"}, {"src": "f", "dst": "b"},
                 {"src": "f", "dst": "c"}, {"src": "f", "dst": "d"},
                 {"src": "f", "dst": "e"}]}
    ]
  })");
}

ExperimentConfig star_config() {
  ExperimentConfig config;
  config.graph_name = "stars";
  config.similar = {"L1", "L2", PairClass::similar};
  config.dissimilar = {"L1", "L3", PairClass::dissimilar};
  return config;
}

}  // namespace

TEST_CASE("verdict partition: thresholded_v2") {
  const Criterion c = Criterion::thresholded_v2;
  CHECK(classify_verdict(0.25, 0.01, c) == Verdict::CONFIRMED);
  CHECK(classify_verdict(0.20, 0.049, c) == Verdict::CONFIRMED);  // floor hit
  CHECK(classify_verdict(0.19, 0.01, c) == Verdict::PARTIAL);
  CHECK(classify_verdict(0.25, 0.05, c) == Verdict::PARTIAL);  // p == alpha
  CHECK(classify_verdict(0.0, 0.0, c) == Verdict::PARTIAL);
  CHECK(classify_verdict(-1e-12, 0.0, c) == Verdict::DENIED);
  CHECK(classify_verdict(-0.5, 0.9, c) == Verdict::DENIED);
  // Custom floor and alpha move the CONFIRMED region.
  CHECK(classify_verdict(0.15, 0.01, c, 0.10, 0.05) == Verdict::CONFIRMED);
  CHECK(classify_verdict(0.15, 0.01, c, 0.20, 0.05) == Verdict::PARTIAL);
  CHECK(classify_verdict(0.25, 0.07, c, 0.20, 0.10) == Verdict::CONFIRMED);
}

TEST_CASE("verdict partition: legacy is sign-of-delta only") {
  const Criterion c = Criterion::legacy_directional;
  CHECK(classify_verdict(1e-12, 0.99, c) == Verdict::CONFIRMED);
  CHECK(classify_verdict(0.0, 0.0, c) == Verdict::DENIED);
  CHECK(classify_verdict(-1e-12, 0.0, c) == Verdict::DENIED);
}

TEST_CASE("run_experiment on the star graph") {
  const MultilayerGraph g = star_graph();
  ExperimentConfig config = star_config();
  const ExperimentReport report = run_experiment(g, config);

  CHECK(report.sim.r == 1.0);
  CHECK(report.sim.rho == 1.0);
  CHECK(report.sim.n == 6);
  CHECK(report.dis.r == doctest::Approx(-0.2).epsilon(1e-14));
  CHECK(report.delta_r == report.sim.r - report.dis.r);  // exact identity
  CHECK(report.sign_agreement);
  // |r| = 1: the t fallback saturates at p = 0.
  CHECK(report.sim.p_t_fallback == 0.0);
  CHECK(!std::isnan(report.sim.p_permutation));
  // Star alignment survives 1 in 6 random permutations, so the permutation
  // p sits near 1/6 and the thresholded verdict is PARTIAL.
  CHECK(report.sim.p_permutation > 0.05);
  CHECK(report.verdict == Verdict::PARTIAL);
}

TEST_CASE("disabling permutations falls back to the t p-value") {
  ExperimentConfig config = star_config();
  config.n_permutations = 0;
  const ExperimentReport report = run_experiment(star_graph(), config);
  CHECK(std::isnan(report.sim.p_permutation));
  CHECK(report.sim.p_t_fallback == 0.0);
  // delta_r = 1.2 >= 0.20 and p = 0 < alpha.
  CHECK(report.verdict == Verdict::CONFIRMED);
}

TEST_CASE("legacy criterion confirms on any positive delta") {
  ExperimentConfig config = star_config();
  config.criterion = Criterion::legacy_directional;
  CHECK(run_experiment(star_graph(), config).verdict == Verdict::CONFIRMED);

  // Swapping the pairs makes delta negative.
  config.similar = {"L1", "L3", PairClass::similar};
  config.dissimilar = {"L1", "L2", PairClass::dissimilar};
  CHECK(run_experiment(star_graph(), config).verdict == Verdict::DENIED);
}

TEST_CASE("graph name and layer references are checked") {
  ExperimentConfig config = star_config();
  config.graph_name = "other";
  try {
    run_experiment(star_graph(), config);
    FAIL("expected config_mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::config_mismatch);
  }

  config = star_config();
  config.graph_name.clear();  // empty name matches any graph
  CHECK(run_experiment(star_graph(), config).sim.r == 1.0);

  config.dissimilar = {"L1", "L9", PairClass::dissimilar};
  try {
    run_experiment(star_graph(), config);
    FAIL("expected config_mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::config_mismatch);
    CHECK(e.element() == "L9");
  }
}

TEST_CASE("config invariants are enforced") {
  ExperimentConfig config = star_config();
  config.similar = {"L1", "L1", PairClass::similar};
  CHECK_THROWS_AS(run_experiment(star_graph(), config), Error);

  config = star_config();
  config.similar.classification = PairClass::dissimilar;
  CHECK_THROWS_AS(run_experiment(star_graph(), config), Error);

  config = star_config();
  config.alpha = 1.0;
  CHECK_THROWS_AS(run_experiment(star_graph(), config), Error);

  config = star_config();
  config.delta_r_floor = -0.1;
  CHECK_THROWS_AS(run_experiment(star_graph(), config), Error);
}

TEST_CASE("use_weights on an unweighted layer is refused") {
  ExperimentConfig config = star_config();
  config.use_weights = true;
  try {
    run_experiment(star_graph(), config);
    FAIL("expected weights_unavailable");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::weights_unavailable);
  }
}

TEST_CASE("experiment runs are deterministic under a pinned clock") {
  setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  const ExperimentReport a = run_experiment(star_graph(), star_config());
  const ExperimentReport b = run_experiment(star_graph(), star_config());
  unsetenv("SOURCE_DATE_EPOCH");
  CHECK(a.timestamp_utc == "2023-11-14T22:13:20Z");
  CHECK(serialize_experiment_report(a) == serialize_experiment_report(b));
}

TEST_CASE("replay of the canonical evidence table") {
  const std::vector<ReplayResult> results = replay_table(canonical_rows());
  REQUIRE(results.size() == 12);

  std::map<std::string, const ReplayResult*> by_domain;
  for (const ReplayResult& r : results) by_domain[r.domain] = &r;

  const std::map<std::string, double> expected_delta{
      {"Linux Kernel (v6.x)", 0.848},
      {"Human Brain Connectome", 0.525},
      {"Internet AS Topology", 0.783},
      {"CPU Block Design", 1.271},
      {"Ecology (Serengeti food web)", 0.624},
      {"Cytokine Cascade", 0.920},
      {"p53 Interaction Network", 1.134},
      {"English Lexical Network", 1.024},
      {"Software (git history)", 1.245},
      {"Finance (2008 interbank)", -0.141},
      {"Psychiatry (symptom network)", -0.039},
      {"Mathematics (theorem graph)", -0.175},
  };
  for (const auto& [domain, delta] : expected_delta) {
    REQUIRE(by_domain.count(domain) == 1);
    CHECK(by_domain[domain]->delta_r ==
          doctest::Approx(delta).epsilon(1e-12));
  }

  int confirmed = 0, denied = 0;
  for (const ReplayResult& r : results) {
    if (r.verdict == Verdict::CONFIRMED) ++confirmed;
    if (r.verdict == Verdict::DENIED) ++denied;
  }
  CHECK(confirmed == 9);
  CHECK(denied == 3);
  CHECK(by_domain["Finance (2008 interbank)"]->verdict == Verdict::DENIED);
  CHECK(by_domain["Psychiatry (symptom network)"]->verdict ==
        Verdict::DENIED);
  CHECK(by_domain["Mathematics (theorem graph)"]->verdict == Verdict::DENIED);
}

TEST_CASE("replay rounds delta to three decimals") {
  const ReplayRow rows[] = {{"x", 0.1004, 0.0, 0.5, 10},
                            {"y", 0.0005, 0.0, 0.5, 10},
                            {"z", -0.0004, 0.0, 0.5, 10}};
  const std::vector<ReplayResult> out = replay_table(rows);
  CHECK(out[0].delta_r == doctest::Approx(0.100).epsilon(1e-12));
  CHECK(out[1].delta_r == doctest::Approx(0.001).epsilon(1e-12));
  CHECK(out[2].delta_r == 0.0);
  CHECK(out[2].verdict == Verdict::DENIED);  // rounded to exactly zero
}

TEST_CASE("experiment config JSON round trip") {
  ExperimentConfig config = star_config();
  config.use_weights = false;
  config.n_permutations = 5000;
  config.seed = 7;
  config.criterion = Criterion::legacy_directional;
  config.delta_r_floor = 0.25;
  config.alpha = 0.01;
  config.prereg_digest = std::string(64, 'a');
  config.tier = Tier::C;
  CHECK(parse_experiment_config(serialize_experiment_config(config)) ==
        config);
}

TEST_CASE("minimal config JSON fills defaults") {
  const ExperimentConfig config = parse_experiment_config(R"({
    "graph_name": "",
    "similar": {"layer_a": "A", "layer_b": "B"},
    "dissimilar": {"layer_a": "A", "layer_b": "C"}
  })");
  CHECK(config.n_permutations == 200);
  CHECK(config.seed == 42);
  CHECK(config.criterion == Criterion::thresholded_v2);
  CHECK(config.delta_r_floor == 0.20);
  CHECK(config.alpha == 0.05);
  CHECK(config.tier == Tier::A);
  CHECK(config.prereg_digest.empty());
  CHECK(config.similar.classification == PairClass::similar);
  CHECK(config.dissimilar.classification == PairClass::dissimilar);
}

TEST_CASE("config JSON rejects slot-classification mismatch") {
  CHECK_THROWS_AS(parse_experiment_config(R"({
    "graph_name": "",
    "similar": {"layer_a": "A", "layer_b": "B",
                "classification": "dissimilar"},
    "dissimilar": {"layer_a": "A", "layer_b": "C"}
  })"),
                  Error);
  CHECK_THROWS_AS(parse_experiment_config(R"({
    "graph_name": "",
    "similar": ["A", "B"],
    "dissimilar": {"layer_a": "A", "layer_b": "C"}
  })"),
                  Error);
}

TEST_CASE("experiment report JSON round trip preserves NaN as null") {
  ExperimentConfig config = star_config();
  config.n_permutations = 0;  // forces NaN p_permutation
  const ExperimentReport report = run_experiment(star_graph(), config);
  const std::string text = serialize_experiment_report(report);
  CHECK(text.find("\"p_permutation\": null") != std::string::npos);

  const ExperimentReport back = parse_experiment_report(text);
  CHECK(std::isnan(back.sim.p_permutation));
  CHECK(back.sim.r == report.sim.r);
  CHECK(back.dis.r == report.dis.r);
  CHECK(back.delta_r == report.delta_r);
  CHECK(back.verdict == report.verdict);
  CHECK(back.sign_agreement == report.sign_agreement);
  CHECK(back.tier == report.tier);
  CHECK(back.timestamp_utc == report.timestamp_utc);
  CHECK(back.config == report.config);
  // Serializing the parsed report reproduces the text byte for byte.
  CHECK(serialize_experiment_report(back) == text);
}

TEST_CASE("name helpers are stable strings") {
  CHECK(verdict_name(Verdict::CONFIRMED) == "CONFIRMED");
  CHECK(verdict_name(Verdict::PARTIAL) == "PARTIAL");
  CHECK(verdict_name(Verdict::DENIED) == "DENIED");
  CHECK(criterion_name(Criterion::legacy_directional) ==
        "legacy_directional");
  CHECK(criterion_name(Criterion::thresholded_v2) == "thresholded_v2");
  CHECK(tier_name(Tier::D) == "D");
}
