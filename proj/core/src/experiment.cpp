#include "proxlaw/experiment.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

#include "json_util.hpp"
#include "proxlaw/clock.hpp"
#include "proxlaw/metrics.hpp"

namespace proxlaw {

using detail::json;

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::CONFIRMED: return "CONFIRMED";
    case Verdict::PARTIAL: return "PARTIAL";
    case Verdict::DENIED: return "DENIED";
  }
  return "PARTIAL";
}

std::string_view criterion_name(Criterion c) {
  return c == Criterion::legacy_directional ? "legacy_directional"
                                            : "thresholded_v2";
}

std::string_view tier_name(Tier t) {
  switch (t) {
    case Tier::A: return "A";
    case Tier::B: return "B";
    case Tier::C: return "C";
    case Tier::D: return "D";
  }
  return "A";
}

namespace {

Criterion parse_criterion(std::string_view name) {
  if (name == "legacy_directional") return Criterion::legacy_directional;
  if (name == "thresholded_v2") return Criterion::thresholded_v2;
  throw Error(Errc::schema_error, std::string(name),
              "criterion must be \"legacy_directional\" or "
              "\"thresholded_v2\"");
}

Verdict parse_verdict(std::string_view name) {
  if (name == "CONFIRMED") return Verdict::CONFIRMED;
  if (name == "PARTIAL") return Verdict::PARTIAL;
  if (name == "DENIED") return Verdict::DENIED;
  throw Error(Errc::schema_error, std::string(name),
              "verdict must be CONFIRMED, PARTIAL, or DENIED");
}

Tier parse_tier(std::string_view name) {
  if (name == "A") return Tier::A;
  if (name == "B") return Tier::B;
  if (name == "C") return Tier::C;
  if (name == "D") return Tier::D;
  throw Error(Errc::schema_error, std::string(name),
              "tier must be one of A, B, C, D");
}

void check_config_invariants(const ExperimentConfig& config) {
  if (config.similar.classification != PairClass::similar) {
    throw Error(Errc::bad_parameter, "similar",
                "similar pair must be classified similar");
  }
  if (config.dissimilar.classification != PairClass::dissimilar) {
    throw Error(Errc::bad_parameter, "dissimilar",
                "dissimilar pair must be classified dissimilar");
  }
  if (config.similar.layer_a == config.similar.layer_b ||
      config.dissimilar.layer_a == config.dissimilar.layer_b) {
    throw Error(Errc::bad_parameter, "layer_pair",
                "a layer pair must name two distinct layers");
  }
  if (!(config.alpha > 0.0) || !(config.alpha < 1.0)) {
    throw Error(Errc::bad_parameter, "alpha",
                "alpha must lie strictly between 0 and 1");
  }
  if (!(config.delta_r_floor >= 0.0)) {
    throw Error(Errc::bad_parameter, "delta_r_floor",
                "delta_r_floor must be non-negative");
  }
}

}  // namespace

Verdict classify_verdict(double delta_r, double p_sim, Criterion criterion,
                         double delta_r_floor, double alpha) {
  if (criterion == Criterion::legacy_directional) {
    return delta_r > 0.0 ? Verdict::CONFIRMED : Verdict::DENIED;
  }
  if (delta_r < 0.0) return Verdict::DENIED;
  if (delta_r >= delta_r_floor && p_sim < alpha) return Verdict::CONFIRMED;
  return Verdict::PARTIAL;
}

ExperimentReport run_experiment(const MultilayerGraph& graph,
                                const ExperimentConfig& config) {
  check_config_invariants(config);
  if (!config.graph_name.empty() && config.graph_name != graph.name) {
    throw Error(Errc::config_mismatch, config.graph_name,
                "config targets graph \"" + config.graph_name +
                    "\" but got \"" + graph.name + "\"");
  }
  for (const std::string* name :
       {&config.similar.layer_a, &config.similar.layer_b,
        &config.dissimilar.layer_a, &config.dissimilar.layer_b}) {
    bool found = false;
    for (const Layer& layer : graph.layers) {
      if (layer.name == *name) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw Error(Errc::config_mismatch, *name,
                  "config references layer \"" + *name +
                      "\" absent from the graph");
    }
  }

  std::unordered_map<std::string, HubVector> hubs;
  const auto hub_of = [&](const std::string& layer_name) -> const HubVector& {
    auto it = hubs.find(layer_name);
    if (it == hubs.end()) {
      it = hubs.emplace(layer_name, degree_vector(graph, layer_name,
                                                  config.use_weights))
               .first;
    }
    return it->second;
  };

  const auto analyze = [&](const LayerPair& pair) {
    const HubVector& a = hub_of(pair.layer_a);
    const HubVector& b = hub_of(pair.layer_b);
    PairResult out;
    out.n = a.values.size();
    out.r = pearson(a, b).r;
    out.rho = spearman(a, b).r;
    if (config.n_permutations > 0) {
      out.p_permutation =
          permutation_test(a.values, b.values, config.n_permutations,
                           config.seed)
              .p_value;
    } else {
      out.p_permutation = std::numeric_limits<double>::quiet_NaN();
    }
    if (out.n >= 3) {
      out.p_t_fallback = t_test_p(out.r, out.n).p_two_tailed;
    } else {
      out.p_t_fallback = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
  };

  ExperimentReport report;
  report.config = config;
  report.sim = analyze(config.similar);
  report.dis = analyze(config.dissimilar);
  report.delta_r = report.sim.r - report.dis.r;
  const double p_for_verdict = config.n_permutations > 0
                                   ? report.sim.p_permutation
                                   : report.sim.p_t_fallback;
  report.verdict = classify_verdict(report.delta_r, p_for_verdict,
                                    config.criterion, config.delta_r_floor,
                                    config.alpha);
  report.sign_agreement =
      (report.sim.r > 0.0 && report.sim.rho > 0.0) ||
      (report.sim.r < 0.0 && report.sim.rho < 0.0) ||
      (report.sim.r == 0.0 && report.sim.rho == 0.0);
  report.tier = config.tier;
  report.timestamp_utc = utc_timestamp_now();
  return report;
}

std::vector<ReplayResult> replay_table(std::span<const ReplayRow> rows) {
  std::vector<ReplayResult> out;
  out.reserve(rows.size());
  for (const ReplayRow& row : rows) {
    const double delta =
        std::round((row.r_sim - row.r_dis) * 1000.0) / 1000.0;
    out.push_back({row.domain, delta,
                   classify_verdict(delta, row.p_sim,
                                    Criterion::legacy_directional)});
  }
  return out;
}

const std::vector<ReplayRow>& canonical_rows() {
  // p for the two sub-threshold rows is reconstructed from (r, n) via the
  // analytical fallback; every other figure is carried as published.
  static const std::vector<ReplayRow> rows = [] {
    std::vector<ReplayRow> r{
        {"Linux Kernel (v6.x)", 0.703, -0.145, 0.002, 30},
        {"Human Brain Connectome", 0.703, 0.178, 0.004, 16},
        {"Internet AS Topology", 0.516, -0.267, 0.026, 18},
        {"CPU Block Design", 0.622, -0.649, 0.030, 10},
        {"Ecology (Serengeti food web)", 0.559, -0.065, 0.034, 15},
        {"Cytokine Cascade", 0.512, -0.408, 0.030, 18},
        {"p53 Interaction Network", 0.973, -0.161, 0.0, 15},
        {"English Lexical Network", 0.276, -0.748, 0.241, 20},
        {"Software (git history)", 0.941, -0.304, 0.0, 14},
        {"Finance (2008 interbank)", 0.042, 0.183, 0.824, 16},
        {"Psychiatry (symptom network)", 0.769, 0.808, 0.002, 20},
        {"Mathematics (theorem graph)", 0.105, 0.280, 0.705, 20},
    };
    for (ReplayRow& row : r) {
      if (row.p_sim == 0.0) {
        row.p_sim = t_test_p(row.r_sim, row.n).p_two_tailed;
      }
    }
    return r;
  }();
  return rows;
}

namespace {

LayerPair config_pair_from_json(const json& obj, PairClass slot,
                                const char* context) {
  if (!obj.is_object()) {
    throw Error(Errc::schema_error, context,
                std::string(context) + ": layer pair must be an object");
  }
  LayerPair pair;
  pair.layer_a = detail::require_string(obj, "layer_a", context);
  pair.layer_b = detail::require_string(obj, "layer_b", context);
  pair.classification = slot;
  if (const auto it = obj.find("classification"); it != obj.end()) {
    const LayerPair parsed = detail::layer_pair_from_json(obj, context);
    if (parsed.classification != slot) {
      throw Error(Errc::schema_error, context,
                  std::string(context) +
                      ": classification does not match its slot");
    }
  }
  return pair;
}

json pair_result_to_json(const PairResult& pr) {
  json out;
  out["r"] = pr.r;
  out["rho"] = pr.rho;
  out["p_permutation"] = std::isnan(pr.p_permutation)
                             ? json(nullptr)
                             : json(pr.p_permutation);
  out["p_t_fallback"] =
      std::isnan(pr.p_t_fallback) ? json(nullptr) : json(pr.p_t_fallback);
  out["n"] = pr.n;
  return out;
}

PairResult pair_result_from_json(const json& obj, const char* context) {
  PairResult pr;
  pr.r = detail::require_number(obj, "r", context);
  pr.rho = detail::require_number(obj, "rho", context);
  const json& pp = detail::require_field(obj, "p_permutation", context);
  pr.p_permutation = pp.is_null() ? std::numeric_limits<double>::quiet_NaN()
                                  : pp.get<double>();
  const json& pt = detail::require_field(obj, "p_t_fallback", context);
  pr.p_t_fallback = pt.is_null() ? std::numeric_limits<double>::quiet_NaN()
                                 : pt.get<double>();
  pr.n = static_cast<std::size_t>(
      detail::require_number(obj, "n", context));
  return pr;
}

json config_to_json(const ExperimentConfig& config) {
  json out;
  out["graph_name"] = config.graph_name;
  out["similar"] = detail::layer_pair_to_json(config.similar);
  out["dissimilar"] = detail::layer_pair_to_json(config.dissimilar);
  out["use_weights"] = config.use_weights;
  out["n_permutations"] = config.n_permutations;
  out["seed"] = config.seed;
  out["criterion"] = std::string(criterion_name(config.criterion));
  out["delta_r_floor"] = config.delta_r_floor;
  out["alpha"] = config.alpha;
  if (!config.prereg_digest.empty()) {
    out["prereg_digest"] = config.prereg_digest;
  }
  out["tier"] = std::string(tier_name(config.tier));
  return out;
}

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) {
    throw Error(Errc::schema_error, "",
                "experiment config must be a JSON object");
  }
  ExperimentConfig config;
  config.graph_name =
      detail::require_string(doc, "graph_name", "experiment config");
  config.similar = config_pair_from_json(
      detail::require_field(doc, "similar", "experiment config"),
      PairClass::similar, "similar");
  config.dissimilar = config_pair_from_json(
      detail::require_field(doc, "dissimilar", "experiment config"),
      PairClass::dissimilar, "dissimilar");
  if (const auto it = doc.find("use_weights"); it != doc.end()) {
    config.use_weights = detail::require_bool(doc, "use_weights", "config");
  }
  if (const auto it = doc.find("n_permutations"); it != doc.end()) {
    config.n_permutations = it->get<std::uint64_t>();
  }
  if (const auto it = doc.find("seed"); it != doc.end()) {
    config.seed = it->get<std::uint64_t>();
  }
  if (const auto it = doc.find("criterion"); it != doc.end()) {
    config.criterion =
        parse_criterion(detail::require_string(doc, "criterion", "config"));
  }
  if (const auto it = doc.find("delta_r_floor"); it != doc.end()) {
    config.delta_r_floor =
        detail::require_number(doc, "delta_r_floor", "config");
  }
  if (const auto it = doc.find("alpha"); it != doc.end()) {
    config.alpha = detail::require_number(doc, "alpha", "config");
  }
  if (const auto it = doc.find("prereg_digest");
      it != doc.end() && !it->is_null()) {
    config.prereg_digest =
        detail::require_string(doc, "prereg_digest", "config");
  }
  if (const auto it = doc.find("tier"); it != doc.end()) {
    config.tier = parse_tier(detail::require_string(doc, "tier", "config"));
  }
  check_config_invariants(config);
  return config;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  return config_from_json(detail::parse_json(json_text, "experiment config"));
}

std::string serialize_experiment_config(const ExperimentConfig& config) {
  return config_to_json(config).dump(2) + "\n";
}

ExperimentReport parse_experiment_report(std::string_view json_text) {
  const json doc = detail::parse_json(json_text, "experiment report");
  if (!doc.is_object()) {
    throw Error(Errc::schema_error, "",
                "experiment report must be a JSON object");
  }
  ExperimentReport report;
  report.config =
      config_from_json(detail::require_field(doc, "config", "report"));
  report.sim = pair_result_from_json(
      detail::require_field(doc, "sim", "report"), "sim");
  report.dis = pair_result_from_json(
      detail::require_field(doc, "dis", "report"), "dis");
  report.delta_r = detail::require_number(doc, "delta_r", "report");
  report.verdict =
      parse_verdict(detail::require_string(doc, "verdict", "report"));
  report.sign_agreement =
      detail::require_bool(doc, "sign_agreement", "report");
  report.tier = parse_tier(detail::require_string(doc, "tier", "report"));
  report.timestamp_utc =
      detail::require_string(doc, "timestamp_utc", "report");
  return report;
}

std::string serialize_experiment_report(const ExperimentReport& report) {
  json out;
  out["schema_version"] = 1;
  out["config"] = config_to_json(report.config);
  out["sim"] = pair_result_to_json(report.sim);
  out["dis"] = pair_result_to_json(report.dis);
  out["delta_r"] = report.delta_r;
  out["verdict"] = std::string(verdict_name(report.verdict));
  out["sign_agreement"] = report.sign_agreement;
  out["tier"] = std::string(tier_name(report.tier));
  out["timestamp_utc"] = report.timestamp_utc;
  return out.dump(2) + "\n";
}

}  // namespace proxlaw
