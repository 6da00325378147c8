// proxlaw - multilayer hub-persistence analysis runs, reproducibly.
//
// One stdout payload per command (JSON under --json, human form otherwise);
// summaries and diagnostics go to stderr. Exit codes: 0 success, 1 domain
// failure, 2 IO/usage failure.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "proxlaw/clock.hpp"
#include "proxlaw/errors.hpp"
#include "proxlaw/experiment.hpp"
#include "proxlaw/extract.hpp"
#include "proxlaw/graph.hpp"
#include "proxlaw/io.hpp"
#include "proxlaw/metrics.hpp"
#include "proxlaw/prereg.hpp"
#include "proxlaw/sha256.hpp"
#include "proxlaw/stats.hpp"
#include "proxlaw/transfer.hpp"
#include "proxlaw/version.hpp"

namespace {

using json = nlohmann::json;
using namespace proxlaw;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitIo = 2;

// Reproducibility envelope written next to the output when --manifest is set.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> arguments;
  std::map<std::string, std::string> input_digests;

  std::string render() const {
    json doc;
    doc["command"] = command;
    doc["arguments"] = arguments;
    doc["input_digests"] = input_digests;
    doc["tool_version"] = std::string(kVersion);
    doc["timestamp_utc"] = utc_timestamp_now();
    return doc.dump(2) + "\n";
  }
};

struct Ctx {
  bool json_out = false;
  bool manifest = false;
  RunManifest run;

  // Reads an input file, recording its digest for the manifest.
  std::string input(const std::filesystem::path& path) {
    std::string text = read_text_file(path);
    run.input_digests[path.string()] = sha256_hex(text);
    return text;
  }

  void arg(const std::string& key, std::string value) {
    run.arguments[key] = std::move(value);
  }

  // `output` is the path of the command's primary output file, if any.
  void finish(const std::optional<std::filesystem::path>& output = {}) {
    if (!manifest) return;
    const std::filesystem::path path =
        output ? output->string() + ".manifest.json" : "manifest.json";
    write_text_file(path, run.render());
  }
};

void emit(Ctx& ctx, const json& machine, const std::string& human) {
  if (ctx.json_out) {
    std::fputs((machine.dump(2) + "\n").c_str(), stdout);
  } else {
    std::fputs(human.c_str(), stdout);
  }
}

// Writes to `out` when given, otherwise to stdout.
void emit_document(Ctx& ctx, const std::optional<std::filesystem::path>& out,
                   const std::string& document) {
  if (out) {
    write_text_file(*out, document);
  } else {
    std::fputs(document.c_str(), stdout);
  }
  ctx.finish(out);
}

CountingRule parse_counting_rule(const std::string& name) {
  if (name == "ge" || name == "greater_or_equal") {
    return CountingRule::greater_or_equal;
  }
  if (name == "gt" || name == "strict_greater") {
    return CountingRule::strict_greater;
  }
  throw CLI::ValidationError("--counting-rule must be ge or gt");
}

std::filesystem::path ledger_path(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("PROXLAW_LEDGER")) return env;
  return "prereg_ledger.jsonl";
}

json pair_result_json(const PairResult& pr) {
  json out;
  out["r"] = pr.r;
  out["rho"] = pr.rho;
  out["p_permutation"] =
      std::isnan(pr.p_permutation) ? json(nullptr) : json(pr.p_permutation);
  out["p_t_fallback"] =
      std::isnan(pr.p_t_fallback) ? json(nullptr) : json(pr.p_t_fallback);
  out["n"] = pr.n;
  return out;
}

int cmd_validate(Ctx& ctx, const std::string& graph_path) {
  const MultilayerGraph graph = parse_graph_unchecked(ctx.input(graph_path));
  const std::vector<Violation> violations = validate(graph);
  if (ctx.json_out) {
    json rows = json::array();
    for (const Violation& v : violations) {
      rows.push_back({{"code", std::string(errc_name(v.code))},
                      {"element", v.element},
                      {"message", v.message}});
    }
    emit(ctx, {{"valid", violations.empty()}, {"violations", rows}}, "");
  } else {
    std::string lines;
    for (const Violation& v : violations) {
      lines += std::string(errc_name(v.code)) + ": " + v.message + "\n";
    }
    std::fputs(lines.c_str(), stdout);
  }
  ctx.finish();
  return violations.empty() ? kExitOk : kExitDomain;
}

int cmd_hubs(Ctx& ctx, const std::string& graph_path, const std::string& layer,
             bool weights) {
  const MultilayerGraph graph = parse_graph(ctx.input(graph_path));
  const HubVector hubs = degree_vector(graph, layer, weights);
  json values = json::array();
  std::string human;
  for (std::size_t i = 0; i < hubs.values.size(); ++i) {
    values.push_back(
        {{"node", graph.nodes[i].id}, {"degree", hubs.values[i]}});
    char line[256];
    std::snprintf(line, sizeof line, "%s\t%g\n", graph.nodes[i].id.c_str(),
                  hubs.values[i]);
    human += line;
  }
  emit(ctx,
       {{"layer", hubs.layer_name},
        {"weighted", hubs.weighted},
        {"hubs", values}},
       human);
  ctx.finish();
  return kExitOk;
}

int cmd_persist(Ctx& ctx, const std::string& graph_path,
                const std::string& layer_a, const std::string& layer_b,
                std::uint64_t permutations, std::uint64_t seed, bool weights,
                const std::string& counting_rule_name) {
  const MultilayerGraph graph = parse_graph(ctx.input(graph_path));
  const CountingRule rule = parse_counting_rule(counting_rule_name);
  const HubVector a = degree_vector(graph, layer_a, weights);
  const HubVector b = degree_vector(graph, layer_b, weights);

  PairResult pr;
  pr.r = pearson(a, b).r;
  pr.rho = spearman(a, b).r;
  pr.n = a.values.size();
  pr.p_permutation =
      permutations > 0
          ? permutation_test(a.values, b.values, permutations, seed,
                             PermutationMode::sampled, rule)
                .p_value
          : std::numeric_limits<double>::quiet_NaN();
  pr.p_t_fallback = pr.n >= 3 ? t_test_p(pr.r, pr.n).p_two_tailed
                              : std::numeric_limits<double>::quiet_NaN();

  json out = pair_result_json(pr);
  out["layer_a"] = layer_a;
  out["layer_b"] = layer_b;
  out["permutations"] = permutations;
  out["seed"] = seed;
  char human[512];
  std::snprintf(human, sizeof human,
                "layers %s ~ %s (n=%zu)\n"
                "  pearson r     = %.6f\n"
                "  spearman rho  = %.6f\n"
                "  permutation p = %.6f   (%llu permutations, seed %llu)\n"
                "  t-fallback p  = %.6f\n",
                layer_a.c_str(), layer_b.c_str(), pr.n, pr.r, pr.rho,
                pr.p_permutation, (unsigned long long)permutations,
                (unsigned long long)seed, pr.p_t_fallback);
  emit(ctx, out, human);
  ctx.finish();
  return kExitOk;
}

int cmd_experiment(Ctx& ctx, const std::string& graph_path,
                   const std::string& config_path,
                   const std::optional<std::filesystem::path>& output,
                   const std::optional<std::uint64_t>& permutations,
                   const std::optional<std::uint64_t>& seed,
                   const std::optional<std::string>& criterion) {
  const MultilayerGraph graph = parse_graph(ctx.input(graph_path));
  ExperimentConfig config = parse_experiment_config(ctx.input(config_path));
  if (permutations) config.n_permutations = *permutations;
  if (seed) config.seed = *seed;
  if (criterion) {
    if (*criterion == "legacy" || *criterion == "legacy_directional") {
      config.criterion = Criterion::legacy_directional;
    } else if (*criterion == "thresholded_v2" || *criterion == "v2") {
      config.criterion = Criterion::thresholded_v2;
    } else {
      throw CLI::ValidationError(
          "--criterion must be legacy_directional or thresholded_v2");
    }
  }

  const ExperimentReport report = run_experiment(graph, config);
  const std::string doc = serialize_experiment_report(report);
  std::fprintf(stderr, "verdict: %s  (delta_r = %+.4f)\n",
               std::string(verdict_name(report.verdict)).c_str(),
               report.delta_r);
  emit_document(ctx, output, doc);
  return kExitOk;
}

int cmd_prereg_hash(Ctx& ctx, const std::string& doc_path) {
  const HypothesisDoc doc = parse_hypothesis_doc(ctx.input(doc_path));
  const std::string hex = digest(doc);
  emit(ctx, {{"experiment_id", doc.experiment_id}, {"digest", hex}},
       hex + "\n");
  ctx.finish();
  return kExitOk;
}

int cmd_prereg_register(Ctx& ctx, const std::string& doc_path,
                        const std::string& ledger_flag) {
  const HypothesisDoc doc = parse_hypothesis_doc(ctx.input(doc_path));
  const std::filesystem::path ledger = ledger_path(ledger_flag);
  const PreregRecord record = register_hypothesis(doc, ledger);
  emit(ctx,
       {{"experiment_id", record.doc.experiment_id},
        {"digest", record.digest},
        {"index", record.ledger_index},
        {"timestamp_utc", record.timestamp_utc},
        {"ledger", ledger.string()}},
       "registered " + record.doc.experiment_id + " index=" +
           std::to_string(record.ledger_index) + " digest=" + record.digest +
           "\n");
  ctx.finish(ledger);
  return kExitOk;
}

int cmd_prereg_verify(Ctx& ctx, const std::string& doc_path,
                      const std::string& claimed, bool allow_legacy) {
  const HypothesisDoc doc = parse_hypothesis_doc(ctx.input(doc_path));
  const bool ok = verify(doc, claimed, allow_legacy);
  emit(ctx, {{"verified", ok}},
       std::string("verified: ") + (ok ? "true" : "false") + "\n");
  ctx.finish();
  return ok ? kExitOk : kExitDomain;
}

int cmd_extract_cochange(Ctx& ctx, const std::string& log_path,
                         const std::string& map_path,
                         std::size_t bulk_threshold, const std::string& name,
                         const std::optional<std::filesystem::path>& output) {
  const std::vector<CommitRecord> commits =
      parse_git_log(ctx.input(log_path));
  const ModuleMap map = parse_module_map(ctx.input(map_path));
  Layer layer = build_cochange_layer(commits, map, bulk_threshold);
  std::fprintf(stderr, "%zu commits -> %zu co-change edges\n", commits.size(),
               layer.edges.size());
  const MultilayerGraph graph = assemble_graph(name, {std::move(layer)});
  emit_document(ctx, output, serialize_graph(graph));
  return kExitOk;
}

int cmd_extract_imports(Ctx& ctx, const std::vector<std::string>& sources,
                        const std::string& map_path,
                        const std::string& patterns_path,
                        const std::string& name,
                        const std::optional<std::filesystem::path>& output) {
  const ModuleMap map = parse_module_map(ctx.input(map_path));
  const ImportPatternSet patterns =
      parse_import_patterns(ctx.input(patterns_path));
  std::map<std::string, std::string> contents;
  for (const std::string& path : sources) {
    contents[path] = ctx.input(path);
  }
  Layer layer = scan_imports(contents, patterns, map);
  std::fprintf(stderr, "%zu files -> %zu import edges\n", contents.size(),
               layer.edges.size());
  const MultilayerGraph graph = assemble_graph(name, {std::move(layer)});
  emit_document(ctx, output, serialize_graph(graph));
  return kExitOk;
}

int cmd_extract_coupling(Ctx& ctx, const std::string& graph_path,
                         const std::string& imports_layer,
                         const std::string& name,
                         const std::optional<std::filesystem::path>& output) {
  const MultilayerGraph imports_graph = parse_graph(ctx.input(graph_path));
  Layer layer =
      build_structural_coupling(imports_graph.layer(imports_layer));
  std::fprintf(stderr, "%zu coupling edges\n", layer.edges.size());
  const MultilayerGraph graph = assemble_graph(name, {std::move(layer)});
  emit_document(ctx, output, serialize_graph(graph));
  return kExitOk;
}

int cmd_control(Ctx& ctx, std::size_t n_nodes, std::size_t n_layers,
                double edge_prob, std::uint64_t seed,
                const std::optional<std::filesystem::path>& output) {
  const MultilayerGraph graph =
      generate_random_control(n_nodes, n_layers, edge_prob, seed);
  emit_document(ctx, output, serialize_graph(graph));
  return kExitOk;
}

int cmd_binom(Ctx& ctx, int k, int n, bool below) {
  const BinomialTail tail = below ? binom_tail_below(k, n) : binom_tail(k, n);
  char human[160];
  std::snprintf(human, sizeof human, "%s \xE2\x89\x88 %.4f\n",
                tail.fraction_string().c_str(), tail.p_float);
  emit(ctx,
       {{"k", tail.k},
        {"n", tail.n},
        {"tail", below ? "below" : "at_or_above"},
        {"numerator", tail.numerator.to_decimal()},
        {"denominator", tail.denominator.to_decimal()},
        {"p", tail.p_float}},
       human);
  ctx.finish();
  return kExitOk;
}

int cmd_roles(Ctx& ctx, const std::string& graph_a_path,
              const std::string& graph_b_path,
              const std::string& alignment_path, bool identity) {
  const MultilayerGraph a = parse_graph(ctx.input(graph_a_path));
  const MultilayerGraph b = parse_graph(ctx.input(graph_b_path));
  const Alignment alignment = identity
                                  ? identity_alignment(a)
                                  : parse_alignment(ctx.input(alignment_path));
  const std::vector<ModuleSimilarity> rows = compare_graphs(a, b, alignment);
  if (ctx.json_out) {
    std::fputs(serialize_comparison(rows).c_str(), stdout);
  } else {
    std::fputs(format_comparison_table(rows).c_str(), stdout);
  }
  ctx.finish();
  return kExitOk;
}

int cmd_replay_table(Ctx& ctx) {
  const std::vector<ReplayResult> results = replay_table(canonical_rows());
  json rows = json::array();
  std::string human;
  std::size_t width = 0;
  for (const ReplayResult& row : results) {
    width = std::max(width, row.domain.size());
  }
  for (const ReplayResult& row : results) {
    rows.push_back({{"domain", row.domain},
                    {"delta_r", row.delta_r},
                    {"verdict", std::string(verdict_name(row.verdict))}});
    char line[160];
    std::snprintf(line, sizeof line, "%-*s  %+.3f  %s\n", (int)width,
                  row.domain.c_str(), row.delta_r,
                  std::string(verdict_name(row.verdict)).c_str());
    human += line;
  }
  emit(ctx, {{"rows", rows}}, human);
  ctx.finish();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Multilayer hub-persistence analysis: correlations, permutation "
      "tests, pre-registration ledger, layer extraction, role transfer."};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Ctx ctx;
  app.add_flag("--json", ctx.json_out, "Machine-readable stdout");
  app.add_flag("--manifest", ctx.manifest,
               "Write a run manifest next to the output");

  // validate
  auto* validate_cmd =
      app.add_subcommand("validate", "List a graph document's violations");
  std::string validate_graph;
  validate_cmd->add_option("graph", validate_graph, "Graph document")
      ->required();

  // hubs
  auto* hubs_cmd = app.add_subcommand("hubs", "Print one layer's hub vector");
  std::string hubs_graph, hubs_layer;
  bool hubs_weights = false;
  hubs_cmd->add_option("graph", hubs_graph, "Graph document")->required();
  hubs_cmd->add_option("--layer", hubs_layer, "Layer name")->required();
  hubs_cmd->add_flag("--weights", hubs_weights, "Weighted degree");

  // persist
  auto* persist_cmd = app.add_subcommand(
      "persist", "Hub persistence between two layers (r, rho, p-values)");
  std::string persist_graph, persist_a, persist_b, persist_rule = "ge";
  std::uint64_t persist_perms = 200, persist_seed = 42;
  bool persist_weights = false;
  persist_cmd->add_option("graph", persist_graph, "Graph document")
      ->required();
  persist_cmd->add_option("layer_a", persist_a, "First layer")->required();
  persist_cmd->add_option("layer_b", persist_b, "Second layer")->required();
  persist_cmd->add_option("--permutations", persist_perms,
                          "Permutation count (0 disables)");
  persist_cmd->add_option("--seed", persist_seed, "Permutation seed");
  persist_cmd->add_flag("--weights", persist_weights, "Weighted degree");
  persist_cmd->add_option("--counting-rule", persist_rule,
                          "ge (default) or gt");

  // experiment
  auto* experiment_cmd = app.add_subcommand(
      "experiment", "Run a pre-registered layer-pair comparison");
  std::string experiment_graph, experiment_config;
  std::string experiment_output, experiment_criterion;
  std::uint64_t experiment_perms = 0, experiment_seed = 0;
  experiment_cmd->add_option("graph", experiment_graph, "Graph document")
      ->required();
  experiment_cmd->add_option("config", experiment_config, "Experiment config")
      ->required();
  experiment_cmd->add_option("-o,--output", experiment_output,
                             "Write the report here instead of stdout");
  auto* perms_opt = experiment_cmd->add_option(
      "--permutations", experiment_perms, "Override config permutations");
  auto* seed_opt = experiment_cmd->add_option("--seed", experiment_seed,
                                              "Override config seed");
  auto* criterion_opt = experiment_cmd->add_option(
      "--criterion", experiment_criterion,
      "Override verdict criterion (legacy_directional | thresholded_v2)");

  // prereg
  auto* prereg_cmd =
      app.add_subcommand("prereg", "Hypothesis pre-registration ledger");
  prereg_cmd->require_subcommand(1);
  auto* hash_cmd =
      prereg_cmd->add_subcommand("hash", "Canonical digest of a document");
  std::string hash_doc;
  hash_cmd->add_option("doc", hash_doc, "Hypothesis document")->required();
  auto* register_cmd =
      prereg_cmd->add_subcommand("register", "Append a document to the ledger");
  std::string register_doc, register_ledger;
  register_cmd->add_option("doc", register_doc, "Hypothesis document")
      ->required();
  register_cmd->add_option("--ledger", register_ledger,
                           "Ledger path (default $PROXLAW_LEDGER or "
                           "prereg_ledger.jsonl)");
  auto* verify_cmd =
      prereg_cmd->add_subcommand("verify", "Check a claimed digest");
  std::string verify_doc, verify_digest;
  bool verify_legacy = false;
  verify_cmd->add_option("doc", verify_doc, "Hypothesis document")->required();
  verify_cmd->add_option("digest", verify_digest, "Claimed digest")
      ->required();
  verify_cmd->add_flag("--allow-legacy", verify_legacy,
                       "Accept 16-hex truncated digests");

  // extract
  auto* extract_cmd =
      app.add_subcommand("extract", "Build layers from repository history");
  extract_cmd->require_subcommand(1);
  auto* cochange_cmd = extract_cmd->add_subcommand(
      "cochange", "Co-change layer from a git log capture");
  std::string cochange_log, cochange_map, cochange_name = "cochange";
  std::string cochange_output;
  std::size_t cochange_bulk = 30;
  cochange_cmd->add_option("log", cochange_log, "git log capture")
      ->required();
  cochange_cmd->add_option("--module-map", cochange_map, "Module map JSON")
      ->required();
  cochange_cmd->add_option("--bulk-threshold", cochange_bulk,
                           "Skip commits touching more modules than this");
  cochange_cmd->add_option("--name", cochange_name, "Output graph name");
  cochange_cmd->add_option("-o,--output", cochange_output, "Output path");
  auto* imports_cmd = extract_cmd->add_subcommand(
      "imports", "Imports layer from source files");
  std::vector<std::string> imports_sources;
  std::string imports_map, imports_patterns, imports_name = "imports";
  std::string imports_output;
  imports_cmd->add_option("sources", imports_sources, "Source files")
      ->required();
  imports_cmd->add_option("--module-map", imports_map, "Module map JSON")
      ->required();
  imports_cmd->add_option("--patterns", imports_patterns,
                          "Import pattern set JSON")
      ->required();
  imports_cmd->add_option("--name", imports_name, "Output graph name");
  imports_cmd->add_option("-o,--output", imports_output, "Output path");
  auto* coupling_cmd = extract_cmd->add_subcommand(
      "coupling", "Structural-coupling layer from an imports layer");
  std::string coupling_graph, coupling_layer = "imports";
  std::string coupling_name = "coupling", coupling_output;
  coupling_cmd->add_option("graph", coupling_graph, "Graph with imports layer")
      ->required();
  coupling_cmd->add_option("--layer", coupling_layer,
                           "Imports layer name (default: imports)");
  coupling_cmd->add_option("--name", coupling_name, "Output graph name");
  coupling_cmd->add_option("-o,--output", coupling_output, "Output path");

  // control
  auto* control_cmd = app.add_subcommand(
      "control", "Seeded random multilayer graph (negative control)");
  std::size_t control_nodes = 0, control_layers = 0;
  double control_prob = 0.0;
  std::uint64_t control_seed = 42;
  std::string control_output;
  control_cmd->add_option("n_nodes", control_nodes, "Node count")->required();
  control_cmd->add_option("n_layers", control_layers, "Layer count")
      ->required();
  control_cmd->add_option("edge_prob", control_prob, "Edge probability")
      ->required();
  control_cmd->add_option("--seed", control_seed, "Generator seed");
  control_cmd->add_option("-o,--output", control_output, "Output path");

  // binom
  auto* binom_cmd =
      app.add_subcommand("binom", "Exact fair-coin tail probability");
  int binom_k = 0, binom_n = 0;
  bool binom_below = false;
  binom_cmd->add_option("k", binom_k, "Threshold")->required();
  binom_cmd->add_option("n", binom_n, "Trials")->required();
  binom_cmd->add_flag("--below", binom_below, "P(X < k) instead of P(X >= k)");

  // roles
  auto* roles_cmd = app.add_subcommand(
      "roles", "Cross-graph structural role comparison");
  std::string roles_a, roles_b, roles_alignment;
  bool roles_identity = false;
  roles_cmd->add_option("graph_a", roles_a, "First graph")->required();
  roles_cmd->add_option("graph_b", roles_b, "Second graph")->required();
  auto* alignment_opt =
      roles_cmd->add_option("alignment", roles_alignment, "Alignment JSON");
  roles_cmd->add_flag("--identity", roles_identity,
                      "Use graph_a's identity alignment")
      ->excludes(alignment_opt);

  // replay-table
  auto* replay_cmd = app.add_subcommand(
      "replay-table", "Recompute the canonical evidence table");

  try {
    app.parse(argc, argv);

    if (*validate_cmd) {
      ctx.run.command = "validate";
      ctx.arg("graph", validate_graph);
      return cmd_validate(ctx, validate_graph);
    }
    if (*hubs_cmd) {
      ctx.run.command = "hubs";
      ctx.arg("graph", hubs_graph);
      ctx.arg("layer", hubs_layer);
      ctx.arg("weights", hubs_weights ? "true" : "false");
      return cmd_hubs(ctx, hubs_graph, hubs_layer, hubs_weights);
    }
    if (*persist_cmd) {
      ctx.run.command = "persist";
      ctx.arg("graph", persist_graph);
      ctx.arg("layer_a", persist_a);
      ctx.arg("layer_b", persist_b);
      ctx.arg("permutations", std::to_string(persist_perms));
      ctx.arg("seed", std::to_string(persist_seed));
      ctx.arg("weights", persist_weights ? "true" : "false");
      ctx.arg("counting_rule", persist_rule);
      return cmd_persist(ctx, persist_graph, persist_a, persist_b,
                         persist_perms, persist_seed, persist_weights,
                         persist_rule);
    }
    if (*experiment_cmd) {
      ctx.run.command = "experiment";
      ctx.arg("graph", experiment_graph);
      ctx.arg("config", experiment_config);
      std::optional<std::filesystem::path> out;
      if (!experiment_output.empty()) {
        out = experiment_output;
        ctx.arg("output", experiment_output);
      }
      std::optional<std::uint64_t> perms, seed;
      std::optional<std::string> criterion;
      if (perms_opt->count() > 0) {
        perms = experiment_perms;
        ctx.arg("permutations", std::to_string(experiment_perms));
      }
      if (seed_opt->count() > 0) {
        seed = experiment_seed;
        ctx.arg("seed", std::to_string(experiment_seed));
      }
      if (criterion_opt->count() > 0) {
        criterion = experiment_criterion;
        ctx.arg("criterion", experiment_criterion);
      }
      return cmd_experiment(ctx, experiment_graph, experiment_config, out,
                            perms, seed, criterion);
    }
    if (*hash_cmd) {
      ctx.run.command = "prereg hash";
      ctx.arg("doc", hash_doc);
      return cmd_prereg_hash(ctx, hash_doc);
    }
    if (*register_cmd) {
      ctx.run.command = "prereg register";
      ctx.arg("doc", register_doc);
      ctx.arg("ledger", ledger_path(register_ledger).string());
      return cmd_prereg_register(ctx, register_doc, register_ledger);
    }
    if (*verify_cmd) {
      ctx.run.command = "prereg verify";
      ctx.arg("doc", verify_doc);
      ctx.arg("digest", verify_digest);
      ctx.arg("allow_legacy", verify_legacy ? "true" : "false");
      return cmd_prereg_verify(ctx, verify_doc, verify_digest, verify_legacy);
    }
    if (*cochange_cmd) {
      ctx.run.command = "extract cochange";
      ctx.arg("log", cochange_log);
      ctx.arg("module_map", cochange_map);
      ctx.arg("bulk_threshold", std::to_string(cochange_bulk));
      ctx.arg("name", cochange_name);
      std::optional<std::filesystem::path> out;
      if (!cochange_output.empty()) {
        out = cochange_output;
        ctx.arg("output", cochange_output);
      }
      return cmd_extract_cochange(ctx, cochange_log, cochange_map,
                                  cochange_bulk, cochange_name, out);
    }
    if (*imports_cmd) {
      ctx.run.command = "extract imports";
      ctx.arg("module_map", imports_map);
      ctx.arg("patterns", imports_patterns);
      ctx.arg("name", imports_name);
      ctx.arg("sources", std::to_string(imports_sources.size()) + " files");
      std::optional<std::filesystem::path> out;
      if (!imports_output.empty()) {
        out = imports_output;
        ctx.arg("output", imports_output);
      }
      return cmd_extract_imports(ctx, imports_sources, imports_map,
                                 imports_patterns, imports_name, out);
    }
    if (*coupling_cmd) {
      ctx.run.command = "extract coupling";
      ctx.arg("graph", coupling_graph);
      ctx.arg("layer", coupling_layer);
      ctx.arg("name", coupling_name);
      std::optional<std::filesystem::path> out;
      if (!coupling_output.empty()) {
        out = coupling_output;
        ctx.arg("output", coupling_output);
      }
      return cmd_extract_coupling(ctx, coupling_graph, coupling_layer,
                                  coupling_name, out);
    }
    if (*control_cmd) {
      ctx.run.command = "control";
      ctx.arg("n_nodes", std::to_string(control_nodes));
      ctx.arg("n_layers", std::to_string(control_layers));
      ctx.arg("edge_prob", std::to_string(control_prob));
      ctx.arg("seed", std::to_string(control_seed));
      std::optional<std::filesystem::path> out;
      if (!control_output.empty()) {
        out = control_output;
        ctx.arg("output", control_output);
      }
      return cmd_control(ctx, control_nodes, control_layers, control_prob,
                         control_seed, out);
    }
    if (*binom_cmd) {
      ctx.run.command = "binom";
      ctx.arg("k", std::to_string(binom_k));
      ctx.arg("n", std::to_string(binom_n));
      ctx.arg("below", binom_below ? "true" : "false");
      return cmd_binom(ctx, binom_k, binom_n, binom_below);
    }
    if (*roles_cmd) {
      ctx.run.command = "roles";
      ctx.arg("graph_a", roles_a);
      ctx.arg("graph_b", roles_b);
      if (roles_identity) {
        ctx.arg("identity", "true");
      } else if (!roles_alignment.empty()) {
        ctx.arg("alignment", roles_alignment);
      } else {
        throw CLI::ValidationError(
            "roles needs an alignment file or --identity");
      }
      return cmd_roles(ctx, roles_a, roles_b, roles_alignment,
                       roles_identity);
    }
    if (*replay_cmd) {
      ctx.run.command = "replay-table";
      return cmd_replay_table(ctx);
    }
    return kExitIo;  // unreachable: require_subcommand(1)
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitIo;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == Errc::ledger_io ? kExitIo : kExitDomain;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitIo;
  }
}
