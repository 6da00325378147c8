#include "proxlaw/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

#include "json_util.hpp"
#include "proxlaw/errors.hpp"
#include "proxlaw/metrics.hpp"

namespace proxlaw {

using detail::json;

namespace {

// Similarity at or above this counts as a structural match in reports.
constexpr double kMatchThreshold = 0.65;

std::vector<std::pair<std::string, std::string>> parse_pair_list(
    const json& doc, const char* key) {
  const json& field = detail::require_field(doc, key, "alignment");
  if (!field.is_array()) {
    throw Error(Errc::schema_error, key,
                std::string("\"") + key + "\" must be an array");
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (const json& entry : field) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
        !entry[1].is_string()) {
      throw Error(Errc::schema_error, key,
                  std::string("\"") + key +
                      "\" entries must be [string, string] pairs");
    }
    out.emplace_back(entry[0].get<std::string>(), entry[1].get<std::string>());
  }
  return out;
}

json pair_list_to_json(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  json out = json::array();
  for (const auto& [a, b] : pairs) {
    out.push_back(json::array({a, b}));
  }
  return out;
}

// Average-tie rank of one node by descending degree (1 = top hub).
double descending_rank(const MultilayerGraph& graph, std::string_view layer,
                       std::string_view module) {
  const Layer& l = graph.layer(layer);
  const HubVector degrees = degree_vector(graph, layer, l.weighted);
  const std::vector<double> ascending = rank_values(degrees.values);
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    if (graph.nodes[i].id == module) {
      const double n = static_cast<double>(ascending.size());
      return (n + 1.0) - ascending[i];
    }
  }
  throw Error(Errc::unknown_node, std::string(module),
              "node \"" + std::string(module) + "\" not in graph \"" +
                  graph.name + "\"");
}

void check_no_repeats(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    const char* what) {
  std::set<std::string> left;
  std::set<std::string> right;
  for (const auto& [a, b] : pairs) {
    if (!left.insert(a).second || !right.insert(b).second) {
      throw Error(Errc::duplicate_node, a,
                  std::string(what) + " repeated in alignment");
    }
  }
}

}  // namespace

Alignment parse_alignment(std::string_view json_text) {
  const json doc = detail::parse_json(json_text, "alignment");
  if (!doc.is_object()) {
    throw Error(Errc::schema_error, "", "alignment must be a JSON object");
  }
  Alignment alignment;
  alignment.layer_pairs = parse_pair_list(doc, "layer_pairs");
  alignment.module_pairs = parse_pair_list(doc, "module_pairs");
  return alignment;
}

std::string serialize_alignment(const Alignment& alignment) {
  json doc;
  doc["layer_pairs"] = pair_list_to_json(alignment.layer_pairs);
  doc["module_pairs"] = pair_list_to_json(alignment.module_pairs);
  return doc.dump(2) + "\n";
}

Alignment identity_alignment(const MultilayerGraph& graph) {
  Alignment alignment;
  for (const Layer& layer : graph.layers) {
    alignment.layer_pairs.emplace_back(layer.name, layer.name);
  }
  for (const Node& node : graph.nodes) {
    alignment.module_pairs.emplace_back(node.id, node.id);
  }
  return alignment;
}

RoleVector role_vector(const MultilayerGraph& graph, std::string_view module,
                       std::span<const std::string> layers) {
  RoleVector role;
  role.module = std::string(module);
  role.components.reserve(layers.size());
  for (const std::string& layer : layers) {
    const double rank_desc = descending_rank(graph, layer, module);
    const double n = static_cast<double>(graph.nodes.size());
    role.components.push_back(n == 1.0 ? 1.0
                                       : 1.0 - (rank_desc - 1.0) / (n - 1.0));
  }
  return role;
}

double role_similarity(const RoleVector& a, const RoleVector& b) {
  if (a.components.size() != b.components.size()) {
    throw Error(Errc::length_mismatch, a.module,
                "role vectors have different lengths");
  }
  if (a.components.empty()) {
    throw Error(Errc::bad_parameter, a.module, "role vectors are empty");
  }
  // Bitwise-identical vectors are exactly 1, so self-comparison never
  // depends on rounding.
  if (std::memcmp(a.components.data(), b.components.data(),
                  a.components.size() * sizeof(double)) == 0) {
    return 1.0;
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.components.size(); ++i) {
    dot += a.components[i] * b.components[i];
    na += a.components[i] * a.components[i];
    nb += b.components[i] * b.components[i];
  }
  if (na == 0.0 && nb == 0.0) return 1.0;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

std::vector<ModuleSimilarity> compare_graphs(const MultilayerGraph& a,
                                             const MultilayerGraph& b,
                                             const Alignment& alignment) {
  if (alignment.layer_pairs.empty()) {
    throw Error(Errc::bad_parameter, "layer_pairs",
                "alignment has no layer pairs");
  }
  check_no_repeats(alignment.module_pairs, "module");
  std::vector<std::string> layers_a;
  std::vector<std::string> layers_b;
  for (const auto& [la, lb] : alignment.layer_pairs) {
    layers_a.push_back(la);
    layers_b.push_back(lb);
  }
  std::vector<ModuleSimilarity> rows;
  rows.reserve(alignment.module_pairs.size());
  for (const auto& [ma, mb] : alignment.module_pairs) {
    const RoleVector ra = role_vector(a, ma, layers_a);
    const RoleVector rb = role_vector(b, mb, layers_b);
    rows.push_back({ma, mb, role_similarity(ra, rb)});
  }
  std::ranges::stable_sort(rows, [](const ModuleSimilarity& x,
                                    const ModuleSimilarity& y) {
    return x.similarity > y.similarity;
  });
  return rows;
}

bool hub_identity_check(const MultilayerGraph& graph, std::string_view layer,
                        std::string_view module, std::size_t max_rank) {
  return descending_rank(graph, layer, module) <=
         static_cast<double>(max_rank);
}

std::string serialize_comparison(std::span<const ModuleSimilarity> rows) {
  json doc;
  doc["match_threshold"] = kMatchThreshold;
  json out = json::array();
  for (const ModuleSimilarity& row : rows) {
    json entry;
    entry["module_a"] = row.module_a;
    entry["module_b"] = row.module_b;
    entry["similarity"] = row.similarity;
    entry["match"] = row.similarity >= kMatchThreshold;
    out.push_back(std::move(entry));
  }
  doc["rows"] = std::move(out);
  return doc.dump(2) + "\n";
}

std::string format_comparison_table(std::span<const ModuleSimilarity> rows) {
  std::size_t wa = std::strlen("module_a");
  std::size_t wb = std::strlen("module_b");
  for (const ModuleSimilarity& row : rows) {
    wa = std::max(wa, row.module_a.size());
    wb = std::max(wb, row.module_b.size());
  }
  std::string out;
  const auto pad = [](std::string_view text, std::size_t width) {
    std::string cell(text);
    cell.resize(width, ' ');
    return cell;
  };
  out += pad("module_a", wa) + "  " + pad("module_b", wb) +
         "  similarity  match\n";
  for (const ModuleSimilarity& row : rows) {
    char value[32];
    std::snprintf(value, sizeof value, "%.4f", row.similarity);
    out += pad(row.module_a, wa) + "  " + pad(row.module_b, wb) + "  " +
           pad(value, std::strlen("similarity")) + "  " +
           (row.similarity >= kMatchThreshold ? "yes" : "no") + "\n";
  }
  return out;
}

}  // namespace proxlaw
