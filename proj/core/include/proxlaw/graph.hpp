#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proxlaw/errors.hpp"

namespace proxlaw {

enum class GrammarClass { d1_declared, d2_structural, d3_behavioral };

std::string_view grammar_class_tag(GrammarClass gc);  // "d1" / "d2" / "d3"
GrammarClass parse_grammar_class_tag(std::string_view tag);

struct Node {
  std::string id;
  std::map<std::string, double> attrs;

  bool operator==(const Node&) const = default;
};

struct Edge {
  std::string src;
  std::string dst;
  double weight = 1.0;

  bool operator==(const Edge&) const = default;
};

struct Layer {
  std::string name;
  bool directed = false;
  bool weighted = false;
  std::optional<GrammarClass> grammar_class;
  std::vector<Edge> edges;

  bool operator==(const Layer&) const = default;
};

// Shared node set with named edge layers. Node list order is authoritative:
// every vector produced from a graph is indexed by it.
struct MultilayerGraph {
  std::string name;
  std::vector<Node> nodes;
  std::vector<Layer> layers;

  std::size_t node_count() const noexcept { return nodes.size(); }
  std::size_t layer_count() const noexcept { return layers.size(); }

  std::optional<std::size_t> node_index(std::string_view id) const;
  // Throws Errc::unknown_layer when absent.
  const Layer& layer(std::string_view layer_name) const;

  bool operator==(const MultilayerGraph&) const = default;
};

struct Violation {
  Errc code;
  std::string element;
  std::string message;
};

// Exhaustive, deterministic invariant check. Violations are data, not errors.
std::vector<Violation> validate(const MultilayerGraph& graph);

// Parses a graph document (see docs/formats.md for the schema) without
// running invariant validation. Malformed JSON, wrong types, or unknown
// top-level keys raise schema_error.
MultilayerGraph parse_graph_unchecked(std::string_view text);

// parse_graph_unchecked + validate; the first invariant violation is
// raised under its own code.
MultilayerGraph parse_graph(std::string_view text);
std::string serialize_graph(const MultilayerGraph& graph);

// Per-layer Erdos-Renyi null model: each unordered pair enters layer l with
// probability edge_prob, drawn from substream_seed(seed, l). Pure function of
// its arguments.
MultilayerGraph generate_random_control(std::size_t n_nodes,
                                        std::size_t n_layers, double edge_prob,
                                        std::uint64_t seed);

}  // namespace proxlaw
