#include "proxlaw/graph.hpp"

#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "json_util.hpp"
#include "proxlaw/rng.hpp"

namespace proxlaw {

using detail::json;

std::string_view grammar_class_tag(GrammarClass gc) {
  switch (gc) {
    case GrammarClass::d1_declared: return "d1";
    case GrammarClass::d2_structural: return "d2";
    case GrammarClass::d3_behavioral: return "d3";
  }
  return "d1";
}

GrammarClass parse_grammar_class_tag(std::string_view tag) {
  if (tag == "d1") return GrammarClass::d1_declared;
  if (tag == "d2") return GrammarClass::d2_structural;
  if (tag == "d3") return GrammarClass::d3_behavioral;
  throw Error(Errc::schema_error, std::string(tag),
              "grammar_class must be \"d1\", \"d2\", \"d3\", or null");
}

std::optional<std::size_t> MultilayerGraph::node_index(
    std::string_view id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == id) return i;
  }
  return std::nullopt;
}

const Layer& MultilayerGraph::layer(std::string_view layer_name) const {
  for (const Layer& l : layers) {
    if (l.name == layer_name) return l;
  }
  throw Error(Errc::unknown_layer, std::string(layer_name),
              "no layer named \"" + std::string(layer_name) + "\"");
}

std::vector<Violation> validate(const MultilayerGraph& graph) {
  std::vector<Violation> out;
  const auto report = [&out](Errc code, std::string element,
                             std::string message) {
    out.push_back({code, std::move(element), std::move(message)});
  };

  if (graph.nodes.empty()) {
    report(Errc::schema_error, graph.name, "graph has no nodes");
  }

  std::unordered_set<std::string_view> node_ids;
  node_ids.reserve(graph.nodes.size());
  for (const Node& node : graph.nodes) {
    if (node.id.empty()) {
      report(Errc::schema_error, node.id, "node id is empty");
      continue;
    }
    if (!node_ids.insert(node.id).second) {
      report(Errc::duplicate_node, node.id,
             "node \"" + node.id + "\" appears more than once");
    }
    for (const auto& [attr, value] : node.attrs) {
      if (!std::isfinite(value)) {
        report(Errc::schema_error, node.id + "." + attr,
               "attribute \"" + attr + "\" of node \"" + node.id +
                   "\" is not finite");
      }
    }
  }

  std::unordered_set<std::string_view> layer_names;
  for (const Layer& layer : graph.layers) {
    if (layer.name.empty()) {
      report(Errc::schema_error, layer.name, "layer name is empty");
    } else if (!layer_names.insert(layer.name).second) {
      report(Errc::schema_error, layer.name,
             "layer \"" + layer.name + "\" appears more than once");
    }

    std::set<std::pair<std::string_view, std::string_view>> seen;
    for (const Edge& edge : layer.edges) {
      const std::string where =
          layer.name + ": " + edge.src + (layer.directed ? "->" : "--") +
          edge.dst;
      if (!node_ids.contains(edge.src)) {
        report(Errc::unknown_endpoint, edge.src,
               where + ": endpoint \"" + edge.src + "\" is not a node");
      }
      if (!node_ids.contains(edge.dst)) {
        report(Errc::unknown_endpoint, edge.dst,
               where + ": endpoint \"" + edge.dst + "\" is not a node");
      }
      if (edge.src == edge.dst) {
        report(Errc::self_loop, edge.src, where + ": self-loop");
      }
      if (!(edge.weight > 0.0) || !std::isfinite(edge.weight)) {
        report(Errc::bad_weight, where,
               where + ": weight must be finite and positive");
      } else if (!layer.weighted && edge.weight != 1.0) {
        report(Errc::bad_weight, where,
               where + ": unweighted layer carries weight != 1");
      }
      std::pair<std::string_view, std::string_view> key{edge.src, edge.dst};
      if (!layer.directed && key.second < key.first) {
        std::swap(key.first, key.second);
      }
      if (!seen.insert(key).second) {
        report(Errc::duplicate_edge, where, where + ": duplicate edge");
      }
    }
  }
  return out;
}

namespace {

Edge edge_from_json(const json& obj) {
  if (!obj.is_object()) {
    throw Error(Errc::schema_error, "edges", "edge must be an object");
  }
  Edge edge;
  edge.src = detail::require_string(obj, "src", "edge");
  edge.dst = detail::require_string(obj, "dst", "edge");
  if (const auto it = obj.find("weight"); it != obj.end()) {
    if (!it->is_number()) {
      throw Error(Errc::schema_error, "weight", "edge weight must be a number");
    }
    edge.weight = it->get<double>();
  } else {
    edge.weight = 1.0;
  }
  return edge;
}

}  // namespace

MultilayerGraph parse_graph_unchecked(std::string_view text) {
  const json doc = detail::parse_json(text, "graph document");
  if (!doc.is_object()) {
    throw Error(Errc::schema_error, "", "graph document must be an object");
  }
  for (const auto& [key, value] : doc.items()) {
    if (key != "name" && key != "nodes" && key != "layers") {
      throw Error(Errc::schema_error, key,
                  "unknown top-level key \"" + key + "\"");
    }
  }

  MultilayerGraph graph;
  graph.name = detail::require_string(doc, "name", "graph document");

  const json& nodes = detail::require_field(doc, "nodes", "graph document");
  if (!nodes.is_array()) {
    throw Error(Errc::schema_error, "nodes", "\"nodes\" must be an array");
  }
  for (const json& n : nodes) {
    if (!n.is_object()) {
      throw Error(Errc::schema_error, "nodes", "node must be an object");
    }
    Node node;
    node.id = detail::require_string(n, "id", "node");
    if (const auto it = n.find("attrs"); it != n.end()) {
      if (!it->is_object()) {
        throw Error(Errc::schema_error, "attrs",
                    "node \"" + node.id + "\": attrs must be an object");
      }
      for (const auto& [attr, value] : it->items()) {
        if (!value.is_number()) {
          throw Error(Errc::schema_error, node.id + "." + attr,
                      "node \"" + node.id + "\": attribute \"" + attr +
                          "\" must be a number");
        }
        node.attrs[attr] = value.get<double>();
      }
    }
    graph.nodes.push_back(std::move(node));
  }

  const json& layers = detail::require_field(doc, "layers", "graph document");
  if (!layers.is_array()) {
    throw Error(Errc::schema_error, "layers", "\"layers\" must be an array");
  }
  for (const json& l : layers) {
    if (!l.is_object()) {
      throw Error(Errc::schema_error, "layers", "layer must be an object");
    }
    Layer layer;
    layer.name = detail::require_string(l, "name", "layer");
    layer.directed = detail::require_bool(l, "directed", "layer");
    layer.weighted = detail::require_bool(l, "weighted", "layer");
    if (const auto it = l.find("grammar_class");
        it != l.end() && !it->is_null()) {
      if (!it->is_string()) {
        throw Error(Errc::schema_error, "grammar_class",
                    "layer \"" + layer.name +
                        "\": grammar_class must be a string or null");
      }
      layer.grammar_class = parse_grammar_class_tag(it->get<std::string>());
    }
    const json& edges = detail::require_field(l, "edges", "layer");
    if (!edges.is_array()) {
      throw Error(Errc::schema_error, "edges",
                  "layer \"" + layer.name + "\": edges must be an array");
    }
    for (const json& e : edges) {
      layer.edges.push_back(edge_from_json(e));
    }
    graph.layers.push_back(std::move(layer));
  }
  return graph;
}

MultilayerGraph parse_graph(std::string_view text) {
  MultilayerGraph graph = parse_graph_unchecked(text);
  const std::vector<Violation> violations = validate(graph);
  if (!violations.empty()) {
    const Violation& first = violations.front();
    throw Error(first.code, first.element, first.message);
  }
  return graph;
}

std::string serialize_graph(const MultilayerGraph& graph) {
  json doc;
  doc["name"] = graph.name;
  json nodes = json::array();
  for (const Node& node : graph.nodes) {
    json n;
    n["id"] = node.id;
    if (!node.attrs.empty()) {
      n["attrs"] = node.attrs;
    }
    nodes.push_back(std::move(n));
  }
  doc["nodes"] = std::move(nodes);
  json layers = json::array();
  for (const Layer& layer : graph.layers) {
    json l;
    l["name"] = layer.name;
    l["directed"] = layer.directed;
    l["weighted"] = layer.weighted;
    l["grammar_class"] =
        layer.grammar_class
            ? json(std::string(grammar_class_tag(*layer.grammar_class)))
            : json(nullptr);
    json edges = json::array();
    for (const Edge& edge : layer.edges) {
      json e;
      e["src"] = edge.src;
      e["dst"] = edge.dst;
      if (layer.weighted) {
        e["weight"] = edge.weight;
      }
      edges.push_back(std::move(e));
    }
    l["edges"] = std::move(edges);
    layers.push_back(std::move(l));
  }
  doc["layers"] = std::move(layers);
  return doc.dump(2) + "\n";
}

MultilayerGraph generate_random_control(std::size_t n_nodes,
                                        std::size_t n_layers, double edge_prob,
                                        std::uint64_t seed) {
  if (n_nodes < 2) {
    throw Error(Errc::bad_parameter, "n_nodes", "n_nodes must be at least 2");
  }
  if (n_layers < 1) {
    throw Error(Errc::bad_parameter, "n_layers",
                "n_layers must be at least 1");
  }
  if (!(edge_prob > 0.0) || !(edge_prob < 1.0)) {
    throw Error(Errc::bad_parameter, "edge_prob",
                "edge_prob must lie strictly between 0 and 1");
  }

  MultilayerGraph graph;
  graph.name = "control_" + std::to_string(n_nodes) + "_" +
               std::to_string(n_layers) + "_" + std::to_string(seed);
  graph.nodes.reserve(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    graph.nodes.push_back({"v" + std::to_string(i + 1), {}});
  }
  for (std::size_t l = 0; l < n_layers; ++l) {
    Layer layer;
    layer.name = "L" + std::to_string(l + 1);
    // Row-major scan over unordered pairs, one uniform draw per pair.
    Pcg32 rng(substream_seed(seed, l));
    for (std::size_t i = 0; i + 1 < n_nodes; ++i) {
      for (std::size_t j = i + 1; j < n_nodes; ++j) {
        if (rng.uniform01() < edge_prob) {
          layer.edges.push_back(
              {graph.nodes[i].id, graph.nodes[j].id, 1.0});
        }
      }
    }
    graph.layers.push_back(std::move(layer));
  }
  return graph;
}

}  // namespace proxlaw
