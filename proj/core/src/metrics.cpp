#include "proxlaw/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace proxlaw {
namespace {

// Neumaier-compensated accumulator; add order is the caller's contract.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) noexcept {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  double total() const noexcept { return sum + comp; }
};

double compensated_mean(std::span<const double> values) {
  CompensatedSum acc;
  for (const double v : values) acc.add(v);
  return acc.total() / static_cast<double>(values.size());
}

std::unordered_map<std::string_view, std::size_t> index_of(
    const MultilayerGraph& graph) {
  std::unordered_map<std::string_view, std::size_t> idx;
  idx.reserve(graph.nodes.size());
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    idx.emplace(graph.nodes[i].id, i);
  }
  return idx;
}

}  // namespace

HubVector degree_vector(const MultilayerGraph& graph,
                        std::string_view layer_name, bool use_weights) {
  const Layer& layer = graph.layer(layer_name);
  if (use_weights && !layer.weighted) {
    throw Error(Errc::weights_unavailable, layer.name,
                "layer \"" + layer.name + "\" is unweighted");
  }
  const auto idx = index_of(graph);
  HubVector hub;
  hub.layer_name = layer.name;
  hub.weighted = use_weights;
  hub.values.assign(graph.nodes.size(), 0.0);
  // Total degree both ways: undirected edges touch both endpoints, directed
  // edges contribute out at src plus in at dst.
  for (const Edge& edge : layer.edges) {
    const auto src = idx.find(edge.src);
    const auto dst = idx.find(edge.dst);
    if (src == idx.end() || dst == idx.end()) {
      throw Error(Errc::unknown_endpoint,
                  src == idx.end() ? edge.src : edge.dst,
                  "edge endpoint is not a node");
    }
    const double w = use_weights ? edge.weight : 1.0;
    hub.values[src->second] += w;
    hub.values[dst->second] += w;
  }
  return hub;
}

std::vector<double> rank_values(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share the average of ranks i+1..j+1.
    const double rank = static_cast<double>(i + j) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      ranks[order[k]] = rank;
    }
    i = j + 1;
  }
  return ranks;
}

RankVector rank_vector(const HubVector& h) { return {rank_values(h.values)}; }

CorrelationValue pearson(std::span<const double> a,
                         std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(Errc::length_mismatch, "",
                "vectors have lengths " + std::to_string(a.size()) + " and " +
                    std::to_string(b.size()));
  }
  if (a.size() < 2) {
    throw Error(Errc::degenerate_vector, "",
                "correlation needs at least 2 samples");
  }
  const double mean_a = compensated_mean(a);
  const double mean_b = compensated_mean(b);
  CompensatedSum s_ab, s_aa, s_bb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    s_ab.add(da * db);
    s_aa.add(da * da);
    s_bb.add(db * db);
  }
  const double saa = s_aa.total();
  const double sbb = s_bb.total();
  if (saa == 0.0 || sbb == 0.0) {
    throw Error(Errc::degenerate_vector, "",
                "zero variance: correlation undefined");
  }
  const double r = s_ab.total() / std::sqrt(saa * sbb);
  return {std::clamp(r, -1.0, 1.0), a.size()};
}

CorrelationValue pearson(const HubVector& a, const HubVector& b) {
  return pearson(std::span<const double>(a.values),
                 std::span<const double>(b.values));
}

CorrelationValue spearman(std::span<const double> a,
                          std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(Errc::length_mismatch, "",
                "vectors have lengths " + std::to_string(a.size()) + " and " +
                    std::to_string(b.size()));
  }
  const std::vector<double> ra = rank_values(a);
  const std::vector<double> rb = rank_values(b);
  return pearson(std::span<const double>(ra), std::span<const double>(rb));
}

CorrelationValue spearman(const HubVector& a, const HubVector& b) {
  return spearman(std::span<const double>(a.values),
                  std::span<const double>(b.values));
}

CorrelationValue attr_degree_correlation(const MultilayerGraph& graph,
                                         std::string_view layer_name,
                                         std::string_view attr_name) {
  std::vector<double> attr_values;
  attr_values.reserve(graph.nodes.size());
  for (const Node& node : graph.nodes) {
    const auto it = node.attrs.find(std::string(attr_name));
    if (it == node.attrs.end()) {
      throw Error(Errc::missing_attribute, node.id,
                  "node \"" + node.id + "\" lacks attribute \"" +
                      std::string(attr_name) + "\"");
    }
    attr_values.push_back(it->second);
  }
  const HubVector hub = degree_vector(graph, layer_name, false);
  return pearson(std::span<const double>(attr_values),
                 std::span<const double>(hub.values));
}

}  // namespace proxlaw
