#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proxlaw/graph.hpp"

namespace proxlaw {

// Per-node total degree of one layer, aligned to graph node order.
struct HubVector {
  std::string layer_name;
  std::vector<double> values;
  bool weighted = false;
};

// Average ranks, 1 = smallest value, ties averaged.
struct RankVector {
  std::vector<double> values;
};

struct CorrelationValue {
  double r = 0.0;
  std::size_t n = 0;
};

// Total degree: undirected edges add weight (or 1) to both endpoints;
// directed edges count in + out uniformly.
HubVector degree_vector(const MultilayerGraph& graph,
                        std::string_view layer_name, bool use_weights);

std::vector<double> rank_values(std::span<const double> values);
RankVector rank_vector(const HubVector& h);

// Product-moment coefficient in fixed input order with compensated
// summation; result clamped to [-1, 1]. Zero variance on either side is
// degenerate_vector, never NaN.
CorrelationValue pearson(std::span<const double> a, std::span<const double> b);
CorrelationValue pearson(const HubVector& a, const HubVector& b);

// Defined as pearson(rank_values(a), rank_values(b)), bit for bit.
CorrelationValue spearman(std::span<const double> a,
                          std::span<const double> b);
CorrelationValue spearman(const HubVector& a, const HubVector& b);

// Pearson between a node attribute and the layer's unweighted hub vector.
CorrelationValue attr_degree_correlation(const MultilayerGraph& graph,
                                         std::string_view layer_name,
                                         std::string_view attr_name);

}  // namespace proxlaw
