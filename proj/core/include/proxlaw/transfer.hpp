#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proxlaw/graph.hpp"

namespace proxlaw {

// Per-layer hub percentiles of one module: 1 = top hub, 0 = bottom.
struct RoleVector {
  std::string module;
  std::vector<double> components;
};

// Hand-declared correspondence between two graphs.
struct Alignment {
  std::vector<std::pair<std::string, std::string>> layer_pairs;
  std::vector<std::pair<std::string, std::string>> module_pairs;
};

Alignment parse_alignment(std::string_view json_text);
std::string serialize_alignment(const Alignment& alignment);

// Pairs every layer and every module of `graph` with itself.
Alignment identity_alignment(const MultilayerGraph& graph);

// Component per layer: 1 - (rank_desc - 1) / (n - 1), where rank_desc is
// the module's average-tie rank by descending degree (weighted degree when
// the layer is weighted); 1 when n = 1. Size-independent, so graphs of
// different node counts are comparable.
RoleVector role_vector(const MultilayerGraph& graph, std::string_view module,
                       std::span<const std::string> layers);

// Cosine similarity in [0, 1]. Bitwise-identical vectors are exactly 1;
// two zero vectors are 1 (identical roles); one zero vector is 0.
double role_similarity(const RoleVector& a, const RoleVector& b);

struct ModuleSimilarity {
  std::string module_a;
  std::string module_b;
  double similarity = 0.0;
};

// One row per aligned module pair, sorted by descending similarity
// (stable: input order breaks ties).
std::vector<ModuleSimilarity> compare_graphs(const MultilayerGraph& a,
                                             const MultilayerGraph& b,
                                             const Alignment& alignment);

// True iff the module's average-tie rank by descending degree is at most
// max_rank. A two-way tie at the top has rank 1.5, which fails max_rank 1.
bool hub_identity_check(const MultilayerGraph& graph, std::string_view layer,
                        std::string_view module, std::size_t max_rank);

std::string serialize_comparison(std::span<const ModuleSimilarity> rows);
std::string format_comparison_table(std::span<const ModuleSimilarity> rows);

}  // namespace proxlaw
