#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proxlaw/graph.hpp"

namespace proxlaw {

struct CommitRecord {
  std::string commit_id;
  std::int64_t timestamp = 0;  // Unix seconds
  std::vector<std::string> files;  // deduplicated, order preserved
};

// Input format: `git log --name-only --pretty=format:%H%x09%ct` — one
// tab-separated "<id>\t<unix-time>" header per commit followed by file
// paths, commits separated by blank lines. Commits without files are
// dropped. Structural problems raise malformed_log naming the line number.
std::vector<CommitRecord> parse_git_log(std::string_view text);

enum class ModuleMapDefault { ignore, basename };

// Ordered glob rules mapping repository paths to module names; first match
// wins. Globs: `*` matches within a path segment, `**` crosses segments,
// `?` matches one non-separator character. Paths matching no rule fall to
// the default: dropped, or module = filename minus its last extension.
struct ModuleMap {
  std::vector<std::pair<std::string, std::string>> rules;
  ModuleMapDefault fallback = ModuleMapDefault::basename;

  std::optional<std::string> resolve(std::string_view path) const;
};

bool glob_match(std::string_view pattern, std::string_view path);

ModuleMap parse_module_map(std::string_view json_text);

// Anchored line regexes (ECMAScript); capture group 1 is the imported
// target token.
struct ImportPatternSet {
  std::string language_label;
  std::vector<std::string> line_patterns;
};

ImportPatternSet parse_import_patterns(std::string_view json_text);

// Undirected weighted layer "co_change" (d3): pair weight = number of
// surviving commits whose module sets contain both. Commits touching more
// than bulk_threshold distinct modules are excluded.
Layer build_cochange_layer(std::span<const CommitRecord> commits,
                           const ModuleMap& map,
                           std::size_t bulk_threshold = 30);

// Directed unweighted layer "imports" (d1): edge src -> dst when a line in
// a file of module src matches a pattern whose token resolves to module
// dst. Tokens resolve against the module universe of `sources` (leading
// dots stripped; whole token first, then its last dot component).
// Intra-module and unresolvable targets are dropped.
Layer scan_imports(const std::map<std::string, std::string>& sources,
                   const ImportPatternSet& patterns, const ModuleMap& map);

// Undirected unweighted layer "structural_coupling" (d2): edge {a, b} iff
// the out-neighborhoods of a and b in the imports layer intersect.
// Requires a directed d1 input layer.
Layer build_structural_coupling(const Layer& imports);

// Wraps layers into a graph over the sorted union of their endpoints.
MultilayerGraph assemble_graph(std::string name, std::vector<Layer> layers);

}  // namespace proxlaw
