#include "proxlaw/extract.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <set>
#include <unordered_set>

#include "json_util.hpp"

namespace proxlaw {

using detail::json;

namespace {

bool glob_match_impl(const char* p, const char* pe, const char* s,
                     const char* se) {
  while (p < pe) {
    if (*p == '*') {
      bool crossing = false;
      const char* pn = p + 1;
      while (pn < pe && *pn == '*') {
        crossing = true;
        ++pn;
      }
      if (crossing) {
        for (const char* t = s;; ++t) {
          if (glob_match_impl(pn, pe, t, se)) return true;
          // Let "a/**/b" cover the zero-segment case "a/b".
          if (pn < pe && *pn == '/' && glob_match_impl(pn + 1, pe, t, se)) {
            return true;
          }
          if (t == se) break;
        }
        return false;
      }
      for (const char* t = s;; ++t) {
        if (glob_match_impl(pn, pe, t, se)) return true;
        if (t == se || *t == '/') break;
      }
      return false;
    }
    if (s == se) return false;
    if (*p == '?') {
      if (*s == '/') return false;
    } else if (*p != *s) {
      return false;
    }
    ++p;
    ++s;
  }
  return s == se;
}

bool all_digits(std::string_view text) {
  if (text.empty()) return false;
  for (const char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string_view strip_carriage_return(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

bool glob_match(std::string_view pattern, std::string_view path) {
  return glob_match_impl(pattern.data(), pattern.data() + pattern.size(),
                         path.data(), path.data() + path.size());
}

std::optional<std::string> ModuleMap::resolve(std::string_view path) const {
  for (const auto& [pattern, module] : rules) {
    if (glob_match(pattern, path)) return module;
  }
  if (fallback == ModuleMapDefault::ignore) return std::nullopt;
  // basename: filename minus its last extension
  const std::size_t slash = path.find_last_of('/');
  std::string_view base =
      slash == std::string_view::npos ? path : path.substr(slash + 1);
  const std::size_t dot = base.find_last_of('.');
  if (dot != std::string_view::npos && dot > 0) base = base.substr(0, dot);
  if (base.empty()) return std::nullopt;
  return std::string(base);
}

ModuleMap parse_module_map(std::string_view json_text) {
  const json doc = detail::parse_json(json_text, "module map");
  if (!doc.is_object()) {
    throw Error(Errc::schema_error, "", "module map must be a JSON object");
  }
  ModuleMap map;
  if (const auto it = doc.find("rules"); it != doc.end()) {
    if (!it->is_array()) {
      throw Error(Errc::schema_error, "rules", "\"rules\" must be an array");
    }
    for (const json& rule : *it) {
      if (!rule.is_object()) {
        throw Error(Errc::schema_error, "rules", "rule must be an object");
      }
      map.rules.emplace_back(
          detail::require_string(rule, "pattern", "module map rule"),
          detail::require_string(rule, "module", "module map rule"));
    }
  }
  if (const auto it = doc.find("default"); it != doc.end()) {
    const std::string d = it->get<std::string>();
    if (d == "ignore") {
      map.fallback = ModuleMapDefault::ignore;
    } else if (d == "basename") {
      map.fallback = ModuleMapDefault::basename;
    } else {
      throw Error(Errc::schema_error, "default",
                  "default must be \"ignore\" or \"basename\"");
    }
  }
  return map;
}

ImportPatternSet parse_import_patterns(std::string_view json_text) {
  const json doc = detail::parse_json(json_text, "import patterns");
  if (!doc.is_object()) {
    throw Error(Errc::schema_error, "",
                "import patterns must be a JSON object");
  }
  ImportPatternSet out;
  out.language_label =
      detail::require_string(doc, "language_label", "import patterns");
  const json& patterns =
      detail::require_field(doc, "line_patterns", "import patterns");
  if (!patterns.is_array() || patterns.empty()) {
    throw Error(Errc::schema_error, "line_patterns",
                "line_patterns must be a non-empty array");
  }
  for (const json& p : patterns) {
    if (!p.is_string()) {
      throw Error(Errc::schema_error, "line_patterns",
                  "patterns must be strings");
    }
    out.line_patterns.push_back(p.get<std::string>());
  }
  return out;
}

std::vector<CommitRecord> parse_git_log(std::string_view text) {
  std::vector<CommitRecord> out;
  std::optional<CommitRecord> current;
  std::unordered_set<std::string> seen_ids;

  const auto finalize = [&] {
    if (current && !current->files.empty()) {
      out.push_back(std::move(*current));
    }
    current.reset();
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line =
        strip_carriage_return(text.substr(pos, eol - pos));
    const bool last = eol == text.size();
    pos = eol + 1;
    ++line_no;

    if (line.empty()) {
      finalize();
      if (last) break;
      continue;
    }

    const std::size_t tab = line.find('\t');
    bool is_header = false;
    if (tab != std::string_view::npos) {
      const std::string_view id = line.substr(0, tab);
      const std::string_view ts = line.substr(tab + 1);
      is_header = !id.empty() && all_digits(ts);
    }
    if (is_header) {
      finalize();
      std::string id(line.substr(0, tab));
      if (!seen_ids.insert(id).second) {
        throw Error(Errc::malformed_log, std::to_string(line_no),
                    "line " + std::to_string(line_no) +
                        ": duplicate commit id \"" + id + "\"");
      }
      CommitRecord record;
      record.commit_id = std::move(id);
      record.timestamp = std::stoll(std::string(line.substr(tab + 1)));
      current = std::move(record);
    } else if (current) {
      std::string file(line);
      if (std::find(current->files.begin(), current->files.end(), file) ==
          current->files.end()) {
        current->files.push_back(std::move(file));
      }
    } else {
      throw Error(Errc::malformed_log, std::to_string(line_no),
                  "line " + std::to_string(line_no) +
                      ": file entry before any commit header");
    }
    if (last) break;
  }
  finalize();
  return out;
}

Layer build_cochange_layer(std::span<const CommitRecord> commits,
                           const ModuleMap& map, std::size_t bulk_threshold) {
  std::map<std::pair<std::string, std::string>, std::uint64_t> counts;
  for (const CommitRecord& commit : commits) {
    std::set<std::string> modules;
    for (const std::string& file : commit.files) {
      if (auto module = map.resolve(file)) {
        modules.insert(std::move(*module));
      }
    }
    if (modules.size() > bulk_threshold) continue;  // bulk commit excluded
    for (auto a = modules.begin(); a != modules.end(); ++a) {
      for (auto b = std::next(a); b != modules.end(); ++b) {
        counts[{*a, *b}] += 1;
      }
    }
  }
  Layer layer;
  layer.name = "co_change";
  layer.directed = false;
  layer.weighted = true;
  layer.grammar_class = GrammarClass::d3_behavioral;
  for (const auto& [pair, count] : counts) {
    layer.edges.push_back(
        {pair.first, pair.second, static_cast<double>(count)});
  }
  return layer;
}

Layer scan_imports(const std::map<std::string, std::string>& sources,
                   const ImportPatternSet& patterns, const ModuleMap& map) {
  std::vector<std::regex> compiled;
  compiled.reserve(patterns.line_patterns.size());
  for (const std::string& pattern : patterns.line_patterns) {
    try {
      compiled.emplace_back(pattern);
    } catch (const std::regex_error& e) {
      throw Error(Errc::schema_error, pattern,
                  "invalid import pattern: " + std::string(e.what()));
    }
  }

  std::set<std::string> universe;
  for (const auto& [path, text] : sources) {
    if (auto module = map.resolve(path)) universe.insert(std::move(*module));
  }

  const auto resolve_token =
      [&universe](std::string token) -> std::optional<std::string> {
    std::size_t start = 0;
    while (start < token.size() && token[start] == '.') ++start;
    token.erase(0, start);
    if (token.empty()) return std::nullopt;
    if (universe.contains(token)) return token;
    const std::size_t dot = token.find_last_of('.');
    if (dot != std::string::npos) {
      std::string last = token.substr(dot + 1);
      if (universe.contains(last)) return last;
    }
    return std::nullopt;
  };

  std::set<std::pair<std::string, std::string>> edges;
  for (const auto& [path, text] : sources) {
    const auto src = map.resolve(path);
    if (!src) continue;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t eol = text.find('\n', pos);
      if (eol == std::string::npos) eol = text.size();
      const std::string line(
          strip_carriage_return(std::string_view(text).substr(pos, eol - pos)));
      const bool last_line = eol == text.size();
      pos = eol + 1;
      std::smatch match;
      for (const std::regex& re : compiled) {
        if (std::regex_match(line, match, re) && match.size() >= 2 &&
            match[1].matched) {
          if (auto dst = resolve_token(match[1].str());
              dst && *dst != *src) {
            edges.insert({*src, *dst});
          }
          break;  // first matching pattern wins for the line
        }
      }
      if (last_line) break;
    }
  }

  Layer layer;
  layer.name = "imports";
  layer.directed = true;
  layer.weighted = false;
  layer.grammar_class = GrammarClass::d1_declared;
  for (const auto& [src, dst] : edges) {
    layer.edges.push_back({src, dst, 1.0});
  }
  return layer;
}

Layer build_structural_coupling(const Layer& imports) {
  if (!imports.directed ||
      imports.grammar_class != GrammarClass::d1_declared) {
    throw Error(Errc::bad_layer_kind, imports.name,
                "structural coupling needs a directed d1 imports layer");
  }
  std::map<std::string, std::set<std::string>> out_neighbors;
  for (const Edge& edge : imports.edges) {
    out_neighbors[edge.src].insert(edge.dst);
  }
  Layer layer;
  layer.name = "structural_coupling";
  layer.directed = false;
  layer.weighted = false;
  layer.grammar_class = GrammarClass::d2_structural;
  for (auto a = out_neighbors.begin(); a != out_neighbors.end(); ++a) {
    for (auto b = std::next(a); b != out_neighbors.end(); ++b) {
      const auto& sa = a->second;
      const auto& sb = b->second;
      const bool share = std::ranges::any_of(
          sa, [&sb](const std::string& target) { return sb.contains(target); });
      if (share) {
        layer.edges.push_back({a->first, b->first, 1.0});
      }
    }
  }
  return layer;
}

MultilayerGraph assemble_graph(std::string name, std::vector<Layer> layers) {
  std::set<std::string> ids;
  for (const Layer& layer : layers) {
    for (const Edge& edge : layer.edges) {
      ids.insert(edge.src);
      ids.insert(edge.dst);
    }
  }
  MultilayerGraph graph;
  graph.name = std::move(name);
  for (const std::string& id : ids) {
    graph.nodes.push_back({id, {}});
  }
  graph.layers = std::move(layers);
  return graph;
}

}  // namespace proxlaw
