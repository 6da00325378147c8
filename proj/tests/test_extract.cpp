#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "proxlaw/errors.hpp"
#include "proxlaw/extract.hpp"
#include "proxlaw/graph.hpp"
#include "proxlaw/rng.hpp"

using namespace proxlaw;

namespace {

const ModuleMap kBasenameMap{{}, ModuleMapDefault::basename};

Edge find_edge(const Layer& layer, std::string_view a, std::string_view b) {
  for (const Edge& e : layer.edges) {
    if ((e.src == a && e.dst == b) || (!layer.directed && e.src == b &&
                                       e.dst == a)) {
      return e;
    }
  }
  FAIL("edge not found: " << std::string(a) << " -- " << std::string(b));
  return {};
}

bool has_edge(const Layer& layer, std::string_view a, std::string_view b) {
  for (const Edge& e : layer.edges) {
    if ((e.src == a && e.dst == b) || (!layer.directed && e.src == b &&
                                       e.dst == a)) {
      return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("git log parsing: headers, files, blank separators") {
  const std::vector<CommitRecord> commits = parse_git_log(
      "c1\t100\n"
      "src/a.py\n"
      "src/b.py\n"
      "\n"
      "c2\t200\n"
      "src/a.py\n");
  REQUIRE(commits.size() == 2);
  CHECK(commits[0].commit_id == "c1");
  CHECK(commits[0].timestamp == 100);
  CHECK(commits[0].files == std::vector<std::string>{"src/a.py", "src/b.py"});
  CHECK(commits[1].commit_id == "c2");
  CHECK(commits[1].timestamp == 200);
}

TEST_CASE("git log parsing tolerates CRLF and repeated files") {
  const std::vector<CommitRecord> commits = parse_git_log(
      "c1\t100\r\n"
      "a.py\r\n"
      "b.py\r\n"
      "a.py\r\n");
  REQUIRE(commits.size() == 1);
  // Duplicates collapse, first occurrence order kept.
  CHECK(commits[0].files == std::vector<std::string>{"a.py", "b.py"});
}

TEST_CASE("commits without files are dropped") {
  const std::vector<CommitRecord> commits = parse_git_log(
      "c1\t100\n"
      "\n"
      "c2\t200\n"
      "a.py\n");
  REQUIRE(commits.size() == 1);
  CHECK(commits[0].commit_id == "c2");
  CHECK(parse_git_log("").empty());
  CHECK(parse_git_log("\n\n").empty());
}

TEST_CASE("malformed logs name the offending line") {
  // File path before any header.
  try {
    parse_git_log("src/a.py\n");
    FAIL("expected malformed_log");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::malformed_log);
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
  // Duplicate commit id.
  try {
    parse_git_log("c1\t100\na.py\n\nc1\t300\nb.py\n");
    FAIL("expected malformed_log");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::malformed_log);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    CHECK(std::string(e.what()).find("duplicate commit id") !=
          std::string::npos);
  }
}

TEST_CASE("glob semantics") {
  // `*` stays inside one segment.
  CHECK(glob_match("src/*.py", "src/a.py"));
  CHECK(!glob_match("src/*.py", "src/sub/a.py"));
  CHECK(glob_match("*.py", "a.py"));
  CHECK(!glob_match("*.py", "dir/a.py"));
  // `**` crosses segments, including zero of them.
  CHECK(glob_match("src/**/*.py", "src/sub/deep/a.py"));
  CHECK(glob_match("src/**/*.py", "src/a.py"));
  CHECK(glob_match("**/test_*.py", "tests/unit/test_io.py"));
  CHECK(glob_match("**/test_*.py", "test_io.py"));
  CHECK(glob_match("src/**", "src/anything/at/all.c"));
  // `?` matches exactly one non-separator character.
  CHECK(glob_match("a?.py", "ab.py"));
  CHECK(!glob_match("a?.py", "a/b.py"));
  CHECK(!glob_match("a?.py", "a.py"));
  // Literals must match exactly.
  CHECK(glob_match("README.md", "README.md"));
  CHECK(!glob_match("README.md", "readme.md"));
}

TEST_CASE("module map: first matching rule wins") {
  ModuleMap map;
  map.rules = {{"src/net/**", "net"},
               {"src/**", "core"},
               {"docs/**", "docs"}};
  map.fallback = ModuleMapDefault::ignore;
  CHECK(map.resolve("src/net/tcp.c") == "net");
  CHECK(map.resolve("src/main.c") == "core");
  CHECK(map.resolve("docs/guide.md") == "docs");
  CHECK(!map.resolve("Makefile").has_value());
}

TEST_CASE("module map basename fallback strips the last extension") {
  CHECK(kBasenameMap.resolve("src/alpha.py") == "alpha");
  CHECK(kBasenameMap.resolve("alpha.py") == "alpha");
  CHECK(kBasenameMap.resolve("a/b/archive.tar.gz") == "archive.tar");
  CHECK(kBasenameMap.resolve("noext") == "noext");
  // A leading dot is a hidden file, not an extension.
  CHECK(kBasenameMap.resolve("dir/.gitignore") == ".gitignore");
  CHECK(!kBasenameMap.resolve("dir/").has_value());
}

TEST_CASE("module map JSON parsing") {
  const ModuleMap map = parse_module_map(R"({
    "rules": [{"pattern": "src/**", "module": "core"}],
    "default": "ignore"
  })");
  CHECK(map.rules.size() == 1);
  CHECK(map.fallback == ModuleMapDefault::ignore);
  CHECK(map.resolve("src/x.c") == "core");
  CHECK(!map.resolve("y.c").has_value());

  // Rules are optional; default is required to be a known keyword.
  const ModuleMap plain = parse_module_map(R"({"default": "basename"})");
  CHECK(plain.rules.empty());
  CHECK_THROWS_AS(parse_module_map(R"({"default": "drop"})"), Error);
  CHECK_THROWS_AS(parse_module_map(R"({"rules": [{"pattern": "x"}],
                                       "default": "ignore"})"),
                  Error);
}

TEST_CASE("co-change weights count commits touching both modules") {
  const std::vector<CommitRecord> commits = parse_git_log(
      "c1\t100\nsrc/a.py\nsrc/b.py\n\n"
      "c2\t200\nsrc/a.py\nsrc/b.py\n\n"
      "c3\t300\nsrc/a.py\nsrc/c.py\n\n"
      "c4\t400\nsrc/c.py\n");
  const Layer layer = build_cochange_layer(commits, kBasenameMap);
  CHECK(layer.name == "co_change");
  CHECK(!layer.directed);
  CHECK(layer.weighted);
  CHECK(layer.grammar_class == GrammarClass::d3_behavioral);
  REQUIRE(layer.edges.size() == 2);
  CHECK(find_edge(layer, "a", "b").weight == 2.0);
  CHECK(find_edge(layer, "a", "c").weight == 1.0);
}

TEST_CASE("files mapping to one module never self-pair") {
  const std::vector<CommitRecord> commits = parse_git_log(
      "c1\t100\nsrc/a.py\nlib/a.py\n");
  // Both resolve to module "a" under basename fallback: no pair.
  CHECK(build_cochange_layer(commits, kBasenameMap).edges.empty());
}

TEST_CASE("bulk commits are excluded from co-change") {
  std::string log = "c1\t100\n";
  for (int i = 0; i < 31; ++i) {
    log += "m" + std::to_string(i) + ".py\n";
  }
  log += "\nc2\t200\nm0.py\nm1.py\n";
  const std::vector<CommitRecord> commits = parse_git_log(log);

  // Default threshold 30: the 31-module commit is dropped.
  const Layer layer = build_cochange_layer(commits, kBasenameMap);
  REQUIRE(layer.edges.size() == 1);
  CHECK(find_edge(layer, "m0", "m1").weight == 1.0);

  // Raising the threshold admits it: 31 choose 2 pairs plus nothing new.
  const Layer wide = build_cochange_layer(commits, kBasenameMap, 31);
  CHECK(wide.edges.size() == 31 * 30 / 2);
  CHECK(find_edge(wide, "m0", "m1").weight == 2.0);
}

TEST_CASE("ignored files leave no co-change trace") {
  ModuleMap map;
  map.rules = {{"src/**", "core"}};
  map.fallback = ModuleMapDefault::ignore;
  const std::vector<CommitRecord> commits = parse_git_log(
      "c1\t100\nsrc/a.c\nREADME.md\n");
  CHECK(build_cochange_layer(commits, map).edges.empty());
}

TEST_CASE("co-change matches brute-force pair counting on random logs") {
  Pcg32 rng(substream_seed(21, 0));
  for (int trial = 0; trial < 100; ++trial) {
    // Up to 50 commits over up to 10 modules.
    const std::uint32_t n_commits = 1 + rng.bounded(50);
    const std::uint32_t n_modules = 2 + rng.bounded(9);
    std::string log;
    std::vector<std::set<std::string>> module_sets;
    for (std::uint32_t c = 0; c < n_commits; ++c) {
      log += "c" + std::to_string(c) + "\t" + std::to_string(100 + c) + "\n";
      const std::uint32_t n_files = 1 + rng.bounded(6);
      std::set<std::string> modules;
      for (std::uint32_t f = 0; f < n_files; ++f) {
        const std::string m = "m" + std::to_string(rng.bounded(n_modules));
        modules.insert(m);
        log += m + ".py\n";
      }
      log += "\n";
      module_sets.push_back(std::move(modules));
    }

    // Oracle: count pairs straight from the module sets.
    std::map<std::pair<std::string, std::string>, double> expected;
    for (const std::set<std::string>& modules : module_sets) {
      if (modules.size() > 30) continue;
      for (auto i = modules.begin(); i != modules.end(); ++i) {
        for (auto j = std::next(i); j != modules.end(); ++j) {
          expected[{*i, *j}] += 1.0;
        }
      }
    }

    const Layer layer =
        build_cochange_layer(parse_git_log(log), kBasenameMap);
    REQUIRE(layer.edges.size() == expected.size());
    for (const Edge& e : layer.edges) {
      const auto key = e.src < e.dst ? std::pair{e.src, e.dst}
                                     : std::pair{e.dst, e.src};
      REQUIRE(expected.count(key) == 1);
      CHECK(e.weight == expected[key]);
    }
  }
}

TEST_CASE("import patterns JSON") {
  const ImportPatternSet patterns = parse_import_patterns(R"({
    "language_label": "python",
    "line_patterns": ["^import\\s+([A-Za-z_.]+)\\s*$",
                      "^from\\s+([A-Za-z_.]+)\\s+import\\b.*$"]
  })");
  CHECK(patterns.language_label == "python");
  CHECK(patterns.line_patterns.size() == 2);
  CHECK_THROWS_AS(parse_import_patterns(R"({"language_label": "x"})"), Error);
  CHECK_THROWS_AS(
      parse_import_patterns(R"({"language_label": "x", "line_patterns": []})"),
      Error);
}

TEST_CASE("import scanning builds a directed layer over modules") {
  const ImportPatternSet patterns = parse_import_patterns(R"({
    "language_label": "python",
    "line_patterns": ["^import\\s+([A-Za-z_.]+)\\s*$",
                      "^from\\s+([A-Za-z_.]+)\\s+import\\b.*$"]
  })");
  const std::map<std::string, std::string> sources{
      {"src/alpha.py", "import beta\nx = 1\n"},
      {"src/beta.py", "from gamma import thing\n"},
      {"src/gamma.py", "import alpha\nimport alpha\n"},  // dedup
  };
  const Layer layer = scan_imports(sources, patterns, kBasenameMap);
  CHECK(layer.name == "imports");
  CHECK(layer.directed);
  CHECK(!layer.weighted);
  CHECK(layer.grammar_class == GrammarClass::d1_declared);
  CHECK(layer.edges.size() == 3);
  CHECK(has_edge(layer, "alpha", "beta"));
  CHECK(has_edge(layer, "beta", "gamma"));
  CHECK(has_edge(layer, "gamma", "alpha"));
}

TEST_CASE("import token resolution: dots and unresolvables") {
  const ImportPatternSet patterns = parse_import_patterns(R"({
    "language_label": "python",
    "line_patterns": ["^import\\s+([A-Za-z_.]+)\\s*$"]
  })");
  const std::map<std::string, std::string> sources{
      {"alpha.py",
       "import .beta\n"          // leading dot stripped -> beta
       "import pkg.gamma\n"      // falls to last component -> gamma
       "import alpha\n"          // self-import dropped
       "import numpy\n"},        // outside the universe, dropped
      {"beta.py", ""},
      {"gamma.py", ""},
  };
  const Layer layer = scan_imports(sources, patterns, kBasenameMap);
  CHECK(layer.edges.size() == 2);
  CHECK(has_edge(layer, "alpha", "beta"));
  CHECK(has_edge(layer, "alpha", "gamma"));
}

TEST_CASE("a whole-token module beats last-component resolution") {
  const ImportPatternSet patterns = parse_import_patterns(R"({
    "language_label": "python",
    "line_patterns": ["^import\\s+([A-Za-z_.]+)\\s*$"]
  })");
  // The universe holds a module literally named "pkg.gamma", so the token
  // "pkg.gamma" resolves whole before any last-component fallback runs.
  ModuleMap mixed;
  mixed.rules = {{"pkg_gamma.py", "pkg.gamma"}};
  mixed.fallback = ModuleMapDefault::basename;
  const std::map<std::string, std::string> sources{
      {"pkg_gamma.py", ""},
      {"alpha.py", "import pkg.gamma\n"},
  };
  const Layer layer = scan_imports(sources, patterns, mixed);
  CHECK(layer.edges.size() == 1);
  CHECK(has_edge(layer, "alpha", "pkg.gamma"));
}

TEST_CASE("invalid import regex is a schema error") {
  ImportPatternSet patterns;
  patterns.language_label = "broken";
  patterns.line_patterns = {"([unclosed"};
  const std::map<std::string, std::string> sources{{"a.py", ""}};
  try {
    scan_imports(sources, patterns, kBasenameMap);
    FAIL("expected schema_error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::schema_error);
  }
}

TEST_CASE("structural coupling links modules with shared import targets") {
  Layer imports;
  imports.name = "imports";
  imports.directed = true;
  imports.weighted = false;
  imports.grammar_class = GrammarClass::d1_declared;
  imports.edges = {{"a", "c", 1.0}, {"b", "c", 1.0}, {"d", "e", 1.0}};
  const Layer coupling = build_structural_coupling(imports);
  CHECK(coupling.name == "structural_coupling");
  CHECK(!coupling.directed);
  CHECK(!coupling.weighted);
  CHECK(coupling.grammar_class == GrammarClass::d2_structural);
  REQUIRE(coupling.edges.size() == 1);
  CHECK(has_edge(coupling, "a", "b"));
}

TEST_CASE("structural coupling requires a directed declared layer") {
  Layer undirected;
  undirected.name = "imports";
  undirected.directed = false;
  undirected.grammar_class = GrammarClass::d1_declared;
  try {
    build_structural_coupling(undirected);
    FAIL("expected bad_layer_kind");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::bad_layer_kind);
  }
}

TEST_CASE("structural coupling matches a set-intersection oracle") {
  Pcg32 rng(substream_seed(22, 0));
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint32_t n = 2 + rng.bounded(9);
    Layer imports;
    imports.name = "imports";
    imports.directed = true;
    imports.grammar_class = GrammarClass::d1_declared;
    std::map<std::string, std::set<std::string>> out_neighbors;
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j = 0; j < n; ++j) {
        if (i != j && rng.uniform01() < 0.3) {
          const std::string src = "m" + std::to_string(i);
          const std::string dst = "m" + std::to_string(j);
          imports.edges.push_back({src, dst, 1.0});
          out_neighbors[src].insert(dst);
        }
      }
    }

    std::set<std::pair<std::string, std::string>> expected;
    for (auto i = out_neighbors.begin(); i != out_neighbors.end(); ++i) {
      for (auto j = std::next(i); j != out_neighbors.end(); ++j) {
        std::vector<std::string> common;
        std::set_intersection(i->second.begin(), i->second.end(),
                              j->second.begin(), j->second.end(),
                              std::back_inserter(common));
        if (!common.empty()) expected.insert({i->first, j->first});
      }
    }

    const Layer coupling = build_structural_coupling(imports);
    CHECK(coupling.edges.size() == expected.size());
    for (const Edge& e : coupling.edges) {
      const auto key = e.src < e.dst ? std::pair{e.src, e.dst}
                                     : std::pair{e.dst, e.src};
      CHECK(expected.count(key) == 1);
    }
  }
}

TEST_CASE("assemble_graph collects the sorted endpoint union") {
  Layer l1;
  l1.name = "A";
  l1.edges = {{"z", "m", 1.0}};
  Layer l2;
  l2.name = "B";
  l2.edges = {{"a", "z", 1.0}};
  const MultilayerGraph g = assemble_graph("combined", {l1, l2});
  CHECK(g.name == "combined");
  REQUIRE(g.node_count() == 3);
  CHECK(g.nodes[0].id == "a");
  CHECK(g.nodes[1].id == "m");
  CHECK(g.nodes[2].id == "z");
  CHECK(g.layer_count() == 2);
  CHECK(validate(g).empty());
}

TEST_CASE("full pipeline: log to graph document") {
  const std::vector<CommitRecord> commits = parse_git_log(
      "c1\t100\nsrc/a.py\nsrc/b.py\n\n"
      "c2\t200\nsrc/b.py\nsrc/c.py\n");
  const Layer cochange = build_cochange_layer(commits, kBasenameMap);
  const MultilayerGraph g = assemble_graph("history", {cochange});
  const MultilayerGraph back = parse_graph(serialize_graph(g));
  CHECK(back == g);
  CHECK(back.node_count() == 3);
}
