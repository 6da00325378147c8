#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proxlaw/experiment.hpp"

namespace proxlaw {

enum class Direction { greater, less };

// A hypothesis document to be committed before analysis.
struct HypothesisDoc {
  std::string experiment_id;
  std::vector<std::string> statement_texts;  // h1, h2, ...
  LayerPair similar_pair{.classification = PairClass::similar};
  std::optional<LayerPair> dissimilar_pair;
  Direction direction = Direction::greater;
  std::map<std::string, double> thresholds;
  std::string author;
  std::string notes;

  bool operator==(const HypothesisDoc&) const = default;
};

struct PreregRecord {
  std::string digest;  // 64-hex lowercase
  std::string timestamp_utc;
  HypothesisDoc doc;
  std::uint64_t ledger_index = 0;
};

// Canonical bytes: UTF-8 JSON, lexicographically sorted keys, no
// insignificant whitespace, shortest round-trip number form. The timestamp
// is never part of these bytes; the digest commits to content only.
std::string canonicalize(const HypothesisDoc& doc);

// Lowercase 64-hex SHA-256 of canonicalize(doc).
std::string digest(const HypothesisDoc& doc);

HypothesisDoc parse_hypothesis_doc(std::string_view json_text);

using ClockFn = std::function<std::string()>;

// Appends one record to the line-delimited ledger under an exclusive
// advisory lock. experiment_id must not already be registered. A null clock
// uses utc_timestamp_now().
PreregRecord register_hypothesis(const HypothesisDoc& doc,
                                 const std::filesystem::path& ledger_path,
                                 const ClockFn& clock = {});

std::vector<PreregRecord> read_ledger(const std::filesystem::path& ledger_path);

// True iff digest(doc) equals claimed_digest, case-insensitive. A 16-hex
// digest is the pre-v6.1 truncated form: rejected as malformed_digest unless
// allow_legacy, which compares it against the digest prefix.
bool verify(const HypothesisDoc& doc, std::string_view claimed_digest,
            bool allow_legacy = false);

}  // namespace proxlaw
