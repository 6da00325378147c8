#include "proxlaw/prereg.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <cstring>

#include "json_util.hpp"
#include "proxlaw/clock.hpp"
#include "proxlaw/sha256.hpp"

namespace proxlaw {

using detail::json;

namespace {

json doc_to_json(const HypothesisDoc& doc) {
  json out;
  out["author"] = doc.author;
  out["direction"] = doc.direction == Direction::greater ? "greater" : "less";
  out["dissimilar_pair"] = doc.dissimilar_pair
                               ? detail::layer_pair_to_json(*doc.dissimilar_pair)
                               : json(nullptr);
  out["experiment_id"] = doc.experiment_id;
  out["notes"] = doc.notes;
  out["similar_pair"] = detail::layer_pair_to_json(doc.similar_pair);
  out["statement_texts"] = doc.statement_texts;
  out["thresholds"] = doc.thresholds;
  return out;
}

HypothesisDoc doc_from_json(const json& obj, const char* context) {
  if (!obj.is_object()) {
    throw Error(Errc::schema_error, context,
                std::string(context) + ": hypothesis doc must be an object");
  }
  HypothesisDoc doc;
  doc.experiment_id = detail::require_string(obj, "experiment_id", context);
  if (doc.experiment_id.empty()) {
    throw Error(Errc::schema_error, "experiment_id",
                "experiment_id must be non-empty");
  }
  const json& statements = detail::require_field(obj, "statement_texts",
                                                 context);
  if (!statements.is_array() || statements.empty()) {
    throw Error(Errc::schema_error, "statement_texts",
                "statement_texts must be a non-empty array");
  }
  for (const json& s : statements) {
    if (!s.is_string()) {
      throw Error(Errc::schema_error, "statement_texts",
                  "statements must be strings");
    }
    doc.statement_texts.push_back(s.get<std::string>());
  }
  doc.similar_pair = detail::layer_pair_from_json(
      detail::require_field(obj, "similar_pair", context), "similar_pair");
  if (const auto it = obj.find("dissimilar_pair");
      it != obj.end() && !it->is_null()) {
    doc.dissimilar_pair =
        detail::layer_pair_from_json(*it, "dissimilar_pair");
  }
  if (const auto it = obj.find("direction"); it != obj.end()) {
    const std::string d = it->get<std::string>();
    if (d == "greater") {
      doc.direction = Direction::greater;
    } else if (d == "less") {
      doc.direction = Direction::less;
    } else {
      throw Error(Errc::schema_error, "direction",
                  "direction must be \"greater\" or \"less\"");
    }
  }
  if (const auto it = obj.find("thresholds"); it != obj.end()) {
    if (!it->is_object()) {
      throw Error(Errc::schema_error, "thresholds",
                  "thresholds must be an object");
    }
    for (const auto& [key, value] : it->items()) {
      if (!value.is_number()) {
        throw Error(Errc::schema_error, key,
                    "threshold \"" + key + "\" must be a number");
      }
      doc.thresholds[key] = value.get<double>();
    }
  }
  if (const auto it = obj.find("author"); it != obj.end()) {
    doc.author = it->get<std::string>();
  }
  if (const auto it = obj.find("notes"); it != obj.end()) {
    doc.notes = it->get<std::string>();
  }
  return doc;
}

bool is_hex(std::string_view text) {
  for (const char c : text) {
    if (!std::isxdigit(static_cast<unsigned char>(c))) return false;
  }
  return !text.empty();
}

std::string lowercase(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

// RAII advisory lock over the ledger file.
class LockedFile {
 public:
  LockedFile(const std::filesystem::path& path, int open_flags) {
    fd_ = ::open(path.c_str(), open_flags, 0644);
    if (fd_ < 0) {
      throw Error(Errc::ledger_io, path.string(),
                  "cannot open ledger: " + std::string(std::strerror(errno)));
    }
    if (::flock(fd_, LOCK_EX) != 0) {
      const int saved = errno;
      ::close(fd_);
      throw Error(Errc::ledger_io, path.string(),
                  "cannot lock ledger: " + std::string(std::strerror(saved)));
    }
  }
  ~LockedFile() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }
  LockedFile(const LockedFile&) = delete;
  LockedFile& operator=(const LockedFile&) = delete;

  std::string read_all() const {
    std::string content;
    char buf[4096];
    ::lseek(fd_, 0, SEEK_SET);
    for (;;) {
      const ssize_t got = ::read(fd_, buf, sizeof(buf));
      if (got < 0) {
        throw Error(Errc::ledger_io, "", "ledger read failed");
      }
      if (got == 0) break;
      content.append(buf, static_cast<std::size_t>(got));
    }
    return content;
  }

  void append(std::string_view line) const {
    ::lseek(fd_, 0, SEEK_END);
    std::size_t written = 0;
    while (written < line.size()) {
      const ssize_t put =
          ::write(fd_, line.data() + written, line.size() - written);
      if (put < 0) {
        throw Error(Errc::ledger_io, "", "ledger write failed");
      }
      written += static_cast<std::size_t>(put);
    }
  }

 private:
  int fd_ = -1;
};

std::vector<PreregRecord> parse_ledger_text(const std::string& content) {
  std::vector<PreregRecord> records;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string::npos) eol = content.size();
    const std::string_view line(content.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    json entry = json::parse(line, nullptr, false);
    if (entry.is_discarded() || !entry.is_object()) {
      throw Error(Errc::ledger_io, std::to_string(line_no),
                  "ledger line " + std::to_string(line_no) +
                      " is not a JSON object");
    }
    PreregRecord record;
    try {
      record.digest = detail::require_string(entry, "digest", "ledger");
      record.timestamp_utc =
          detail::require_string(entry, "timestamp_utc", "ledger");
      record.ledger_index =
          detail::require_field(entry, "index", "ledger").get<std::uint64_t>();
      record.doc = doc_from_json(
          detail::require_field(entry, "doc", "ledger"), "ledger doc");
    } catch (const Error& e) {
      throw Error(Errc::ledger_io, std::to_string(line_no),
                  "ledger line " + std::to_string(line_no) + ": " + e.what());
    }
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace

std::string canonicalize(const HypothesisDoc& doc) {
  return doc_to_json(doc).dump();
}

std::string digest(const HypothesisDoc& doc) {
  return sha256_hex(canonicalize(doc));
}

HypothesisDoc parse_hypothesis_doc(std::string_view json_text) {
  return doc_from_json(detail::parse_json(json_text, "hypothesis doc"),
                       "hypothesis doc");
}

PreregRecord register_hypothesis(const HypothesisDoc& doc,
                                 const std::filesystem::path& ledger_path,
                                 const ClockFn& clock) {
  if (doc.experiment_id.empty()) {
    throw Error(Errc::schema_error, "experiment_id",
                "experiment_id must be non-empty");
  }
  if (doc.statement_texts.empty()) {
    throw Error(Errc::schema_error, "statement_texts",
                "at least one statement is required");
  }

  const LockedFile ledger(ledger_path, O_RDWR | O_CREAT);
  const std::vector<PreregRecord> existing =
      parse_ledger_text(ledger.read_all());
  for (const PreregRecord& record : existing) {
    if (record.doc.experiment_id == doc.experiment_id) {
      throw Error(Errc::duplicate_experiment, doc.experiment_id,
                  "experiment \"" + doc.experiment_id +
                      "\" is already registered at index " +
                      std::to_string(record.ledger_index));
    }
  }

  PreregRecord record;
  record.digest = digest(doc);
  record.timestamp_utc = clock ? clock() : utc_timestamp_now();
  record.doc = doc;
  record.ledger_index = existing.size();

  json entry;
  entry["digest"] = record.digest;
  entry["doc"] = doc_to_json(doc);
  entry["index"] = record.ledger_index;
  entry["timestamp_utc"] = record.timestamp_utc;
  ledger.append(entry.dump() + "\n");
  return record;
}

std::vector<PreregRecord> read_ledger(
    const std::filesystem::path& ledger_path) {
  if (!std::filesystem::exists(ledger_path)) {
    return {};
  }
  const LockedFile ledger(ledger_path, O_RDONLY);
  return parse_ledger_text(ledger.read_all());
}

bool verify(const HypothesisDoc& doc, std::string_view claimed_digest,
            bool allow_legacy) {
  if (claimed_digest.size() == 64 && is_hex(claimed_digest)) {
    return lowercase(claimed_digest) == digest(doc);
  }
  if (claimed_digest.size() == 16 && is_hex(claimed_digest)) {
    if (!allow_legacy) {
      throw Error(Errc::malformed_digest, std::string(claimed_digest),
                  "16-character digest is the legacy truncated form; "
                  "enable legacy verification to accept it");
    }
    const std::string full = digest(doc);
    return lowercase(claimed_digest) == full.substr(0, 16);
  }
  throw Error(Errc::malformed_digest, std::string(claimed_digest),
              "digest must be 64 hex characters");
}

}  // namespace proxlaw
