#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "proxlaw/errors.hpp"
#include "proxlaw/experiment.hpp"

namespace proxlaw::detail {

using json = nlohmann::json;

inline json parse_json(std::string_view text, const char* what) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    throw Error(Errc::schema_error, what,
                std::string(what) + ": not well-formed JSON");
  }
  return doc;
}

inline const json& require_field(const json& obj, const char* key,
                                 const char* context) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(Errc::schema_error, key,
                std::string(context) + ": missing field \"" + key + "\"");
  }
  return *it;
}

inline std::string require_string(const json& obj, const char* key,
                                  const char* context) {
  const json& v = require_field(obj, key, context);
  if (!v.is_string()) {
    throw Error(Errc::schema_error, key,
                std::string(context) + ": field \"" + key +
                    "\" must be a string");
  }
  return v.get<std::string>();
}

inline bool require_bool(const json& obj, const char* key,
                         const char* context) {
  const json& v = require_field(obj, key, context);
  if (!v.is_boolean()) {
    throw Error(Errc::schema_error, key,
                std::string(context) + ": field \"" + key +
                    "\" must be a boolean");
  }
  return v.get<bool>();
}

inline double require_number(const json& obj, const char* key,
                             const char* context) {
  const json& v = require_field(obj, key, context);
  if (!v.is_number()) {
    throw Error(Errc::schema_error, key,
                std::string(context) + ": field \"" + key +
                    "\" must be a number");
  }
  return v.get<double>();
}

inline json layer_pair_to_json(const LayerPair& pair) {
  return json{{"layer_a", pair.layer_a},
              {"layer_b", pair.layer_b},
              {"classification", pair.classification == PairClass::similar
                                     ? "similar"
                                     : "dissimilar"}};
}

inline LayerPair layer_pair_from_json(const json& obj, const char* context) {
  if (!obj.is_object()) {
    throw Error(Errc::schema_error, context,
                std::string(context) + ": layer pair must be an object");
  }
  LayerPair pair;
  pair.layer_a = require_string(obj, "layer_a", context);
  pair.layer_b = require_string(obj, "layer_b", context);
  const std::string cls = require_string(obj, "classification", context);
  if (cls == "similar") {
    pair.classification = PairClass::similar;
  } else if (cls == "dissimilar") {
    pair.classification = PairClass::dissimilar;
  } else {
    throw Error(Errc::schema_error, "classification",
                std::string(context) + ": classification must be "
                                       "\"similar\" or \"dissimilar\"");
  }
  return pair;
}

}  // namespace proxlaw::detail
