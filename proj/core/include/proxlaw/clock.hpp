#pragma once

#include <cstdint>
#include <string>

namespace proxlaw {

// "2026-08-19T12:34:56Z"
std::string format_utc_timestamp(std::int64_t unix_seconds);

// Current UTC time, or SOURCE_DATE_EPOCH when that variable is set so that
// archived runs reproduce byte-identical outputs.
std::string utc_timestamp_now();

}  // namespace proxlaw
