#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace proxlaw {

// FIPS 180-4 SHA-256. Streaming interface plus one-shot hex helper.
class Sha256 {
 public:
  Sha256() noexcept;

  void update(const void* data, std::size_t len) noexcept;
  void update(std::string_view text) noexcept {
    update(text.data(), text.size());
  }
  std::array<std::uint8_t, 32> finalize() noexcept;

 private:
  void process_block(const std::uint8_t* block) noexcept;

  std::array<std::uint32_t, 8> h_;
  std::array<std::uint8_t, 64> buffer_;
  std::size_t buffer_len_;
  std::uint64_t total_len_;
};

// Lowercase 64-hex digest of `data`.
std::string sha256_hex(std::string_view data);

}  // namespace proxlaw
