#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace chordtension {

using Sha256 = std::array<std::uint8_t, 32>;

Sha256 sha256(std::span<const std::uint8_t> bytes);
Sha256 sha256(std::string_view text);

std::string toHex(std::span<const std::uint8_t> bytes);

/// Incremental SHA-256 for hashing large or streamed content.
class Sha256Builder {
 public:
  Sha256Builder();
  ~Sha256Builder();
  Sha256Builder(const Sha256Builder&) = delete;
  Sha256Builder& operator=(const Sha256Builder&) = delete;

  Sha256Builder& update(std::span<const std::uint8_t> bytes);
  Sha256Builder& update(std::string_view text);
  Sha256 finish();

 private:
  void* ctx_;
};

}  // namespace chordtension
