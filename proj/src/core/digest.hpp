// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/types.hpp"

namespace dcp {

/// SHA-256 (the project-wide 32-byte digest function).
Digest32 sha256(std::span<const std::uint8_t> bytes);
Digest32 sha256(std::string_view text);

std::string to_hex(const Digest32& d);
std::optional<Digest32> digest_from_hex(std::string_view hex);

/// Big-endian byte assembler for the fixed statement and token encodings.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }

  void u32be(std::uint32_t v) {
    for (int i = 3; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  void u64be(std::uint64_t v) {
    for (int i = 7; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  /// Ticks are serialized as the two's-complement bit pattern, big-endian.
  void tick(Tick t) { u64be(std::bit_cast<std::uint64_t>(static_cast<std::int64_t>(t))); }

  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void digest(const Digest32& d) { out_.insert(out_.end(), d.begin(), d.end()); }
  void text(std::string_view s) {
    out_.insert(out_.end(), s.begin(), s.end());
  }

  const std::vector<std::uint8_t>& view() const { return out_; }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

}  // namespace dcp
