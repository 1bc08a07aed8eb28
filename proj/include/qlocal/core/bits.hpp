#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qlocal/core/errors.hpp"

namespace qlocal {

// Field labels of a fixed-width bit record. Bit i of a packed key is the
// value of field i; text renderings print field 0 first.
using Schema = std::vector<std::string>;

inline constexpr std::size_t kMaxRecordBits = 64;

// Labels prefix0, prefix1, ..., prefix{n-1}.
inline Schema indexed_schema(std::string_view prefix, std::size_t n) {
  Schema s;
  s.reserve(n);
  for (std::size_t i = 0; i < n; ++i) s.push_back(std::string(prefix) + std::to_string(i));
  return s;
}

inline std::string format_bits(std::uint64_t key, std::size_t width) {
  std::string out(width, '0');
  for (std::size_t i = 0; i < width; ++i)
    if ((key >> i) & 1U) out[i] = '1';
  return out;
}

inline std::uint64_t parse_bits(std::string_view text) {
  if (text.size() > kMaxRecordBits) throw ArgumentError("bit string longer than 64 bits");
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1')
      key |= std::uint64_t{1} << i;
    else if (text[i] != '0')
      throw ArgumentError("bit string contains '" + std::string(1, text[i]) + "'");
  }
  return key;
}

// A measured outcome with its qubit-order annotation.
struct Bitstring {
  std::vector<std::uint8_t> bits;
  Schema order;

  static Bitstring from_packed(std::uint64_t key, Schema order) {
    Bitstring b;
    b.bits.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) b.bits[i] = static_cast<std::uint8_t>((key >> i) & 1U);
    b.order = std::move(order);
    return b;
  }

  std::size_t size() const { return bits.size(); }

  std::uint64_t packed() const {
    if (bits.size() > kMaxRecordBits) throw ArgumentError("bit string longer than 64 bits");
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (bits[i]) key |= std::uint64_t{1} << i;
    return key;
  }

  std::string to_string() const { return format_bits(packed(), bits.size()); }

  friend bool operator==(const Bitstring&, const Bitstring&) = default;
};

// Set of equal-width bit strings sharing one order annotation.
class BitstringSet {
 public:
  BitstringSet() = default;
  BitstringSet(Schema order, std::vector<std::uint64_t> members)
      : order_(std::move(order)), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  const Schema& order() const { return order_; }
  std::size_t width() const { return order_.size(); }
  const std::vector<std::uint64_t>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }

  bool contains(std::uint64_t key) const {
    return std::binary_search(members_.begin(), members_.end(), key);
  }
  bool contains(const Bitstring& b) const {
    if (b.order != order_) throw ArgumentError("bit string order does not match the set's order");
    return contains(b.packed());
  }

  friend bool operator==(const BitstringSet&, const BitstringSet&) = default;

 private:
  Schema order_;
  std::vector<std::uint64_t> members_;
};

// 64-bit FNV-1a over the little-endian bytes of each member; stable across
// platforms, used as a content hash in cache headers.
inline std::uint64_t content_hash(const std::vector<std::uint64_t>& members) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint64_t m : members) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (m >> (8 * byte)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace qlocal
