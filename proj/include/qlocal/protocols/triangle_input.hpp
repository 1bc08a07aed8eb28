#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "qlocal/core/errors.hpp"

namespace qlocal::protocols {

// The three input bits (b0, b1, b2). Index form packs b_i into bit i.
struct TriangleInput {
  std::array<bool, 3> b{};

  static TriangleInput from_index(unsigned k) {
    if (k >= 8) throw ArgumentError("input index must be below 8");
    return {{(k & 1U) != 0, (k & 2U) != 0, (k & 4U) != 0}};
  }

  // "b0b1b2", e.g. "011" means b0=0, b1=1, b2=1.
  static TriangleInput parse(std::string_view text) {
    if (text.size() != 3) throw ArgumentError("input triple must have 3 bits: '" + std::string(text) + "'");
    TriangleInput t;
    for (std::size_t i = 0; i < 3; ++i) {
      if (text[i] != '0' && text[i] != '1') throw ArgumentError("input bits must be 0 or 1");
      t.b[i] = text[i] == '1';
    }
    return t;
  }

  unsigned index() const { return unsigned(b[0]) | unsigned(b[1]) << 1 | unsigned(b[2]) << 2; }
  std::string to_string() const { return {char('0' + b[0]), char('0' + b[1]), char('0' + b[2])}; }

  friend bool operator==(const TriangleInput&, const TriangleInput&) = default;
};

inline std::array<TriangleInput, 8> all_inputs() {
  std::array<TriangleInput, 8> out;
  for (unsigned k = 0; k < 8; ++k) out[k] = TriangleInput::from_index(k);
  return out;
}

}  // namespace qlocal::protocols
