#pragma once

#include <cstdint>
#include <string>

#include "qlocal/core/bits.hpp"
#include "qlocal/core/errors.hpp"
#include "qlocal/net/triangle.hpp"
#include "qlocal/protocols/triangle_input.hpp"

namespace qlocal::verify {

using protocols::TriangleInput;

// XORs of the outcome over even ring labels and over odd labels of each side.
struct ParityTuple {
  bool e = false;
  bool r = false;
  bool b = false;
  bool l = false;

  unsigned index() const { return unsigned(e) | unsigned(r) << 1 | unsigned(b) << 2 | unsigned(l) << 3; }
  static ParityTuple from_index(unsigned k) { return {(k & 1U) != 0, (k & 2U) != 0, (k & 4U) != 0, (k & 8U) != 0}; }
  std::string to_string() const { return {char('0' + e), char('0' + r), char('0' + b), char('0' + l)}; }

  friend ParityTuple operator^(ParityTuple x, ParityTuple y) {
    return {x.e != y.e, x.r != y.r, x.b != y.b, x.l != y.l};
  }
  friend bool operator==(const ParityTuple&, const ParityTuple&) = default;
};

namespace detail {
struct ParityMasks {
  std::uint64_t e = 0, r = 0, b = 0, l = 0;
};

inline ParityMasks parity_masks(std::size_t d) {
  net::require_triangle_d(d);
  ParityMasks m;
  for (std::size_t i = 0; i < 3 * d; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    if (i % 2 == 0)
      m.e |= bit;
    else if (i < d)
      m.r |= bit;
    else if (i < 2 * d)
      m.b |= bit;
    else
      m.l |= bit;
  }
  return m;
}

inline bool odd_weight(std::uint64_t v) { return (std::popcount(v) & 1) != 0; }
}  // namespace detail

// Outcome packed with bit i = x_i.
inline ParityTuple parities(std::size_t d, std::uint64_t x) {
  const auto m = detail::parity_masks(d);
  if (3 * d < 64 && (x >> (3 * d)) != 0) throw ArgumentError("outcome has bits beyond the 3d ring labels");
  return {detail::odd_weight(x & m.e), detail::odd_weight(x & m.r), detail::odd_weight(x & m.b),
          detail::odd_weight(x & m.l)};
}

inline ParityTuple parities(std::size_t d, const Bitstring& x) {
  if (x.size() != 3 * d)
    throw ArgumentError("outcome has " + std::to_string(x.size()) + " bits; expected " + std::to_string(3 * d));
  return parities(d, x.packed());
}

// r^b^l = 0 always; on inputs 000, 011, 101, 110 also the matching identity.
inline bool check_prop1(TriangleInput in, ParityTuple p) {
  if (p.r ^ p.b ^ p.l) return false;
  switch (in.index()) {
    case 0b000: return !p.e;               // (0,0,0)
    case 0b110: return p.e ^ p.r ^ p.l;    // (0,1,1)
    case 0b101: return p.e ^ p.r ^ p.b;    // (1,0,1)
    case 0b011: return p.e ^ p.b ^ p.l;    // (1,1,0)
    default: return true;
  }
}

// The four inputs with an input-specific identity.
inline bool has_case_identity(TriangleInput in) {
  const unsigned k = in.index();
  return k == 0b000 || k == 0b110 || k == 0b101 || k == 0b011;
}

}  // namespace qlocal::verify
