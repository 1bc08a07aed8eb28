#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qlocal/core/errors.hpp"
#include "qlocal/quantum/gate.hpp"

namespace qlocal::quantum {

inline constexpr std::size_t kDefaultMaxQubits = 26;

// Relative tolerance of the rank-one test used when a qubit is split off.
inline constexpr double kProductTolerance = 1e-9;

namespace detail {

// Inserts a zero bit at position `pos` of `x`.
constexpr std::uint64_t insert_zero_bit(std::uint64_t x, std::size_t pos) {
  const std::uint64_t low = x & ((std::uint64_t{1} << pos) - 1);
  return ((x >> pos) << (pos + 1)) | low;
}

// Removes bit `pos` of `x`.
constexpr std::uint64_t erase_bit(std::uint64_t x, std::size_t pos) {
  const std::uint64_t low = x & ((std::uint64_t{1} << pos) - 1);
  return ((x >> (pos + 1)) << pos) | low;
}

inline const Amplitude kI{0.0, 1.0};

}  // namespace detail

// Dense statevector. Qubit k is bit k of the amplitude index.
class StateVector {
 public:
  StateVector() : amps_{Amplitude{1.0, 0.0}} {}

  explicit StateVector(std::vector<Amplitude> amplitudes) : amps_(std::move(amplitudes)) {
    const std::size_t dim = amps_.size();
    if (dim == 0 || (dim & (dim - 1)) != 0) throw ArgumentError("statevector dimension must be a power of two");
    num_qubits_ = static_cast<std::size_t>(std::countr_zero(dim));
  }

  // |0...0> on n qubits.
  static StateVector zeros(std::size_t n, std::size_t max_qubits = kDefaultMaxQubits) {
    if (n > max_qubits)
      throw ResourceError("statevector of " + std::to_string(n) + " qubits exceeds the limit of " +
                          std::to_string(max_qubits));
    std::vector<Amplitude> amps(std::size_t{1} << n);
    amps[0] = 1.0;
    return StateVector(std::move(amps));
  }

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const { return amps_; }
  std::span<Amplitude> mutable_amplitudes() { return amps_; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  void apply(const Gate& g) {
    validate(g, num_qubits_);
    const std::size_t dim = amps_.size();
    const std::size_t m0 = std::size_t{1} << g.targets[0];
    switch (g.kind) {
      case GateKind::h: {
        const double r = 1.0 / std::sqrt(2.0);
        for (std::size_t hi = 0; hi < dim; hi += 2 * m0) {
          for (std::size_t i = hi; i < hi + m0; ++i) {
            const Amplitude a = amps_[i];
            const Amplitude b = amps_[i + m0];
            amps_[i] = (a + b) * r;
            amps_[i + m0] = (a - b) * r;
          }
        }
        break;
      }
      case GateKind::s_power:
        if (!g.power) break;
        [[fallthrough]];
      case GateKind::s:
        for (std::size_t i = 0; i < dim; ++i)
          if (i & m0) amps_[i] *= detail::kI;
        break;
      case GateKind::cnot: {
        const std::size_t mt = std::size_t{1} << g.targets[1];
        for (std::size_t i = 0; i < dim; ++i)
          if ((i & m0) && !(i & mt)) std::swap(amps_[i], amps_[i | mt]);
        break;
      }
      case GateKind::cz:
      case GateKind::cs: {
        const std::size_t both = m0 | (std::size_t{1} << g.targets[1]);
        const Amplitude phase = g.kind == GateKind::cz ? Amplitude{-1.0, 0.0} : detail::kI;
        for (std::size_t i = 0; i < dim; ++i)
          if ((i & both) == both) amps_[i] *= phase;
        break;
      }
    }
  }

  // this (low qubits) tensor `high` (appended above).
  StateVector kron(const StateVector& high, std::size_t max_qubits = kDefaultMaxQubits) const {
    const std::size_t n = num_qubits_ + high.num_qubits_;
    if (n > max_qubits)
      throw ResourceError("statevector of " + std::to_string(n) + " qubits exceeds the limit of " +
                          std::to_string(max_qubits));
    std::vector<Amplitude> out(std::size_t{1} << n);
    for (std::size_t j = 0; j < high.amps_.size(); ++j)
      for (std::size_t i = 0; i < amps_.size(); ++i) out[(j << num_qubits_) | i] = amps_[i] * high.amps_[j];
    return StateVector(std::move(out));
  }

  // Result qubit k is this state's qubit order[k]; order must be a permutation.
  StateVector permuted(std::span<const std::size_t> order) const {
    if (order.size() != num_qubits_) throw ArgumentError("permutation length does not match qubit count");
    std::vector<bool> seen(num_qubits_, false);
    for (std::size_t q : order) {
      if (q >= num_qubits_ || seen[q]) throw ArgumentError("invalid qubit permutation");
      seen[q] = true;
    }
    std::vector<Amplitude> out(amps_.size());
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      std::size_t j = 0;
      for (std::size_t k = 0; k < num_qubits_; ++k)
        if ((i >> order[k]) & 1U) j |= std::size_t{1} << k;
      out[j] = amps_[i];
    }
    return StateVector(std::move(out));
  }

  // Splits qubit `pos` off the state. Throws ProtocolError unless the qubit is
  // in a product state with the rest; returns the qubit's own 1-qubit state.
  std::array<Amplitude, 2> remove_qubit(std::size_t pos) {
    if (pos >= num_qubits_) throw ArgumentError("qubit position out of range");
    const std::size_t half = amps_.size() / 2;
    const std::uint64_t m = std::uint64_t{1} << pos;
    double n0 = 0.0, n1 = 0.0;
    Amplitude overlap{0.0, 0.0};
    for (std::size_t r = 0; r < half; ++r) {
      const std::uint64_t i0 = detail::insert_zero_bit(r, pos);
      const Amplitude a0 = amps_[i0];
      const Amplitude a1 = amps_[i0 | m];
      n0 += std::norm(a0);
      n1 += std::norm(a1);
      overlap += std::conj(a0) * a1;
    }
    const double eps = 1e-24;
    if (n0 > eps && n1 > eps && std::norm(overlap) < (1.0 - kProductTolerance) * n0 * n1)
      throw ProtocolError("qubit at position " + std::to_string(pos) + " is entangled with the rest of the state");
    const bool keep_one = n1 > n0;
    const double scale = 1.0 / std::sqrt(keep_one ? n1 : n0);
    std::array<Amplitude, 2> single{};
    // Single-qubit state: (a0, a1) restricted to the reference component.
    const Amplitude ref = keep_one ? std::conj(overlap) : overlap;  // <keep|other>
    const double nk = keep_one ? n1 : n0;
    single[keep_one ? 1 : 0] = std::sqrt(nk);
    single[keep_one ? 0 : 1] = ref / std::sqrt(nk);
    std::vector<Amplitude> out(half);
    for (std::size_t r = 0; r < half; ++r) {
      const std::uint64_t i0 = detail::insert_zero_bit(r, pos);
      out[r] = amps_[keep_one ? (i0 | m) : i0] * scale;
    }
    amps_ = std::move(out);
    num_qubits_ -= 1;
    return single;
  }

 private:
  std::size_t num_qubits_ = 0;
  std::vector<Amplitude> amps_;
};

// |0...0> on n qubits, bounded by max_qubits.
inline StateVector new_state(std::size_t n, std::size_t max_qubits = kDefaultMaxQubits) {
  return StateVector::zeros(n, max_qubits);
}

inline StateVector apply_gate(StateVector state, const Gate& g) {
  state.apply(g);
  return state;
}

// |<a|b>|^2.
inline double fidelity(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits())
    throw ArgumentError("fidelity of states with " + std::to_string(a.num_qubits()) + " and " +
                        std::to_string(b.num_qubits()) + " qubits");
  Amplitude ip{0.0, 0.0};
  for (std::size_t i = 0; i < a.dimension(); ++i) ip += std::conj(a[i]) * b[i];
  return std::min(1.0, std::norm(ip));
}

}  // namespace qlocal::quantum
