#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qlocal/core/errors.hpp"
#include "qlocal/quantum/gate.hpp"
#include "qlocal/quantum/state_vector.hpp"

namespace qlocal::quantum {

inline constexpr std::size_t kMaxSparseQubits = 64;
inline constexpr std::size_t kDefaultMaxEntries = std::size_t{1} << 24;

// Statevector stored as its nonzero computational-basis amplitudes, keys in
// strictly increasing order. Suited to states such as the register-copy
// stage of the graph-state protocol: many qubits, few nonzero amplitudes.
// Every gate runs in time linear in the number of stored amplitudes.
class SparseState {
 public:
  SparseState() : keys_{0}, amps_{Amplitude{1.0, 0.0}} {}

  static SparseState zeros(std::size_t n) {
    if (n > kMaxSparseQubits) throw ResourceError("sparse state limited to 64 qubits");
    SparseState s;
    s.num_qubits_ = n;
    return s;
  }

  static SparseState from_dense(const StateVector& v) {
    SparseState s;
    s.num_qubits_ = v.num_qubits();
    s.keys_.clear();
    s.amps_.clear();
    for (std::size_t i = 0; i < v.dimension(); ++i) {
      if (v[i] != Amplitude{0.0, 0.0}) {
        s.keys_.push_back(i);
        s.amps_.push_back(v[i]);
      }
    }
    return s;
  }

  StateVector to_dense(std::size_t max_qubits = kDefaultMaxQubits) const {
    StateVector v = StateVector::zeros(num_qubits_, max_qubits);
    auto out = v.mutable_amplitudes();
    out[0] = 0.0;
    for (std::size_t e = 0; e < keys_.size(); ++e) out[keys_[e]] = amps_[e];
    return v;
  }

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t num_entries() const { return keys_.size(); }
  const std::vector<std::uint64_t>& keys() const { return keys_; }
  const std::vector<Amplitude>& amps() const { return amps_; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  void apply(const Gate& g, std::size_t max_entries = kDefaultMaxEntries) {
    validate(g, num_qubits_);
    const std::uint64_t m0 = std::uint64_t{1} << g.targets[0];
    switch (g.kind) {
      case GateKind::h:
        apply_hadamard(m0, max_entries);
        break;
      case GateKind::s_power:
        if (!g.power) break;
        [[fallthrough]];
      case GateKind::s:
        for (std::size_t e = 0; e < keys_.size(); ++e)
          if (keys_[e] & m0) amps_[e] *= detail::kI;
        break;
      case GateKind::cnot:
        apply_cnot(m0, std::uint64_t{1} << g.targets[1]);
        break;
      case GateKind::cz:
      case GateKind::cs: {
        const std::uint64_t both = m0 | (std::uint64_t{1} << g.targets[1]);
        const Amplitude phase = g.kind == GateKind::cz ? Amplitude{-1.0, 0.0} : detail::kI;
        for (std::size_t e = 0; e < keys_.size(); ++e)
          if ((keys_[e] & both) == both) amps_[e] *= phase;
        break;
      }
    }
  }

  // this (low qubits) tensor `high` (appended above).
  SparseState kron(const SparseState& high, std::size_t max_entries = kDefaultMaxEntries) const {
    const std::size_t n = num_qubits_ + high.num_qubits_;
    if (n > kMaxSparseQubits) throw ResourceError("sparse state limited to 64 qubits");
    if (keys_.size() * high.keys_.size() > max_entries)
      throw ResourceError("sparse state would exceed " + std::to_string(max_entries) + " amplitudes");
    SparseState out;
    out.num_qubits_ = n;
    out.keys_.clear();
    out.amps_.clear();
    out.keys_.reserve(keys_.size() * high.keys_.size());
    out.amps_.reserve(keys_.size() * high.keys_.size());
    for (std::size_t j = 0; j < high.keys_.size(); ++j) {
      for (std::size_t i = 0; i < keys_.size(); ++i) {
        out.keys_.push_back(keys_[i] | (high.keys_[j] << num_qubits_));
        out.amps_.push_back(amps_[i] * high.amps_[j]);
      }
    }
    return out;
  }

  // Splits qubit `pos` off; same contract as StateVector::remove_qubit.
  std::array<Amplitude, 2> remove_qubit(std::size_t pos) {
    if (pos >= num_qubits_) throw ArgumentError("qubit position out of range");
    const std::uint64_t m = std::uint64_t{1} << pos;
    double n0 = 0.0, n1 = 0.0;
    for (std::size_t e = 0; e < keys_.size(); ++e) (keys_[e] & m ? n1 : n0) += std::norm(amps_[e]);
    const double eps = 1e-24;
    const bool mixed = n0 > eps && n1 > eps;
    Amplitude overlap{0.0, 0.0};
    if (mixed) {
      Run zero, one;
      split(m, pos, zero, one);
      std::size_t i = 0, j = 0;
      while (i < zero.keys.size() && j < one.keys.size()) {
        if (zero.keys[i] < one.keys[j]) {
          ++i;
        } else if (one.keys[j] < zero.keys[i]) {
          ++j;
        } else {
          overlap += std::conj(zero.amps[i++]) * one.amps[j++];
        }
      }
      if (std::norm(overlap) < (1.0 - kProductTolerance) * n0 * n1)
        throw ProtocolError("qubit at position " + std::to_string(pos) +
                            " is entangled with the rest of the state");
    }
    const bool keep_one = n1 > n0;
    const double nk = keep_one ? n1 : n0;
    const double scale = 1.0 / std::sqrt(nk);
    std::array<Amplitude, 2> single{};
    single[keep_one ? 1 : 0] = std::sqrt(nk);
    single[keep_one ? 0 : 1] = mixed ? (keep_one ? std::conj(overlap) : overlap) / std::sqrt(nk) : Amplitude{};
    std::size_t w = 0;
    for (std::size_t e = 0; e < keys_.size(); ++e) {
      if (((keys_[e] & m) != 0) != keep_one) continue;
      keys_[w] = detail::erase_bit(keys_[e], pos);
      amps_[w] = amps_[e] * scale;
      ++w;
    }
    keys_.resize(w);
    amps_.resize(w);
    num_qubits_ -= 1;
    return single;
  }

 private:
  struct Run {
    std::vector<std::uint64_t> keys;
    std::vector<Amplitude> amps;
    void reserve(std::size_t n) {
      keys.reserve(n);
      amps.reserve(n);
    }
    void push(std::uint64_t k, Amplitude a) {
      keys.push_back(k);
      amps.push_back(a);
    }
  };

  // Entries with bit m clear and set, each with bit `pos` erased; both sorted.
  void split(std::uint64_t m, std::size_t pos, Run& zero, Run& one) const {
    for (std::size_t e = 0; e < keys_.size(); ++e)
      (keys_[e] & m ? one : zero).push(detail::erase_bit(keys_[e], pos), amps_[e]);
  }

  // Merges two sorted runs with disjoint keys.
  static Run merge(const Run& x, const Run& y) {
    Run out;
    out.reserve(x.keys.size() + y.keys.size());
    std::size_t i = 0, j = 0;
    while (i < x.keys.size() || j < y.keys.size()) {
      if (j == y.keys.size() || (i < x.keys.size() && x.keys[i] < y.keys[j])) {
        out.push(x.keys[i], x.amps[i]);
        ++i;
      } else {
        out.push(y.keys[j], y.amps[j]);
        ++j;
      }
    }
    return out;
  }

  void assign(Run&& r) {
    keys_ = std::move(r.keys);
    amps_ = std::move(r.amps);
  }

  void apply_cnot(std::uint64_t mc, std::uint64_t mt) {
    Run same, up, down;
    for (std::size_t e = 0; e < keys_.size(); ++e) {
      const std::uint64_t k = keys_[e];
      if (!(k & mc))
        same.push(k, amps_[e]);
      else
        (k & mt ? down : up).push(k ^ mt, amps_[e]);
    }
    assign(merge(merge(same, up), down));
  }

  void apply_hadamard(std::uint64_t m, std::size_t max_entries) {
    const double r = 1.0 / std::sqrt(2.0);
    // Pair each base key k (bit m clear) with amplitudes of k and k|m.
    Run lo, hi;
    lo.reserve(keys_.size() * 2);
    hi.reserve(keys_.size() * 2);
    std::vector<std::size_t> zero, one;
    for (std::size_t e = 0; e < keys_.size(); ++e) (keys_[e] & m ? one : zero).push_back(e);
    auto emit = [&](std::uint64_t base, Amplitude a0, Amplitude a1) {
      const Amplitude plus = (a0 + a1) * r;
      const Amplitude minus = (a0 - a1) * r;
      if (std::norm(plus) > kPrune) lo.push(base, plus);
      if (std::norm(minus) > kPrune) hi.push(base | m, minus);
    };
    std::size_t i = 0, j = 0;
    while (i < zero.size() || j < one.size()) {
      const std::uint64_t k0 = i < zero.size() ? keys_[zero[i]] : ~std::uint64_t{0};
      const std::uint64_t k1 = j < one.size() ? keys_[one[j]] & ~m : ~std::uint64_t{0};
      if (k0 < k1) {
        emit(k0, amps_[zero[i++]], Amplitude{});
      } else if (k1 < k0) {
        emit(k1, Amplitude{}, amps_[one[j++]]);
      } else {
        emit(k0, amps_[zero[i++]], amps_[one[j++]]);
      }
    }
    if (lo.keys.size() + hi.keys.size() > max_entries)
      throw ResourceError("sparse state would exceed " + std::to_string(max_entries) + " amplitudes");
    assign(merge(lo, hi));
  }

  // Squared magnitude below which a summed amplitude counts as cancelled.
  static constexpr double kPrune = 1e-26;

  std::size_t num_qubits_ = 0;
  std::vector<std::uint64_t> keys_;
  std::vector<Amplitude> amps_;
};

}  // namespace qlocal::quantum
