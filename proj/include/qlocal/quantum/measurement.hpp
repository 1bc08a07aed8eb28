#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "qlocal/core/bits.hpp"
#include "qlocal/core/distribution.hpp"
#include "qlocal/core/random.hpp"
#include "qlocal/quantum/sparse_state.hpp"
#include "qlocal/quantum/state_vector.hpp"

namespace qlocal::quantum {

inline constexpr double kDefaultSupportTolerance = 1e-9;

namespace detail {

// Inverse-CDF draw over |amplitude|^2. Falls back to the last nonzero entry
// when rounding leaves u past the accumulated mass.
inline std::size_t sample_index(std::span<const Amplitude> amps, double u) {
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double p = std::norm(amps[i]);
    if (p == 0.0) continue;
    acc += p;
    last = i;
    if (u < acc) return i;
  }
  return last;
}

}  // namespace detail

// Inverse-CDF sampler with precomputed cumulative mass; draws the same index
// as detail::sample_index for the same u.
class CdfSampler {
 public:
  CdfSampler() = default;
  explicit CdfSampler(std::span<const Amplitude> amps) {
    double acc = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
      const double p = std::norm(amps[i]);
      if (p == 0.0) continue;
      acc += p;
      cumulative_.push_back(acc);
      index_.push_back(i);
    }
  }

  std::size_t draw(double u) const {
    if (index_.empty()) return 0;
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) return index_.back();
    return index_[static_cast<std::size_t>(it - cumulative_.begin())];
  }

 private:
  std::vector<double> cumulative_;
  std::vector<std::size_t> index_;
};

// Computational-basis index drawn with probability |amplitude|^2.
inline std::uint64_t sample_basis_state(const StateVector& state, Rng& rng) {
  return detail::sample_index(state.amplitudes(), rng.uniform());
}

inline std::uint64_t sample_basis_state(const SparseState& state, Rng& rng) {
  const std::size_t e = detail::sample_index(state.amps(), rng.uniform());
  return state.keys()[e];
}

// Measures every qubit in the computational basis; bit k is qubit k.
inline Bitstring measure_all(const StateVector& state, Rng& rng) {
  return Bitstring::from_packed(sample_basis_state(state, rng), indexed_schema("q", state.num_qubits()));
}

inline Bitstring measure_all(const StateVector& state, Rng& rng, Schema order) {
  if (order.size() != state.num_qubits()) throw ArgumentError("order annotation does not match qubit count");
  return Bitstring::from_packed(sample_basis_state(state, rng), std::move(order));
}

// Every basis outcome with nonzero probability.
inline OutcomeDistribution exact_distribution(const StateVector& state, Schema order) {
  if (order.size() != state.num_qubits()) throw ArgumentError("order annotation does not match qubit count");
  OutcomeDistribution d(std::move(order));
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double p = std::norm(amps[i]);
    if (p > 0.0) d.add(i, p);
  }
  return d;
}

inline OutcomeDistribution exact_distribution(const StateVector& state) {
  return exact_distribution(state, indexed_schema("q", state.num_qubits()));
}

// Outcomes with probability strictly above tol.
inline BitstringSet support(const StateVector& state, double tol, Schema order) {
  if (!(tol > 0.0 && tol < 1.0)) throw ArgumentError("support tolerance must lie in (0, 1)");
  if (order.size() != state.num_qubits()) throw ArgumentError("order annotation does not match qubit count");
  std::vector<std::uint64_t> members;
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i)
    if (std::norm(amps[i]) > tol) members.push_back(i);
  return BitstringSet(std::move(order), std::move(members));
}

inline BitstringSet support(const StateVector& state, double tol = kDefaultSupportTolerance) {
  return support(state, tol, indexed_schema("q", state.num_qubits()));
}

}  // namespace qlocal::quantum
