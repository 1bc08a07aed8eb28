#pragma once

#include <set>
#include <span>
#include <string>
#include <utility>

#include "qlocal/core/errors.hpp"
#include "qlocal/quantum/state_vector.hpp"

namespace qlocal::quantum {

// H on every qubit of |0...0>, then CZ once per edge. Vertices are tensor
// positions 0..n-1.
inline StateVector build_graph_state(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges,
                                     std::size_t max_qubits = kDefaultMaxQubits) {
  if (n == 0) throw ArgumentError("graph state needs at least one vertex");
  StateVector state = StateVector::zeros(n, max_qubits);
  for (std::size_t q = 0; q < n; ++q) state.apply(gates::h(q));
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto [a, b] : edges) {
    if (a >= n || b >= n || a == b)
      throw ArgumentError("invalid graph edge {" + std::to_string(a) + "," + std::to_string(b) + "}");
    if (!seen.insert({std::min(a, b), std::max(a, b)}).second)
      throw ArgumentError("duplicate graph edge {" + std::to_string(a) + "," + std::to_string(b) + "}");
    state.apply(gates::cz(a, b));
  }
  return state;
}

}  // namespace qlocal::quantum
