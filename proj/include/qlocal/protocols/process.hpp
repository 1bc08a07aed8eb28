#pragma once

#include <utility>
#include <vector>

#include "qlocal/core/bits.hpp"
#include "qlocal/net/triangle.hpp"
#include "qlocal/protocols/triangle_input.hpp"
#include "qlocal/quantum/graph_state.hpp"

namespace qlocal::protocols {

// Record schema x0..x{3d-1}: bit i is the measurement of ring node v_i.
inline Schema ring_schema(std::size_t d) { return indexed_schema("x", 3 * d); }

// Centralized reference: graph state of the ring, S^{b_i} on corner i, then H
// everywhere. Qubit i is v_i. Returned before measurement.
inline quantum::StateVector process_pd(std::size_t d, TriangleInput in,
                                       std::size_t max_qubits = quantum::kDefaultMaxQubits) {
  net::require_triangle_d(d);
  const std::size_t n = 3 * d;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  quantum::StateVector state = quantum::build_graph_state(n, edges, max_qubits);
  for (std::size_t i = 0; i < 3; ++i) state.apply(quantum::gates::s_power(d * i, in.b[i]));
  for (std::size_t q = 0; q < n; ++q) state.apply(quantum::gates::h(q));
  return state;
}

}  // namespace qlocal::protocols
