#pragma once

#include <map>
#include <vector>

#include "qlocal/net/triangle.hpp"
#include "qlocal/protocols/affine.hpp"
#include "qlocal/protocols/triangle.hpp"

namespace qlocal::protocols {

// k disjoint triangle networks (with input nodes) in one topology.
struct KCopiesNetwork {
  net::Topology topology;
  std::vector<net::TriangleLayout> copies;
};

inline KCopiesNetwork build_k_copies(std::size_t d, std::size_t k) {
  if (k == 0) throw ArgumentError("k must be at least 1");
  KCopiesNetwork out;
  std::vector<NodeId> nodes;
  std::vector<net::Edge> edges;
  const auto stride = static_cast<std::uint32_t>(3 * d + 3);
  for (std::size_t j = 0; j < k; ++j) {
    auto copy = net::build_script_gd(d, static_cast<std::uint32_t>(j) * stride);
    nodes.insert(nodes.end(), copy.topology.nodes().begin(), copy.topology.nodes().end());
    edges.insert(edges.end(), copy.topology.edges().begin(), copy.topology.edges().end());
    out.copies.push_back(copy.layout);
  }
  out.topology = net::Topology(std::move(nodes), std::move(edges), {.allow_disconnected = true});
  return out;
}

inline std::map<NodeId, Bytes> k_copies_inputs(const KCopiesNetwork& net, const std::vector<TriangleInput>& inputs) {
  if (inputs.size() != net.copies.size())
    throw ArgumentError("need one input triple per copy (" + std::to_string(net.copies.size()) + ")");
  std::map<NodeId, Bytes> all;
  for (std::size_t j = 0; j < inputs.size(); ++j) all.merge(relation_inputs(net.copies[j], inputs[j]));
  return all;
}

// Quantum relation protocol on every copy.
inline net::ProgramSet k_copies_programs(const KCopiesNetwork& net) { return relation_protocol_programs(net.topology); }

// The same affine strategy on every copy.
inline net::ProgramSet k_copies_affine_programs(const KCopiesNetwork& net, const AffineStrategy& s, std::size_t T) {
  net::ProgramSet all;
  for (const auto& layout : net.copies) all.merge(affine_strategy_programs(net.topology, layout, s, T));
  return all;
}

// Ring record of each copy.
inline std::vector<std::uint64_t> k_copies_records(const KCopiesNetwork& net, const std::map<NodeId, Bytes>& outputs) {
  std::vector<std::uint64_t> out;
  for (const auto& layout : net.copies) out.push_back(ring_record(layout, outputs));
  return out;
}

}  // namespace qlocal::protocols
