#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qlocal/core/errors.hpp"
#include "qlocal/quantum/graph_state.hpp"

namespace qlocal::net {

struct NodeId {
  std::uint32_t value = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

inline std::string to_string(NodeId n) { return "node " + std::to_string(n.value); }

using Edge = std::pair<NodeId, NodeId>;

struct TopologyOptions {
  // Disjoint unions (k independent copies of a network) need this.
  bool allow_disconnected = false;
};

// Undirected simple graph with distinct node identifiers.
class Topology {
 public:
  Topology() = default;

  Topology(std::vector<NodeId> nodes, std::vector<Edge> edges, TopologyOptions options = {})
      : nodes_(std::move(nodes)) {
    std::sort(nodes_.begin(), nodes_.end());
    if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end())
      throw ArgumentError("duplicate node identifier");
    for (NodeId n : nodes_) adjacency_[n];
    std::set<Edge> seen;
    for (auto [a, b] : edges) {
      if (a == b) throw ArgumentError("self-loop at " + to_string(a));
      if (!adjacency_.count(a) || !adjacency_.count(b))
        throw ArgumentError("edge {" + std::to_string(a.value) + "," + std::to_string(b.value) +
                            "} has an endpoint that is not a listed node");
      const Edge e{std::min(a, b), std::max(a, b)};
      if (!seen.insert(e).second)
        throw ArgumentError("duplicate edge {" + std::to_string(e.first.value) + "," +
                            std::to_string(e.second.value) + "}");
      adjacency_[a].push_back(b);
      adjacency_[b].push_back(a);
    }
    edges_.assign(seen.begin(), seen.end());
    for (auto& [n, nb] : adjacency_) std::sort(nb.begin(), nb.end());
    if (!options.allow_disconnected && !connected()) throw TopologyError("topology is not connected");
  }

  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t size() const { return nodes_.size(); }
  bool contains(NodeId n) const { return adjacency_.count(n) != 0; }

  const std::vector<NodeId>& neighbors(NodeId n) const {
    auto it = adjacency_.find(n);
    if (it == adjacency_.end()) throw ArgumentError("unknown " + to_string(n));
    return it->second;
  }

  std::size_t degree(NodeId n) const { return neighbors(n).size(); }

  // Position of n in ascending identifier order.
  std::size_t index_of(NodeId n) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), n);
    if (it == nodes_.end() || *it != n) throw ArgumentError("unknown " + to_string(n));
    return static_cast<std::size_t>(it - nodes_.begin());
  }

  bool connected() const {
    if (nodes_.empty()) return true;
    return component_of(nodes_.front()).size() == nodes_.size();
  }

  std::set<NodeId> component_of(NodeId start) const {
    std::set<NodeId> seen{start};
    std::deque<NodeId> queue{start};
    while (!queue.empty()) {
      NodeId u = queue.front();
      queue.pop_front();
      for (NodeId v : neighbors(u))
        if (seen.insert(v).second) queue.push_back(v);
    }
    return seen;
  }

  // Same graph under an identifier bijection.
  Topology relabeled(const std::map<NodeId, NodeId>& mapping) const {
    auto map = [&](NodeId n) {
      auto it = mapping.find(n);
      if (it == mapping.end()) throw ArgumentError("relabeling misses " + to_string(n));
      return it->second;
    };
    std::vector<NodeId> nodes;
    for (NodeId n : nodes_) nodes.push_back(map(n));
    std::vector<Edge> edges;
    for (auto [a, b] : edges_) edges.emplace_back(map(a), map(b));
    return Topology(std::move(nodes), std::move(edges), {.allow_disconnected = !connected()});
  }

  friend bool operator==(const Topology& a, const Topology& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<NodeId> nodes_;
  std::vector<Edge> edges_;
  std::map<NodeId, std::vector<NodeId>> adjacency_;
};

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

// BFS distances from u to every reachable node.
inline std::map<NodeId, std::size_t> distances_from(const Topology& g, NodeId u) {
  std::map<NodeId, std::size_t> dist{{u, 0}};
  g.neighbors(u);  // validates u
  std::deque<NodeId> queue{u};
  while (!queue.empty()) {
    NodeId x = queue.front();
    queue.pop_front();
    for (NodeId y : g.neighbors(x))
      if (dist.emplace(y, dist[x] + 1).second) queue.push_back(y);
  }
  return dist;
}

inline std::size_t distance(const Topology& g, NodeId a, NodeId b) {
  auto dist = distances_from(g, a);
  auto it = dist.find(b);
  if (!g.contains(b)) throw ArgumentError("unknown " + to_string(b));
  return it == dist.end() ? kUnreachable : it->second;
}

// Nodes at distance at most r from u.
inline std::set<NodeId> neighborhood(const Topology& g, NodeId u, std::size_t r) {
  std::set<NodeId> ball;
  for (auto [n, dist] : distances_from(g, u))
    if (dist <= r) ball.insert(n);
  return ball;
}

// Graph state of the topology; qubit k belongs to the k-th node in ascending
// identifier order.
inline quantum::StateVector build_graph_state(const Topology& g,
                                              std::size_t max_qubits = quantum::kDefaultMaxQubits) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (auto [a, b] : g.edges()) edges.emplace_back(g.index_of(a), g.index_of(b));
  return quantum::build_graph_state(g.size(), edges, max_qubits);
}

// Structured-text form: {"nodes": [ids], "edges": [[a, b], ...]}.
inline nlohmann::json to_json(const Topology& g) {
  nlohmann::json j;
  j["nodes"] = nlohmann::json::array();
  for (NodeId n : g.nodes()) j["nodes"].push_back(n.value);
  j["edges"] = nlohmann::json::array();
  for (auto [a, b] : g.edges()) j["edges"].push_back({a.value, b.value});
  return j;
}

inline Topology topology_from_json(const nlohmann::json& j, TopologyOptions options = {}) {
  if (!j.is_object() || !j.contains("nodes") || !j.contains("edges"))
    throw ArgumentError("topology document needs \"nodes\" and \"edges\"");
  std::vector<NodeId> nodes;
  for (const auto& n : j.at("nodes")) nodes.push_back(NodeId{n.get<std::uint32_t>()});
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw ArgumentError("edge entries must be [a, b] pairs");
    edges.emplace_back(NodeId{e[0].get<std::uint32_t>()}, NodeId{e[1].get<std::uint32_t>()});
  }
  return Topology(std::move(nodes), std::move(edges), options);
}

inline void write_topology(std::ostream& os, const Topology& g) { os << to_json(g).dump() << '\n'; }

inline Topology read_topology(std::istream& is, TopologyOptions options = {}) {
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("malformed topology document: ") + e.what());
  }
  return topology_from_json(j, options);
}

}  // namespace qlocal::net
