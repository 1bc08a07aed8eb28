#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qlocal/core/errors.hpp"
#include "qlocal/net/topology.hpp"

namespace qlocal::net {

// Labels of the triangle ring G_d (v_0 .. v_{3d-1}) and, when present, the
// three input nodes w_0, w_1, w_2 hanging off the corners v_0, v_d, v_{2d}.
struct TriangleLayout {
  std::size_t d = 0;
  std::vector<NodeId> ring;
  std::optional<std::array<NodeId, 3>> inputs;

  std::size_t ring_size() const { return ring.size(); }
  NodeId v(std::size_t i) const { return ring.at(i); }
  NodeId w(std::size_t i) const {
    if (!inputs) throw ArgumentError("layout has no input nodes");
    return inputs->at(i);
  }
  NodeId corner(std::size_t i) const { return ring.at(d * i); }

  // Ring label sets, as label indices.
  std::vector<std::size_t> right() const { return range(1, d); }
  std::vector<std::size_t> bottom() const { return range(d + 1, 2 * d); }
  std::vector<std::size_t> left() const { return range(2 * d + 1, 3 * d); }
  std::vector<std::size_t> even() const { return stride(0); }
  std::vector<std::size_t> odd() const { return stride(1); }

  std::optional<std::size_t> ring_label(NodeId n) const {
    for (std::size_t i = 0; i < ring.size(); ++i)
      if (ring[i] == n) return i;
    return std::nullopt;
  }

  std::optional<std::size_t> input_index(NodeId n) const {
    if (!inputs) return std::nullopt;
    for (std::size_t i = 0; i < 3; ++i)
      if ((*inputs)[i] == n) return i;
    return std::nullopt;
  }

 private:
  static std::vector<std::size_t> range(std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> out;
    for (std::size_t i = lo; i < hi; ++i) out.push_back(i);
    return out;
  }
  std::vector<std::size_t> stride(std::size_t first) const {
    std::vector<std::size_t> out;
    for (std::size_t i = first; i < 3 * d; i += 2) out.push_back(i);
    return out;
  }
};

struct TriangleNetwork {
  Topology topology;
  TriangleLayout layout;
};

inline void require_triangle_d(std::size_t d) {
  if (d < 2 || d % 2 != 0) throw ArgumentError("d must be an even integer >= 2 (got " + std::to_string(d) + ")");
}

// The ring G_d. v_i gets identifier offset + i.
inline TriangleNetwork build_gd(std::size_t d, std::uint32_t offset = 0) {
  require_triangle_d(d);
  const std::size_t n = 3 * d;
  TriangleLayout layout;
  layout.d = d;
  std::vector<NodeId> nodes;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    layout.ring.push_back(NodeId{offset + static_cast<std::uint32_t>(i)});
    nodes.push_back(layout.ring.back());
  }
  for (std::size_t i = 0; i < n; ++i) edges.emplace_back(layout.ring[i], layout.ring[(i + 1) % n]);
  return {Topology(std::move(nodes), std::move(edges)), std::move(layout)};
}

// G_d plus w_j (identifier offset + 3d + j) attached to corner v_{dj}.
inline TriangleNetwork build_script_gd(std::size_t d, std::uint32_t offset = 0) {
  require_triangle_d(d);
  TriangleNetwork net = build_gd(d, offset);
  std::vector<NodeId> nodes = net.topology.nodes();
  std::vector<Edge> edges = net.topology.edges();
  std::array<NodeId, 3> w{};
  for (std::size_t j = 0; j < 3; ++j) {
    w[j] = NodeId{offset + static_cast<std::uint32_t>(3 * d + j)};
    nodes.push_back(w[j]);
    edges.emplace_back(net.layout.corner(j), w[j]);
  }
  net.layout.inputs = w;
  net.topology = Topology(std::move(nodes), std::move(edges));
  return net;
}

}  // namespace qlocal::net
