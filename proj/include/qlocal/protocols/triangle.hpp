#pragma once

#include <map>
#include <memory>

#include "qlocal/core/bits.hpp"
#include "qlocal/net/triangle.hpp"
#include "qlocal/protocols/process.hpp"
#include "qlocal/protocols/subgraph_state.hpp"

namespace qlocal::protocols {

// Node program of the two-round triangle protocol. Input nodes (degree 1)
// hold a bit b, take part in the register exchange unmarked and forward b;
// ring nodes build the ring graph state, corners apply S^b, and every ring
// node measures in the X basis. With `draw_input`, input nodes take b from
// their random tape and output it.
class TriangleProgram final : public SubgraphStateBase<TriangleProgram> {
 public:
  explicit TriangleProgram(bool draw_input) : SubgraphStateBase(false), draw_input_(draw_input) {}

  std::size_t randomness_bits(const LocalView& view) const override {
    return draw_input_ && net::role_of(view) == net::Role::input_node ? 1 : 0;
  }

  void init(const LocalView& view, const std::optional<Bytes>& input, net::RandomTape tape,
            NodeContext& ctx) override {
    SubgraphStateBase::init(view, input, tape, ctx);
    role_ = net::role_of(view);
    c_ = role_ != net::Role::input_node;
    if (role_ != net::Role::input_node) return;
    if (draw_input_) {
      b_ = tape.next_bit();
    } else {
      if (!input || input->size() != 1 || (*input)[0] > 1)
        throw ArgumentError(to_string(view.self) + " needs a single input bit");
      b_ = (*input)[0] != 0;
    }
  }

  NodeOutput finalize(NodeContext&) override {
    require_done();
    if (role_ == net::Role::input_node) return {draw_input_ ? Bytes{static_cast<std::uint8_t>(b_)} : Bytes{}, {}};
    return {{}, {q_}};
  }

 protected:
  Bytes round0_extra() const override {
    if (role_ == net::Role::input_node) return {static_cast<std::uint8_t>(b_)};
    return {};
  }

  void after_construction(NodeContext& ctx) override {
    if (role_ == net::Role::input_node) return;
    if (role_ == net::Role::corner) {
      std::optional<bool> b;
      for (const auto& [v, payload] : received_)
        if (payload.size() == 2) b = payload[1] != 0;
      if (!b) throw ProtocolError(to_string(view_.self) + " received no input bit");
      ctx.apply(quantum::gates::s_power(q_, *b));
    }
    ctx.apply(quantum::gates::h(q_));
  }

 private:
  bool draw_input_;
  net::Role role_ = net::Role::side;
  bool b_ = false;
};

inline net::ProgramSet triangle_programs(const net::Topology& g, bool draw_input) {
  auto p = std::make_shared<TriangleProgram>(draw_input);
  net::ProgramSet programs;
  for (NodeId n : g.nodes()) programs[n] = p;
  return programs;
}

// Relation protocol: input nodes are given b through `relation_inputs`.
inline net::ProgramSet relation_protocol_programs(const net::Topology& g) { return triangle_programs(g, false); }

// Sampling protocol: input nodes draw b themselves and output it.
inline net::ProgramSet sampling_protocol_programs(const net::Topology& g) { return triangle_programs(g, true); }

inline std::map<NodeId, Bytes> relation_inputs(const net::TriangleLayout& layout, TriangleInput in) {
  std::map<NodeId, Bytes> inputs;
  for (std::size_t i = 0; i < 3; ++i) inputs[layout.w(i)] = {static_cast<std::uint8_t>(in.b[i])};
  return inputs;
}

inline std::uint8_t single_bit(const std::map<NodeId, Bytes>& outputs, NodeId n) {
  const Bytes& out = outputs.at(n);
  if (out.size() != 1 || out[0] > 1) throw ProtocolError(to_string(n) + " did not output a single bit");
  return out[0];
}

// Ring outputs packed as x (bit i = v_i).
inline std::uint64_t ring_record(const net::TriangleLayout& layout, const std::map<NodeId, Bytes>& outputs) {
  std::uint64_t x = 0;
  for (std::size_t i = 0; i < layout.ring_size(); ++i)
    x |= std::uint64_t{single_bit(outputs, layout.v(i))} << i;
  return x;
}

// Sample record schema b0,b1,b2,x0..: bits 0-2 are b, bit 3+i is v_i.
inline Schema sample_schema(std::size_t d) {
  Schema s{"b0", "b1", "b2"};
  for (const auto& x : ring_schema(d)) s.push_back(x);
  return s;
}

inline std::uint64_t sample_record(const net::TriangleLayout& layout, const std::map<NodeId, Bytes>& outputs) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < 3; ++i) key |= std::uint64_t{single_bit(outputs, layout.w(i))} << i;
  return key | ring_record(layout, outputs) << 3;
}

inline std::uint64_t run_relation(const net::TriangleNetwork& net, TriangleInput in, std::uint64_t seed) {
  net::RunOptions opt;
  opt.rounds = kSubgraphRounds;
  opt.seed = seed;
  opt.inputs = relation_inputs(net.layout, in);
  const auto result = net::run(net.topology, relation_protocol_programs(net.topology), opt);
  return ring_record(net.layout, result.outputs);
}

inline std::uint64_t run_sampling(const net::TriangleNetwork& net, std::uint64_t seed) {
  net::RunOptions opt;
  opt.rounds = kSubgraphRounds;
  opt.seed = seed;
  const auto result = net::run(net.topology, sampling_protocol_programs(net.topology), opt);
  return sample_record(net.layout, result.outputs);
}

}  // namespace qlocal::protocols
