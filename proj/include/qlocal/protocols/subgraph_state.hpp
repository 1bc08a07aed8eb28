#pragma once

#include <map>
#include <memory>

#include "qlocal/net/engine.hpp"

namespace qlocal::protocols {

using net::Bytes;
using net::Inbox;
using net::LocalView;
using net::NodeContext;
using net::NodeId;
using net::NodeOutput;
using net::Outbox;
using net::QubitId;

inline constexpr std::size_t kSubgraphRounds = 2;

// Two-round construction of the graph state of the subgraph induced by the
// nodes with c = 1. Each node keeps one qubit Q; after round 2 the Q qubits of
// the marked nodes hold the induced graph state and every unmarked Q is |+>.
//
// Derived classes may append bytes to the round-0 payload and act on Q once
// the construction has finished.
template <class Derived>
class SubgraphStateBase : public net::Program<Derived> {
 public:
  explicit SubgraphStateBase(bool c) : c_(c) {}

  void init(const LocalView& view, const std::optional<Bytes>&, net::RandomTape, NodeContext&) override {
    view_ = view;
  }

  Outbox round(std::size_t t, const Inbox& inbox, NodeContext& ctx) override {
    Outbox out;
    if (t == 0) {
      q_ = ctx.allocate();
      ctx.apply(quantum::gates::h(q_));
      for (NodeId v : view_.neighbors) {
        const QubitId r = ctx.allocate();
        ctx.apply(quantum::gates::cnot(q_, r));
        sent_[v] = r;
        Bytes payload{static_cast<std::uint8_t>(c_)};
        const Bytes extra = round0_extra();
        payload.insert(payload.end(), extra.begin(), extra.end());
        out[v] = {std::move(payload), {r}};
      }
    } else if (t == 1) {
      for (NodeId v : view_.neighbors) {
        const net::Message& m = inbox.at(v);
        if (m.payload.empty() || m.qubits.size() != 1)
          throw ProtocolError(to_string(view_.self) + " expected a register and a bit from " + to_string(v));
        received_[v] = m.payload;
        const QubitId r = m.qubits[0];
        if (c_ && m.payload[0] != 0) ctx.apply(quantum::gates::cs(q_, r));
        out[v] = {{}, {r}};
      }
    } else if (t == 2) {
      for (NodeId v : view_.neighbors) {
        const net::Message& m = inbox.at(v);
        if (m.qubits.size() != 1 || m.qubits[0] != sent_.at(v))
          throw ProtocolError(to_string(view_.self) + " did not get its register back from " + to_string(v));
        ctx.apply(quantum::gates::cnot(q_, m.qubits[0]));
        ctx.dispose(m.qubits[0]);
      }
      done_ = true;
      after_construction(ctx);
    }
    return out;
  }

  NodeOutput finalize(NodeContext&) override {
    require_done();
    return {};
  }

 protected:
  virtual Bytes round0_extra() const { return {}; }
  virtual void after_construction(NodeContext&) {}

  void require_done() const {
    if (!done_) throw ProtocolError("subgraph state construction needs 2 rounds");
  }

  bool c_;
  LocalView view_;
  QubitId q_{};
  std::map<NodeId, QubitId> sent_;
  std::map<NodeId, Bytes> received_;  // round-0 payloads by sender
  bool done_ = false;
};

class SubgraphStateProgram final : public SubgraphStateBase<SubgraphStateProgram> {
 public:
  using SubgraphStateBase::SubgraphStateBase;
};

// One program per node; nodes missing from `c` get c = 0.
inline net::ProgramSet subgraph_state_programs(const net::Topology& g, const std::map<NodeId, bool>& c) {
  net::ProgramSet programs;
  for (NodeId n : g.nodes()) {
    auto it = c.find(n);
    programs[n] = std::make_shared<SubgraphStateProgram>(it != c.end() && it->second);
  }
  return programs;
}

// Q qubit of every node after a run (the only qubit each node still holds).
inline std::map<NodeId, QubitId> register_of(const net::QuantumArena& arena, const net::Topology& g) {
  std::map<NodeId, QubitId> out;
  for (NodeId n : g.nodes()) {
    const auto owned = arena.owned_by(n);
    if (owned.size() != 1) throw ProtocolError(to_string(n) + " holds " + std::to_string(owned.size()) + " qubits");
    out[n] = owned[0];
  }
  return out;
}

}  // namespace qlocal::protocols
