#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <memory>

#include "qlocal/net/engine.hpp"

namespace qlocal::protocols {

using InputRestriction = std::map<NodeId, Bytes>;
using NodeLaw = std::map<Bytes, double>;

// Output law of node u given the inputs of its T-neighborhood.
using OutputOracle = std::function<NodeLaw(NodeId u, const InputRestriction& restriction)>;

namespace detail {

inline void put_u32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline std::uint32_t get_u32(const Bytes& in, std::size_t& pos) {
  if (pos + 4 > in.size()) throw ProtocolError("truncated flooding message");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{in[pos++]} << (8 * i);
  return v;
}

inline Bytes encode_inputs(const InputRestriction& known) {
  Bytes out;
  put_u32(out, static_cast<std::uint32_t>(known.size()));
  for (const auto& [n, bytes] : known) {
    put_u32(out, n.value);
    put_u32(out, static_cast<std::uint32_t>(bytes.size()));
    out.insert(out.end(), bytes.begin(), bytes.end());
  }
  return out;
}

inline void decode_inputs(const Bytes& in, InputRestriction& known) {
  std::size_t pos = 0;
  const std::uint32_t count = get_u32(in, pos);
  for (std::uint32_t k = 0; k < count; ++k) {
    const NodeId n{get_u32(in, pos)};
    const std::uint32_t len = get_u32(in, pos);
    if (pos + len > in.size()) throw ProtocolError("truncated flooding message");
    known.emplace(n, Bytes(in.begin() + static_cast<std::ptrdiff_t>(pos), in.begin() + static_cast<std::ptrdiff_t>(pos + len)));
    pos += len;
  }
}

}  // namespace detail

// Full-information flooding: after T rounds a node knows the input of every
// node within distance T (nodes without input are simply absent).
template <class Derived>
class FloodingBase : public net::Program<Derived> {
 public:
  explicit FloodingBase(std::size_t rounds) : rounds_(rounds) {}

  void init(const LocalView& view, const std::optional<Bytes>& input, net::RandomTape tape, NodeContext&) override {
    view_ = view;
    tape_ = std::move(tape);
    if (input) known_[view.self] = *input;
  }

  Outbox round(std::size_t t, const Inbox& inbox, NodeContext&) override {
    for (const auto& [v, m] : inbox) detail::decode_inputs(m.payload, known_);
    Outbox out;
    if (t < rounds_) {
      const Bytes payload = detail::encode_inputs(known_);
      for (NodeId v : view_.neighbors) out[v] = {payload, {}};
    }
    return out;
  }

 protected:
  std::size_t rounds_;
  LocalView view_;
  net::RandomTape tape_;
  InputRestriction known_;
};

// Deterministic program: flood, then output the most likely value.
class DerandomizedProgram final : public FloodingBase<DerandomizedProgram> {
 public:
  DerandomizedProgram(std::size_t rounds, std::shared_ptr<const OutputOracle> oracle)
      : FloodingBase(rounds), oracle_(std::move(oracle)) {}

  NodeOutput finalize(NodeContext&) override {
    const NodeLaw law = (*oracle_)(view_.self, known_);
    if (law.empty()) throw ProtocolError("oracle returned an empty law for " + to_string(view_.self));
    const Bytes* best = nullptr;
    double p_best = -1.0;
    bool tie = false;
    for (const auto& [value, p] : law) {
      if (p > p_best + 1e-12) {
        best = &value;
        p_best = p;
        tie = false;
      } else if (std::abs(p - p_best) <= 1e-12) {
        tie = true;
      }
    }
    if (tie) throw ProtocolError("oracle law at " + to_string(view_.self) + " has no unique most likely output");
    return {*best, {}};
  }

 private:
  std::shared_ptr<const OutputOracle> oracle_;
};

inline net::ProgramSet derandomize_function_protocol(const net::Topology& g, OutputOracle oracle, std::size_t T) {
  auto shared = std::make_shared<const OutputOracle>(std::move(oracle));
  auto p = std::make_shared<DerandomizedProgram>(T, shared);
  net::ProgramSet programs;
  for (NodeId n : g.nodes()) programs[n] = p;
  return programs;
}

// Oracle backed by the exact law of a T-round reference protocol. Inputs of
// nodes outside the restriction are set to `filler`; locality makes the
// answer independent of that choice.
inline OutputOracle oracle_from_protocol(const net::Topology& g, net::ProgramSet programs, net::RunOptions base,
                                         Bytes filler) {
  auto cache = std::make_shared<std::map<std::pair<NodeId, InputRestriction>, NodeLaw>>();
  return [g, programs = std::move(programs), base = std::move(base), filler = std::move(filler), cache](
             NodeId u, const InputRestriction& restriction) -> NodeLaw {
    const auto key = std::make_pair(u, restriction);
    if (auto it = cache->find(key); it != cache->end()) return it->second;
    net::RunOptions opt = base;
    opt.inputs.clear();
    for (NodeId n : g.nodes()) {
      auto it = restriction.find(n);
      opt.inputs[n] = it != restriction.end() ? it->second : filler;
    }
    NodeLaw law;
    for (const auto& [record, p] : net::exact_law(g, programs, opt, {u})) law[record[0]] += p;
    cache->emplace(key, law);
    return law;
  };
}

// Reference protocol for tests and demos: flood single-byte inputs, output the
// XOR of everything known, flipped with probability 1/4.
class NoisyXorProgram final : public FloodingBase<NoisyXorProgram> {
 public:
  using FloodingBase::FloodingBase;
  std::size_t randomness_bits(const LocalView&) const override { return 2; }

  NodeOutput finalize(NodeContext&) override {
    std::uint8_t x = 0;
    for (const auto& [n, bytes] : known_)
      for (std::uint8_t b : bytes) x ^= b;
    const bool flip = tape_.next_bit() & tape_.next_bit();
    return {{static_cast<std::uint8_t>(x ^ flip)}, {}};
  }
};

}  // namespace qlocal::protocols
