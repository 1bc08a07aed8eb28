#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>

#include "qlocal/net/engine.hpp"
#include "qlocal/net/triangle.hpp"
#include "qlocal/protocols/triangle.hpp"
#include "qlocal/verify/parity.hpp"

namespace qlocal::protocols {

// Affine parity functions:
//   e(b)       = e[0] ^ e[1] b0 ^ e[2] b1 ^ e[3] b2
//   r(b0, b1)  = r[0] ^ r[1] b0 ^ r[2] b1
//   bt(b1, b2) = bt[0] ^ bt[1] b1 ^ bt[2] b2
//   l(b0, b2)  = l[0] ^ l[1] b0 ^ l[2] b2
struct AffineStrategy {
  std::array<bool, 4> e{};
  std::array<bool, 3> r{};
  std::array<bool, 3> bt{};
  std::array<bool, 3> l{};

  static constexpr unsigned kCount = 1U << 13;

  // Bits 0-3 e, 4-6 r, 7-9 bt, 10-12 l.
  static AffineStrategy from_index(unsigned k) {
    if (k >= kCount) throw ArgumentError("strategy index out of range");
    AffineStrategy s;
    for (unsigned i = 0; i < 4; ++i) s.e[i] = (k >> i) & 1U;
    for (unsigned i = 0; i < 3; ++i) {
      s.r[i] = (k >> (4 + i)) & 1U;
      s.bt[i] = (k >> (7 + i)) & 1U;
      s.l[i] = (k >> (10 + i)) & 1U;
    }
    return s;
  }

  unsigned index() const {
    unsigned k = 0;
    for (unsigned i = 0; i < 4; ++i) k |= unsigned(e[i]) << i;
    for (unsigned i = 0; i < 3; ++i) k |= unsigned(r[i]) << (4 + i) | unsigned(bt[i]) << (7 + i) | unsigned(l[i]) << (10 + i);
    return k;
  }

  std::size_t nonzero() const {
    std::size_t n = 0;
    for (bool c : e) n += c;
    for (bool c : r) n += c;
    for (bool c : bt) n += c;
    for (bool c : l) n += c;
    return n;
  }

  bool eval_e(TriangleInput in) const { return e[0] ^ (e[1] & in.b[0]) ^ (e[2] & in.b[1]) ^ (e[3] & in.b[2]); }
  bool eval_r(TriangleInput in) const { return r[0] ^ (r[1] & in.b[0]) ^ (r[2] & in.b[1]); }
  bool eval_b(TriangleInput in) const { return bt[0] ^ (bt[1] & in.b[1]) ^ (bt[2] & in.b[2]); }
  bool eval_l(TriangleInput in) const { return l[0] ^ (l[1] & in.b[0]) ^ (l[2] & in.b[2]); }

  verify::ParityTuple realized(TriangleInput in) const { return {eval_e(in), eval_r(in), eval_b(in), eval_l(in)}; }

  // r ^ bt ^ l vanishes on every input.
  bool admissible() const {
    for (const auto& in : all_inputs())
      if (eval_r(in) ^ eval_b(in) ^ eval_l(in)) return false;
    return true;
  }

  std::string to_string() const {
    auto bits = [](const auto& a) {
      std::string s;
      for (bool c : a) s.push_back(c ? '1' : '0');
      return s;
    };
    return "e=" + bits(e) + " r=" + bits(r) + " b=" + bits(bt) + " l=" + bits(l);
  }

  friend bool operator==(const AffineStrategy&, const AffineStrategy&) = default;
};

// Output of one ring node: constant ^ XOR of the input bits it uses.
struct AffineTerm {
  bool constant = false;
  std::array<bool, 3> uses{};

  AffineTerm& operator^=(const AffineTerm& o) {
    constant ^= o.constant;
    for (std::size_t i = 0; i < 3; ++i) uses[i] ^= o.uses[i];
    return *this;
  }
  bool zero() const { return !constant && !uses[0] && !uses[1] && !uses[2]; }
};

// Ring label -> term. Each side's terms sit at its two odd ends, each term
// next to the corner whose bit it uses; e's terms sit on the corners.
inline std::map<std::size_t, AffineTerm> affine_placement(std::size_t d, const AffineStrategy& s) {
  net::require_triangle_d(d);
  std::map<std::size_t, AffineTerm> terms;
  auto put = [&](std::size_t label, bool constant, int input, bool coeff) {
    AffineTerm t;
    t.constant = constant;
    if (input >= 0) t.uses[static_cast<std::size_t>(input)] = coeff;
    terms[label] ^= t;
  };
  const std::size_t n = 3 * d;
  put(0, s.e[0], 0, s.e[1]);
  put(d, false, 1, s.e[2]);
  put(2 * d, false, 2, s.e[3]);
  put(1, s.r[0], 0, s.r[1]);
  put(d - 1, false, 1, s.r[2]);
  put(d + 1, s.bt[0], 1, s.bt[1]);
  put(2 * d - 1, false, 2, s.bt[2]);
  put(n - 1, s.l[0], 0, s.l[1]);
  put(2 * d + 1, false, 2, s.l[2]);
  std::erase_if(terms, [](const auto& kv) { return kv.second.zero(); });
  return terms;
}

// Classical program: input bits are flooded for T rounds; a ring node then
// outputs its term, or 0 when it carries none. Input nodes output nothing.
class AffineStrategyProgram final : public net::Program<AffineStrategyProgram> {
 public:
  AffineStrategyProgram(std::size_t rounds, std::optional<std::size_t> input_index, AffineTerm term)
      : rounds_(rounds), input_index_(input_index), term_(term) {}

  void init(const LocalView& view, const std::optional<Bytes>& input, net::RandomTape, NodeContext&) override {
    view_ = view;
    if (input_index_) {
      if (!input || input->size() != 1 || (*input)[0] > 1)
        throw ArgumentError(to_string(view.self) + " needs a single input bit");
      known_ |= 1U << *input_index_;
      values_ |= unsigned((*input)[0]) << *input_index_;
    }
  }

  Outbox round(std::size_t t, const Inbox& inbox, NodeContext&) override {
    for (const auto& [v, m] : inbox) {
      if (m.payload.size() != 2) continue;
      known_ |= m.payload[0];
      values_ |= m.payload[1];
    }
    Outbox out;
    if (t < rounds_)
      for (NodeId v : view_.neighbors)
        out[v] = {{static_cast<std::uint8_t>(known_), static_cast<std::uint8_t>(values_)}, {}};
    return out;
  }

  NodeOutput finalize(NodeContext&) override {
    if (input_index_) return {};
    bool x = term_.constant;
    for (unsigned i = 0; i < 3; ++i) {
      if (!term_.uses[i]) continue;
      if (!((known_ >> i) & 1U)) throw ProtocolError(to_string(view_.self) + " never learned input " + std::to_string(i));
      x ^= (values_ >> i) & 1U;
    }
    return {{static_cast<std::uint8_t>(x)}, {}};
  }

 private:
  std::size_t rounds_;
  std::optional<std::size_t> input_index_;
  AffineTerm term_;
  LocalView view_;
  unsigned known_ = 0;
  unsigned values_ = 0;
};

// Programs realizing s in T rounds on a triangle network (with input nodes).
inline net::ProgramSet affine_strategy_programs(const net::Topology& g, const net::TriangleLayout& layout,
                                                const AffineStrategy& s, std::size_t T) {
  const std::size_t d = layout.d;
  if (T > d / 2) throw ArgumentError("T = " + std::to_string(T) + " exceeds d/2 = " + std::to_string(d / 2));
  if (!s.admissible()) throw ArgumentError("strategy " + s.to_string() + " is not admissible");
  const auto terms = affine_placement(d, s);
  net::ProgramSet programs;
  for (std::size_t i = 0; i < 3; ++i)
    programs[layout.w(i)] = std::make_shared<AffineStrategyProgram>(T, i, AffineTerm{});
  for (std::size_t label = 0; label < layout.ring_size(); ++label) {
    AffineTerm term;
    if (auto it = terms.find(label); it != terms.end()) term = it->second;
    for (std::size_t i = 0; i < 3; ++i)
      if (term.uses[i] && net::distance(g, layout.v(label), layout.w(i)) > T)
        throw ArgumentError("strategy " + s.to_string() + " needs input " + std::to_string(i) + " at v" +
                            std::to_string(label) + ", which is not reachable in " + std::to_string(T) + " rounds");
    programs[layout.v(label)] = std::make_shared<AffineStrategyProgram>(T, std::nullopt, term);
  }
  return programs;
}

inline net::ProgramSet affine_strategy_programs(const net::TriangleNetwork& net, const AffineStrategy& s,
                                                std::size_t T) {
  return affine_strategy_programs(net.topology, net.layout, s, T);
}

// Smallest number of rounds in which affine_strategy_programs can realize s.
inline std::size_t affine_rounds_needed(std::size_t d, const AffineStrategy& s) {
  std::size_t need = 0;
  for (const auto& [label, term] : affine_placement(d, s)) {
    for (std::size_t i = 0; i < 3; ++i) {
      if (!term.uses[i]) continue;
      const std::size_t corner = d * i;
      const std::size_t n = 3 * d;
      const std::size_t gap = std::min((label + n - corner) % n, (corner + n - label) % n);
      need = std::max(need, gap + 1);
    }
  }
  return need;
}

inline std::uint64_t run_affine(const net::TriangleNetwork& net, const AffineStrategy& s, std::size_t T,
                                TriangleInput in) {
  net::RunOptions opt;
  opt.rounds = T;
  opt.model = net::Model::classical;
  opt.inputs = relation_inputs(net.layout, in);
  const auto result = net::run(net.topology, affine_strategy_programs(net, s, T), opt);
  return ring_record(net.layout, result.outputs);
}

// Every ring node outputs one fresh uniform bit; input nodes output nothing.
class RandomGuessProgram final : public net::Program<RandomGuessProgram> {
 public:
  std::size_t randomness_bits(const LocalView& view) const override { return view.degree() == 1 ? 0 : 1; }
  void init(const LocalView& view, const std::optional<Bytes>&, net::RandomTape tape, NodeContext&) override {
    if (view.degree() != 1) bit_ = tape.next_bit();
    input_ = view.degree() == 1;
  }
  Outbox round(std::size_t, const Inbox&, NodeContext&) override { return {}; }
  NodeOutput finalize(NodeContext&) override {
    if (input_) return {};
    return {{static_cast<std::uint8_t>(bit_)}, {}};
  }

 private:
  bool bit_ = false;
  bool input_ = false;
};

inline net::ProgramSet random_guess_programs(const net::Topology& g) {
  auto p = std::make_shared<RandomGuessProgram>();
  net::ProgramSet programs;
  for (NodeId n : g.nodes()) programs[n] = p;
  return programs;
}

}  // namespace qlocal::protocols
