#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlocal/core/errors.hpp"
#include "qlocal/core/random.hpp"
#include "qlocal/net/arena.hpp"
#include "qlocal/net/topology.hpp"

namespace qlocal::net {

using Bytes = std::vector<std::uint8_t>;

// Everything a node may know about the network.
struct LocalView {
  NodeId self;
  std::vector<NodeId> neighbors;  // ascending
  std::size_t num_nodes = 0;

  std::size_t degree() const { return neighbors.size(); }
  bool is_neighbor(NodeId n) const { return std::binary_search(neighbors.begin(), neighbors.end(), n); }
};

struct Message {
  Bytes payload;
  std::vector<QubitId> qubits;

  bool empty() const { return payload.empty() && qubits.empty(); }
};

using Inbox = std::map<NodeId, Message>;
using Outbox = std::map<NodeId, Message>;

// Finite random string handed to a node at init; read sequentially.
class RandomTape {
 public:
  RandomTape() = default;
  explicit RandomTape(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

  std::size_t size() const { return bits_.size(); }
  std::size_t remaining() const { return bits_.size() - cursor_; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  bool next_bit() {
    if (cursor_ >= bits_.size()) throw ProtocolError("random tape exhausted");
    return bits_[cursor_++] != 0;
  }

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t cursor_ = 0;
};

// Output of one node: classical bytes, then one byte (0 or 1) per qubit in
// `measure`, filled in by the final joint measurement.
struct NodeOutput {
  Bytes data;
  std::vector<QubitId> measure;
};

enum class Model { classical, quantum };

class NodeContext {
 public:
  NodeContext(QuantumArena& arena, NodeId self, Model model) : arena_(&arena), self_(self), model_(model) {}

  NodeId self() const { return self_; }
  std::size_t round() const { return round_; }
  Model model() const { return model_; }

  QubitId allocate() {
    require_quantum("allocate a qubit");
    return arena_->allocate(self_);
  }

  void apply(const ArenaGate& g) {
    require_quantum("apply a gate");
    for (std::size_t k = 0; k < g.arity(); ++k) require_owned(g.targets[k], quantum::name(g.kind));
    arena_->apply(self_, g);
  }

  std::array<Amplitude, 2> dispose(QubitId q) {
    require_quantum("dispose a qubit");
    require_owned(q, "dispose");
    return arena_->dispose(self_, q);
  }

  bool owns(QubitId q) const { return arena_->is_live(q) && arena_->owner(q) == self_; }

  void set_round(std::size_t t) { round_ = t; }

  void require_owned(QubitId q, const std::string& what) const {
    if (!owns(q))
      throw LocalityViolation(to_string(self_) + " in round " + std::to_string(round_) + ": " + what + " on " +
                              quantum::to_string(q) + ", which it does not own");
  }

 private:
  void require_quantum(const char* what) const {
    if (model_ != Model::quantum)
      throw ModelViolation(to_string(self_) + " tried to " + what + " in a classical execution");
  }

  QuantumArena* arena_;
  NodeId self_;
  Model model_;
  std::size_t round_ = 0;
};

// A node's state machine. For a T-round execution, round() is called for
// t = 0..T; messages returned for t < T are delivered before the next call and
// the outbox of call T must be empty. The inbox is empty at t = 0 and later
// holds one entry per neighbor.
class NodeProgram {
 public:
  virtual ~NodeProgram() = default;
  virtual std::unique_ptr<NodeProgram> clone() const = 0;
  virtual std::size_t randomness_bits(const LocalView&) const { return 0; }
  virtual void init(const LocalView& view, const std::optional<Bytes>& input, RandomTape tape,
                    NodeContext& ctx) = 0;
  virtual Outbox round(std::size_t t, const Inbox& inbox, NodeContext& ctx) = 0;
  virtual NodeOutput finalize(NodeContext& ctx) = 0;
};

template <class Derived>
class Program : public NodeProgram {
 public:
  std::unique_ptr<NodeProgram> clone() const override {
    return std::make_unique<Derived>(static_cast<const Derived&>(*this));
  }
};

using ProgramSet = std::map<NodeId, std::shared_ptr<const NodeProgram>>;

struct RunOptions {
  std::size_t rounds = 0;
  std::uint64_t seed = 0;
  std::map<NodeId, Bytes> inputs;
  Model model = Model::quantum;
  ArenaLimits limits{};
};

struct MessageRecord {
  std::size_t round = 0;  // 1-based exchange round
  NodeId from;
  NodeId to;
  Bytes payload;
  std::vector<QubitId> qubits;
};

struct ExecutionTrace {
  std::size_t rounds = 0;
  std::vector<MessageRecord> messages;
  std::map<NodeId, Bytes> outputs;

  std::vector<MessageRecord> in_round(std::size_t r) const {
    std::vector<MessageRecord> out;
    for (const auto& m : messages)
      if (m.round == r) out.push_back(m);
    return out;
  }

  // One JSON object per line for every (round, edge, direction).
  void write_jsonl(std::ostream& os) const {
    for (const auto& m : messages) {
      nlohmann::json j;
      j["round"] = m.round;
      j["from"] = m.from.value;
      j["to"] = m.to.value;
      j["payload_bytes"] = m.payload.size();
      j["payload"] = m.payload;
      std::vector<std::uint64_t> qs;
      for (QubitId q : m.qubits) qs.push_back(q.value);
      j["qubits"] = qs;
      os << j.dump() << '\n';
    }
  }

  std::string to_jsonl() const {
    std::ostringstream os;
    write_jsonl(os);
    return os.str();
  }
};

struct RunResult {
  std::map<NodeId, Bytes> outputs;
  ExecutionTrace trace;
  QuantumArena arena;
};

namespace detail {

struct Executed {
  std::map<NodeId, NodeOutput> finals;
  ExecutionTrace trace;
  QuantumArena arena;
};

inline void check_programs(const Topology& g, const ProgramSet& programs) {
  for (NodeId n : g.nodes())
    if (!programs.count(n) || !programs.at(n)) throw ArgumentError("no program for " + to_string(n));
  for (const auto& [n, p] : programs)
    if (!g.contains(n)) throw ArgumentError("program given for unknown " + to_string(n));
}

inline LocalView view_of(const Topology& g, NodeId n) { return {n, g.neighbors(n), g.size()}; }

// Runs all rounds with explicitly supplied tapes; measurement is left to the caller.
inline Executed execute(const Topology& g, const ProgramSet& programs, const RunOptions& opt,
                        const std::map<NodeId, RandomTape>& tapes) {
  Executed ex{{}, {}, QuantumArena(opt.limits)};
  ex.trace.rounds = opt.rounds;
  std::map<NodeId, std::unique_ptr<NodeProgram>> live;
  std::map<NodeId, NodeContext> ctx;
  for (NodeId n : g.nodes()) {
    live.emplace(n, programs.at(n)->clone());
    ctx.emplace(n, NodeContext(ex.arena, n, opt.model));
  }
  for (const auto& [n, in] : opt.inputs)
    if (!g.contains(n)) throw ArgumentError("input given for unknown " + to_string(n));
  for (NodeId n : g.nodes()) {
    std::optional<Bytes> input;
    if (auto it = opt.inputs.find(n); it != opt.inputs.end()) input = it->second;
    live.at(n)->init(view_of(g, n), input, tapes.at(n), ctx.at(n));
  }

  std::map<NodeId, Inbox> inboxes;
  for (std::size_t t = 0; t <= opt.rounds; ++t) {
    std::map<NodeId, Outbox> outboxes;
    for (NodeId n : g.nodes()) {
      NodeContext& c = ctx.at(n);
      c.set_round(t);
      Outbox out = live.at(n)->round(t, inboxes[n], c);
      for (const auto& [to, msg] : out) {
        if (!std::binary_search(g.neighbors(n).begin(), g.neighbors(n).end(), to))
          throw ProtocolError(to_string(n) + " sent a message to non-neighbor " + to_string(to) + " in round " +
                              std::to_string(t));
        if (t == opt.rounds && !msg.empty())
          throw ProtocolError(to_string(n) + " sent a message after the last round");
        if (opt.model == Model::classical && !msg.qubits.empty())
          throw ModelViolation(to_string(n) + " sent qubits in a classical execution");
      }
      outboxes.emplace(n, std::move(out));
    }
    if (t == opt.rounds) break;

    std::set<QubitId> moving;
    for (const auto& [from, out] : outboxes) {
      for (const auto& [to, msg] : out)
        for (QubitId q : msg.qubits) {
          ctx.at(from).require_owned(q, "send");
          if (!moving.insert(q).second)
            throw ProtocolError(to_string(from) + " sent " + quantum::to_string(q) + " twice in round " +
                                std::to_string(t));
        }
    }
    inboxes.clear();
    for (NodeId from : g.nodes()) {
      for (NodeId to : g.neighbors(from)) {
        Message msg;
        auto& out = outboxes.at(from);
        if (auto it = out.find(to); it != out.end()) msg = std::move(it->second);
        for (QubitId q : msg.qubits) ex.arena.transfer(q, from, to);
        ex.trace.messages.push_back({t + 1, from, to, msg.payload, msg.qubits});
        inboxes[to][from] = std::move(msg);
      }
    }
  }

  for (NodeId n : g.nodes()) {
    NodeContext& c = ctx.at(n);
    NodeOutput out = live.at(n)->finalize(c);
    std::set<QubitId> seen;
    for (QubitId q : out.measure) {
      if (opt.model == Model::classical) throw ModelViolation(to_string(n) + " measured a qubit classically");
      c.require_owned(q, "measure");
      if (!seen.insert(q).second) throw ProtocolError(to_string(n) + " measured " + quantum::to_string(q) + " twice");
    }
    ex.finals.emplace(n, std::move(out));
  }
  return ex;
}

inline std::map<NodeId, std::size_t> tape_sizes(const Topology& g, const ProgramSet& programs) {
  std::map<NodeId, std::size_t> sizes;
  for (NodeId n : g.nodes()) sizes.emplace(n, programs.at(n)->randomness_bits(view_of(g, n)));
  return sizes;
}

// Bit j of node n's tape is the top bit of derive_seed(node seed, j).
inline std::map<NodeId, RandomTape> draw_tapes(const std::map<NodeId, std::size_t>& sizes, std::uint64_t seed) {
  std::map<NodeId, RandomTape> tapes;
  for (const auto& [n, size] : sizes) {
    const std::uint64_t node_seed = derive_seed(seed, streams::node_base + n.value);
    std::vector<std::uint8_t> bits(size);
    for (std::size_t j = 0; j < size; ++j) bits[j] = static_cast<std::uint8_t>(derive_seed(node_seed, j) >> 63);
    tapes.emplace_hint(tapes.end(), n, RandomTape(std::move(bits)));
  }
  return tapes;
}

}  // namespace detail

namespace detail {

struct Prepared {
  std::map<NodeId, NodeOutput> finals;
  ExecutionTrace trace;
  QuantumArena::Sampler sampler;
};

inline Prepared prepare(Executed&& ex) {
  std::vector<QubitId> measured;
  for (const auto& [n, out] : ex.finals) measured.insert(measured.end(), out.measure.begin(), out.measure.end());
  return {std::move(ex.finals), std::move(ex.trace), ex.arena.sampler(measured)};
}

inline std::map<NodeId, Bytes> measure_outputs(const Prepared& p, std::uint64_t seed) {
  Rng rng(derive_seed(seed, streams::measurement));
  const auto bits = p.sampler.draw(rng);
  std::map<NodeId, Bytes> outputs;
  std::size_t k = 0;
  for (const auto& [n, out] : p.finals) {
    Bytes data = out.data;
    for (std::size_t i = 0; i < out.measure.size(); ++i) data.push_back(bits[k++]);
    outputs.emplace(n, std::move(data));
  }
  return outputs;
}

}  // namespace detail

// Executes `rounds` synchronous rounds and a final joint measurement of every
// qubit the nodes declare in their outputs.
inline RunResult run(const Topology& g, const ProgramSet& programs, const RunOptions& opt) {
  detail::check_programs(g, programs);
  auto ex = detail::execute(g, programs, opt, detail::draw_tapes(detail::tape_sizes(g, programs), opt.seed));
  QuantumArena arena = ex.arena;
  auto prepared = detail::prepare(std::move(ex));
  RunResult result{detail::measure_outputs(prepared, opt.seed), std::move(prepared.trace), std::move(arena)};
  result.trace.outputs = result.outputs;
  return result;
}

// Seed of shot s in a batch started from `seed`.
inline std::uint64_t shot_seed(std::uint64_t seed, std::size_t s) { return derive_seed(seed, streams::shot_base + s); }

struct ShotBatch {
  std::vector<std::map<NodeId, Bytes>> outputs;
  std::size_t executions = 0;  // distinct protocol executions simulated
};

// Calls visit(s, outputs) for shots s = 0..shots-1, where shot s has exactly
// the outputs of run() with seed shot_seed(opt.seed, s). Executions are shared
// between shots whose random tapes coincide, since the measured state depends
// on nothing else. Returns the number of distinct executions simulated.
template <class Visit>
std::size_t for_each_shot(const Topology& g, const ProgramSet& programs, const RunOptions& opt, std::size_t shots,
                          Visit&& visit, std::size_t cache_limit = 64) {
  detail::check_programs(g, programs);
  std::size_t executions = 0;
  const auto sizes = detail::tape_sizes(g, programs);
  std::map<std::vector<std::uint8_t>, detail::Prepared> cache;
  for (std::size_t s = 0; s < shots; ++s) {
    const std::uint64_t seed = shot_seed(opt.seed, s);
    const auto tapes = detail::draw_tapes(sizes, seed);
    std::vector<std::uint8_t> key;
    for (const auto& [n, tape] : tapes) key.insert(key.end(), tape.bits().begin(), tape.bits().end());
    auto it = cache.find(key);
    if (it == cache.end()) {
      ++executions;
      auto prepared = detail::prepare(detail::execute(g, programs, opt, tapes));
      if (cache.size() >= cache_limit) {
        visit(s, detail::measure_outputs(prepared, seed));
        continue;
      }
      it = cache.emplace(std::move(key), std::move(prepared)).first;
    }
    visit(s, detail::measure_outputs(it->second, seed));
  }
  return executions;
}

inline ShotBatch run_shots(const Topology& g, const ProgramSet& programs, const RunOptions& opt, std::size_t shots,
                           std::size_t cache_limit = 64) {
  ShotBatch batch;
  batch.outputs.reserve(shots);
  batch.executions = for_each_shot(
      g, programs, opt, shots,
      [&](std::size_t, std::map<NodeId, Bytes>&& outputs) { batch.outputs.push_back(std::move(outputs)); },
      cache_limit);
  return batch;
}

inline constexpr std::size_t kMaxEnumeratedRandomBits = 24;

using OutputLaw = std::map<std::vector<Bytes>, double>;

// Exact joint law of the outputs of `observed` (in the listed order), over all
// random tapes and all measurement outcomes.
inline OutputLaw exact_law(const Topology& g, const ProgramSet& programs, RunOptions opt,
                           const std::vector<NodeId>& observed) {
  detail::check_programs(g, programs);
  for (NodeId n : observed)
    if (!g.contains(n)) throw ArgumentError("cannot observe unknown " + to_string(n));
  std::size_t total = 0;
  for (NodeId n : g.nodes()) total += programs.at(n)->randomness_bits(detail::view_of(g, n));
  if (total > kMaxEnumeratedRandomBits)
    throw ResourceError("exact law needs " + std::to_string(total) + " random bits; limit is " +
                        std::to_string(kMaxEnumeratedRandomBits));
  OutputLaw law;
  const double weight = 1.0 / static_cast<double>(std::uint64_t{1} << total);
  for (std::uint64_t assignment = 0; assignment < (std::uint64_t{1} << total); ++assignment) {
    std::map<NodeId, RandomTape> tapes;
    std::size_t used = 0;
    for (NodeId n : g.nodes()) {
      std::vector<std::uint8_t> bits(programs.at(n)->randomness_bits(detail::view_of(g, n)));
      for (auto& b : bits) b = static_cast<std::uint8_t>((assignment >> used++) & 1U);
      tapes.emplace(n, RandomTape(std::move(bits)));
    }
    auto ex = detail::execute(g, programs, opt, tapes);
    std::vector<QubitId> measured;
    for (NodeId n : observed) {
      const auto& m = ex.finals.at(n).measure;
      measured.insert(measured.end(), m.begin(), m.end());
    }
    const OutcomeDistribution outcomes = ex.arena.distribution(measured);
    for (const auto& [key, p] : outcomes.entries()) {
      std::vector<Bytes> record;
      std::size_t k = 0;
      for (NodeId n : observed) {
        const NodeOutput& out = ex.finals.at(n);
        Bytes data = out.data;
        for (std::size_t i = 0; i < out.measure.size(); ++i, ++k) data.push_back((key >> k) & 1U);
        record.push_back(std::move(data));
      }
      law[record] += weight * p;
    }
  }
  return law;
}

enum class Role { input_node, corner, side };

inline const char* name(Role r) {
  switch (r) {
    case Role::input_node: return "input-node";
    case Role::corner: return "corner";
    case Role::side: return "side";
  }
  return "?";
}

// Role in a triangle network, read off the node's degree.
inline Role role_of(const LocalView& view) {
  switch (view.degree()) {
    case 1: return Role::input_node;
    case 2: return Role::side;
    case 3: return Role::corner;
    default:
      throw TopologyError(to_string(view.self) + " has degree " + std::to_string(view.degree()) +
                          ", which does not occur in a triangle network");
  }
}

}  // namespace qlocal::net
