#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "qlocal/core/distribution.hpp"
#include "qlocal/core/errors.hpp"
#include "qlocal/core/random.hpp"
#include "qlocal/net/topology.hpp"
#include "qlocal/quantum/measurement.hpp"
#include "qlocal/quantum/sparse_state.hpp"
#include "qlocal/quantum/state_vector.hpp"

namespace qlocal::net {

using quantum::Amplitude;
using quantum::QubitId;
using ArenaGate = quantum::BasicGate<QubitId>;

struct ArenaLimits {
  // Factors up to this many qubits are stored densely.
  std::size_t dense_qubits = 16;
  // Sparse factors this narrow are densified once at least a quarter full.
  std::size_t densify_qubits = 24;
  std::size_t max_entries = quantum::kDefaultMaxEntries;
  std::size_t max_snapshot_qubits = quantum::kDefaultMaxQubits;
};

// The joint quantum state of a network plus the owner of every live qubit.
//
// The global state is kept as a tensor product of factors; a factor is
// created per allocated qubit and two factors merge when a two-qubit gate
// spans them. Factors are dense when narrow and sparse (nonzero amplitudes
// only) when wide, so protocols whose peak register count is far above the
// dense cap remain simulable. All observable behaviour (gates, disposal,
// sampling, exact laws, snapshots) is that of one global statevector.
class QuantumArena {
 public:
  explicit QuantumArena(ArenaLimits limits = {}) : limits_(limits) {}

  QubitId allocate(NodeId owner) {
    const QubitId q{next_qubit_++};
    const std::uint64_t f = next_factor_++;
    factors_.emplace(f, Factor{{q}, quantum::StateVector::zeros(1)});
    slots_.emplace(q, Slot{owner, f});
    return q;
  }

  bool is_live(QubitId q) const { return slots_.count(q) != 0; }

  NodeId owner(QubitId q) const { return slot(q).owner; }

  std::size_t num_live() const { return slots_.size(); }

  // Live qubits in creation order.
  std::vector<QubitId> live_qubits() const {
    std::vector<QubitId> out;
    for (const auto& [q, s] : slots_) out.push_back(q);
    return out;
  }

  std::vector<QubitId> owned_by(NodeId n) const {
    std::vector<QubitId> out;
    for (const auto& [q, s] : slots_)
      if (s.owner == n) out.push_back(q);
    return out;
  }

  // Applies g on behalf of `actor`, which must own every target.
  void apply(NodeId actor, const ArenaGate& g) {
    for (std::size_t k = 0; k < g.arity(); ++k) require_owner(actor, g.targets[k], quantum::name(g.kind));
    if (g.arity() == 2 && g.targets[0] == g.targets[1])
      throw ArgumentError(std::string(quantum::name(g.kind)) + " needs two distinct qubits");
    std::uint64_t f = slot(g.targets[0]).factor;
    if (g.arity() == 2 && slot(g.targets[1]).factor != f) f = merge(f, slot(g.targets[1]).factor);
    Factor& factor = factors_.at(f);
    const quantum::Gate local = g.map_targets<std::size_t>([&](QubitId q) { return position(factor, q); });
    std::visit(
        [&](auto& st) {
          if constexpr (std::is_same_v<std::decay_t<decltype(st)>, quantum::SparseState>)
            st.apply(local, limits_.max_entries);
          else
            st.apply(local);
        },
        factor.state);
    normalize(factor);
  }

  // Removes q after checking it is in a product state with everything else.
  // Returns the qubit's own state (up to global phase).
  std::array<Amplitude, 2> dispose(NodeId actor, QubitId q) {
    require_owner(actor, q, "dispose");
    const std::uint64_t f = slot(q).factor;
    Factor& factor = factors_.at(f);
    const std::size_t pos = position(factor, q);
    std::array<Amplitude, 2> single{};
    try {
      single = std::visit([&](auto& st) { return st.remove_qubit(pos); }, factor.state);
    } catch (const ProtocolError&) {
      throw ProtocolError(to_string(actor) + " tried to dispose " + quantum::to_string(q) +
                          ", which is entangled with other qubits");
    }
    factor.qubits.erase(factor.qubits.begin() + static_cast<std::ptrdiff_t>(pos));
    slots_.erase(q);
    if (factor.qubits.empty())
      factors_.erase(f);
    else
      normalize(factor);
    return single;
  }

  void transfer(QubitId q, NodeId from, NodeId to) {
    require_owner(from, q, "send");
    slots_.at(q).owner = to;
  }

  // Dense state of exactly the listed qubits, qubit k = order[k]. Qubits not
  // listed must be in a product state with the listed ones.
  quantum::StateVector snapshot(std::span<const QubitId> order) const {
    if (order.size() > limits_.max_snapshot_qubits)
      throw ResourceError("snapshot of " + std::to_string(order.size()) + " qubits exceeds the limit of " +
                          std::to_string(limits_.max_snapshot_qubits));
    std::vector<QubitId> wanted(order.begin(), order.end());
    std::sort(wanted.begin(), wanted.end());
    if (std::adjacent_find(wanted.begin(), wanted.end()) != wanted.end())
      throw ArgumentError("snapshot order lists a qubit twice");
    quantum::StateVector joint;
    std::vector<QubitId> joint_order;
    for (std::uint64_t f : factors_touching(order)) {
      Factor copy = factors_.at(f);
      for (std::size_t i = copy.qubits.size(); i-- > 0;) {
        if (std::binary_search(wanted.begin(), wanted.end(), copy.qubits[i])) continue;
        try {
          std::visit([&](auto& st) { st.remove_qubit(i); }, copy.state);
        } catch (const ProtocolError&) {
          throw ArgumentError("snapshot qubits are entangled with " + quantum::to_string(copy.qubits[i]));
        }
        copy.qubits.erase(copy.qubits.begin() + static_cast<std::ptrdiff_t>(i));
      }
      joint = joint.kron(dense_of(copy), limits_.max_snapshot_qubits);
      joint_order.insert(joint_order.end(), copy.qubits.begin(), copy.qubits.end());
    }
    std::vector<std::size_t> perm;
    for (QubitId q : order)
      perm.push_back(static_cast<std::size_t>(std::find(joint_order.begin(), joint_order.end(), q) -
                                              joint_order.begin()));
    return joint.permuted(perm);
  }

  // Precomputed sampler for repeated joint measurements of `qubits`.
  class Sampler {
   public:
    // Bit k of the result is the outcome for qubits[k].
    std::vector<std::uint8_t> draw(Rng& rng) const {
      std::vector<std::uint8_t> bits(width_, 0);
      for (const auto& part : parts_) {
        const std::size_t e = part.cdf.draw(rng.uniform());
        const std::uint64_t basis = part.keys.empty() ? e : part.keys[e];
        for (auto [pos, bit] : part.picks) bits[bit] = static_cast<std::uint8_t>((basis >> pos) & 1U);
      }
      return bits;
    }

   private:
    friend class QuantumArena;
    struct Part {
      quantum::CdfSampler cdf;
      std::vector<std::uint64_t> keys;  // empty for dense factors
      std::vector<std::pair<std::size_t, std::size_t>> picks;
    };
    std::size_t width_ = 0;
    std::vector<Part> parts_;
  };

  Sampler sampler(std::span<const QubitId> qubits) const {
    Sampler s;
    s.width_ = qubits.size();
    for (std::uint64_t f : factors_touching(qubits)) {
      const Factor& factor = factors_.at(f);
      Sampler::Part part;
      if (const auto* dense = std::get_if<quantum::StateVector>(&factor.state)) {
        part.cdf = quantum::CdfSampler(dense->amplitudes());
      } else {
        const auto& sp = std::get<quantum::SparseState>(factor.state);
        part.cdf = quantum::CdfSampler(sp.amps());
        part.keys = sp.keys();
      }
      for (std::size_t k = 0; k < qubits.size(); ++k)
        if (slot(qubits[k]).factor == f) part.picks.emplace_back(position(factor, qubits[k]), k);
      s.parts_.push_back(std::move(part));
    }
    return s;
  }

  // One joint computational-basis measurement of the listed qubits; returns
  // bit k for qubits[k]. The arena state is left untouched.
  std::vector<std::uint8_t> sample(std::span<const QubitId> qubits, Rng& rng) const {
    return sampler(qubits).draw(rng);
  }

  // Exact joint law of measuring the listed qubits; record bit k is qubits[k].
  OutcomeDistribution distribution(std::span<const QubitId> qubits) const {
    if (qubits.size() > kMaxRecordBits) throw ResourceError("cannot tabulate more than 64 measured qubits");
    Schema schema;
    for (QubitId q : qubits) schema.push_back(quantum::to_string(q));
    std::map<std::uint64_t, double> joint{{0, 1.0}};
    for (std::uint64_t f : factors_touching(qubits)) {
      const Factor& factor = factors_.at(f);
      // (local position, record bit) pairs for this factor.
      std::vector<std::pair<std::size_t, std::size_t>> picks;
      for (std::size_t k = 0; k < qubits.size(); ++k)
        if (slot(qubits[k]).factor == f) picks.emplace_back(position(factor, qubits[k]), k);
      std::unordered_map<std::uint64_t, double> marginal;
      auto project = [&](std::uint64_t basis, double p) {
        if (p == 0.0) return;
        std::uint64_t key = 0;
        for (auto [pos, bit] : picks) key |= ((basis >> pos) & 1U) << bit;
        marginal[key] += p;
      };
      if (const auto* dense = std::get_if<quantum::StateVector>(&factor.state)) {
        const auto amps = dense->amplitudes();
        for (std::size_t i = 0; i < amps.size(); ++i) project(i, std::norm(amps[i]));
      } else {
        const auto& sp = std::get<quantum::SparseState>(factor.state);
        for (std::size_t e = 0; e < sp.num_entries(); ++e) project(sp.keys()[e], std::norm(sp.amps()[e]));
      }
      std::map<std::uint64_t, double> next;
      for (const auto& [k1, p1] : joint)
        for (const auto& [k2, p2] : marginal) next[k1 | k2] += p1 * p2;
      joint = std::move(next);
    }
    OutcomeDistribution d(std::move(schema));
    for (const auto& [k, p] : joint) d.add(k, p);
    return d;
  }

  // Number of tensor factors currently tracked (diagnostic).
  std::size_t num_factors() const { return factors_.size(); }

 private:
  struct Factor {
    std::vector<QubitId> qubits;  // local position k holds qubits[k]
    std::variant<quantum::StateVector, quantum::SparseState> state;
  };
  struct Slot {
    NodeId owner;
    std::uint64_t factor;
  };

  const Slot& slot(QubitId q) const {
    auto it = slots_.find(q);
    if (it == slots_.end()) throw ArgumentError(quantum::to_string(q) + " is not a live qubit");
    return it->second;
  }

  void require_owner(NodeId actor, QubitId q, const char* what) const {
    const NodeId owner = slot(q).owner;
    if (owner != actor)
      throw LocalityViolation(to_string(actor) + " attempted " + what + " on " + quantum::to_string(q) +
                              ", which is owned by " + to_string(owner));
  }

  static std::size_t position(const Factor& f, QubitId q) {
    auto it = std::find(f.qubits.begin(), f.qubits.end(), q);
    return static_cast<std::size_t>(it - f.qubits.begin());
  }

  // Distinct factors holding the listed qubits, ascending factor id.
  std::vector<std::uint64_t> factors_touching(std::span<const QubitId> qubits) const {
    std::vector<std::uint64_t> ids;
    for (QubitId q : qubits) ids.push_back(slot(q).factor);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
  }

  quantum::StateVector dense_of(const Factor& f) const {
    if (const auto* d = std::get_if<quantum::StateVector>(&f.state)) return *d;
    return std::get<quantum::SparseState>(f.state).to_dense(limits_.max_snapshot_qubits);
  }

  static quantum::SparseState sparse_of(const Factor& f) {
    if (const auto* s = std::get_if<quantum::SparseState>(&f.state)) return *s;
    return quantum::SparseState::from_dense(std::get<quantum::StateVector>(f.state));
  }

  // Merges factor b into factor a; returns a.
  std::uint64_t merge(std::uint64_t a, std::uint64_t b) {
    Factor& fa = factors_.at(a);
    Factor& fb = factors_.at(b);
    const std::size_t width = fa.qubits.size() + fb.qubits.size();
    if (width <= limits_.dense_qubits && std::holds_alternative<quantum::StateVector>(fa.state) &&
        std::holds_alternative<quantum::StateVector>(fb.state)) {
      fa.state = std::get<quantum::StateVector>(fa.state).kron(std::get<quantum::StateVector>(fb.state), width);
    } else {
      fa.state = sparse_of(fa).kron(sparse_of(fb), limits_.max_entries);
    }
    for (QubitId q : fb.qubits) {
      fa.qubits.push_back(q);
      slots_.at(q).factor = a;
    }
    factors_.erase(b);
    normalize(factors_.at(a));
    return a;
  }

  // Picks the cheaper representation for the factor's current contents.
  void normalize(Factor& f) const {
    const std::size_t n = f.qubits.size();
    if (auto* sp = std::get_if<quantum::SparseState>(&f.state)) {
      const bool narrow = n <= limits_.dense_qubits;
      const bool full = n <= limits_.densify_qubits && sp->num_entries() * 4 >= (std::size_t{1} << n);
      if (narrow || full) f.state = sp->to_dense(n);
    } else if (n > limits_.densify_qubits) {
      f.state = quantum::SparseState::from_dense(std::get<quantum::StateVector>(f.state));
    }
  }

  ArenaLimits limits_;
  std::uint64_t next_qubit_ = 0;
  std::uint64_t next_factor_ = 0;
  std::map<std::uint64_t, Factor> factors_;
  std::map<QubitId, Slot> slots_;
};

}  // namespace qlocal::net
