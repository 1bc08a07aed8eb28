#pragma once

#include <array>
#include <vector>

#include "qlocal/net/engine.hpp"
#include "qlocal/protocols/affine.hpp"
#include "qlocal/verify/parity.hpp"
#include "qlocal/verify/support.hpp"

namespace qlocal::verify {

using protocols::AffineStrategy;

struct Lemma2Report {
  std::size_t affine_e = 0;                  // affine functions of three bits
  std::size_t admissible_triples = 0;        // (r, b, l) with r ^ b ^ l = 0 everywhere
  std::size_t combinations = 0;              // affine_e * admissible_triples
  std::size_t all_four_hold = 0;             // combinations satisfying every equality
  std::size_t max_equalities = 0;
  std::size_t combinations_at_max = 0;
  std::array<std::size_t, 5> histogram{};    // combinations by number of equalities satisfied
  bool falsified() const { return all_four_hold != 0; }
};

// Number of the four input-specific identities a strategy satisfies.
inline std::size_t equalities_satisfied(const AffineStrategy& s) {
  using protocols::TriangleInput;
  std::size_t n = 0;
  for (unsigned k : {0b000U, 0b110U, 0b101U, 0b011U}) {
    const TriangleInput in = TriangleInput::from_index(k);
    n += check_prop1(in, s.realized(in)) ? 1 : 0;
  }
  return n;
}

// All admissible strategies, ascending index.
inline std::vector<AffineStrategy> admissible_strategies() {
  std::vector<AffineStrategy> out;
  for (unsigned k = 0; k < AffineStrategy::kCount; ++k) {
    const auto s = AffineStrategy::from_index(k);
    if (s.admissible()) out.push_back(s);
  }
  return out;
}

inline Lemma2Report lemma2_exhaustive() {
  Lemma2Report rep;
  rep.affine_e = 16;
  for (unsigned t = 0; t < 512; ++t)
    if (AffineStrategy::from_index(t << 4).admissible()) ++rep.admissible_triples;
  for (const auto& s : admissible_strategies()) {
    ++rep.combinations;
    const std::size_t n = equalities_satisfied(s);
    ++rep.histogram[n];
    if (n == 4) ++rep.all_four_hold;
    if (n > rep.max_equalities) {
      rep.max_equalities = n;
      rep.combinations_at_max = 0;
    }
    if (n == rep.max_equalities) ++rep.combinations_at_max;
  }
  return rep;
}

// Fraction of the 8 inputs on which the realized parities meet the parity conditions.
inline double affine_success(const AffineStrategy& s) {
  std::size_t ok = 0;
  for (const auto& in : protocols::all_inputs()) ok += check_prop1(in, s.realized(in)) ? 1 : 0;
  return static_cast<double>(ok) / 8.0;
}

struct AffineOptimum {
  double probability = 0.0;
  AffineStrategy witness;
  std::size_t optimal_count = 0;
};

// Best success over admissible strategies. The witness is the optimum with
// the fewest nonzero coefficients (lowest index among those).
inline AffineOptimum best_affine_success(std::size_t d) {
  net::require_triangle_d(d);
  AffineOptimum best{-1.0, {}, 0};
  for (const auto& s : admissible_strategies()) {
    const double p = affine_success(s);
    if (p > best.probability) {
      best = {p, s, 0};
    } else if (p == best.probability && s.nonzero() < best.witness.nonzero()) {
      best.witness = s;
    }
    if (p == best.probability) ++best.optimal_count;
  }
  return best;
}

struct SuccessReport {
  std::size_t trials = 0;
  std::array<double, 8> per_input{};  // indexed by TriangleInput::index()
  double overall = 0.0;               // uniform average over inputs
  double minimum = 0.0;
};

// Monte Carlo success rate of classical programs on a triangle network with
// input nodes; the output is valid when it lies in the support set.
inline SuccessReport classical_success_rate(const net::TriangleNetwork& net, const net::ProgramSet& programs,
                                            std::size_t rounds, std::size_t trials, std::uint64_t seed,
                                            const SupportCache* cache = nullptr) {
  if (trials == 0) throw ArgumentError("trials must be at least 1");
  SuccessReport rep;
  rep.trials = trials;
  rep.minimum = 1.0;
  for (const auto& in : protocols::all_inputs()) {
    const auto& support = enumerate_support(net.layout.d, in, quantum::kDefaultSupportTolerance, cache);
    net::RunOptions opt;
    opt.rounds = rounds;
    opt.model = net::Model::classical;
    opt.seed = derive_seed(seed, in.index());
    opt.inputs = protocols::relation_inputs(net.layout, in);
    std::size_t ok = 0;
    net::for_each_shot(net.topology, programs, opt, trials, [&](std::size_t, const std::map<net::NodeId, net::Bytes>& outputs) {
      ok += support.contains(protocols::ring_record(net.layout, outputs)) ? 1 : 0;
    });
    const double p = static_cast<double>(ok) / static_cast<double>(trials);
    rep.per_input[in.index()] = p;
    rep.overall += p / 8.0;
    rep.minimum = std::min(rep.minimum, p);
  }
  return rep;
}

}  // namespace qlocal::verify
