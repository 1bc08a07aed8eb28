#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "qlocal/core/distribution.hpp"
#include "qlocal/net/engine.hpp"
#include "qlocal/protocols/process.hpp"
#include "qlocal/protocols/triangle.hpp"
#include "qlocal/quantum/measurement.hpp"

namespace qlocal::analytics {

using net::Bytes;
using net::NodeId;

inline double tv_distance(const OutcomeDistribution& p, const OutcomeDistribution& q) {
  if (p.schema() != q.schema()) throw ArgumentError("distributions have different record schemas");
  double sum = 0.0;
  auto a = p.entries().begin();
  auto b = q.entries().begin();
  while (a != p.entries().end() || b != q.entries().end()) {
    if (b == q.entries().end() || (a != p.entries().end() && a->first < b->first)) {
      sum += a->second;
      ++a;
    } else if (a == p.entries().end() || b->first < a->first) {
      sum += b->second;
      ++b;
    } else {
      sum += std::abs(a->second - b->second);
      ++a;
      ++b;
    }
  }
  return 0.5 * sum;
}

// Projection onto the listed coordinates (record bit k = coordinate k).
inline OutcomeDistribution marginal(const OutcomeDistribution& dist, const std::vector<std::size_t>& coordinates) {
  Schema schema;
  for (std::size_t c : coordinates) {
    if (c >= dist.width())
      throw ArgumentError("coordinate " + std::to_string(c) + " outside a " + std::to_string(dist.width()) +
                          "-bit record");
    schema.push_back(dist.schema()[c]);
  }
  OutcomeDistribution out(std::move(schema), dist.kind(), dist.shots());
  for (const auto& [key, p] : dist.entries()) {
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < coordinates.size(); ++i) k |= ((key >> coordinates[i]) & 1U) << i;
    out.add(k, p);
  }
  return out;
}

inline OutcomeDistribution marginal(const OutcomeDistribution& dist, std::size_t coordinate) {
  return marginal(dist, std::vector<std::size_t>{coordinate});
}

inline OutcomeDistribution marginal(const OutcomeDistribution& dist, const std::string& field) {
  for (std::size_t i = 0; i < dist.width(); ++i)
    if (dist.schema()[i] == field) return marginal(dist, i);
  throw ArgumentError("no field named '" + field + "' in the record schema");
}

inline constexpr std::size_t kMaxGammaD = 6;

// Joint law of (b, x) for uniform b: (1/8) Pr[measurement process on b gives x].
inline OutcomeDistribution exact_gamma(std::size_t d) {
  net::require_triangle_d(d);
  if (d > kMaxGammaD) throw ResourceError("exact_gamma is limited to d <= " + std::to_string(kMaxGammaD));
  OutcomeDistribution out(protocols::sample_schema(d));
  for (const auto& in : protocols::all_inputs()) {
    const auto state = protocols::process_pd(d, in);
    const auto amps = state.amplitudes();
    for (std::size_t x = 0; x < amps.size(); ++x) {
      const double p = std::norm(amps[x]);
      if (p > 0.0) out.add(in.index() | (std::uint64_t{x} << 3), p / 8.0);
    }
  }
  return out;
}

// Record whose bit k is the k-th output byte of the observed nodes, in order.
inline std::uint64_t bit_record(const std::vector<Bytes>& outputs) {
  std::uint64_t key = 0;
  std::size_t k = 0;
  for (const auto& bytes : outputs)
    for (std::uint8_t b : bytes) {
      if (b > 1) throw ProtocolError("output byte is not a bit");
      if (k >= kMaxRecordBits) throw ResourceError("record wider than 64 bits");
      key |= std::uint64_t{b} << k++;
    }
  return key;
}

inline std::vector<Bytes> observed_outputs(const std::map<NodeId, Bytes>& outputs, const std::vector<NodeId>& observed) {
  std::vector<Bytes> out;
  for (NodeId n : observed) out.push_back(outputs.at(n));
  return out;
}

// Exact law of the concatenated output bits of `observed`, by enumerating all
// random tapes and measurement outcomes.
inline OutcomeDistribution exact_record_distribution(const net::Topology& g, const net::ProgramSet& programs,
                                                     const net::RunOptions& opt, const std::vector<NodeId>& observed,
                                                     Schema schema) {
  OutcomeDistribution out(std::move(schema));
  for (const auto& [record, p] : net::exact_law(g, programs, opt, observed)) {
    std::size_t bits = 0;
    for (const auto& b : record) bits += b.size();
    if (bits != out.width()) throw ProtocolError("output record does not match the schema width");
    out.add(bit_record(record), p);
  }
  return out;
}

// Input nodes then ring nodes, matching protocols::sample_schema.
inline std::vector<NodeId> sample_order(const net::TriangleLayout& layout) {
  std::vector<NodeId> order{layout.w(0), layout.w(1), layout.w(2)};
  order.insert(order.end(), layout.ring.begin(), layout.ring.end());
  return order;
}

// Exact law over (b, x) records of classical programs whose input nodes each
// output one bit and ring nodes one bit each.
inline OutcomeDistribution exact_classical_distribution(const net::TriangleNetwork& net,
                                                        const net::ProgramSet& programs, std::size_t rounds) {
  net::RunOptions opt;
  opt.rounds = rounds;
  opt.model = net::Model::classical;
  return exact_record_distribution(net.topology, programs, opt, sample_order(net.layout),
                                   protocols::sample_schema(net.layout.d));
}

// Exact law over (b, x) records of the quantum sampling protocol.
inline OutcomeDistribution exact_sampling_distribution(const net::TriangleNetwork& net) {
  net::RunOptions opt;
  opt.rounds = protocols::kSubgraphRounds;
  return exact_record_distribution(net.topology, protocols::sampling_protocol_programs(net.topology), opt,
                                   sample_order(net.layout), protocols::sample_schema(net.layout.d));
}

// Frequency table of records over `shots` runs (see net::for_each_shot).
inline OutcomeDistribution empirical_distribution(const net::Topology& g, const net::ProgramSet& programs,
                                                  const net::RunOptions& opt, const std::vector<NodeId>& observed,
                                                  Schema schema, std::size_t shots) {
  if (shots == 0) throw ArgumentError("shots must be at least 1");
  std::map<std::uint64_t, std::size_t> counts;
  net::for_each_shot(g, programs, opt, shots, [&](std::size_t, const std::map<NodeId, Bytes>& outputs) {
    ++counts[bit_record(observed_outputs(outputs, observed))];
  });
  return OutcomeDistribution::from_counts(std::move(schema), counts);
}

}  // namespace qlocal::analytics
