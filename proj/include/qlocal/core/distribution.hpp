#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "qlocal/core/bits.hpp"
#include "qlocal/core/errors.hpp"

namespace qlocal {

enum class DistributionKind { exact, empirical };

// Finite distribution over fixed-width bit records.
class OutcomeDistribution {
 public:
  OutcomeDistribution() = default;
  explicit OutcomeDistribution(Schema schema, DistributionKind kind = DistributionKind::exact,
                               std::size_t shots = 0)
      : schema_(std::move(schema)), kind_(kind), shots_(shots) {
    if (schema_.size() > kMaxRecordBits) throw ResourceError("record schema wider than 64 bits");
  }

  const Schema& schema() const { return schema_; }
  std::size_t width() const { return schema_.size(); }
  DistributionKind kind() const { return kind_; }
  std::size_t shots() const { return shots_; }
  const std::map<std::uint64_t, double>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  void add(std::uint64_t key, double p) {
    if (p < 0.0) throw ArgumentError("negative probability");
    if (width() < 64 && (key >> width()) != 0) throw ArgumentError("record key wider than schema");
    entries_[key] += p;
  }

  double probability(std::uint64_t key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0.0 : it->second;
  }

  double total() const {
    double s = 0.0;
    for (const auto& [k, p] : entries_) s += p;
    return s;
  }

  // Empirical table from raw counts; frequencies are count / shots.
  static OutcomeDistribution from_counts(Schema schema, const std::map<std::uint64_t, std::size_t>& counts) {
    std::size_t shots = 0;
    for (const auto& [k, c] : counts) shots += c;
    OutcomeDistribution d(std::move(schema), DistributionKind::empirical, shots);
    for (const auto& [k, c] : counts) d.entries_[k] = static_cast<double>(c) / static_cast<double>(shots);
    return d;
  }

 private:
  Schema schema_;
  DistributionKind kind_ = DistributionKind::exact;
  std::size_t shots_ = 0;
  std::map<std::uint64_t, double> entries_;
};

// Text table:
//   # qlocal-distribution v1
//   # kind=exact shots=0
//   # schema=b0,b1,...
//   <bits, field 0 first> <probability>
inline void write_distribution(std::ostream& os, const OutcomeDistribution& d) {
  os << "# qlocal-distribution v1\n";
  os << "# kind=" << (d.kind() == DistributionKind::exact ? "exact" : "empirical") << " shots=" << d.shots()
     << "\n# schema=";
  for (std::size_t i = 0; i < d.schema().size(); ++i) os << (i ? "," : "") << d.schema()[i];
  os << "\n";
  char buf[64];
  for (const auto& [key, p] : d.entries()) {
    std::snprintf(buf, sizeof buf, "%.17g", p);
    os << format_bits(key, d.width()) << ' ' << buf << '\n';
  }
}

inline OutcomeDistribution read_distribution(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "# qlocal-distribution v1")
    throw ArgumentError("not a qlocal distribution table");
  if (!std::getline(is, line) || line.rfind("# kind=", 0) != 0) throw ArgumentError("missing kind header");
  DistributionKind kind = DistributionKind::exact;
  std::size_t shots = 0;
  {
    std::istringstream hs(line.substr(2));
    std::string tok;
    while (hs >> tok) {
      if (tok == "kind=exact")
        kind = DistributionKind::exact;
      else if (tok == "kind=empirical")
        kind = DistributionKind::empirical;
      else if (tok.rfind("shots=", 0) == 0)
        shots = std::stoull(tok.substr(6));
      else
        throw ArgumentError("unknown header token '" + tok + "'");
    }
  }
  if (!std::getline(is, line) || line.rfind("# schema=", 0) != 0) throw ArgumentError("missing schema header");
  Schema schema;
  {
    std::istringstream ss(line.substr(9));
    std::string field;
    while (std::getline(ss, field, ',')) schema.push_back(field);
  }
  OutcomeDistribution d(schema, kind, shots);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string bits;
    double p = 0.0;
    if (!(ls >> bits >> p)) throw ArgumentError("malformed distribution row: " + line);
    if (bits.size() != schema.size()) throw ArgumentError("row width does not match schema: " + line);
    d.add(parse_bits(bits), p);
  }
  return d;
}

}  // namespace qlocal
