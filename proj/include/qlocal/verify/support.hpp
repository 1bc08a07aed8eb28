#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>

#include "qlocal/core/bits.hpp"
#include "qlocal/protocols/process.hpp"
#include "qlocal/quantum/measurement.hpp"
#include "qlocal/verify/parity.hpp"

namespace qlocal::verify {

inline constexpr std::size_t kMaxSupportD = 8;

// On-disk store of support sets, one text file per (d, b, tolerance).
class SupportCache {
 public:
  explicit SupportCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::filesystem::path path_for(std::size_t d, TriangleInput in, double tol) const {
    std::ostringstream name;
    name << "support_d" << d << "_b" << in.to_string() << "_tol" << tol << ".txt";
    return dir_ / name.str();
  }

  std::optional<BitstringSet> load(std::size_t d, TriangleInput in, double tol) const {
    std::ifstream is(path_for(d, in, tol));
    if (!is) return std::nullopt;
    std::string line;
    std::getline(is, line);
    if (line != "# qlocal-support v1") return std::nullopt;
    std::getline(is, line);
    std::istringstream header(line.substr(line.find_first_not_of("# ")));
    std::map<std::string, std::string> fields;
    for (std::string tok; header >> tok;) {
      const auto eq = tok.find('=');
      if (eq != std::string::npos) fields[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    std::vector<std::uint64_t> members;
    while (std::getline(is, line))
      if (!line.empty()) members.push_back(parse_bits(line));
    if (fields["d"] != std::to_string(d) || fields["b"] != in.to_string() ||
        fields["count"] != std::to_string(members.size()) || fields["hash"] != std::to_string(content_hash(members)))
      return std::nullopt;
    return BitstringSet(protocols::ring_schema(d), std::move(members));
  }

  void store(std::size_t d, TriangleInput in, double tol, const BitstringSet& set) const {
    std::filesystem::create_directories(dir_);
    const auto target = path_for(d, in, tol);
    const auto tmp = std::filesystem::path(target).concat(".tmp");
    {
      std::ofstream os(tmp);
      os << "# qlocal-support v1\n";
      os << "# d=" << d << " b=" << in.to_string() << " tolerance=" << tol << " count=" << set.size()
         << " hash=" << content_hash(set.members()) << '\n';
      for (std::uint64_t m : set.members()) os << format_bits(m, 3 * d) << '\n';
    }
    std::filesystem::rename(tmp, target);
  }

 private:
  std::filesystem::path dir_;
};

// Outcome strings of the triangle measurement process with probability above
// `tol`, packed with bit i = x_i. Results are memoized in-process and, when a
// cache is given, on disk.
inline BitstringSet enumerate_support(std::size_t d, TriangleInput in, double tol = quantum::kDefaultSupportTolerance,
                                      const SupportCache* cache = nullptr) {
  net::require_triangle_d(d);
  if (d > kMaxSupportD)
    throw ResourceError("support enumeration is limited to d <= " + std::to_string(kMaxSupportD));
  static std::mutex mutex;
  static std::map<std::tuple<std::size_t, unsigned, double>, BitstringSet> memo;
  const auto key = std::make_tuple(d, in.index(), tol);
  {
    std::lock_guard lock(mutex);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  std::optional<BitstringSet> set;
  if (cache) set = cache->load(d, in, tol);
  if (!set) {
    set = quantum::support(protocols::process_pd(d, in), tol, protocols::ring_schema(d));
    if (cache) cache->store(d, in, tol, *set);
  }
  std::lock_guard lock(mutex);
  return memo.emplace(key, *set).first->second;
}

struct ValidityReport {
  TriangleInput input;
  std::uint64_t outcome = 0;
  bool in_support = false;
  bool prop1_ok = false;
};

inline ValidityReport is_valid(std::size_t d, TriangleInput in, std::uint64_t outcome,
                               const SupportCache* cache = nullptr) {
  ValidityReport r;
  r.input = in;
  r.outcome = outcome;
  r.prop1_ok = check_prop1(in, parities(d, outcome));
  r.in_support = enumerate_support(d, in, quantum::kDefaultSupportTolerance, cache).contains(outcome);
  return r;
}

inline ValidityReport is_valid(std::size_t d, TriangleInput in, const Bitstring& outcome,
                               const SupportCache* cache = nullptr) {
  if (outcome.size() != 3 * d) throw ArgumentError("outcome length must be 3d");
  return is_valid(d, in, outcome.packed(), cache);
}

}  // namespace qlocal::verify
