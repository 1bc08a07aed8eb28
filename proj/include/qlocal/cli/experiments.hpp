#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlocal/analytics.hpp"
#include "qlocal/protocols.hpp"
#include "qlocal/verify.hpp"

namespace qlocal::cli {

using Json = nlohmann::ordered_json;

class UsageError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

enum class Format { table, jsonl };

inline constexpr std::uint64_t kDefaultSeed = 20240917;

struct ExperimentConfig {
  std::string experiment;
  std::size_t d = 2;
  std::size_t k = 1;
  std::size_t T = 2;
  std::size_t shots = 100;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  Format format = Format::table;
};

// Summary rows plus one record line per shot (or per enumerated case).
struct Report {
  std::vector<Json> rows;
  std::vector<Json> records;
  bool passed = true;

  void add_row(Json row, bool pass) {
    row["pass"] = pass;
    rows.push_back(std::move(row));
    passed = passed && pass;
  }

  void append(Report other) {
    for (auto& r : other.rows) rows.push_back(std::move(r));
    for (auto& r : other.records) records.push_back(std::move(r));
    passed = passed && other.passed;
  }
};

namespace detail {

inline std::string cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    std::ostringstream os;
    os << std::setprecision(10) << v.get<double>();
    return os.str();
  }
  return v.dump();
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

inline void require_d(const ExperimentConfig& c, std::size_t max_d) {
  require(c.d >= 2 && c.d % 2 == 0, "--d must be an even integer >= 2 (got " + std::to_string(c.d) + ")");
  require(c.d <= max_d, "--d must be at most " + std::to_string(max_d) + " for " + c.experiment);
}

inline void require_shots(const ExperimentConfig& c) { require(c.shots >= 1, "--shots must be at least 1"); }

inline Json base_row(const ExperimentConfig& c) {
  Json row;
  row["experiment"] = c.experiment;
  return row;
}

inline double fidelity_of(const net::QuantumArena& arena, const std::vector<net::QubitId>& qubits,
                          const quantum::StateVector& reference) {
  return quantum::fidelity(arena.snapshot(qubits), reference);
}

}  // namespace detail

inline void write_table(std::ostream& os, const std::vector<Json>& rows) {
  if (rows.empty()) return;
  std::vector<std::string> columns;
  for (const auto& row : rows)
    for (const auto& [key, v] : row.items())
      if (std::find(columns.begin(), columns.end(), key) == columns.end()) columns.push_back(key);
  std::vector<std::size_t> width(columns.size());
  std::vector<std::vector<std::string>> cells;
  for (std::size_t i = 0; i < columns.size(); ++i) width[i] = columns[i].size();
  for (const auto& row : rows) {
    std::vector<std::string> line;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      line.push_back(row.contains(columns[i]) ? detail::cell(row.at(columns[i])) : "-");
      width[i] = std::max(width[i], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      os << std::left << std::setw(static_cast<int>(width[i])) << line[i];
      os << (i + 1 < line.size() ? "  " : "\n");
    }
  };
  emit(columns);
  for (const auto& line : cells) emit(line);
}

inline void write_jsonl(std::ostream& os, const std::vector<Json>& lines) {
  for (const auto& j : lines) os << j.dump() << '\n';
}

inline void write_summary(std::ostream& os, const Report& r, Format f) {
  if (f == Format::table)
    write_table(os, r.rows);
  else
    write_jsonl(os, r.rows);
}

// --- experiments ------------------------------------------------------------

inline Report relation_validity(const ExperimentConfig& c) {
  detail::require_d(c, verify::kMaxSupportD);
  detail::require_shots(c);
  Report rep;
  const auto net = net::build_script_gd(c.d);
  const auto programs = protocols::relation_protocol_programs(net.topology);
  std::size_t valid = 0, total = 0;
  for (const auto& in : protocols::all_inputs()) {
    const auto support = verify::enumerate_support(c.d, in);
    net::RunOptions opt;
    opt.rounds = protocols::kSubgraphRounds;
    opt.seed = derive_seed(c.seed, in.index());
    opt.inputs = protocols::relation_inputs(net.layout, in);
    const auto batch = net::run_shots(net.topology, programs, opt, c.shots);
    std::size_t ok = 0;
    for (std::size_t s = 0; s < batch.outputs.size(); ++s) {
      const std::uint64_t x = protocols::ring_record(net.layout, batch.outputs[s]);
      const bool v = support.contains(x);
      ok += v;
      rep.records.push_back(Json{{"experiment", c.experiment}, {"d", c.d}, {"b", in.to_string()}, {"shot", s},
                                 {"x", format_bits(x, 3 * c.d)}, {"valid", v}});
    }
    valid += ok;
    total += batch.outputs.size();
  }
  Json row = detail::base_row(c);
  row["d"] = c.d;
  row["inputs"] = 8;
  row["shots"] = c.shots;
  row["valid"] = valid;
  row["total"] = total;
  row["valid_fraction"] = static_cast<double>(valid) / static_cast<double>(total);
  rep.add_row(std::move(row), valid == total);
  return rep;
}

inline Report lemma2(const ExperimentConfig& c) {
  Report rep;
  const auto r = verify::lemma2_exhaustive();
  Json row = detail::base_row(c);
  row["affine_e"] = r.affine_e;
  row["admissible_triples"] = r.admissible_triples;
  row["combinations"] = r.combinations;
  row["all_four_hold"] = r.all_four_hold;
  row["max_equalities"] = r.max_equalities;
  row["at_max"] = r.combinations_at_max;
  for (std::size_t n = 0; n < r.histogram.size(); ++n)
    rep.records.push_back(Json{{"experiment", c.experiment}, {"equalities", n}, {"combinations", r.histogram[n]}});
  rep.add_row(std::move(row), !r.falsified() && r.max_equalities == 3);
  return rep;
}

inline Report affine_bound(const ExperimentConfig& c) {
  detail::require_d(c, verify::kMaxSupportD);
  detail::require(c.T <= c.d / 2, "--T must be at most d/2 = " + std::to_string(c.d / 2));
  const auto best = verify::best_affine_success(c.d);
  detail::require(c.T >= protocols::affine_rounds_needed(c.d, best.witness),
                  "--T must be at least " + std::to_string(protocols::affine_rounds_needed(c.d, best.witness)) +
                      " to replay the witness");
  Report rep;
  const auto net = net::build_script_gd(c.d);
  std::size_t ok = 0;
  for (const auto& in : protocols::all_inputs()) {
    const std::uint64_t x = protocols::run_affine(net, best.witness, c.T, in);
    const auto v = verify::is_valid(c.d, in, x);
    ok += v.in_support;
    rep.records.push_back(Json{{"experiment", c.experiment}, {"d", c.d}, {"T", c.T}, {"b", in.to_string()},
                               {"x", format_bits(x, 3 * c.d)}, {"valid", v.in_support}});
  }
  Json row = detail::base_row(c);
  row["d"] = c.d;
  row["T"] = c.T;
  row["best_success"] = best.probability;
  row["optimal_strategies"] = best.optimal_count;
  row["witness"] = best.witness.to_string();
  row["replay_valid"] = std::to_string(ok) + "/8";
  rep.add_row(std::move(row), best.probability == 7.0 / 8.0 && ok == 7);
  return rep;
}

// Graph state of the subgraph induced by `marked`, on all nodes of g in
// ascending order (unmarked nodes are isolated, i.e. |+>).
inline quantum::StateVector induced_reference(const net::Topology& g, const std::map<net::NodeId, bool>& marked) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (auto [a, b] : g.edges())
    if (marked.at(a) && marked.at(b)) edges.emplace_back(g.index_of(a), g.index_of(b));
  return quantum::build_graph_state(g.size(), edges);
}

struct SubgraphCheck {
  double fidelity = 0.0;
  std::size_t rounds = 0;
  bool one_register_per_direction = true;
};

// Runs the subgraph protocol and compares every node's Q with the reference.
inline SubgraphCheck check_subgraph(const net::Topology& g, const std::map<net::NodeId, bool>& marked,
                                    std::uint64_t seed) {
  net::RunOptions opt;
  opt.rounds = protocols::kSubgraphRounds;
  opt.seed = seed;
  const auto result = net::run(g, protocols::subgraph_state_programs(g, marked), opt);
  const auto q = protocols::register_of(result.arena, g);
  std::vector<net::QubitId> order;
  for (net::NodeId n : g.nodes()) order.push_back(q.at(n));
  SubgraphCheck check;
  check.fidelity = quantum::fidelity(result.arena.snapshot(order), induced_reference(g, marked));
  for (const auto& m : result.trace.messages) {
    check.rounds = std::max(check.rounds, m.round);
    if (m.qubits.size() != 1) check.one_register_per_direction = false;
  }
  return check;
}

inline Report subgraph_fidelity(const ExperimentConfig& c) {
  detail::require_d(c, 6);
  detail::require_shots(c);
  Report rep;
  const auto net = net::build_script_gd(c.d);
  const auto& nodes = net.topology.nodes();
  const bool exhaustive = nodes.size() <= 10;
  const std::size_t cases = exhaustive ? std::size_t{1} << nodes.size() : c.shots;
  Rng rng(derive_seed(c.seed, 1));
  double worst = 1.0;
  bool rounds_ok = true;
  for (std::size_t a = 0; a < cases; ++a) {
    std::map<net::NodeId, bool> marked;
    std::uint64_t bits = exhaustive ? a : rng.next_u64();
    for (std::size_t i = 0; i < nodes.size(); ++i) marked[nodes[i]] = (bits >> i) & 1U;
    const auto check = check_subgraph(net.topology, marked, derive_seed(c.seed, 2 + a));
    worst = std::min(worst, check.fidelity);
    rounds_ok = rounds_ok && check.rounds == protocols::kSubgraphRounds && check.one_register_per_direction;
    std::string assignment;
    for (std::size_t i = 0; i < nodes.size(); ++i) assignment.push_back(marked[nodes[i]] ? '1' : '0');
    rep.records.push_back(Json{{"experiment", c.experiment}, {"d", c.d}, {"c", assignment},
                               {"fidelity", check.fidelity}, {"rounds", check.rounds}});
  }
  Json row = detail::base_row(c);
  row["d"] = c.d;
  row["assignments"] = cases;
  row["exhaustive"] = exhaustive;
  row["min_fidelity"] = worst;
  row["rounds"] = rounds_ok ? "2" : "mismatch";
  rep.add_row(std::move(row), worst >= 1.0 - 1e-9 && rounds_ok);
  return rep;
}

inline Report gamma_exact(const ExperimentConfig& c) {
  detail::require_d(c, analytics::kMaxGammaD);
  Report rep;
  const auto gamma = analytics::exact_gamma(c.d);
  bool conditional_valid = true;
  for (const auto& [key, p] : gamma.entries()) {
    const auto in = protocols::TriangleInput::from_index(static_cast<unsigned>(key & 7U));
    if (!verify::enumerate_support(c.d, in).contains(key >> 3)) conditional_valid = false;
    rep.records.push_back(Json{{"experiment", c.experiment}, {"d", c.d}, {"b", in.to_string()},
                               {"x", format_bits(key >> 3, 3 * c.d)}, {"p", p}});
  }
  Json row = detail::base_row(c);
  row["d"] = c.d;
  row["support"] = gamma.size();
  row["total"] = gamma.total();
  bool marginals_ok = true;
  for (std::size_t i = 0; i < 3; ++i) {
    const double m = analytics::marginal(gamma, i).probability(1);
    row["b" + std::to_string(i) + "_marginal"] = m;
    marginals_ok = marginals_ok && std::abs(m - 0.5) <= 1e-12;
  }
  bool cross_ok = true;
  if (c.d <= 4) {
    const double tv = analytics::tv_distance(gamma, analytics::exact_sampling_distribution(net::build_script_gd(c.d)));
    row["tv_to_protocol"] = tv;
    cross_ok = tv <= 1e-9;
  }
  row["conditionally_valid"] = conditional_valid;
  rep.add_row(std::move(row), conditional_valid && marginals_ok && cross_ok &&
                                  std::abs(gamma.total() - 1.0) <= 1e-12);
  return rep;
}

inline Report tv_adversary(const ExperimentConfig& c) {
  detail::require_d(c, analytics::kMaxGammaD);
  detail::require(c.T <= c.d / 4, "--T must be at most d/4 = " + std::to_string(c.d / 4));
  Report rep;
  const auto search = analytics::min_tv_affine_adversary(c.d, c.T);
  Json row = detail::base_row(c);
  row["d"] = c.d;
  row["T"] = c.T;
  row["min_tv"] = search.best.tv;
  row["bound"] = 1.0 / 11.0;
  row["bias"] = std::to_string(search.best.bias[0]) + "," + std::to_string(search.best.bias[1]) + "," +
                std::to_string(search.best.bias[2]);
  row["witness"] = search.best.mixture;
  row["witness_validity"] = search.best.validity;
  row["family_size"] = search.adversaries;
  row["evaluated"] = search.evaluated;
  rep.records.push_back(row);
  rep.add_row(std::move(row), search.best.tv >= 1.0 / 11.0);
  return rep;
}

// Exact success of the affine witness on k copies over all 8^k input tuples.
inline double k_copies_classical_success(std::size_t d, std::size_t k, std::size_t T,
                                         std::vector<Json>* records = nullptr) {
  const auto witness = verify::best_affine_success(d).witness;
  const auto net = protocols::build_k_copies(d, k);
  const auto programs = protocols::k_copies_affine_programs(net, witness, T);
  std::size_t tuples = 1, ok = 0;
  for (std::size_t j = 0; j < k; ++j) tuples *= 8;
  for (std::size_t t = 0; t < tuples; ++t) {
    std::vector<protocols::TriangleInput> inputs;
    std::string label;
    for (std::size_t j = 0, r = t; j < k; ++j, r /= 8) {
      inputs.push_back(protocols::TriangleInput::from_index(static_cast<unsigned>(r % 8)));
      label += (j ? "," : "") + inputs.back().to_string();
    }
    net::RunOptions opt;
    opt.rounds = T;
    opt.model = net::Model::classical;
    opt.inputs = protocols::k_copies_inputs(net, inputs);
    const auto records_k = protocols::k_copies_records(net, net::run(net.topology, programs, opt).outputs);
    bool all = true;
    for (std::size_t j = 0; j < k; ++j) all = all && verify::is_valid(d, inputs[j], records_k[j]).in_support;
    ok += all;
    if (records) records->push_back(Json{{"experiment", "k-copies"}, {"d", d}, {"k", k}, {"b", label}, {"valid", all}});
  }
  return static_cast<double>(ok) / static_cast<double>(tuples);
}

inline Report k_copies(const ExperimentConfig& c) {
  detail::require_d(c, verify::kMaxSupportD);
  detail::require(c.k >= 1 && c.k <= 4, "--k must lie in 1..4");
  detail::require(c.T <= c.d / 2, "--T must be at most d/2 = " + std::to_string(c.d / 2));
  detail::require_shots(c);
  const auto witness = verify::best_affine_success(c.d).witness;
  detail::require(c.T >= protocols::affine_rounds_needed(c.d, witness), "--T too small to replay the witness");
  Report rep;
  const double success = k_copies_classical_success(c.d, c.k, c.T, &rep.records);
  const double predicted = std::pow(7.0 / 8.0, static_cast<double>(c.k));

  const auto net = protocols::build_k_copies(c.d, c.k);
  std::size_t quantum_ok = 0;
  Rng rng(derive_seed(c.seed, 3));
  for (std::size_t s = 0; s < c.shots; ++s) {
    std::vector<protocols::TriangleInput> inputs;
    for (std::size_t j = 0; j < c.k; ++j)
      inputs.push_back(protocols::TriangleInput::from_index(static_cast<unsigned>(rng.next_u64() % 8)));
    net::RunOptions opt;
    opt.rounds = protocols::kSubgraphRounds;
    opt.seed = net::shot_seed(c.seed, s);
    opt.inputs = protocols::k_copies_inputs(net, inputs);
    const auto records_k = protocols::k_copies_records(net, net::run(net.topology, protocols::k_copies_programs(net), opt).outputs);
    bool all = true;
    for (std::size_t j = 0; j < c.k; ++j) all = all && verify::is_valid(c.d, inputs[j], records_k[j]).in_support;
    quantum_ok += all;
  }
  Json row = detail::base_row(c);
  row["d"] = c.d;
  row["k"] = c.k;
  row["T"] = c.T;
  row["classical_success"] = success;
  row["predicted"] = predicted;
  row["quantum_valid"] = std::to_string(quantum_ok) + "/" + std::to_string(c.shots);
  rep.add_row(std::move(row), std::abs(success - predicted) <= 1e-12 && quantum_ok == c.shots);
  return rep;
}

// XOR of all inputs on a 4-cycle, derandomized from a noisy reference protocol.
inline Report derandomize_demo(const ExperimentConfig& c) {
  detail::require(c.T >= 2 && c.T <= 4, "--T must lie in 2..4 (the 4-cycle has diameter 2)");
  Report rep;
  const net::Topology g({net::NodeId{0}, net::NodeId{1}, net::NodeId{2}, net::NodeId{3}},
                        {{net::NodeId{0}, net::NodeId{1}}, {net::NodeId{1}, net::NodeId{2}},
                         {net::NodeId{2}, net::NodeId{3}}, {net::NodeId{3}, net::NodeId{0}}});
  const auto reference = std::make_shared<protocols::NoisyXorProgram>(c.T);
  net::ProgramSet ref_programs;
  for (net::NodeId n : g.nodes()) ref_programs[n] = reference;
  net::RunOptions base;
  base.rounds = c.T;
  base.model = net::Model::classical;
  const auto oracle = protocols::oracle_from_protocol(g, ref_programs, base, {0});
  const auto programs = protocols::derandomize_function_protocol(g, oracle, c.T);
  std::size_t correct = 0;
  for (unsigned x = 0; x < 16; ++x) {
    net::RunOptions opt = base;
    std::uint8_t expected = 0;
    for (unsigned i = 0; i < 4; ++i) {
      opt.inputs[net::NodeId{i}] = {static_cast<std::uint8_t>((x >> i) & 1U)};
      expected ^= (x >> i) & 1U;
    }
    const auto result = net::run(g, programs, opt);
    bool all = true;
    for (const auto& [n, out] : result.outputs) all = all && out == net::Bytes{expected};
    correct += all;
    rep.records.push_back(Json{{"experiment", c.experiment}, {"x", format_bits(x, 4)}, {"xor", expected}, {"exact", all}});
  }
  Json row = detail::base_row(c);
  row["T"] = c.T;
  row["inputs"] = 16;
  row["exact"] = correct;
  rep.add_row(std::move(row), correct == 16);
  return rep;
}

inline const std::map<std::string, std::function<Report(const ExperimentConfig&)>>& experiments() {
  static const std::map<std::string, std::function<Report(const ExperimentConfig&)>> table{
      {"relation-validity", relation_validity}, {"lemma2", lemma2},
      {"affine-bound", affine_bound},           {"subgraph-fidelity", subgraph_fidelity},
      {"gamma-exact", gamma_exact},             {"tv-adversary", tv_adversary},
      {"k-copies", k_copies},                   {"derandomize-demo", derandomize_demo},
  };
  return table;
}

inline Report run_experiment(const ExperimentConfig& c) {
  const auto& table = experiments();
  auto it = table.find(c.experiment);
  if (it == table.end()) throw UsageError("unknown experiment '" + c.experiment + "'");
  Report rep = it->second(c);
  for (auto& row : rep.rows) row["seed"] = c.seed;
  return rep;
}

// Parameter lists for a sweep; each list must be non-empty.
struct SweepConfig {
  ExperimentConfig base;
  std::vector<std::size_t> d, k, T, shots;
};

inline Report sweep(const SweepConfig& s) {
  auto need = [](const std::vector<std::size_t>& v, const char* name) {
    if (v.empty()) throw UsageError(std::string("sweep range for --") + name + " is empty");
  };
  need(s.d, "d");
  need(s.k, "k");
  need(s.T, "T");
  need(s.shots, "shots");
  Report all;
  for (std::size_t d : s.d)
    for (std::size_t k : s.k)
      for (std::size_t T : s.T)
        for (std::size_t shots : s.shots) {
          ExperimentConfig c = s.base;
          c.d = d;
          c.k = k;
          c.T = T;
          c.shots = shots;
          all.append(run_experiment(c));
        }
  return all;
}

// Comma list with optional inclusive ranges: "2,4,6" or "1..3".
inline std::vector<std::size_t> parse_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    if (part.empty()) continue;
    try {
      if (auto dots = part.find(".."); dots != std::string::npos) {
        const std::size_t lo = std::stoul(part.substr(0, dots));
        const std::size_t hi = std::stoul(part.substr(dots + 2));
        for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
      } else {
        out.push_back(std::stoul(part));
      }
    } catch (const std::logic_error&) {
      throw UsageError("not a number list: '" + text + "'");
    }
  }
  return out;
}

// Writes <out>/<name>.summary.{txt,jsonl} and <out>/<name>.records.jsonl.
inline void write_report_files(const std::filesystem::path& dir, const std::string& name, const Report& r, Format f) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream os(dir / (name + (f == Format::table ? ".summary.txt" : ".summary.jsonl")));
    write_summary(os, r, f);
  }
  std::ofstream os(dir / (name + ".records.jsonl"));
  write_jsonl(os, r.records);
}

}  // namespace qlocal::cli
