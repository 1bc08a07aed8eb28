#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qlocal/cli/experiments.hpp"
#include "support/probes.hpp"

namespace {

using namespace qlocal;

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome subgraph_construction() {
  double worst = 1.0;
  bool rounds_ok = true;
  std::size_t cases = 0;
  auto check = [&](const net::Topology& g, const std::map<net::NodeId, bool>& marked, std::uint64_t seed) {
    const auto c = cli::check_subgraph(g, marked, seed);
    worst = std::min(worst, c.fidelity);
    rounds_ok = rounds_ok && c.rounds == 2;
    ++cases;
  };
  const auto g2 = net::build_script_gd(2).topology;
  const auto& nodes = g2.nodes();
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << nodes.size()); ++a) {
    std::map<net::NodeId, bool> marked;
    for (std::size_t i = 0; i < nodes.size(); ++i) marked[nodes[i]] = (a >> i) & 1U;
    check(g2, marked, a);
  }
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.next_u64() % 5;
    const auto g = probes::random_connected_graph(n, 0.35, rng);
    std::map<net::NodeId, bool> marked;
    for (net::NodeId v : g.nodes()) marked[v] = rng.bit();
    check(g, marked, rng.next_u64());
  }
  return {worst >= 1.0 - 1e-9 && rounds_ok && cases == 532,
          std::to_string(cases) + " assignments, min fidelity " + std::to_string(worst) +
              (rounds_ok ? ", 2 rounds each" : ", round count mismatch")};
}

Outcome relation_validity() {
  std::size_t valid = 0, total = 0;
  for (std::size_t d : {2, 4, 6}) {
    cli::ExperimentConfig c;
    c.experiment = "relation-validity";
    c.d = d;
    c.shots = 500;
    c.seed = 7;
    const auto rep = cli::run_experiment(c);
    valid += rep.rows[0]["valid"].get<std::size_t>();
    total += rep.rows[0]["total"].get<std::size_t>();
  }
  return {valid == total && total == 3 * 8 * 500, std::to_string(valid) + "/" + std::to_string(total) + " valid"};
}

Outcome parity_necessity() {
  std::size_t strings = 0, violations = 0;
  for (std::size_t d : {2, 4})
    for (const auto& in : protocols::all_inputs()) {
      const auto support = verify::enumerate_support(d, in);
      for (std::uint64_t x : support.members()) {
        ++strings;
        const auto p = verify::parities(d, x);
        if ((p.r ^ p.b ^ p.l) || !verify::check_prop1(in, p)) ++violations;
      }
    }
  return {violations == 0 && strings > 0,
          std::to_string(strings) + " support strings, " + std::to_string(violations) + " violations"};
}

Outcome lemma2() {
  const auto r = verify::lemma2_exhaustive();
  return {r.all_four_hold == 0 && r.max_equalities == 3 && r.combinations == 512,
          std::to_string(r.combinations) + " combinations, all four: " + std::to_string(r.all_four_hold) +
              ", max: " + std::to_string(r.max_equalities)};
}

Outcome affine_bound() {
  const auto best = verify::best_affine_success(4);
  const auto net = net::build_script_gd(4);
  std::size_t ok = 0;
  bool deterministic = true;
  for (const auto& in : protocols::all_inputs()) {
    const std::uint64_t x = protocols::run_affine(net, best.witness, 2, in);
    deterministic = deterministic && x == protocols::run_affine(net, best.witness, 2, in);
    ok += verify::is_valid(4, in, x).in_support;
  }
  return {best.probability == 7.0 / 8.0 && ok == 7 && deterministic,
          "best " + std::to_string(best.probability) + ", witness " + best.witness.to_string() + ", replay " +
              std::to_string(ok) + "/8"};
}

Outcome k_copies() {
  std::string detail;
  bool pass = true;
  for (std::size_t k = 1; k <= 3; ++k) {
    const double got = cli::k_copies_classical_success(4, k, 2);
    const double want = std::pow(7.0 / 8.0, static_cast<double>(k));
    pass = pass && std::abs(got - want) <= 1e-12;
    detail += (k > 1 ? ", " : "") + std::string("k=") + std::to_string(k) + ": " + std::to_string(got);
  }
  return {pass, detail};
}

Outcome gamma_identity() {
  double worst_tv = 0.0, worst_marginal = 0.0;
  for (std::size_t d : {2, 4}) {
    const auto gamma = analytics::exact_gamma(d);
    worst_tv = std::max(worst_tv, analytics::tv_distance(
                                      gamma, analytics::exact_sampling_distribution(net::build_script_gd(d))));
    for (std::size_t i = 0; i < 3; ++i)
      worst_marginal = std::max(worst_marginal, std::abs(analytics::marginal(gamma, i).probability(1) - 0.5));
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "max TV %.3e, max marginal deviation %.3e", worst_tv, worst_marginal);
  return {worst_tv <= 1e-9 && worst_marginal <= 1e-12, buf};
}

Outcome tv_bound() {
  const auto s = analytics::min_tv_affine_adversary(4, 1);
  char buf[128];
  std::snprintf(buf, sizeof buf, "min TV %.6f over %zu adversaries (bound %.6f)", s.best.tv, s.adversaries,
                1.0 / 11.0);
  return {s.best.tv >= 1.0 / 11.0, buf};
}

Outcome locality() {
  Rng rng(909);
  std::size_t checks = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3 + rng.next_u64() % 4;
    const auto g = probes::random_connected_graph(n, 0.15, rng);
    const std::size_t T = 1 + rng.next_u64() % 2;
    const auto r = probes::check_locality(g, T, rng);
    checks += r.checks;
    worst = std::max(worst, r.worst);
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu perturbations, max deviation %.3e", checks, worst);
  return {worst <= 1e-12 && checks > 0, buf};
}

Outcome derandomization() {
  cli::ExperimentConfig c;
  c.experiment = "derandomize-demo";
  c.T = 2;
  const auto rep = cli::run_experiment(c);
  const auto exact = rep.rows[0]["exact"].get<std::size_t>();
  return {rep.passed && exact == 16, std::to_string(exact) + "/16 inputs exact"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"two-round subgraph state construction", subgraph_construction},
      {"quantum relation validity d=2,4,6", relation_validity},
      {"parity conditions necessary on the support", parity_necessity},
      {"no affine strategy meets all four identities", lemma2},
      {"affine optimum 7/8 with witness replay", affine_bound},
      {"k-copies success (7/8)^k", k_copies},
      {"sampling law matches the distributed protocol", gamma_identity},
      {"adversary TV at least 1/11", tv_bound},
      {"outputs depend only on the T-ball", locality},
      {"derandomized XOR on the 4-cycle", derandomization},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s [%zu] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
