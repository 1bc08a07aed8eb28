#include <gtest/gtest.h>

#include <numeric>

#include "qlocal/analytics.hpp"
#include "qlocal/protocols.hpp"
#include "qlocal/verify.hpp"

using namespace qlocal;
using namespace qlocal::analytics;
using protocols::AffineStrategy;
using protocols::TriangleInput;

namespace {

OutcomeDistribution random_distribution(Schema schema, Rng& rng, std::size_t entries) {
  OutcomeDistribution d(schema);
  std::vector<double> w(entries);
  double total = 0.0;
  for (auto& x : w) total += (x = rng.uniform());
  const std::uint64_t span = std::uint64_t{1} << schema.size();
  for (std::size_t i = 0; i < entries; ++i) d.add(rng.next_u64() % span, w[i] / total);
  return d;
}

double max_bit_bias(const OutcomeDistribution& d, std::size_t coordinate) {
  return std::abs(marginal(d, coordinate).probability(1) - 0.5);
}

}  // namespace

TEST(TotalVariation, Examples) {
  OutcomeDistribution p({"a"}), q({"a"});
  p.add(0, 1.0);
  q.add(1, 1.0);
  EXPECT_DOUBLE_EQ(tv_distance(p, q), 1.0);
  EXPECT_DOUBLE_EQ(tv_distance(p, p), 0.0);
  OutcomeDistribution h({"a"});
  h.add(0, 0.5);
  h.add(1, 0.5);
  EXPECT_DOUBLE_EQ(tv_distance(p, h), 0.5);
  EXPECT_THROW(tv_distance(p, OutcomeDistribution({"b"})), ArgumentError);
}

TEST(TotalVariation, MetricProperties) {
  Rng rng(10);
  const Schema s = indexed_schema("z", 5);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_distribution(s, rng, 6), b = random_distribution(s, rng, 6), c = random_distribution(s, rng, 6);
    EXPECT_NEAR(tv_distance(a, b), tv_distance(b, a), 1e-15);
    EXPECT_LE(tv_distance(a, c), tv_distance(a, b) + tv_distance(b, c) + 1e-12);
    EXPECT_GE(tv_distance(a, b), 0.0);
    EXPECT_LE(tv_distance(a, b), 1.0 + 1e-12);
  }
}

TEST(Marginal, ProjectsAndValidates) {
  OutcomeDistribution d({"a", "b", "c"});
  d.add(0b011, 0.25);
  d.add(0b100, 0.75);
  const auto ac = marginal(d, std::vector<std::size_t>{0, 2});
  EXPECT_EQ(ac.schema(), (Schema{"a", "c"}));
  EXPECT_DOUBLE_EQ(ac.probability(0b01), 0.25);
  EXPECT_DOUBLE_EQ(ac.probability(0b10), 0.75);
  EXPECT_DOUBLE_EQ(marginal(d, std::string("b")).probability(1), 0.25);
  EXPECT_THROW(marginal(d, 3), ArgumentError);
  EXPECT_THROW(marginal(d, std::string("q")), ArgumentError);
}

TEST(Marginal, NeverIncreasesDistance) {
  Rng rng(12);
  const Schema s = indexed_schema("z", 6);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_distribution(s, rng, 10), b = random_distribution(s, rng, 10);
    const std::vector<std::size_t> coords{rng.next_u64() % 6, (rng.next_u64() % 5 + 1 + 0) % 6};
    if (coords[0] == coords[1]) continue;
    EXPECT_LE(tv_distance(marginal(a, coords), marginal(b, coords)), tv_distance(a, b) + 1e-12);
  }
}

TEST(Gamma, NormalizedWithUniformInputBits) {
  for (std::size_t d : {2, 4, 6}) {
    const auto g = exact_gamma(d);
    EXPECT_NEAR(g.total(), 1.0, 1e-12);
    EXPECT_EQ(g.schema(), protocols::sample_schema(d));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(max_bit_bias(g, i), 1e-12) << "d=" << d;
  }
  EXPECT_THROW(exact_gamma(8), ResourceError);
  EXPECT_THROW(exact_gamma(3), ArgumentError);
}

TEST(Gamma, SupportIsTheRelation) {
  for (std::size_t d : {2, 4}) {
    const auto g = exact_gamma(d);
    std::size_t expected = 0;
    for (const auto& in : protocols::all_inputs()) expected += verify::enumerate_support(d, in).size();
    EXPECT_EQ(g.size(), expected);
    for (const auto& [key, p] : g.entries()) {
      const auto in = TriangleInput::from_index(static_cast<unsigned>(key & 7U));
      EXPECT_TRUE(verify::enumerate_support(d, in).contains(key >> 3));
    }
  }
}

TEST(Gamma, EqualsTheSamplingProtocolLaw) {
  for (std::size_t d : {2, 4}) {
    const auto net = net::build_script_gd(d);
    EXPECT_LE(tv_distance(exact_gamma(d), exact_sampling_distribution(net)), 1e-9) << "d=" << d;
  }
}

TEST(Gamma, EmpiricalSamplingConverges) {
  const auto net = net::build_script_gd(2);
  net::RunOptions opt;
  opt.rounds = protocols::kSubgraphRounds;
  opt.seed = 2024;
  const auto emp = empirical_distribution(net.topology, protocols::sampling_protocol_programs(net.topology), opt,
                                          sample_order(net.layout), protocols::sample_schema(2), 100000);
  EXPECT_EQ(emp.kind(), DistributionKind::empirical);
  EXPECT_EQ(emp.shots(), 100000U);
  EXPECT_LE(tv_distance(emp, exact_gamma(2)), 0.02);
}

TEST(Gamma, RelationProtocolConditionedOnInputsConverges) {
  const auto net = net::build_script_gd(2);
  for (const auto& in : protocols::all_inputs()) {
    net::RunOptions opt;
    opt.rounds = protocols::kSubgraphRounds;
    opt.seed = 100 + in.index();
    opt.inputs = protocols::relation_inputs(net.layout, in);
    const auto emp = empirical_distribution(net.topology, protocols::relation_protocol_programs(net.topology), opt,
                                            net.layout.ring, protocols::ring_schema(2), 100000);
    const auto exact = quantum::exact_distribution(protocols::process_pd(2, in), protocols::ring_schema(2));
    EXPECT_LE(tv_distance(emp, exact), 0.02) << in.to_string();
  }
}

TEST(Empirical, SingleShotIsAPointMass) {
  const auto net = net::build_script_gd(2);
  net::RunOptions opt;
  opt.rounds = protocols::kSubgraphRounds;
  const auto one = empirical_distribution(net.topology, protocols::sampling_protocol_programs(net.topology), opt,
                                          sample_order(net.layout), protocols::sample_schema(2), 1);
  EXPECT_EQ(one.size(), 1U);
  EXPECT_DOUBLE_EQ(one.entries().begin()->second, 1.0);
  EXPECT_THROW(empirical_distribution(net.topology, protocols::sampling_protocol_programs(net.topology), opt,
                                      sample_order(net.layout), protocols::sample_schema(2), 0),
               ArgumentError);
}

TEST(Empirical, SeedStable) {
  const auto net = net::build_script_gd(2);
  net::RunOptions opt;
  opt.rounds = protocols::kSubgraphRounds;
  opt.seed = 8;
  auto sample = [&] {
    return empirical_distribution(net.topology, protocols::sampling_protocol_programs(net.topology), opt,
                                  sample_order(net.layout), protocols::sample_schema(2), 500);
  };
  EXPECT_EQ(sample().entries(), sample().entries());
}

TEST(ClassicalLaw, DeterministicProgramsGiveAPointMass) {
  const auto net = net::build_script_gd(2);
  auto programs = protocols::affine_strategy_programs(net, AffineStrategy{}, 0);
  net::RunOptions opt;
  opt.model = net::Model::classical;
  opt.inputs = protocols::relation_inputs(net.layout, TriangleInput::parse("110"));
  const auto law = exact_record_distribution(net.topology, programs, opt, net.layout.ring, protocols::ring_schema(2));
  EXPECT_EQ(law.size(), 1U);
  EXPECT_DOUBLE_EQ(law.probability(0), 1.0);
}

TEST(ClassicalLaw, WidthMismatchIsAnError) {
  const auto net = net::build_script_gd(2);
  auto programs = protocols::affine_strategy_programs(net, AffineStrategy{}, 0);
  net::RunOptions opt;
  opt.model = net::Model::classical;
  opt.inputs = protocols::relation_inputs(net.layout, {});
  EXPECT_THROW(exact_record_distribution(net.topology, programs, opt, net.layout.ring, {"x0"}), ProtocolError);
}

TEST(Adversary, BiasGridContainsElevenths) {
  const auto g = bias_grid();
  EXPECT_EQ(g.size(), 23U);
  EXPECT_NE(std::find(g.begin(), g.end(), 5.0 / 11.0), g.end());
  EXPECT_NE(std::find(g.begin(), g.end(), 6.0 / 11.0), g.end());
  EXPECT_NE(std::find(g.begin(), g.end(), 0.5), g.end());
}

TEST(Adversary, InputLawIsAProductLaw) {
  const auto law = input_law({0.2, 0.5, 0.9});
  EXPECT_NEAR(std::accumulate(law.begin(), law.end(), 0.0), 1.0, 1e-15);
  EXPECT_NEAR(law[0b101], 0.2 * 0.5 * 0.9, 1e-15);
  EXPECT_NEAR(law[0b010], 0.8 * 0.5 * 0.1, 1e-15);
}

TEST(Adversary, SingleBiasedBitGapEqualsItsDistanceFromHalf) {
  const auto law = input_law({5.0 / 11.0, 0.5, 0.5});
  double tv = 0.0;
  for (double p : law) tv += 0.5 * std::abs(p - 0.125);
  EXPECT_NEAR(tv, 1.0 / 22.0, 1e-15);
}

TEST(Adversary, LosingSetsPartitionTheOptimalStrategies) {
  std::size_t total = 0;
  for (unsigned k : {0b000U, 0b110U, 0b101U, 0b011U}) {
    const auto lost = TriangleInput::from_index(k);
    const auto set = strategies_losing_only(lost);
    EXPECT_EQ(set.size(), 64U);
    for (const auto& s : set) EXPECT_DOUBLE_EQ(verify::affine_success(s), 0.875);
    total += set.size();
  }
  EXPECT_EQ(total, verify::best_affine_success(2).optimal_count);
}

TEST(Adversary, ClassTablesAreConditionalLaws) {
  for (const auto& m : adversary_family(1)) {
    const auto t = m.class_table();
    for (const auto& row : t) EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-12) << m.label;
  }
}

TEST(Adversary, FamilySizes) {
  EXPECT_EQ(adversary_family(0).size(), 8U);
  EXPECT_EQ(adversary_family(1).size(), 512U + 35U + 1U);
}

TEST(Adversary, CellProfileMatchesFullRecordLaw) {
  Rng rng(5);
  for (std::size_t d : {2, 4}) {
    const auto gamma = exact_gamma(d);
    const CellProfile profile(gamma, d);
    const auto family = adversary_family(1);
    for (int i = 0; i < 12; ++i) {
      const auto& m = family[rng.next_u64() % family.size()];
      const auto grid = bias_grid();
      const std::array<double, 3> bias{grid[rng.next_u64() % 23], grid[rng.next_u64() % 23], grid[rng.next_u64() % 23]};
      const double fast = profile.tv(input_law(bias), m.class_table());
      const double slow = tv_distance(gamma, adversary_record_law(d, bias, m));
      EXPECT_NEAR(fast, slow, 1e-12) << m.label;
    }
  }
}

TEST(Adversary, BiasedCornerIsFarFromTarget) {
  const CellProfile profile(exact_gamma(4), 4);
  for (const auto& m : adversary_family(1)) EXPECT_GE(profile.tv(input_law({0.0, 0.5, 0.5}), m.class_table()), 0.5 - 1e-12);
}

TEST(Adversary, FrozenMinimumAtD4) {
  const auto search = min_tv_affine_adversary(4, 1);
  EXPECT_NEAR(search.best.tv, 0.125, 1e-12);
  EXPECT_GE(search.best.tv, 1.0 / 11.0);
  EXPECT_EQ(search.best.bias, (std::array<double, 3>{0.5, 0.5, 0.5}));
  EXPECT_NEAR(search.best.validity, 0.875, 1e-12);
  EXPECT_EQ(search.adversaries, 23U * 23U * 23U * 548U);
  EXPECT_EQ(search.evaluated, 64116U);
}

TEST(Adversary, ZeroRoundsLeavesOnlyConstants) {
  const auto search = min_tv_affine_adversary(4, 0);
  EXPECT_NEAR(search.best.tv, 0.84375, 1e-12);
}

TEST(Adversary, RoundBudgetIsValidated) {
  EXPECT_THROW(min_tv_affine_adversary(2, 1), ArgumentError);
  EXPECT_THROW(min_tv_affine_adversary(4, 2), ArgumentError);
}

TEST(Adversary, ProgramRealizesTheRecordLaw) {
  for (std::size_t d : {2, 4}) {
    const auto net = net::build_script_gd(d);
    for (unsigned k : {0U, 1U, 0b1010010U}) {
      const auto s = AffineStrategy::from_index(k);
      if (!s.admissible()) continue;
      const auto exact = exact_classical_distribution(net, adversary_programs(net, s), 1);
      EXPECT_LT(tv_distance(exact, adversary_record_law(d, {0.5, 0.5, 0.5}, point_mixture(s))), 1e-12)
          << "d=" << d << " " << s.to_string();
    }
  }
}

TEST(Adversary, ProgramMonteCarloMatchesExact) {
  const auto net = net::build_script_gd(2);
  const auto witness = verify::best_affine_success(2).witness;
  const auto programs = adversary_programs(net, witness);
  net::RunOptions opt;
  opt.rounds = 1;
  opt.model = net::Model::classical;
  opt.seed = 41;
  const auto emp = empirical_distribution(net.topology, programs, opt, sample_order(net.layout),
                                          protocols::sample_schema(2), 100000);
  EXPECT_LE(tv_distance(emp, exact_classical_distribution(net, programs, 1)), 0.02);
}

TEST(Adversary, ProgramRejectsInadmissibleStrategies) {
  const auto net = net::build_script_gd(2);
  AffineStrategy bad;
  bad.l = {true, false, false};
  EXPECT_THROW(adversary_programs(net, bad), ArgumentError);
}
