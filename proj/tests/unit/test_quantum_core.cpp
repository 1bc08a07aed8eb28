#include <gtest/gtest.h>

#include <complex>
#include <sstream>
#include <vector>

#include "qlocal/core/distribution.hpp"
#include "qlocal/core/random.hpp"
#include "qlocal/quantum.hpp"

namespace q = qlocal::quantum;
using q::Amplitude;
using q::Gate;
using q::GateKind;

namespace {

using Matrix = std::vector<std::vector<Amplitude>>;

// Full 2^n operator of a gate, assembled entry by entry from its small unitary.
Matrix embed(const Gate& g, std::size_t n) {
  const std::size_t dim = std::size_t{1} << n;
  const auto u = q::unitary(g.kind, g.power);
  Matrix m(dim, std::vector<Amplitude>(dim));
  for (std::size_t row = 0; row < dim; ++row) {
    for (std::size_t col = 0; col < dim; ++col) {
      if (g.arity() == 1) {
        const std::size_t t = g.targets[0];
        if ((row & ~(std::size_t{1} << t)) != (col & ~(std::size_t{1} << t))) continue;
        m[row][col] = u[2 * ((row >> t) & 1U) + ((col >> t) & 1U)];
      } else {
        const std::size_t a = g.targets[0], b = g.targets[1];
        const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
        if ((row & ~mask) != (col & ~mask)) continue;
        const std::size_t r = 2 * ((row >> a) & 1U) + ((row >> b) & 1U);
        const std::size_t c = 2 * ((col >> a) & 1U) + ((col >> b) & 1U);
        m[row][col] = u[4 * r + c];
      }
    }
  }
  return m;
}

std::vector<Amplitude> multiply(const Matrix& m, std::span<const Amplitude> v) {
  std::vector<Amplitude> out(v.size());
  for (std::size_t r = 0; r < v.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c) out[r] += m[r][c] * v[c];
  return out;
}

Gate random_gate(std::size_t n, qlocal::Rng& rng) {
  const GateKind kinds[] = {GateKind::h, GateKind::s, GateKind::s_power, GateKind::cnot, GateKind::cz, GateKind::cs};
  Gate g;
  g.kind = kinds[rng.next_u64() % 6];
  g.power = rng.bit();
  g.targets[0] = rng.next_u64() % n;
  if (g.arity() == 2) {
    do g.targets[1] = rng.next_u64() % n;
    while (g.targets[1] == g.targets[0]);
  }
  return g;
}

double max_diff(std::span<const Amplitude> a, std::span<const Amplitude> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST(GateTables, MatchLiteralMatrices) {
  const double r = 1.0 / std::sqrt(2.0);
  const Amplitude i{0.0, 1.0};
  EXPECT_EQ(q::unitary(GateKind::h), (std::vector<Amplitude>{r, r, r, -r}));
  EXPECT_EQ(q::unitary(GateKind::s), (std::vector<Amplitude>{1, 0, 0, i}));
  EXPECT_EQ(q::unitary(GateKind::s_power, false), (std::vector<Amplitude>{1, 0, 0, 1}));
  EXPECT_EQ(q::unitary(GateKind::cs)[15], i);
  EXPECT_EQ(q::unitary(GateKind::cz)[15], Amplitude(-1.0));
  EXPECT_EQ(q::unitary(GateKind::cnot)[4 * 3 + 2], Amplitude(1.0));
}

TEST(GateTables, AreUnitary) {
  for (GateKind k : {GateKind::h, GateKind::s, GateKind::cnot, GateKind::cz, GateKind::cs}) {
    const auto u = q::unitary(k);
    const std::size_t d = q::arity(k) == 1 ? 2 : 4;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        Amplitude s{};
        for (std::size_t c = 0; c < d; ++c) s += std::conj(u[c * d + a]) * u[c * d + b];
        EXPECT_NEAR(std::abs(s - Amplitude(a == b ? 1.0 : 0.0)), 0.0, 1e-15);
      }
  }
}

TEST(StateVector, ZerosAndLimits) {
  auto s = q::new_state(3);
  EXPECT_EQ(s.dimension(), 8U);
  EXPECT_EQ(s[0], Amplitude(1.0));
  EXPECT_THROW(q::new_state(27), qlocal::ResourceError);
  EXPECT_THROW(q::new_state(5, 4), qlocal::ResourceError);
  EXPECT_THROW(q::StateVector(std::vector<Amplitude>(3)), qlocal::ArgumentError);
}

TEST(StateVector, GateValidation) {
  auto s = q::new_state(2);
  EXPECT_THROW(s.apply(q::gates::h(std::size_t{2})), qlocal::ArgumentError);
  EXPECT_THROW(s.apply(q::gates::cnot(std::size_t{1}, std::size_t{1})), qlocal::ArgumentError);
}

TEST(StateVector, AlgebraicIdentities) {
  qlocal::Rng rng(7);
  auto base = q::new_state(3);
  for (int k = 0; k < 12; ++k) base.apply(random_gate(3, rng));
  auto hh = base;
  hh.apply(q::gates::h(std::size_t{1}));
  hh.apply(q::gates::h(std::size_t{1}));
  EXPECT_LT(max_diff(hh.amplitudes(), base.amplitudes()), 1e-12);

  auto ss = base;
  auto z = base;
  ss.apply(q::gates::s(std::size_t{0}));
  ss.apply(q::gates::s(std::size_t{0}));
  z.apply(q::gates::h(std::size_t{0}));
  z.apply(q::gates::cnot(std::size_t{2}, std::size_t{0}));
  z.apply(q::gates::h(std::size_t{0}));
  auto cz = base;
  cz.apply(q::gates::cz(std::size_t{2}, std::size_t{0}));
  EXPECT_LT(max_diff(z.amplitudes(), cz.amplitudes()), 1e-12);

  auto cs2 = base;
  cs2.apply(q::gates::cs(std::size_t{0}, std::size_t{1}));
  cs2.apply(q::gates::cs(std::size_t{0}, std::size_t{1}));
  auto cz01 = base;
  cz01.apply(q::gates::cz(std::size_t{0}, std::size_t{1}));
  EXPECT_LT(max_diff(cs2.amplitudes(), cz01.amplitudes()), 1e-12);
  for (std::size_t i = 0; i < base.dimension(); ++i)
    EXPECT_LT(std::abs(ss[i] - ((i & 1U) ? -base[i] : base[i])), 1e-12);
}

TEST(StateVector, RandomCircuitsMatchKroneckerOracle) {
  qlocal::Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng.next_u64() % 4;
    auto state = q::new_state(n);
    std::vector<Amplitude> oracle(state.amplitudes().begin(), state.amplitudes().end());
    for (int k = 0; k < 15; ++k) {
      Gate g = n == 1 ? q::gates::h(std::size_t{0}) : random_gate(n, rng);
      state.apply(g);
      oracle = multiply(embed(g, n), oracle);
    }
    EXPECT_LT(max_diff(state.amplitudes(), oracle), 1e-12);
    EXPECT_NEAR(state.norm_squared(), 1.0, 1e-12);
  }
}

TEST(StateVector, KronAndPermutation) {
  auto a = q::new_state(1);
  a.apply(q::gates::h(std::size_t{0}));
  auto b = q::new_state(1);
  auto ab = a.kron(b);
  EXPECT_NEAR(std::abs(ab[1]), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(ab[2]), 0.0, 1e-15);
  const std::size_t swap[] = {1, 0};
  auto ba = ab.permuted(swap);
  EXPECT_NEAR(std::abs(ba[2]), 1.0 / std::sqrt(2.0), 1e-15);
  const std::size_t bad[] = {0, 0};
  EXPECT_THROW(ab.permuted(bad), qlocal::ArgumentError);
}

TEST(StateVector, RemoveQubitProductAndEntangled) {
  auto s = q::new_state(2);
  s.apply(q::gates::h(std::size_t{0}));
  s.apply(q::gates::s(std::size_t{0}));
  const auto single = s.remove_qubit(0);
  EXPECT_EQ(s.num_qubits(), 1U);
  EXPECT_NEAR(std::abs(single[0]), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(std::arg(single[1] / single[0]), M_PI / 2, 1e-12);

  auto bell = q::new_state(2);
  bell.apply(q::gates::h(std::size_t{0}));
  bell.apply(q::gates::cnot(std::size_t{0}, std::size_t{1}));
  EXPECT_THROW(bell.remove_qubit(1), qlocal::ProtocolError);
}

TEST(StateVector, Fidelity) {
  auto a = q::new_state(2);
  auto b = a;
  b.apply(q::gates::h(std::size_t{0}));
  EXPECT_NEAR(q::fidelity(a, a), 1.0, 1e-15);
  EXPECT_NEAR(q::fidelity(a, b), 0.5, 1e-12);
  EXPECT_THROW(q::fidelity(a, q::new_state(3)), qlocal::ArgumentError);
}

TEST(SparseState, RandomCircuitsMatchDense) {
  qlocal::Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.next_u64() % 7;
    auto dense = q::new_state(n);
    auto sparse = q::SparseState::zeros(n);
    for (int k = 0; k < 30; ++k) {
      const Gate g = random_gate(n, rng);
      dense.apply(g);
      sparse.apply(g);
      ASSERT_TRUE(std::is_sorted(sparse.keys().begin(), sparse.keys().end()));
    }
    EXPECT_LT(max_diff(sparse.to_dense().amplitudes(), dense.amplitudes()), 1e-12);
  }
}

TEST(SparseState, RemoveQubitAgreesWithDense) {
  qlocal::Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    auto dense = q::new_state(4);
    for (int k = 0; k < 10; ++k) dense.apply(random_gate(3, rng));
    dense.apply(q::gates::h(std::size_t{3}));
    if (rng.bit()) dense.apply(q::gates::s(std::size_t{3}));
    auto sparse = q::SparseState::from_dense(dense);
    const auto ds = dense.remove_qubit(3);
    const auto ss = sparse.remove_qubit(3);
    EXPECT_LT(std::abs(ds[0] - ss[0]) + std::abs(ds[1] - ss[1]), 1e-12);
    EXPECT_LT(max_diff(sparse.to_dense().amplitudes(), dense.amplitudes()), 1e-12);
  }
  auto ghz = q::SparseState::zeros(3);
  ghz.apply(q::gates::h(std::size_t{0}));
  ghz.apply(q::gates::cnot(std::size_t{0}, std::size_t{2}));
  EXPECT_THROW(ghz.remove_qubit(2), qlocal::ProtocolError);
}

TEST(GraphState, PathAmplitudes) {
  const std::pair<std::size_t, std::size_t> edge[] = {{0, 1}};
  const auto s = q::build_graph_state(2, edge);
  EXPECT_NEAR(s[0].real(), 0.5, 1e-15);
  EXPECT_NEAR(s[1].real(), 0.5, 1e-15);
  EXPECT_NEAR(s[2].real(), 0.5, 1e-15);
  EXPECT_NEAR(s[3].real(), -0.5, 1e-15);
}

TEST(GraphState, AmplitudeSignsFollowEdgeParity) {
  const std::vector<std::pair<std::size_t, std::size_t>> edges{{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}};
  const auto s = q::build_graph_state(4, edges);
  for (std::size_t z = 0; z < 16; ++z) {
    int parity = 0;
    for (auto [a, b] : edges) parity ^= static_cast<int>(((z >> a) & (z >> b)) & 1U);
    EXPECT_NEAR(s[z].real(), (parity ? -1.0 : 1.0) / 4.0, 1e-15);
  }
}

TEST(GraphState, RejectsBadInput) {
  const std::pair<std::size_t, std::size_t> dup[] = {{0, 1}, {1, 0}};
  EXPECT_THROW(q::build_graph_state(2, dup), qlocal::ArgumentError);
  const std::pair<std::size_t, std::size_t> loop[] = {{1, 1}};
  EXPECT_THROW(q::build_graph_state(2, loop), qlocal::ArgumentError);
  EXPECT_THROW(q::build_graph_state(0, {}), qlocal::ArgumentError);
}

TEST(Measurement, ExactDistributionOfPlusState) {
  auto s = q::new_state(2);
  s.apply(q::gates::h(std::size_t{0}));
  const auto d = q::exact_distribution(s);
  EXPECT_EQ(d.size(), 2U);
  EXPECT_NEAR(d.probability(0), 0.5, 1e-15);
  EXPECT_NEAR(d.probability(1), 0.5, 1e-15);
  EXPECT_EQ(d.schema(), (qlocal::Schema{"q0", "q1"}));
}

TEST(Measurement, SupportRespectsTolerance) {
  auto s = q::new_state(1);
  s.apply(q::gates::h(std::size_t{0}));
  EXPECT_EQ(q::support(s).size(), 2U);
  EXPECT_EQ(q::support(s, 0.6, {"x"}).size(), 0U);
  EXPECT_THROW(q::support(s, 0.0, {"x"}), qlocal::ArgumentError);
  EXPECT_THROW(q::support(s, 1.0, {"x"}), qlocal::ArgumentError);
}

TEST(Measurement, SamplingIsSeededAndUnbiased) {
  auto s = q::new_state(2);
  s.apply(q::gates::h(std::size_t{0}));
  s.apply(q::gates::cnot(std::size_t{0}, std::size_t{1}));
  qlocal::Rng a(42), b(42);
  std::size_t ones = 0;
  const std::size_t shots = 20000;
  for (std::size_t i = 0; i < shots; ++i) {
    const auto x = q::measure_all(s, a);
    EXPECT_EQ(x, q::measure_all(s, b));
    EXPECT_EQ(x.bits[0], x.bits[1]);
    ones += x.bits[0];
  }
  EXPECT_NEAR(static_cast<double>(ones) / shots, 0.5, 0.02);
}

TEST(Measurement, CdfSamplerMatchesLinearScan) {
  qlocal::Rng rng(3);
  auto s = q::new_state(5);
  for (int k = 0; k < 25; ++k) s.apply(random_gate(5, rng));
  q::CdfSampler sampler(s.amplitudes());
  for (int i = 0; i < 2000; ++i) {
    const double u = rng.uniform();
    EXPECT_EQ(sampler.draw(u), q::detail::sample_index(s.amplitudes(), u));
  }
}

TEST(Distribution, TextRoundTrip) {
  qlocal::OutcomeDistribution d({"b0", "x0", "x1"});
  d.add(0b101, 0.25);
  d.add(0b010, 0.75);
  std::stringstream ss;
  qlocal::write_distribution(ss, d);
  const auto back = qlocal::read_distribution(ss);
  EXPECT_EQ(back.schema(), d.schema());
  EXPECT_EQ(back.entries(), d.entries());
}

TEST(Distribution, RejectsMalformedInput) {
  qlocal::OutcomeDistribution d({"a"});
  EXPECT_THROW(d.add(0, -0.1), qlocal::ArgumentError);
  EXPECT_THROW(d.add(2, 0.1), qlocal::ArgumentError);
  std::stringstream bad("# qlocal-distribution v1\n# kind=exact shots=0\n# schema=a,b\n011 1\n");
  EXPECT_THROW(qlocal::read_distribution(bad), qlocal::ArgumentError);
}

TEST(Bits, FormatAndParse) {
  EXPECT_EQ(qlocal::format_bits(0b011, 3), "110");
  EXPECT_EQ(qlocal::parse_bits("110"), 0b011U);
  EXPECT_THROW(qlocal::parse_bits("102"), qlocal::ArgumentError);
  const auto b = qlocal::Bitstring::from_packed(0b10, {"x", "y"});
  EXPECT_EQ(b.to_string(), "01");
  qlocal::BitstringSet set({"x", "y"}, {2, 1, 2});
  EXPECT_EQ(set.size(), 2U);
  EXPECT_TRUE(set.contains(b));
  EXPECT_THROW(set.contains(qlocal::Bitstring::from_packed(0, {"y", "x"})), qlocal::ArgumentError);
}

TEST(Random, DerivedSeedsAreDistinctAndStable) {
  EXPECT_EQ(qlocal::derive_seed(1, 2), qlocal::derive_seed(1, 2));
  EXPECT_NE(qlocal::derive_seed(1, 2), qlocal::derive_seed(1, 3));
  EXPECT_NE(qlocal::derive_seed(1, 2), qlocal::derive_seed(2, 2));
}
