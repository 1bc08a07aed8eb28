#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "qlocal/analytics/distributions.hpp"
#include "qlocal/protocols/affine.hpp"
#include "qlocal/verify/classical.hpp"
#include "qlocal/verify/parity.hpp"

namespace qlocal::analytics {

using protocols::AffineStrategy;
using protocols::TriangleInput;
using verify::ParityTuple;

// Row b (input index), column c (parity class index).
using ClassTable = std::array<std::array<double, 16>, 8>;

// A randomized choice among admissible affine strategies.
struct StrategyMixture {
  std::string label;
  std::vector<std::pair<AffineStrategy, double>> components;

  // Conditional law of the parity class given b.
  ClassTable class_table() const {
    ClassTable t{};
    for (const auto& [s, w] : components)
      for (const auto& in : protocols::all_inputs()) t[in.index()][s.realized(in).index()] += w;
    return t;
  }
};

inline StrategyMixture point_mixture(const AffineStrategy& s) { return {s.to_string(), {{s, 1.0}}}; }

inline StrategyMixture uniform_mixture(std::string label, const std::vector<AffineStrategy>& strategies) {
  StrategyMixture m{std::move(label), {}};
  for (const auto& s : strategies) m.components.emplace_back(s, 1.0 / static_cast<double>(strategies.size()));
  return m;
}

// Admissible strategies meeting the parity conditions on every input except `lost`.
inline std::vector<AffineStrategy> strategies_losing_only(TriangleInput lost) {
  std::vector<AffineStrategy> out;
  for (const auto& s : verify::admissible_strategies()) {
    bool ok = true;
    for (const auto& in : protocols::all_inputs())
      if (verify::check_prop1(in, s.realized(in)) == (in == lost)) ok = false;
    if (ok) out.push_back(s);
  }
  return out;
}

// Law of b for independent bits with Pr[b_i = 1] = bias[i].
inline std::array<double, 8> input_law(const std::array<double, 3>& bias) {
  std::array<double, 8> law{};
  for (const auto& in : protocols::all_inputs()) {
    double p = 1.0;
    for (std::size_t i = 0; i < 3; ++i) p *= in.b[i] ? bias[i] : 1.0 - bias[i];
    law[in.index()] = p;
  }
  return law;
}

// Per-(b, class) data of the target law, enough to evaluate the exact full-record
// TV against any law that is uniform within each (b, class) cell.
class CellProfile {
 public:
  CellProfile(const OutcomeDistribution& gamma, std::size_t d) : d_(d) {
    cell_size_ = std::ldexp(1.0, static_cast<int>(3 * d - 4));
    std::array<std::vector<double>, 128> values;
    for (const auto& [key, p] : gamma.entries()) {
      const unsigned b = static_cast<unsigned>(key & 7U);
      const unsigned c = verify::parities(d, key >> 3).index();
      values[b * 16 + c].push_back(p);
    }
    for (std::size_t i = 0; i < 128; ++i) {
      auto& v = values[i];
      std::sort(v.begin(), v.end());
      cells_[i].sorted = v;
      cells_[i].prefix.assign(v.size() + 1, 0.0);
      for (std::size_t k = 0; k < v.size(); ++k) cells_[i].prefix[k + 1] = cells_[i].prefix[k] + v[k];
      mass_[i / 16][i % 16] = cells_[i].prefix.back();
    }
  }

  std::size_t d() const { return d_; }
  double cell_size() const { return cell_size_; }
  // Target mass of (b, class).
  const ClassTable& mass() const { return mass_; }
  // Fraction of class c strings carrying positive target mass given b.
  double support_fraction(unsigned b, unsigned c) const {
    return static_cast<double>(cells_[b * 16 + c].sorted.size()) / cell_size_;
  }

  // Sum over the cell's strings of |target(b, x) - total / cell_size|.
  double cell_l1(unsigned b, unsigned c, double total) const {
    const Cell& cell = cells_[b * 16 + c];
    const double a = total / cell_size_;
    const auto split = static_cast<std::size_t>(std::lower_bound(cell.sorted.begin(), cell.sorted.end(), a) -
                                                cell.sorted.begin());
    const double n_low = static_cast<double>(split);
    const double n_high = static_cast<double>(cell.sorted.size() - split);
    const double zeros = cell_size_ - static_cast<double>(cell.sorted.size());
    const double low = a * n_low - cell.prefix[split];
    const double high = (cell.prefix.back() - cell.prefix[split]) - a * n_high;
    return low + high + zeros * a;
  }

  // Exact full-record TV to the law: b ~ law_b, class ~ table[b], x uniform in class.
  double tv(const std::array<double, 8>& law_b, const ClassTable& table) const {
    double sum = 0.0;
    for (unsigned b = 0; b < 8; ++b)
      for (unsigned c = 0; c < 16; ++c) sum += cell_l1(b, c, law_b[b] * table[b][c]);
    return 0.5 * sum;
  }

 private:
  struct Cell {
    std::vector<double> sorted;
    std::vector<double> prefix;
  };
  std::size_t d_;
  double cell_size_ = 0.0;
  std::array<Cell, 128> cells_;
  ClassTable mass_{};
};

// Biases k/22 for k = 0..22; includes 5/11 and 6/11.
inline std::vector<double> bias_grid() {
  std::vector<double> g;
  for (int k = 0; k <= 22; ++k) g.push_back(k / 22.0);
  return g;
}

// Adversaries for a T-round budget. With T = 0 no node can correlate its
// output with any input bit or with another node, so only strategies with
// constant parities remain; T >= 1 admits every admissible strategy, the
// four uniform "lose exactly one listed input" mixtures, a grid of mixtures
// of those four, and the uniform mixture over all admissible strategies.
inline std::vector<StrategyMixture> adversary_family(std::size_t T) {
  std::vector<StrategyMixture> family;
  const auto all = verify::admissible_strategies();
  for (const auto& s : all) {
    const bool constant = !s.e[1] && !s.e[2] && !s.e[3] && !s.r[1] && !s.r[2] && !s.bt[1] && !s.bt[2] &&
                          !s.l[1] && !s.l[2];
    if (T > 0 || constant) family.push_back(point_mixture(s));
  }
  if (T == 0) return family;
  std::vector<StrategyMixture> losers;
  for (unsigned k : {0b000U, 0b110U, 0b101U, 0b011U}) {
    const auto in = TriangleInput::from_index(k);
    losers.push_back(uniform_mixture("lose-" + in.to_string(), strategies_losing_only(in)));
  }
  constexpr int kSteps = 4;
  for (int a = 0; a <= kSteps; ++a)
    for (int b = 0; a + b <= kSteps; ++b)
      for (int c = 0; a + b + c <= kSteps; ++c) {
        const int e = kSteps - a - b - c;
        const std::array<int, 4> w{a, b, c, e};
        StrategyMixture m;
        for (std::size_t i = 0; i < 4; ++i) {
          if (w[i] == 0) continue;
          if (!m.label.empty()) m.label += "+";
          m.label += std::to_string(w[i]) + "/" + std::to_string(kSteps) + "*" + losers[i].label;
          for (const auto& [s, p] : losers[i].components) m.components.emplace_back(s, p * w[i] / kSteps);
        }
        family.push_back(std::move(m));
      }
  family.push_back(uniform_mixture("uniform-admissible", all));
  return family;
}

struct AdversaryWitness {
  double tv = 1.0;
  std::array<double, 3> bias{};
  std::string mixture;
  double marginal_tv = 0.0;  // TV of the b-marginal alone
  double validity = 0.0;     // chance the output is in the support, averaged uniformly over b
};

struct AdversarySearch {
  AdversaryWitness best;
  std::size_t adversaries = 0;   // (bias, mixture) pairs in the family
  std::size_t evaluated = 0;     // pairs whose TV was computed
};

// Minimum exact TV between the target law and the adversary family for a
// T-round budget. Bias points whose b-marginal alone is already at least the
// best TV found are skipped; the minimum is unaffected because TV never
// increases under marginalization.
inline AdversarySearch min_tv_affine_adversary(std::size_t d, std::size_t T) {
  net::require_triangle_d(d);
  if (T > d / 4)
    throw ArgumentError("T = " + std::to_string(T) + " exceeds d/4 = " + std::to_string(d / 4));
  const CellProfile profile(exact_gamma(d), d);
  const auto family = adversary_family(T);
  std::vector<ClassTable> tables;
  for (const auto& m : family) tables.push_back(m.class_table());

  struct BiasPoint {
    std::array<double, 3> bias;
    std::array<double, 8> law;
    double marginal_tv;
  };
  std::vector<BiasPoint> points;
  for (double p0 : bias_grid())
    for (double p1 : bias_grid())
      for (double p2 : bias_grid()) {
        BiasPoint pt{{p0, p1, p2}, input_law({p0, p1, p2}), 0.0};
        for (double q : pt.law) pt.marginal_tv += 0.5 * std::abs(q - 0.125);
        points.push_back(pt);
      }
  std::stable_sort(points.begin(), points.end(),
                   [](const BiasPoint& a, const BiasPoint& b) { return a.marginal_tv < b.marginal_tv; });

  AdversarySearch search;
  search.adversaries = points.size() * family.size();
  std::size_t best_mixture = 0;
  for (const auto& pt : points) {
    if (pt.marginal_tv >= search.best.tv) break;
    for (std::size_t m = 0; m < family.size(); ++m) {
      ++search.evaluated;
      const double tv = profile.tv(pt.law, tables[m]);
      if (tv < search.best.tv) {
        search.best.tv = tv;
        search.best.bias = pt.bias;
        search.best.marginal_tv = pt.marginal_tv;
        best_mixture = m;
      }
    }
  }
  search.best.mixture = family[best_mixture].label;
  double validity = 0.0;
  for (unsigned b = 0; b < 8; ++b)
    for (unsigned c = 0; c < 16; ++c) validity += tables[best_mixture][b][c] * profile.support_fraction(b, c) / 8.0;
  search.best.validity = validity;
  return search;
}

// Full (b, x) law of an adversary: x is uniform within the realized class.
inline OutcomeDistribution adversary_record_law(std::size_t d, const std::array<double, 3>& bias,
                                                const StrategyMixture& mixture) {
  net::require_triangle_d(d);
  if (d > kMaxGammaD) throw ResourceError("adversary_record_law is limited to d <= 6");
  const auto law_b = input_law(bias);
  const auto table = mixture.class_table();
  const double cell = std::ldexp(1.0, static_cast<int>(3 * d - 4));
  OutcomeDistribution out(protocols::sample_schema(d));
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << (3 * d)); ++x) {
    const unsigned c = verify::parities(d, x).index();
    for (unsigned b = 0; b < 8; ++b) {
      const double p = law_b[b] * table[b][c] / cell;
      if (p > 0.0) out.add(b | (x << 3), p);
    }
  }
  return out;
}

// One-round classical realization of a point adversary with unbiased bits:
// corner i draws b_i and tells w_i and its ring neighbours; every other ring
// node draws a noise bit and sends it to both neighbours. A ring node outputs
// its affine term (see protocols::affine_placement) XOR the noise it received,
// which leaves x uniform within the realized parity class.
class AdversaryProgram final : public net::Program<AdversaryProgram> {
 public:
  enum class Kind { input, corner, generator };

  AdversaryProgram(Kind kind, std::size_t corner_index, protocols::AffineTerm term)
      : kind_(kind), corner_index_(corner_index), term_(term) {}

  std::size_t randomness_bits(const net::LocalView&) const override { return kind_ == Kind::input ? 0 : 1; }

  void init(const net::LocalView& view, const std::optional<Bytes>&, net::RandomTape tape,
            net::NodeContext&) override {
    view_ = view;
    if (kind_ == Kind::input) return;
    own_ = tape.next_bit();
    if (kind_ == Kind::corner) known_[corner_index_] = own_;
  }

  net::Outbox round(std::size_t t, const net::Inbox& inbox, net::NodeContext&) override {
    for (const auto& [v, m] : inbox) {
      if (m.payload.size() == 3 && m.payload[0] == 1) known_[m.payload[1]] = m.payload[2] != 0;
      if (m.payload.size() == 2 && m.payload[0] == 2) noise_ ^= m.payload[1] != 0;
    }
    net::Outbox out;
    if (t == 0 && kind_ != Kind::input) {
      const Bytes payload = kind_ == Kind::corner
                                ? Bytes{1, static_cast<std::uint8_t>(corner_index_), static_cast<std::uint8_t>(own_)}
                                : Bytes{2, static_cast<std::uint8_t>(own_)};
      for (NodeId v : view_.neighbors) out[v] = {payload, {}};
    }
    return out;
  }

  net::NodeOutput finalize(net::NodeContext&) override {
    if (kind_ == Kind::input) {
      if (known_.size() != 1) throw ProtocolError("input node did not hear from its corner");
      return {{static_cast<std::uint8_t>(known_.begin()->second)}, {}};
    }
    bool x = term_.constant ^ noise_;
    for (std::size_t i = 0; i < 3; ++i) {
      if (!term_.uses[i]) continue;
      if (!known_.count(i)) throw ProtocolError(to_string(view_.self) + " never learned input " + std::to_string(i));
      x ^= known_.at(i);
    }
    return {{static_cast<std::uint8_t>(x)}, {}};
  }

 private:
  Kind kind_;
  std::size_t corner_index_;
  protocols::AffineTerm term_;
  net::LocalView view_;
  bool own_ = false;
  bool noise_ = false;
  std::map<std::size_t, bool> known_;
};

inline net::ProgramSet adversary_programs(const net::TriangleNetwork& net, const AffineStrategy& s) {
  if (!s.admissible()) throw ArgumentError("strategy " + s.to_string() + " is not admissible");
  const std::size_t d = net.layout.d;
  const auto terms = protocols::affine_placement(d, s);
  using Kind = AdversaryProgram::Kind;
  net::ProgramSet programs;
  for (std::size_t i = 0; i < 3; ++i)
    programs[net.layout.w(i)] = std::make_shared<AdversaryProgram>(Kind::input, i, protocols::AffineTerm{});
  for (std::size_t label = 0; label < 3 * d; ++label) {
    protocols::AffineTerm term;
    if (auto it = terms.find(label); it != terms.end()) term = it->second;
    const bool corner = label % d == 0;
    programs[net.layout.v(label)] =
        std::make_shared<AdversaryProgram>(corner ? Kind::corner : Kind::generator, label / d, term);
  }
  return programs;
}

}  // namespace qlocal::analytics
