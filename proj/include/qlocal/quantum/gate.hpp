#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qlocal/core/errors.hpp"

namespace qlocal::quantum {

using Amplitude = std::complex<double>;

// Opaque label of a qubit inside an arena. Labels are handed out in
// increasing order, so ascending id is ascending creation order.
struct QubitId {
  std::uint64_t value = 0;
  friend auto operator<=>(const QubitId&, const QubitId&) = default;
};

inline std::string to_string(QubitId q) { return "q" + std::to_string(q.value); }

enum class GateKind { h, s, s_power, cnot, cz, cs };

inline const char* name(GateKind k) {
  switch (k) {
    case GateKind::h: return "H";
    case GateKind::s: return "S";
    case GateKind::s_power: return "S_POWER";
    case GateKind::cnot: return "CNOT";
    case GateKind::cz: return "CZ";
    case GateKind::cs: return "CS";
  }
  return "?";
}

inline constexpr std::size_t arity(GateKind k) {
  return (k == GateKind::h || k == GateKind::s || k == GateKind::s_power) ? 1 : 2;
}

// A gate acting on one or two targets. Target is a tensor position for bare
// statevectors and a QubitId inside an arena. For CNOT targets[0] is the
// control. `power` is the exponent bit of S_POWER and ignored otherwise.
template <class Target>
struct BasicGate {
  GateKind kind = GateKind::h;
  std::array<Target, 2> targets{};
  bool power = true;

  std::size_t arity() const { return quantum::arity(kind); }

  template <class Other, class Map>
  BasicGate<Other> map_targets(Map&& f) const {
    BasicGate<Other> g;
    g.kind = kind;
    g.power = power;
    g.targets[0] = f(targets[0]);
    if (arity() == 2) g.targets[1] = f(targets[1]);
    return g;
  }
};

using Gate = BasicGate<std::size_t>;

namespace gates {
template <class T> BasicGate<T> h(T q) { return {GateKind::h, {q, T{}}, true}; }
template <class T> BasicGate<T> s(T q) { return {GateKind::s, {q, T{}}, true}; }
template <class T> BasicGate<T> s_power(T q, bool b) { return {GateKind::s_power, {q, T{}}, b}; }
template <class T> BasicGate<T> cnot(T control, T target) { return {GateKind::cnot, {control, target}, true}; }
template <class T> BasicGate<T> cz(T a, T b) { return {GateKind::cz, {a, b}, true}; }
template <class T> BasicGate<T> cs(T a, T b) { return {GateKind::cs, {a, b}, true}; }
}  // namespace gates

// Row-major unitary of the gate. Two-qubit basis index is 2*a + b where a is
// the value of targets[0] and b of targets[1].
inline std::vector<Amplitude> unitary(GateKind kind, bool power = true) {
  const double r = 1.0 / std::sqrt(2.0);
  const Amplitude i{0.0, 1.0};
  switch (kind) {
    case GateKind::h: return {r, r, r, -r};
    case GateKind::s: return {1, 0, 0, i};
    case GateKind::s_power: return power ? std::vector<Amplitude>{1, 0, 0, i} : std::vector<Amplitude>{1, 0, 0, 1};
    case GateKind::cnot: return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0};
    case GateKind::cz: return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1};
    case GateKind::cs: return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, i};
  }
  return {};
}

// Checks positional targets against a register of n qubits.
inline void validate(const Gate& g, std::size_t n) {
  for (std::size_t k = 0; k < g.arity(); ++k)
    if (g.targets[k] >= n)
      throw ArgumentError(std::string(name(g.kind)) + " target " + std::to_string(g.targets[k]) +
                          " out of range for " + std::to_string(n) + " qubits");
  if (g.arity() == 2 && g.targets[0] == g.targets[1])
    throw ArgumentError(std::string(name(g.kind)) + " needs two distinct targets");
}

}  // namespace qlocal::quantum
