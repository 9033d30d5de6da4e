#include "qdpc/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qdpc {

namespace {

void check_qubits(int qubits, int cap) {
  if (qubits < 1 || qubits > cap)
    throw std::domain_error("qubit count " + std::to_string(qubits) + " outside [1, " +
                            std::to_string(cap) + "]");
}

}  // namespace

StateVector::StateVector(int qubits, std::vector<Amplitude> amplitudes, int qubit_cap)
    : qubits_(qubits), amps_(std::move(amplitudes)) {
  check_qubits(qubits, qubit_cap);
  if (amps_.size() != (std::size_t{1} << qubits))
    throw std::invalid_argument("amplitude count must be 2^qubits");
}

StateVector StateVector::basis(int qubits, Index k, int qubit_cap) {
  check_qubits(qubits, qubit_cap);
  std::vector<Amplitude> amps(std::size_t{1} << qubits);
  amps.at(k) = 1.0;
  return StateVector(qubits, std::move(amps), qubit_cap);
}

double StateVector::norm_squared() const noexcept {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

std::size_t OracleTable::marked_count() const noexcept {
  return static_cast<std::size_t>(std::count(marks.begin(), marks.end(), true));
}

StateVector uniform_state(int qubits, int qubit_cap) {
  check_qubits(qubits, qubit_cap);
  const std::size_t dim = std::size_t{1} << qubits;
  const double a = 1.0 / std::sqrt(static_cast<double>(dim));
  return StateVector(qubits, std::vector<Amplitude>(dim, Amplitude(a, 0.0)), qubit_cap);
}

void apply_phase_oracle(StateVector& state, const OracleTable& table) {
  auto& amps = state.amplitudes();
  if (table.marks.size() != amps.size()) throw std::invalid_argument("oracle table length mismatch");
  for (std::size_t k = 0; k < amps.size(); ++k)
    if (table.marks[k]) amps[k] = -amps[k];
}

void apply_diffusion(StateVector& state) {
  auto& amps = state.amplitudes();
  Amplitude mean = 0.0;
  for (const auto& a : amps) mean += a;
  mean /= static_cast<double>(amps.size());
  for (auto& a : amps) a = 2.0 * mean - a;
}

void apply_grover_iteration(StateVector& state, const OracleTable& table) {
  apply_phase_oracle(state, table);
  apply_diffusion(state);
}

double marked_probability(const StateVector& state, const OracleTable& table) {
  const auto& amps = state.amplitudes();
  if (table.marks.size() != amps.size()) throw std::invalid_argument("oracle table length mismatch");
  double p = 0.0;
  for (std::size_t k = 0; k < amps.size(); ++k)
    if (table.marks[k]) p += std::norm(amps[k]);
  return p;
}

Index measure(const StateVector& state, Rng& rng) {
  const auto& amps = state.amplitudes();
  std::uniform_real_distribution<double> unit(0.0, state.norm_squared());
  double u = unit(rng);
  for (std::size_t k = 0; k < amps.size(); ++k) {
    u -= std::norm(amps[k]);
    if (u < 0.0) return k;
  }
  // Round-off can leave u marginally non-negative; fall back to the last
  // state with non-zero weight.
  for (std::size_t k = amps.size(); k-- > 0;)
    if (std::norm(amps[k]) > 0.0) return k;
  return 0;
}

}  // namespace qdpc
