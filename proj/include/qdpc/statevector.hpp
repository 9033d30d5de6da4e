#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qdpc/dataset.hpp"
#include "qdpc/random.hpp"

namespace qdpc {

using Amplitude = std::complex<double>;

inline constexpr int kDefaultQubitCap = 12;

/// Dense amplitude vector over q qubits (2^q basis states).
class StateVector {
 public:
  StateVector(int qubits, std::vector<Amplitude> amplitudes, int qubit_cap = kDefaultQubitCap);

  static StateVector basis(int qubits, Index k, int qubit_cap = kDefaultQubitCap);

  int qubits() const noexcept { return qubits_; }
  std::size_t dimension() const noexcept { return amps_.size(); }
  const std::vector<Amplitude>& amplitudes() const noexcept { return amps_; }
  std::vector<Amplitude>& amplitudes() noexcept { return amps_; }
  Amplitude operator[](Index k) const { return amps_.at(k); }

  double norm_squared() const noexcept;
  double probability(Index k) const { return std::norm(amps_.at(k)); }

 private:
  int qubits_;
  std::vector<Amplitude> amps_;
};

/// Truth table of a boolean oracle over the 2^q basis states.
struct OracleTable {
  std::vector<bool> marks;

  std::size_t marked_count() const noexcept;
};

/// All amplitudes equal to 1/sqrt(2^q).
StateVector uniform_state(int qubits, int qubit_cap = kDefaultQubitCap);

/// Phase oracle: negates amplitude k iff marks[k].
void apply_phase_oracle(StateVector& state, const OracleTable& table);

/// Reflection about the uniform state: a_k <- 2 mean(a) - a_k.
void apply_diffusion(StateVector& state);

/// One Grover iteration: oracle then diffusion.
void apply_grover_iteration(StateVector& state, const OracleTable& table);

/// Total probability on marked basis states.
double marked_probability(const StateVector& state, const OracleTable& table);

/// Samples a basis index with probability |a_k|^2.
Index measure(const StateVector& state, Rng& rng);

}  // namespace qdpc
