#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qdpc/dataset.hpp"
#include "qdpc/random.hpp"
#include "qdpc/statevector.hpp"

namespace qdpc {

/// Eight-element toy problem: precomputed densities and pairwise distances,
/// encoded on three qubits.
struct ToyFixture {
  static constexpr std::size_t kSize = 8;
  static constexpr int kQubits = 3;

  std::vector<double> rho;
  std::vector<std::vector<double>> dist;

  /// Checks the 8-element shape, a symmetric non-negative distance table and
  /// exactly two density peaks (see centers()).
  void validate() const;

  /// f_i(k) = dist(i, k) if k is higher than i in density, else +inf.
  std::vector<double> objective(Index i) const;
  std::optional<Index> nearest_higher(Index i) const;

  /// The two cluster centres: the global density maximum and the element with
  /// the largest finite nearest-higher separation. Throws unless that
  /// separation is at least twice every other finite separation.
  std::vector<Index> centers() const;
};

/// The checked-in fixture (identical to data/toy_fixture.json).
ToyFixture default_toy_fixture();

/// F_{i,j}: marks k with f(k) < f(threshold).
OracleTable threshold_oracle(std::span<const double> f, Index threshold);

/// One-round minimum finding for element i: random threshold, one oracle +
/// diffusion round per measurement, keep the outcome if it improves and
/// otherwise redraw the threshold uniformly, until the threshold is the
/// nearest-higher. Returns the number of oracle applications.
std::uint64_t toy_quantum_nearest_higher(const ToyFixture& fixture, Index i, Rng& rng);

/// Draws candidates uniformly without replacement until the minimizer of
/// `f` (smallest index on ties) appears; returns the number of draws.
std::uint64_t classical_random_search_baseline(std::span<const double> f, Rng& rng);

struct ToyElementStats {
  Index element = 0;
  double quantum_mean = 0.0;
  double classical_mean = 0.0;
};

struct ToyRunStats {
  std::vector<ToyElementStats> elements;
  std::vector<Index> centers;
  std::size_t runs = 0;
};

/// Mean oracle calls per non-centre element over `runs` runs of each strategy.
/// The classical candidates for element i are the other seven elements.
ToyRunStats toy_experiment(const ToyFixture& fixture, std::size_t runs, Rng& rng);

}  // namespace qdpc
