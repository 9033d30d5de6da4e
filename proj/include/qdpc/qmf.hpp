#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qdpc/dpc.hpp"
#include "qdpc/random.hpp"

namespace qdpc {

/// A black-box objective f: {0..n-1} -> R u {+inf} for minimum finding.
///
/// The algorithm side only ever sees f through search outcomes. The
/// improving_count()/sample_improving() hooks are read-only introspection used
/// by the simulator to draw measurement statistics exactly.
class SearchProblem {
 public:
  /// `query_charge` is the number of distance queries one evaluation of f
  /// costs. With `index_tiebreak`, equal finite values are ordered by index so
  /// the minimizer is unique; +inf values always tie.
  explicit SearchProblem(std::vector<double> values, std::uint64_t query_charge = 1,
                         bool index_tiebreak = false);

  std::size_t size() const noexcept { return values_.size(); }
  double value(Index j) const { return values_.at(j); }
  std::uint64_t query_charge() const noexcept { return charge_; }

  /// True iff k is strictly better than the threshold element.
  bool improves(Index k, Index threshold) const;
  /// Marked count t for the oracle "f(k) < f(threshold)".
  std::size_t improving_count(Index threshold) const;
  /// Uniform draw from the marked set; requires improving_count(threshold) > 0.
  Index sample_improving(Index threshold, Rng& rng) const;
  bool is_minimizer(Index k) const { return rank_.at(k) == 0; }

 private:
  std::vector<double> values_;
  std::uint64_t charge_;
  bool tiebreak_;
  std::vector<Index> order_;
  std::vector<std::size_t> rank_;  // first position of k's tie class in order_
};

struct QmfConfig {
  double epsilon = 0.1;
  double lambda = 8.0 / 7.0;
  double cutoff_factor = 22.5;
  std::uint64_t seed = 0;

  void validate() const;
  /// Grover-iteration budget of one minimum-finding run: ceil(cutoff * sqrt(n)).
  std::uint64_t iteration_budget(std::size_t n) const;
  /// Independent runs needed for failure probability epsilon: ceil(log2(1/eps)).
  std::uint64_t repetitions() const;
};

struct QmfResult {
  Index argmin_candidate = 0;
  std::uint64_t grover_iterations = 0;
  std::uint64_t charged_queries = 0;
  /// Simulation-side truth, for testing only.
  bool success = false;
  /// Thresholds visited by the run that produced the answer, strictly improving.
  std::vector<Index> threshold_trace;
};

/// sin^2((2r + 1) theta) with theta = asin(sqrt(t / n)).
double grover_success_probability(std::size_t n, std::size_t t, std::uint64_t r);

struct GroverTrial {
  std::uint64_t iterations = 0;
  bool success = false;
};

/// One BBHT round: r uniform in {0..ceil(m)-1}, then a measurement that hits
/// the marked set with probability sin^2((2r + 1) theta).
GroverTrial grover_trial(std::size_t n, std::size_t t, double m, Rng& rng);

struct SearchOutcome {
  std::optional<Index> found;
  std::uint64_t iterations = 0;
};

/// Search with unknown marked count for k with f(k) < f(threshold). Gives up
/// (found = nullopt) once the next round would exceed `budget` iterations.
SearchOutcome bbht_search(const SearchProblem& problem, Index threshold, std::uint64_t budget,
                          const QmfConfig& config, Rng& rng);

/// Threshold-descent minimum finding, repeated config.repetitions() times;
/// returns the best threshold over all runs.
QmfResult qmf_minimum(const SearchProblem& problem, const QmfConfig& config, Rng& rng);

struct QuantumNearestHigher {
  std::optional<Index> parent;
  double delta = kInfinity;
  QmfResult qmf;
};

/// Densities summed exactly as compute_density() does but without charging
/// anything. This is the simulator's view, never the algorithm's.
DensityProfile reference_densities(const Dataset& dataset, const Kernel& kernel);

/// Nearest-higher of i by minimum finding over
///   f_i(j) = d(x_i, x_j) if j is higher than i, else +inf.
/// Charges (n - 1) + n * grover_iterations quantum queries to the oracle's
/// ledger: rho(x_i) once, then one f_i evaluation (n queries) per iteration.
QuantumNearestHigher quantum_nearest_higher(DistanceOracle& oracle, const Kernel& kernel, Index i,
                                            const QmfConfig& config, Rng& rng);

/// Same, with the simulator's density profile supplied by the caller.
QuantumNearestHigher quantum_nearest_higher(DistanceOracle& oracle, const DensityProfile& reference,
                                            Index i, const QmfConfig& config, Rng& rng);

struct QuantumDecision {
  bool same_cluster = false;
  std::optional<Index> root_i;
  std::optional<Index> root_j;
  bool i_outlier = false;
  bool j_outlier = false;
  std::size_t calls = 0;
  std::uint64_t grover_iterations = 0;
  std::uint64_t charged_queries = 0;
  /// Simulation-side truth: every minimum-finding call returned the exact
  /// nearest-higher.
  bool all_calls_correct = true;
};

/// Decision clustering with quantum nearest-higher steps. The k-th call
/// (k = 0, 1, ...) runs with failure budget epsilon / 2^(k+2). Each element's
/// nearest-higher is computed at most once per decision.
QuantumDecision quantum_decide(DistanceOracle& oracle, const Kernel& kernel, const Thresholds& thresholds,
                               Index i, Index j, const QmfConfig& config, Rng& rng);

QuantumDecision quantum_decide(DistanceOracle& oracle, const DensityProfile& reference,
                               const Thresholds& thresholds, Index i, Index j, const QmfConfig& config,
                               Rng& rng);

}  // namespace qdpc
