#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdpc/dpc.hpp"
#include "qdpc/qmf.hpp"

namespace qdpc {

enum class Family { kUniformBall, kGaussianMixture, kSubsample };

struct FamilySpec {
  Family family = Family::kUniformBall;
  double radius = 1.0;
  GaussianMixtureOptions mixture;
  /// For kSubsample: the fixed dataset that each run draws n rows from
  /// without replacement. Its dimension overrides the requested d.
  std::shared_ptr<const Dataset> pool;

  static FamilySpec parse(const std::string& name);
  static FamilySpec subsample(Dataset pool);
  std::string name() const;
  Dataset generate(std::size_t n, std::size_t d, std::uint64_t seed) const;
};

/// How the density kernel is chosen per dataset. By default a Gaussian with
/// d_c = nn_multiplier * (mean nearest-neighbour distance among
/// reference_points random points, measured within that subsample), which
/// keeps d_c independent of n. With reference_points = 0 the nearest
/// neighbours of a random subsample_fraction of the points are searched over
/// the whole dataset instead, so d_c shrinks like n^(-1/d).
struct KernelPolicy {
  Kernel::Shape shape = Kernel::Shape::kGaussian;
  double nn_multiplier = 6.0;
  std::size_t reference_points = 256;
  double subsample_fraction = 0.05;
  std::optional<double> fixed_cutoff;

  Kernel resolve(const Dataset& dataset, std::uint64_t seed) const;
  std::string describe() const;
};

/// Distance from each point to its nearest other point (uncounted, O(n^2)).
std::vector<double> nearest_neighbour_distances(const Dataset& dataset);

/// Mean nearest-neighbour distance over a random subsample (at least one point).
double subsample_mean_nn_distance(const Dataset& dataset, double fraction, std::uint64_t seed);

/// Mean nearest-neighbour distance among min(points, n) randomly chosen points,
/// measured within that subsample only.
double reference_mean_nn_distance(const Dataset& dataset, std::size_t points, std::uint64_t seed);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  /// 1 / slope; +inf when slope <= 0.
  double d_eff = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares of log(value) on log(n).
FitResult fit_power_law(const std::vector<std::pair<double, double>>& points);

struct RankCorrelation {
  double rho = 0.0;
  /// One-sided p-value for rho > 0 (exact permutation test up to 8 points).
  double p_value = 1.0;
};

RankCorrelation spearman(const std::vector<double>& x, const std::vector<double>& y);

// ---------------------------------------------------------------------------

struct HeightEntry {
  std::string family;
  std::size_t d = 0;
  std::size_t n = 0;
  std::size_t runs = 0;
  double mean_height = 0.0;
  std::vector<std::size_t> heights;  // one per run
};

struct HeightScalingOptions {
  FamilySpec family;
  std::size_t d = 2;
  std::vector<std::size_t> n_grid;
  std::size_t runs = 5;
  KernelPolicy kernel;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  /// Called once per finished grid point, in grid order.
  std::function<void(const HeightEntry&)> on_entry;
};

struct HeightScalingReport {
  std::vector<HeightEntry> entries;
  /// Fit of mean H against n; absent for fewer than two grid points.
  std::optional<FitResult> fit;
  std::string kernel;
};

/// Maximum nearest-higher tree height H per (n, run), averaged over runs.
HeightScalingReport height_scaling(const HeightScalingOptions& options);

struct NnEntry {
  std::size_t n = 0;
  double mean_nn = 0.0;
};

struct NnScalingReport {
  std::vector<NnEntry> entries;
  std::optional<FitResult> fit;
};

NnScalingReport nn_scaling(const FamilySpec& family, std::size_t d, const std::vector<std::size_t>& n_grid,
                           std::size_t runs, std::uint64_t seed, unsigned threads = 1);

// ---------------------------------------------------------------------------

struct QmfBenchRun {
  std::size_t n = 0;
  Index element = 0;
  std::optional<Index> h;
  double delta = kInfinity;
  std::uint64_t grover_iterations = 0;
  std::uint64_t charged_queries = 0;
  bool success = false;
  std::uint64_t seed = 0;
};

struct QmfBenchOptions {
  FamilySpec family;
  std::size_t d = 3;
  std::vector<std::size_t> n_grid;
  std::size_t runs = 200;
  KernelPolicy kernel;
  QmfConfig config;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::function<void(const QmfBenchRun&)> on_run;
};

struct QmfBenchEntry {
  std::size_t n = 0;
  double mean_charged_queries = 0.0;
  double mean_grover_iterations = 0.0;
  double success_rate = 0.0;
};

struct QmfBenchReport {
  std::vector<QmfBenchEntry> entries;
  std::optional<FitResult> fit;
};

/// Quantum nearest-higher cost versus n: each run draws a fresh dataset and a
/// uniformly random element.
QmfBenchReport qmf_scaling(const QmfBenchOptions& options);

struct DecisionBenchRow {
  Index i = 0;
  Index j = 0;
  bool classical_same = false;
  std::uint64_t classical_queries = 0;
  double quantum_mean_queries = 0.0;
  double quantum_mean_calls = 0.0;
  double agreement_rate = 0.0;
};

struct DecisionBenchmark {
  std::size_t n = 0;
  std::vector<DecisionBenchRow> rows;
  double mean_classical_queries = 0.0;
  double mean_quantum_queries = 0.0;
  double agreement_rate = 0.0;
  double ratio() const { return mean_quantum_queries / mean_classical_queries; }
};

/// Classical (fresh memoized oracle per pair) against quantum decision
/// clustering (`repeats` seeded runs per pair).
DecisionBenchmark decision_benchmark(const Dataset& dataset, const std::vector<std::pair<Index, Index>>& pairs,
                                     const Thresholds& thresholds, const Kernel& kernel, double epsilon,
                                     std::size_t repeats, std::uint64_t seed, unsigned threads = 1);

struct DecisionScalingOptions {
  FamilySpec family;
  std::size_t d = 5;
  std::vector<std::size_t> n_grid;
  std::size_t pairs = 4;
  std::size_t repeats = 5;
  Thresholds thresholds;
  KernelPolicy kernel;
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct DecisionScalingReport {
  std::vector<DecisionBenchmark> per_n;
  /// Smallest grid n where the quantum mean is below the classical count.
  std::optional<std::size_t> crossover_n;
};

DecisionScalingReport decision_scaling(const DecisionScalingOptions& options);

}  // namespace qdpc
