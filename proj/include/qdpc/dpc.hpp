#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qdpc/oracle.hpp"

namespace qdpc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Density kernel chi(x) with cutoff d_c.
class Kernel {
 public:
  enum class Shape { kStep, kGaussian };

  static Kernel step(double cutoff) { return Kernel(Shape::kStep, cutoff); }
  static Kernel gaussian(double cutoff) { return Kernel(Shape::kGaussian, cutoff); }
  static Kernel make(const std::string& shape, double cutoff);

  Shape shape() const noexcept { return shape_; }
  double cutoff() const noexcept { return cutoff_; }
  std::string name() const;

  /// Step: 1 if x < d_c else 0. Gaussian: exp(-x^2 / d_c^2).
  double operator()(double x) const noexcept;

 private:
  Kernel(Shape shape, double cutoff);
  Shape shape_;
  double cutoff_;
};

inline double kernel_eval(const Kernel& kernel, double x) { return kernel(x); }

struct DensityProfile {
  std::vector<double> rho;

  std::size_t size() const noexcept { return rho.size(); }
  /// Strict total order: j is higher than i iff rho_j > rho_i, or the
  /// densities tie and j < i.
  bool higher(Index j, Index i) const noexcept {
    return rho[j] > rho[i] || (rho[j] == rho[i] && j < i);
  }
  /// Indices sorted from highest to lowest in the total order.
  std::vector<Index> ranking() const;
  /// The maximum of the total order.
  Index peak() const;
};

inline bool density_order(const DensityProfile& profile, Index j, Index i) {
  return profile.higher(j, i);
}

struct Thresholds {
  double rho_c = 0.0;
  double delta_c = 1.0;

  void validate() const;
  /// Root-side when rho >= rho_c; see classify().
  bool is_root(double rho, double delta) const noexcept { return delta > delta_c && rho >= rho_c; }
  bool is_outlier(double rho, double delta) const noexcept { return delta > delta_c && rho < rho_c; }
};

struct NearestHigher {
  std::optional<Index> parent;
  double delta = kInfinity;

  friend bool operator==(const NearestHigher&, const NearestHigher&) = default;
};

struct NearestHigherForest {
  std::vector<std::optional<Index>> parent;
  std::vector<double> delta;
  DensityProfile density;

  std::size_t size() const noexcept { return parent.size(); }
};

struct Classification {
  std::vector<Index> roots;
  std::vector<Index> outliers;
};

struct ClusterAssignment {
  /// Cluster id (= root index) per element; nullopt marks noise.
  std::vector<std::optional<Index>> label;
  std::vector<Index> roots;
  std::vector<Index> outliers;

  bool is_noise(Index i) const { return !label.at(i).has_value(); }
  std::size_t cluster_count() const noexcept { return roots.size(); }
};

struct TreeHeights {
  /// Height of each tree keyed by its top element.
  std::map<Index, std::size_t> per_root;
  std::size_t max_height = 0;
};

/// Density of element i, summing the kernel over all j != i in increasing j.
/// Charges up to n-1 distance queries.
double compute_density(DistanceOracle& oracle, const Kernel& kernel, Index i);

/// Densities of every element. Each element is summed exactly as
/// compute_density() does, so values agree bit for bit. On a memoized oracle
/// this charges exactly (n^2 - n) / 2 queries.
DensityProfile compute_all_densities(DistanceOracle& oracle, const Kernel& kernel);

/// Closest strictly-higher element (smallest index on distance ties), or
/// (nullopt, +inf) for the peak. Charges one query per strictly-higher element.
NearestHigher nearest_higher(DistanceOracle& oracle, const DensityProfile& profile, Index i);

NearestHigherForest build_forest(DistanceOracle& oracle, const Kernel& kernel);
NearestHigherForest build_forest(DistanceOracle& oracle, DensityProfile profile);

/// roots: delta > delta_c and rho >= rho_c; outliers: delta > delta_c and rho < rho_c.
Classification classify(const NearestHigherForest& forest, const Thresholds& thresholds);

ClusterAssignment assign_clusters(const NearestHigherForest& forest, const Thresholds& thresholds);

/// Heights of the nearest-higher trees. Height is the longest hop count from
/// any element to its tree top; a lone element has height 0.
TreeHeights tree_heights(const NearestHigherForest& forest);

/// Same, with every edge leaving an element with delta > delta_c removed, so
/// each root and outlier tops its own tree.
TreeHeights tree_heights(const NearestHigherForest& forest, double delta_c);

}  // namespace qdpc
