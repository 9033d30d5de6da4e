#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qdpc/dpc.hpp"

namespace qdpc {

struct DecisionResult {
  bool same_cluster = false;
  /// Chain terminators (root or outlier) reached from i and j.
  Index root_i = 0;
  Index root_j = 0;
  bool i_outlier = false;
  bool j_outlier = false;
  std::uint64_t classical_queries = 0;
};

/// Walks nearest-higher links over a fixed density profile. Each element's
/// nearest-higher is computed at most once per walker.
class ChainWalker {
 public:
  ChainWalker(DistanceOracle& oracle, const DensityProfile& profile, Thresholds thresholds);

  const NearestHigher& step(Index x);
  bool is_outlier(Index x);
  /// First element on the chain from x with delta > delta_c.
  Index find_root(Index x);
  DecisionResult decide(Index i, Index j);

 private:
  DistanceOracle* oracle_;
  const DensityProfile* profile_;
  Thresholds thresholds_;
  std::vector<std::optional<NearestHigher>> cache_;
};

/// Terminator of i's chain: the first element with delta > delta_c, which is
/// either a root or an outlier. The profile's cost is the caller's.
Index find_root(DistanceOracle& oracle, const Thresholds& thresholds, Index i,
                const DensityProfile& profile);

/// Decision clustering from scratch: computes every density through the
/// oracle, then walks both chains. Answers no when i or j is an outlier or a
/// chain ends at an outlier; i == j answers yes for any non-outlier.
DecisionResult decide_same_cluster(DistanceOracle& oracle, const Kernel& kernel,
                                   const Thresholds& thresholds, Index i, Index j);

/// Same, reusing a precomputed profile.
DecisionResult decide_same_cluster(DistanceOracle& oracle, const Thresholds& thresholds,
                                   const DensityProfile& profile, Index i, Index j);

}  // namespace qdpc
