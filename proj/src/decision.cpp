#include "qdpc/decision.hpp"

#include <stdexcept>

namespace qdpc {

ChainWalker::ChainWalker(DistanceOracle& oracle, const DensityProfile& profile, Thresholds thresholds)
    : oracle_(&oracle), profile_(&profile), thresholds_(thresholds), cache_(oracle.size()) {
  thresholds_.validate();
  if (profile.size() != oracle.size())
    throw std::invalid_argument("density profile does not cover the dataset");
}

const NearestHigher& ChainWalker::step(Index x) {
  if (x >= cache_.size()) throw std::out_of_range("element index out of range");
  auto& slot = cache_[x];
  if (!slot) slot = nearest_higher(*oracle_, *profile_, x);
  return *slot;
}

bool ChainWalker::is_outlier(Index x) {
  return thresholds_.is_outlier(profile_->rho[x], step(x).delta);
}

Index ChainWalker::find_root(Index x) {
  // Parents are strictly higher in the total order, so this terminates in at
  // most n - 1 hops.
  for (;;) {
    const auto& nh = step(x);
    if (nh.delta > thresholds_.delta_c || !nh.parent) return x;
    x = *nh.parent;
  }
}

DecisionResult ChainWalker::decide(Index i, Index j) {
  const std::size_t n = cache_.size();
  if (i >= n || j >= n) throw std::out_of_range("element index out of range");
  DecisionResult r;
  r.i_outlier = is_outlier(i);
  r.j_outlier = is_outlier(j);
  r.root_i = find_root(i);
  r.root_j = i == j ? r.root_i : find_root(j);
  if (r.i_outlier || r.j_outlier) {
    r.same_cluster = false;
  } else if (i == j) {
    r.same_cluster = true;
  } else {
    const bool terminated_at_root = !thresholds_.is_outlier(profile_->rho[r.root_i], step(r.root_i).delta);
    r.same_cluster = r.root_i == r.root_j && terminated_at_root;
  }
  return r;
}

Index find_root(DistanceOracle& oracle, const Thresholds& thresholds, Index i,
                const DensityProfile& profile) {
  ChainWalker walker(oracle, profile, thresholds);
  return walker.find_root(i);
}

DecisionResult decide_same_cluster(DistanceOracle& oracle, const Thresholds& thresholds,
                                   const DensityProfile& profile, Index i, Index j) {
  const auto before = oracle.ledger().classical_queries();
  ChainWalker walker(oracle, profile, thresholds);
  auto r = walker.decide(i, j);
  r.classical_queries = oracle.ledger().classical_queries() - before;
  return r;
}

DecisionResult decide_same_cluster(DistanceOracle& oracle, const Kernel& kernel,
                                   const Thresholds& thresholds, Index i, Index j) {
  const std::size_t n = oracle.size();
  if (i >= n || j >= n) throw std::out_of_range("element index out of range");
  const auto before = oracle.ledger().classical_queries();
  const auto profile = compute_all_densities(oracle, kernel);
  auto r = decide_same_cluster(oracle, thresholds, profile, i, j);
  r.classical_queries = oracle.ledger().classical_queries() - before;
  return r;
}

}  // namespace qdpc
