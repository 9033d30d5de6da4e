#include "qdpc/dpc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qdpc {

Kernel::Kernel(Shape shape, double cutoff) : shape_(shape), cutoff_(cutoff) {
  if (!(cutoff > 0.0) || !std::isfinite(cutoff))
    throw std::invalid_argument("kernel cutoff d_c must be positive and finite");
}

Kernel Kernel::make(const std::string& shape, double cutoff) {
  if (shape == "step") return step(cutoff);
  if (shape == "gaussian") return gaussian(cutoff);
  throw std::invalid_argument("unknown kernel '" + shape + "' (expected step or gaussian)");
}

std::string Kernel::name() const { return shape_ == Shape::kStep ? "step" : "gaussian"; }

double Kernel::operator()(double x) const noexcept {
  if (shape_ == Shape::kStep) return x < cutoff_ ? 1.0 : 0.0;
  const double u = x / cutoff_;
  const double e = u * u;
  // exp(-e) underflows to exactly +0 past this point; skip the slow path.
  if (e > 746.0) return 0.0;
  return std::exp(-e);
}

std::vector<Index> DensityProfile::ranking() const {
  std::vector<Index> order(rho.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [this](Index a, Index b) { return higher(a, b); });
  return order;
}

Index DensityProfile::peak() const {
  if (rho.empty()) throw std::invalid_argument("empty density profile");
  Index best = 0;
  for (Index j = 1; j < rho.size(); ++j)
    if (higher(j, best)) best = j;
  return best;
}

void Thresholds::validate() const {
  if (!(delta_c > 0.0) || !std::isfinite(delta_c))
    throw std::invalid_argument("delta_c must be positive and finite");
  if (std::isnan(rho_c)) throw std::invalid_argument("rho_c must be a number");
}

double compute_density(DistanceOracle& oracle, const Kernel& kernel, Index i) {
  const std::size_t n = oracle.size();
  if (i >= n) throw std::out_of_range("density index out of range");
  double rho = 0.0;
  for (Index j = 0; j < n; ++j)
    if (j != i) rho += kernel(oracle.distance(i, j));
  return rho;
}

DensityProfile compute_all_densities(DistanceOracle& oracle, const Kernel& kernel) {
  DensityProfile profile;
  profile.rho.resize(oracle.size());
  for (Index i = 0; i < oracle.size(); ++i) profile.rho[i] = compute_density(oracle, kernel, i);
  return profile;
}

NearestHigher nearest_higher(DistanceOracle& oracle, const DensityProfile& profile, Index i) {
  const std::size_t n = oracle.size();
  if (profile.size() != n) throw std::invalid_argument("density profile does not cover the dataset");
  if (i >= n) throw std::out_of_range("nearest-higher index out of range");
  NearestHigher best;
  for (Index j = 0; j < n; ++j) {
    if (!profile.higher(j, i)) continue;
    const double d = oracle.distance(i, j);
    if (!best.parent || d < best.delta) {
      best.parent = j;
      best.delta = d;
    }
  }
  return best;
}

NearestHigherForest build_forest(DistanceOracle& oracle, DensityProfile profile) {
  const std::size_t n = oracle.size();
  NearestHigherForest forest;
  forest.parent.resize(n);
  forest.delta.resize(n);
  forest.density = std::move(profile);
  for (Index i = 0; i < n; ++i) {
    const auto nh = nearest_higher(oracle, forest.density, i);
    forest.parent[i] = nh.parent;
    forest.delta[i] = nh.delta;
  }
  return forest;
}

NearestHigherForest build_forest(DistanceOracle& oracle, const Kernel& kernel) {
  return build_forest(oracle, compute_all_densities(oracle, kernel));
}

Classification classify(const NearestHigherForest& forest, const Thresholds& thresholds) {
  thresholds.validate();
  Classification out;
  for (Index i = 0; i < forest.size(); ++i) {
    const double rho = forest.density.rho[i];
    if (thresholds.is_root(rho, forest.delta[i]))
      out.roots.push_back(i);
    else if (thresholds.is_outlier(rho, forest.delta[i]))
      out.outliers.push_back(i);
  }
  return out;
}

ClusterAssignment assign_clusters(const NearestHigherForest& forest, const Thresholds& thresholds) {
  auto cls = classify(forest, thresholds);
  ClusterAssignment out;
  out.label.assign(forest.size(), std::nullopt);
  std::vector<char> outlier(forest.size(), 0);
  for (Index o : cls.outliers) outlier[o] = 1;
  std::vector<char> root(forest.size(), 0);
  for (Index r : cls.roots) root[r] = 1;

  // Parents precede children in decreasing density order.
  for (Index i : forest.density.ranking()) {
    if (root[i]) {
      out.label[i] = i;
    } else if (!outlier[i]) {
      // delta <= delta_c here, so the parent exists.
      out.label[i] = out.label[*forest.parent[i]];
    }
  }
  out.roots = std::move(cls.roots);
  out.outliers = std::move(cls.outliers);
  return out;
}

namespace {

TreeHeights heights_impl(const NearestHigherForest& forest, std::optional<double> delta_c) {
  constexpr std::size_t kUnknown = static_cast<std::size_t>(-1);
  const std::size_t n = forest.size();
  std::vector<std::size_t> depth(n, kUnknown);
  std::vector<Index> top(n, 0);
  std::vector<Index> path;
  auto is_top = [&](Index i) {
    return !forest.parent[i] || (delta_c && forest.delta[i] > *delta_c);
  };

  for (Index start = 0; start < n; ++start) {
    Index x = start;
    path.clear();
    while (depth[x] == kUnknown && !is_top(x)) {
      path.push_back(x);
      if (path.size() > n) throw std::invalid_argument("nearest-higher links contain a cycle");
      x = *forest.parent[x];
    }
    if (depth[x] == kUnknown) {
      depth[x] = 0;
      top[x] = x;
    }
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      const Index p = *forest.parent[*it];
      depth[*it] = depth[p] + 1;
      top[*it] = top[p];
    }
  }

  TreeHeights out;
  for (Index i = 0; i < n; ++i) {
    auto& h = out.per_root[top[i]];
    h = std::max(h, depth[i]);
    out.max_height = std::max(out.max_height, depth[i]);
  }
  return out;
}

}  // namespace

TreeHeights tree_heights(const NearestHigherForest& forest) { return heights_impl(forest, std::nullopt); }

TreeHeights tree_heights(const NearestHigherForest& forest, double delta_c) {
  return heights_impl(forest, delta_c);
}

}  // namespace qdpc
