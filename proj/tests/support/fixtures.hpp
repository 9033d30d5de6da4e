#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qdpc/dataset.hpp"
#include "qdpc/dpc.hpp"

namespace qdpc::testing {

/// A few Gaussian blobs plus a sprinkle of uniform background points.
inline std::vector<std::vector<double>> blob_points(std::uint64_t seed, std::size_t n, std::size_t d) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> blob_count(2, 4);
  std::uniform_real_distribution<double> box(0.0, 20.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int k = blob_count(rng);
  std::vector<std::vector<double>> centres(k, std::vector<double>(d));
  for (auto& c : centres)
    for (auto& x : c) x = box(rng);
  std::vector<std::vector<double>> pts;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> p(d);
    if (i % 10 == 9) {
      for (auto& x : p) x = box(rng);
    } else {
      const auto& c = centres[i % static_cast<std::size_t>(k)];
      for (std::size_t a = 0; a < d; ++a) p[a] = c[a] + normal(rng);
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

inline double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const auto k = static_cast<std::size_t>(q * static_cast<double>(v.size() - 1));
  return v[k];
}

/// Thresholds that usually yield several roots and several outliers.
inline Thresholds pick_thresholds(const std::vector<double>& rho, const std::vector<double>& delta) {
  std::vector<double> finite;
  for (double x : delta)
    if (std::isfinite(x)) finite.push_back(x);
  Thresholds t;
  t.rho_c = quantile(rho, 0.2);
  t.delta_c = finite.empty() ? 1.0 : quantile(finite, 0.9);
  if (!(t.delta_c > 0.0)) t.delta_c = 1e-9;
  return t;
}

}  // namespace qdpc::testing
