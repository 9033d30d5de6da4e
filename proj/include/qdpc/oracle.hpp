#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qdpc/dataset.hpp"

namespace qdpc {

/// Exact query counters plus an optional symmetric pair cache.
///
/// A ledger is single-threaded. Parallel code gives each worker its own
/// ledger and folds them together with merge() at the end.
class QueryLedger {
 public:
  QueryLedger() = default;
  /// `n` sizes the pair cache; it is only allocated when `memoized`.
  QueryLedger(std::size_t n, bool memoized);

  std::uint64_t classical_queries() const noexcept { return classical_; }
  std::uint64_t quantum_queries() const noexcept { return quantum_; }
  bool memoized() const noexcept { return memoized_; }

  void charge_classical(std::uint64_t count = 1) noexcept { classical_ += count; }
  void charge_quantum(std::uint64_t count) noexcept { quantum_ += count; }

  /// Cached distance for the unordered pair {i, j}, i != j.
  std::optional<double> recall(Index i, Index j) const;
  void remember(Index i, Index j, double distance);

  /// Adds the other ledger's counters. The cache is not merged.
  void merge(const QueryLedger& other) noexcept;

 private:
  std::size_t slot(Index i, Index j) const noexcept;

  std::uint64_t classical_ = 0;
  std::uint64_t quantum_ = 0;
  bool memoized_ = false;
  std::size_t n_ = 0;
  std::vector<double> memo_;  // strict lower triangle, NaN = unknown
};

/// Black-box distance access over a dataset. Every call to distance() with
/// i != j is one classical query unless answered from the ledger's cache.
/// The dataset must outlive the oracle.
class DistanceOracle {
 public:
  explicit DistanceOracle(const Dataset& dataset, bool memoized = false);

  double distance(Index i, Index j);

  const Dataset& dataset() const noexcept { return *dataset_; }
  std::size_t size() const noexcept { return dataset_->size(); }
  QueryLedger& ledger() noexcept { return ledger_; }
  const QueryLedger& ledger() const noexcept { return ledger_; }

 private:
  const Dataset* dataset_;
  QueryLedger ledger_;
};

}  // namespace qdpc
