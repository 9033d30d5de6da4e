#include "qdpc/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qdpc {

QueryLedger::QueryLedger(std::size_t n, bool memoized) : memoized_(memoized), n_(n) {
  if (memoized_ && n_ > 1)
    memo_.assign(n_ * (n_ - 1) / 2, std::numeric_limits<double>::quiet_NaN());
}

std::size_t QueryLedger::slot(Index i, Index j) const noexcept {
  if (i < j) std::swap(i, j);
  return i * (i - 1) / 2 + j;
}

std::optional<double> QueryLedger::recall(Index i, Index j) const {
  if (!memoized_ || i == j || i >= n_ || j >= n_) return std::nullopt;
  const double v = memo_[slot(i, j)];
  if (std::isnan(v)) return std::nullopt;
  return v;
}

void QueryLedger::remember(Index i, Index j, double distance) {
  if (!memoized_ || i == j || i >= n_ || j >= n_) return;
  memo_[slot(i, j)] = distance;
}

void QueryLedger::merge(const QueryLedger& other) noexcept {
  classical_ += other.classical_;
  quantum_ += other.quantum_;
}

DistanceOracle::DistanceOracle(const Dataset& dataset, bool memoized)
    : dataset_(&dataset), ledger_(dataset.size(), memoized) {}

double DistanceOracle::distance(Index i, Index j) {
  const std::size_t n = dataset_->size();
  if (i >= n || j >= n)
    throw std::out_of_range("distance query (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") out of range for n = " + std::to_string(n));
  if (i == j) return 0.0;
  if (auto hit = ledger_.recall(i, j)) return *hit;
  // Evaluate in canonical order so (i, j) and (j, i) agree bit for bit.
  const double d = i < j ? dataset_->uncounted_distance(i, j) : dataset_->uncounted_distance(j, i);
  ledger_.charge_classical();
  ledger_.remember(i, j, d);
  return d;
}

}  // namespace qdpc
