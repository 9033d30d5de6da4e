#include "qdpc/qmf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace qdpc {

SearchProblem::SearchProblem(std::vector<double> values, std::uint64_t query_charge, bool index_tiebreak)
    : values_(std::move(values)), charge_(query_charge), tiebreak_(index_tiebreak) {
  if (values_.empty()) throw std::invalid_argument("search problem needs n >= 1");
  for (double v : values_)
    if (std::isnan(v)) throw std::invalid_argument("objective values must not be NaN");

  const std::size_t n = values_.size();
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), Index{0});
  std::sort(order_.begin(), order_.end(), [this](Index a, Index b) {
    if (values_[a] != values_[b]) return values_[a] < values_[b];
    return a < b;
  });
  rank_.resize(n);
  std::size_t class_start = 0;
  for (std::size_t pos = 0; pos < n; ++pos) {
    const Index k = order_[pos];
    if (pos > 0) {
      const Index prev = order_[pos - 1];
      const bool tied = values_[prev] == values_[k] && (!tiebreak_ || std::isinf(values_[k]));
      if (!tied) class_start = pos;
    }
    rank_[k] = class_start;
  }
}

bool SearchProblem::improves(Index k, Index threshold) const { return rank_.at(k) < rank_.at(threshold); }

std::size_t SearchProblem::improving_count(Index threshold) const { return rank_.at(threshold); }

Index SearchProblem::sample_improving(Index threshold, Rng& rng) const {
  const std::size_t t = improving_count(threshold);
  if (t == 0) throw std::logic_error("no improving element to sample");
  std::uniform_int_distribution<std::size_t> pick(0, t - 1);
  return order_[pick(rng)];
}

void QmfConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(lambda > 1.0 && lambda < 4.0 / 3.0)) throw std::invalid_argument("lambda must lie in (1, 4/3)");
  if (!(cutoff_factor > 0.0)) throw std::invalid_argument("cutoff_factor must be positive");
}

std::uint64_t QmfConfig::iteration_budget(std::size_t n) const {
  return static_cast<std::uint64_t>(std::ceil(cutoff_factor * std::sqrt(static_cast<double>(n))));
}

std::uint64_t QmfConfig::repetitions() const {
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(std::log2(1.0 / epsilon))));
}

double grover_success_probability(std::size_t n, std::size_t t, std::uint64_t r) {
  if (n == 0) throw std::domain_error("search space must be non-empty");
  if (t > n) throw std::domain_error("marked count exceeds search space");
  if (t == 0) return 0.0;
  if (t == n) return 1.0;
  const double theta = std::asin(std::sqrt(static_cast<double>(t) / static_cast<double>(n)));
  const double s = std::sin((2.0 * static_cast<double>(r) + 1.0) * theta);
  return s * s;
}

namespace {

std::uint64_t draw_rounds(double m, Rng& rng) {
  const auto upper = static_cast<std::uint64_t>(std::ceil(m));
  std::uniform_int_distribution<std::uint64_t> pick(0, upper - 1);
  return pick(rng);
}

bool draw_success(std::size_t n, std::size_t t, std::uint64_t r, Rng& rng) {
  if (t == 0) return false;
  std::bernoulli_distribution hit(grover_success_probability(n, t, r));
  return hit(rng);
}

}  // namespace

GroverTrial grover_trial(std::size_t n, std::size_t t, double m, Rng& rng) {
  if (t > n) throw std::domain_error("marked count exceeds search space");
  if (!(m >= 1.0)) throw std::domain_error("iteration bound m must be >= 1");
  GroverTrial out;
  out.iterations = draw_rounds(m, rng);
  out.success = draw_success(n, t, out.iterations, rng);
  return out;
}

SearchOutcome bbht_search(const SearchProblem& problem, Index threshold, std::uint64_t budget,
                          const QmfConfig& config, Rng& rng) {
  const std::size_t n = problem.size();
  const std::size_t t = problem.improving_count(threshold);
  SearchOutcome out;
  // With n == 1 nothing can improve and m never exceeds 1.
  if (n == 1) return out;
  const double m_cap = std::sqrt(static_cast<double>(n));
  double m = 1.0;
  for (;;) {
    const std::uint64_t r = draw_rounds(m, rng);
    if (out.iterations + r > budget) return out;
    out.iterations += r;
    if (draw_success(n, t, r, rng)) {
      out.found = problem.sample_improving(threshold, rng);
      return out;
    }
    m = std::min(config.lambda * m, m_cap);
  }
}

QmfResult qmf_minimum(const SearchProblem& problem, const QmfConfig& config, Rng& rng) {
  config.validate();
  const std::size_t n = problem.size();
  QmfResult result;
  if (n == 1) {
    result.argmin_candidate = 0;
    result.success = true;
    result.threshold_trace = {0};
    return result;
  }

  const std::uint64_t budget = config.iteration_budget(n);
  std::uniform_int_distribution<Index> uniform(0, n - 1);
  std::optional<Index> best;
  for (std::uint64_t rep = 0; rep < config.repetitions(); ++rep) {
    Index y = uniform(rng);
    std::vector<Index> trace{y};
    std::uint64_t used = 0;
    for (;;) {
      const auto step = bbht_search(problem, y, budget - used, config, rng);
      used += step.iterations;
      if (!step.found) break;
      y = *step.found;
      trace.push_back(y);
    }
    result.grover_iterations += used;
    if (!best || problem.improves(y, *best)) {
      best = y;
      result.threshold_trace = std::move(trace);
    }
  }
  result.argmin_candidate = *best;
  result.charged_queries = problem.query_charge() * result.grover_iterations;
  result.success = problem.is_minimizer(*best);
  return result;
}

DensityProfile reference_densities(const Dataset& dataset, const Kernel& kernel) {
  const std::size_t n = dataset.size();
  DensityProfile profile;
  profile.rho.assign(n, 0.0);
  for (Index i = 0; i < n; ++i) {
    double rho = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      rho += kernel(i < j ? dataset.uncounted_distance(i, j) : dataset.uncounted_distance(j, i));
    }
    profile.rho[i] = rho;
  }
  return profile;
}

QuantumNearestHigher quantum_nearest_higher(DistanceOracle& oracle, const DensityProfile& reference,
                                            Index i, const QmfConfig& config, Rng& rng) {
  const Dataset& data = oracle.dataset();
  const std::size_t n = data.size();
  if (i >= n) throw std::out_of_range("nearest-higher index out of range");
  if (reference.size() != n) throw std::invalid_argument("density profile does not cover the dataset");

  std::vector<double> f(n, kInfinity);
  for (Index j = 0; j < n; ++j)
    if (reference.higher(j, i))
      f[j] = i < j ? data.uncounted_distance(i, j) : data.uncounted_distance(j, i);

  const SearchProblem problem(std::move(f), n, /*index_tiebreak=*/true);
  QuantumNearestHigher out;
  out.qmf = qmf_minimum(problem, config, rng);
  out.qmf.charged_queries = static_cast<std::uint64_t>(n - 1) + out.qmf.charged_queries;
  oracle.ledger().charge_quantum(out.qmf.charged_queries);

  const Index c = out.qmf.argmin_candidate;
  if (std::isfinite(problem.value(c))) {
    out.parent = c;
    out.delta = problem.value(c);
  }
  return out;
}

QuantumNearestHigher quantum_nearest_higher(DistanceOracle& oracle, const Kernel& kernel, Index i,
                                            const QmfConfig& config, Rng& rng) {
  return quantum_nearest_higher(oracle, reference_densities(oracle.dataset(), kernel), i, config, rng);
}

namespace {

// Exact nearest-higher from the simulator's view, for the correctness flag.
NearestHigher exact_nearest_higher(const Dataset& data, const DensityProfile& profile, Index i) {
  NearestHigher best;
  for (Index j = 0; j < data.size(); ++j) {
    if (!profile.higher(j, i)) continue;
    const double d = i < j ? data.uncounted_distance(i, j) : data.uncounted_distance(j, i);
    if (!best.parent || d < best.delta) {
      best.parent = j;
      best.delta = d;
    }
  }
  return best;
}

}  // namespace

QuantumDecision quantum_decide(DistanceOracle& oracle, const DensityProfile& reference,
                               const Thresholds& thresholds, Index i, Index j, const QmfConfig& config,
                               Rng& rng) {
  config.validate();
  thresholds.validate();
  const std::size_t n = oracle.size();
  if (i >= n || j >= n) throw std::out_of_range("element index out of range");

  QuantumDecision out;
  std::unordered_map<Index, NearestHigher> found;
  auto step = [&](Index x) -> const NearestHigher& {
    if (auto it = found.find(x); it != found.end()) return it->second;
    QmfConfig call = config;
    // Clamped so very long walks cannot underflow epsilon to zero.
    call.epsilon = std::max(std::ldexp(config.epsilon, -static_cast<int>(out.calls + 2)),
                            std::numeric_limits<double>::min());
    const auto q = quantum_nearest_higher(oracle, reference, x, call, rng);
    ++out.calls;
    out.grover_iterations += q.qmf.grover_iterations;
    out.charged_queries += q.qmf.charged_queries;
    const NearestHigher nh{q.parent, q.delta};
    if (!(nh == exact_nearest_higher(oracle.dataset(), reference, x))) out.all_calls_correct = false;
    return found.emplace(x, nh).first->second;
  };
  auto outlier = [&](Index x) { return thresholds.is_outlier(reference.rho[x], step(x).delta); };
  auto walk = [&](Index x) {
    for (;;) {
      const auto& nh = step(x);
      if (nh.delta > thresholds.delta_c || !nh.parent) return x;
      x = *nh.parent;
    }
  };

  out.i_outlier = outlier(i);
  out.j_outlier = i == j ? out.i_outlier : outlier(j);
  if (out.i_outlier || out.j_outlier) return out;
  if (i == j) {
    out.same_cluster = true;
    return out;
  }
  out.root_i = walk(i);
  out.root_j = walk(j);
  out.same_cluster = *out.root_i == *out.root_j && !outlier(*out.root_i);
  return out;
}

QuantumDecision quantum_decide(DistanceOracle& oracle, const Kernel& kernel, const Thresholds& thresholds,
                               Index i, Index j, const QmfConfig& config, Rng& rng) {
  return quantum_decide(oracle, reference_densities(oracle.dataset(), kernel), thresholds, i, j, config,
                        rng);
}

}  // namespace qdpc
