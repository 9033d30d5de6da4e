#include "qdpc/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qdpc/decision.hpp"
#include "qdpc/parallel.hpp"

namespace qdpc {

FamilySpec FamilySpec::parse(const std::string& name) {
  FamilySpec spec;
  if (name == "uniform") {
    spec.family = Family::kUniformBall;
  } else if (name == "gaussian") {
    spec.family = Family::kGaussianMixture;
  } else {
    throw std::invalid_argument("unknown dataset family '" + name + "' (expected uniform or gaussian)");
  }
  return spec;
}

FamilySpec FamilySpec::subsample(Dataset pool) {
  FamilySpec spec;
  spec.family = Family::kSubsample;
  spec.pool = std::make_shared<const Dataset>(std::move(pool));
  return spec;
}

std::string FamilySpec::name() const {
  switch (family) {
    case Family::kUniformBall:
      return "uniform";
    case Family::kGaussianMixture:
      return "gaussian";
    case Family::kSubsample:
      return "subsample";
  }
  return "unknown";
}

namespace {
std::vector<Index> random_subset(std::size_t n, std::size_t m, std::uint64_t seed);
}  // namespace

Dataset FamilySpec::generate(std::size_t n, std::size_t d, std::uint64_t seed) const {
  switch (family) {
    case Family::kUniformBall:
      return generate_uniform_ball(n, d, radius, seed);
    case Family::kGaussianMixture:
      return generate_gaussian_mixture(n, d, mixture, seed);
    case Family::kSubsample:
      break;
  }
  if (!pool) throw std::invalid_argument("subsample family without a dataset");
  if (n > pool->size())
    throw std::invalid_argument("cannot draw " + std::to_string(n) + " rows from a dataset of " +
                                std::to_string(pool->size()));
  std::vector<double> coords;
  coords.reserve(n * pool->dim());
  for (const Index i : random_subset(pool->size(), n, seed)) {
    const auto p = pool->point(i);
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return Dataset(pool->dim(), std::move(coords), pool->metric());
}

std::vector<double> nearest_neighbour_distances(const Dataset& dataset) {
  const std::size_t n = dataset.size();
  std::vector<double> nn(n, kInfinity);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double d = dataset.uncounted_distance(i, j);
      nn[i] = std::min(nn[i], d);
      nn[j] = std::min(nn[j], d);
    }
  return nn;
}

namespace {

std::vector<Index> random_subset(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::vector<Index> pool(n);
  std::iota(pool.begin(), pool.end(), Index{0});
  Rng rng(seed);
  for (std::size_t k = 0; k < m; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, n - 1);
    std::swap(pool[k], pool[pick(rng)]);
  }
  pool.resize(m);
  return pool;
}

}  // namespace

double subsample_mean_nn_distance(const Dataset& dataset, double fraction, std::uint64_t seed) {
  const std::size_t n = dataset.size();
  if (n < 2) throw std::domain_error("nearest-neighbour distance needs at least two points");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("subsample fraction must lie in (0, 1]");
  const auto m = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n))),
                                         1, n);
  double total = 0.0;
  for (const Index i : random_subset(n, m, seed)) {
    double best = kInfinity;
    for (Index j = 0; j < n; ++j)
      if (j != i) best = std::min(best, dataset.uncounted_distance(i, j));
    total += best;
  }
  return total / static_cast<double>(m);
}

double reference_mean_nn_distance(const Dataset& dataset, std::size_t points, std::uint64_t seed) {
  const std::size_t n = dataset.size();
  if (n < 2) throw std::domain_error("nearest-neighbour distance needs at least two points");
  if (points < 2) throw std::invalid_argument("reference subsample needs at least two points");
  const auto subset = random_subset(n, std::min(points, n), seed);
  double total = 0.0;
  for (const Index i : subset) {
    double best = kInfinity;
    for (const Index j : subset)
      if (j != i) best = std::min(best, dataset.uncounted_distance(i, j));
    total += best;
  }
  return total / static_cast<double>(subset.size());
}

Kernel KernelPolicy::resolve(const Dataset& dataset, std::uint64_t seed) const {
  double cutoff = 0.0;
  if (fixed_cutoff) {
    cutoff = *fixed_cutoff;
  } else {
    const double nn = reference_points > 0 ? reference_mean_nn_distance(dataset, reference_points, seed)
                                           : subsample_mean_nn_distance(dataset, subsample_fraction, seed);
    cutoff = nn_multiplier * nn;
    // Duplicate points can make every sampled nearest neighbour coincide.
    if (!(cutoff > 0.0)) cutoff = std::numeric_limits<double>::min();
  }
  return shape == Kernel::Shape::kStep ? Kernel::step(cutoff) : Kernel::gaussian(cutoff);
}

std::string KernelPolicy::describe() const {
  std::ostringstream out;
  out << (shape == Kernel::Shape::kStep ? "step" : "gaussian") << ", d_c = ";
  if (fixed_cutoff)
    out << *fixed_cutoff;
  else if (reference_points > 0)
    out << nn_multiplier << " x mean nn distance within " << reference_points << " random points";
  else
    out << nn_multiplier << " x mean nn distance of a " << subsample_fraction << " subsample";
  return out.str();
}

FitResult fit_power_law(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw std::domain_error("power-law fit needs at least two points");
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& [n, v] : points) {
    if (!(n > 0.0) || !(v > 0.0)) throw std::domain_error("power-law fit needs positive values");
    x.push_back(std::log(n));
    y.push_back(std::log(v));
  }
  const double m = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / m;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / m;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (sxx == 0.0) throw std::domain_error("power-law fit needs at least two distinct n");
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.d_eff = fit.slope > 0.0 ? 1.0 / fit.slope : kInfinity;
  if (syy == 0.0) {
    fit.r_squared = 1.0;
  } else {
    double ss_res = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double r = y[k] - (fit.intercept + fit.slope * x[k]);
      ss_res += r * r;
    }
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t pos = 0; pos < order.size();) {
    std::size_t end = pos;
    while (end + 1 < order.size() && v[order[end + 1]] == v[order[pos]]) ++end;
    const double r = 0.5 * static_cast<double>(pos + end) + 1.0;
    for (std::size_t k = pos; k <= end; ++k) rank[order[k]] = r;
    pos = end + 1;
  }
  return rank;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double m = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / m;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / m;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

RankCorrelation spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman needs two equal-length samples");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  RankCorrelation out;
  out.rho = pearson(rx, ry);
  const std::size_t m = x.size();
  if (m <= 8) {
    std::vector<double> perm = ry;
    std::sort(perm.begin(), perm.end());
    std::size_t at_least = 0;
    std::size_t total = 0;
    do {
      ++total;
      if (pearson(rx, perm) >= out.rho - 1e-12) ++at_least;
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.p_value = static_cast<double>(at_least) / static_cast<double>(total);
  } else {
    // Large-sample normal approximation.
    const double z = out.rho * std::sqrt(static_cast<double>(m - 1));
    out.p_value = 0.5 * std::erfc(z / std::sqrt(2.0));
  }
  return out;
}

// ---------------------------------------------------------------------------

HeightScalingReport height_scaling(const HeightScalingOptions& options) {
  if (options.runs == 0) throw std::invalid_argument("runs must be >= 1");
  if (options.n_grid.empty()) throw std::invalid_argument("n grid must be non-empty");
  for (std::size_t k = 1; k < options.n_grid.size(); ++k)
    if (options.n_grid[k] <= options.n_grid[k - 1]) throw std::invalid_argument("n grid must be strictly increasing");

  HeightScalingReport report;
  report.kernel = options.kernel.describe();
  const std::size_t cells = options.n_grid.size() * options.runs;
  std::vector<std::size_t> heights(cells, 0);
  for (std::size_t g = 0; g < options.n_grid.size(); ++g) {
    const std::size_t n = options.n_grid[g];
    parallel_for(options.runs, options.threads, [&](std::size_t run) {
      const auto seed = derive_seed(options.seed, {options.d, n, run});
      const Dataset data = options.family.generate(n, options.d, seed);
      const Kernel kernel = options.kernel.resolve(data, mix_seed(seed));
      DistanceOracle oracle(data);
      const auto forest = build_forest(oracle, kernel);
      heights[g * options.runs + run] = tree_heights(forest).max_height;
    });
    HeightEntry entry;
    entry.family = options.family.name();
    entry.d = options.family.pool ? options.family.pool->dim() : options.d;
    entry.n = n;
    entry.runs = options.runs;
    entry.heights.assign(heights.begin() + static_cast<std::ptrdiff_t>(g * options.runs),
                         heights.begin() + static_cast<std::ptrdiff_t>((g + 1) * options.runs));
    entry.mean_height = std::accumulate(entry.heights.begin(), entry.heights.end(), 0.0) /
                        static_cast<double>(options.runs);
    if (options.on_entry) options.on_entry(entry);
    report.entries.push_back(std::move(entry));
  }

  if (report.entries.size() >= 2) {
    std::vector<std::pair<double, double>> points;
    for (const auto& e : report.entries)
      if (e.mean_height > 0.0) points.emplace_back(static_cast<double>(e.n), e.mean_height);
    if (points.size() >= 2) report.fit = fit_power_law(points);
  }
  return report;
}

NnScalingReport nn_scaling(const FamilySpec& family, std::size_t d, const std::vector<std::size_t>& n_grid,
                           std::size_t runs, std::uint64_t seed, unsigned threads) {
  if (runs == 0) throw std::invalid_argument("runs must be >= 1");
  if (n_grid.empty()) throw std::invalid_argument("n grid must be non-empty");
  NnScalingReport report;
  for (const std::size_t n : n_grid) {
    if (n < 2) throw std::invalid_argument("nearest-neighbour scaling needs n >= 2");
    std::vector<double> means(runs);
    parallel_for(runs, threads, [&](std::size_t run) {
      const Dataset data = family.generate(n, d, derive_seed(seed, {d, n, run}));
      const auto nn = nearest_neighbour_distances(data);
      means[run] = std::accumulate(nn.begin(), nn.end(), 0.0) / static_cast<double>(n);
    });
    report.entries.push_back({n, std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(runs)});
  }
  if (report.entries.size() >= 2) {
    std::vector<std::pair<double, double>> points;
    for (const auto& e : report.entries) points.emplace_back(static_cast<double>(e.n), e.mean_nn);
    report.fit = fit_power_law(points);
  }
  return report;
}

// ---------------------------------------------------------------------------

QmfBenchReport qmf_scaling(const QmfBenchOptions& options) {
  options.config.validate();
  if (options.runs == 0) throw std::invalid_argument("runs must be >= 1");
  if (options.n_grid.empty()) throw std::invalid_argument("n grid must be non-empty");
  QmfBenchReport report;
  for (const std::size_t n : options.n_grid) {
    std::vector<QmfBenchRun> runs(options.runs);
    parallel_for(options.runs, options.threads, [&](std::size_t run) {
      const auto seed = derive_seed(options.seed, {options.d, n, run});
      const Dataset data = options.family.generate(n, options.d, seed);
      const Kernel kernel = options.kernel.resolve(data, mix_seed(seed));
      const auto reference = reference_densities(data, kernel);
      Rng rng(mix_seed(seed ^ 0x51ed2701ULL));
      std::uniform_int_distribution<Index> pick(0, n - 1);
      const Index i = pick(rng);
      DistanceOracle oracle(data);
      QmfConfig config = options.config;
      config.seed = seed;
      const auto q = quantum_nearest_higher(oracle, reference, i, config, rng);
      QmfBenchRun& out = runs[run];
      out.n = n;
      out.element = i;
      out.h = q.parent;
      out.delta = q.delta;
      out.grover_iterations = q.qmf.grover_iterations;
      out.charged_queries = q.qmf.charged_queries;
      out.success = q.qmf.success;
      out.seed = seed;
    });
    QmfBenchEntry entry;
    entry.n = n;
    for (const auto& r : runs) {
      if (options.on_run) options.on_run(r);
      entry.mean_charged_queries += static_cast<double>(r.charged_queries);
      entry.mean_grover_iterations += static_cast<double>(r.grover_iterations);
      entry.success_rate += r.success ? 1.0 : 0.0;
    }
    const double m = static_cast<double>(options.runs);
    entry.mean_charged_queries /= m;
    entry.mean_grover_iterations /= m;
    entry.success_rate /= m;
    report.entries.push_back(entry);
  }
  if (report.entries.size() >= 2) {
    std::vector<std::pair<double, double>> points;
    for (const auto& e : report.entries) points.emplace_back(static_cast<double>(e.n), e.mean_charged_queries);
    report.fit = fit_power_law(points);
  }
  return report;
}

DecisionBenchmark decision_benchmark(const Dataset& dataset, const std::vector<std::pair<Index, Index>>& pairs,
                                     const Thresholds& thresholds, const Kernel& kernel, double epsilon,
                                     std::size_t repeats, std::uint64_t seed, unsigned threads) {
  thresholds.validate();
  if (pairs.empty()) throw std::invalid_argument("decision benchmark needs at least one pair");
  if (repeats == 0) throw std::invalid_argument("repeats must be >= 1");
  const std::size_t n = dataset.size();
  for (const auto& [i, j] : pairs)
    if (i >= n || j >= n) throw std::out_of_range("benchmark pair index out of range");

  QmfConfig config;
  config.epsilon = epsilon;
  config.validate();
  const auto reference = reference_densities(dataset, kernel);

  DecisionBenchmark bench;
  bench.n = n;
  bench.rows.resize(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    DecisionBenchRow& row = bench.rows[p];
    row.i = i;
    row.j = j;
    {
      DistanceOracle oracle(dataset, /*memoized=*/true);
      const auto verdict = decide_same_cluster(oracle, kernel, thresholds, i, j);
      row.classical_same = verdict.same_cluster;
      row.classical_queries = verdict.classical_queries;
    }
    std::size_t agree = 0;
    for (std::size_t rep = 0; rep < repeats; ++rep) {
      Rng rng = make_rng(seed, {p, rep});
      DistanceOracle oracle(dataset);
      const auto q = quantum_decide(oracle, reference, thresholds, i, j, config, rng);
      row.quantum_mean_queries += static_cast<double>(q.charged_queries);
      row.quantum_mean_calls += static_cast<double>(q.calls);
      if (q.same_cluster == row.classical_same) ++agree;
    }
    row.quantum_mean_queries /= static_cast<double>(repeats);
    row.quantum_mean_calls /= static_cast<double>(repeats);
    row.agreement_rate = static_cast<double>(agree) / static_cast<double>(repeats);
  });

  for (const auto& row : bench.rows) {
    bench.mean_classical_queries += static_cast<double>(row.classical_queries);
    bench.mean_quantum_queries += row.quantum_mean_queries;
    bench.agreement_rate += row.agreement_rate;
  }
  const double m = static_cast<double>(bench.rows.size());
  bench.mean_classical_queries /= m;
  bench.mean_quantum_queries /= m;
  bench.agreement_rate /= m;
  return bench;
}

DecisionScalingReport decision_scaling(const DecisionScalingOptions& options) {
  if (options.n_grid.empty()) throw std::invalid_argument("n grid must be non-empty");
  if (options.pairs == 0) throw std::invalid_argument("pairs must be >= 1");
  DecisionScalingReport report;
  for (const std::size_t n : options.n_grid) {
    const auto seed = derive_seed(options.seed, {options.d, n});
    const Dataset data = options.family.generate(n, options.d, seed);
    const Kernel kernel = options.kernel.resolve(data, mix_seed(seed));
    Rng rng(mix_seed(seed ^ 0xdec1510ULL));
    std::uniform_int_distribution<Index> pick(0, n - 1);
    std::vector<std::pair<Index, Index>> pairs;
    for (std::size_t p = 0; p < options.pairs; ++p) {
      const Index i = pick(rng);
      Index j = pick(rng);
      while (n > 1 && j == i) j = pick(rng);
      pairs.emplace_back(i, j);
    }
    auto bench = decision_benchmark(data, pairs, options.thresholds, kernel, options.epsilon, options.repeats,
                                    mix_seed(seed), options.threads);
    if (!report.crossover_n && bench.mean_quantum_queries < bench.mean_classical_queries) report.crossover_n = n;
    report.per_n.push_back(std::move(bench));
  }
  return report;
}

}  // namespace qdpc
