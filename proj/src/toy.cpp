#include "qdpc/toy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qdpc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool higher(const std::vector<double>& rho, Index j, Index i) {
  return rho[j] > rho[i] || (rho[j] == rho[i] && j < i);
}

Index argmin(std::span<const double> f) {
  Index best = 0;
  for (Index k = 1; k < f.size(); ++k)
    if (f[k] < f[best]) best = k;
  return best;
}

}  // namespace

void ToyFixture::validate() const {
  if (rho.size() != kSize || dist.size() != kSize)
    throw std::invalid_argument("toy fixture must have exactly 8 elements");
  for (std::size_t i = 0; i < kSize; ++i) {
    if (dist[i].size() != kSize) throw std::invalid_argument("toy distance table must be 8x8");
    if (!std::isfinite(rho[i]) || rho[i] < 0.0)
      throw std::invalid_argument("toy densities must be finite and non-negative");
    for (std::size_t j = 0; j < kSize; ++j) {
      if (!(dist[i][j] >= 0.0) || !std::isfinite(dist[i][j]))
        throw std::invalid_argument("toy distances must be finite and non-negative");
      if (dist[i][j] != dist[j][i]) throw std::invalid_argument("toy distance table must be symmetric");
    }
    if (dist[i][i] != 0.0) throw std::invalid_argument("toy self-distances must be zero");
  }
  (void)centers();
}

std::vector<double> ToyFixture::objective(Index i) const {
  if (i >= rho.size()) throw std::out_of_range("toy element out of range");
  std::vector<double> f(rho.size(), kInf);
  for (Index k = 0; k < rho.size(); ++k)
    if (higher(rho, k, i)) f[k] = dist[i][k];
  return f;
}

std::optional<Index> ToyFixture::nearest_higher(Index i) const {
  const auto f = objective(i);
  const Index k = argmin(f);
  if (std::isinf(f[k])) return std::nullopt;
  return k;
}

std::vector<Index> ToyFixture::centers() const {
  std::vector<Index> out;
  std::vector<std::pair<double, Index>> separations;
  for (Index i = 0; i < rho.size(); ++i) {
    if (auto nh = nearest_higher(i))
      separations.emplace_back(dist[i][*nh], i);
    else
      out.push_back(i);
  }
  std::sort(separations.begin(), separations.end(), std::greater<>());
  if (separations.size() < 2 || separations[0].first < 2.0 * separations[1].first)
    throw std::invalid_argument("toy fixture must have exactly two well-separated density peaks");
  out.push_back(separations[0].second);
  std::sort(out.begin(), out.end());
  return out;
}

ToyFixture default_toy_fixture() {
  ToyFixture fx;
  fx.rho = {1.331975, 1.87645, 1.283203, 0.978769, 0.907744, 1.622047, 0.902631, 0.771584};
  fx.dist = {
      {0.0, 1.0, 1.280625, 1.878829, 5.001, 5.295281, 6.432729, 4.701064},
      {1.0, 0.0, 1.019804, 1.063015, 5.11957, 5.2, 6.307139, 4.393177},
      {1.280625, 1.019804, 0.0, 2.012461, 4.1, 4.204759, 5.323533, 3.478505},
      {1.878829, 1.063015, 2.012461, 0.0, 6.072891, 6.040695, 7.111259, 5.10392},
      {5.001, 5.11957, 4.1, 6.072891, 0.0, 1.118034, 1.910497, 2.118962},
      {5.295281, 5.2, 4.204759, 6.040695, 1.118034, 0.0, 1.140175, 1.272792},
      {6.432729, 6.307139, 5.323533, 7.111259, 1.910497, 1.140175, 0.0, 2.088061},
      {4.701064, 4.393177, 3.478505, 5.10392, 2.118962, 1.272792, 2.088061, 0.0},
  };
  return fx;
}

OracleTable threshold_oracle(std::span<const double> f, Index threshold) {
  if (threshold >= f.size()) throw std::out_of_range("threshold out of range");
  OracleTable table;
  table.marks.resize(f.size());
  for (Index k = 0; k < f.size(); ++k) table.marks[k] = f[k] < f[threshold];
  return table;
}

std::uint64_t toy_quantum_nearest_higher(const ToyFixture& fixture, Index i, Rng& rng) {
  const auto target = fixture.nearest_higher(i);
  if (!target) throw std::domain_error("element has no nearest-higher");
  const auto f = fixture.objective(i);
  const auto n = f.size();
  std::uniform_int_distribution<Index> uniform(0, n - 1);

  std::uint64_t calls = 0;
  Index j = uniform(rng);
  while (j != *target) {
    auto state = uniform_state(ToyFixture::kQubits);
    apply_grover_iteration(state, threshold_oracle(f, j));
    ++calls;
    const Index k = measure(state, rng);
    j = f[k] < f[j] ? k : uniform(rng);
  }
  return calls;
}

std::uint64_t classical_random_search_baseline(std::span<const double> f, Rng& rng) {
  if (f.empty()) throw std::invalid_argument("no candidates");
  const Index target = argmin(f);
  std::vector<Index> pool(f.size());
  std::iota(pool.begin(), pool.end(), Index{0});
  std::uint64_t draws = 0;
  // Partial Fisher-Yates: each step draws uniformly from the untried rest.
  for (std::size_t k = 0; k < pool.size(); ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, pool.size() - 1);
    std::swap(pool[k], pool[pick(rng)]);
    ++draws;
    if (pool[k] == target) break;
  }
  return draws;
}

ToyRunStats toy_experiment(const ToyFixture& fixture, std::size_t runs, Rng& rng) {
  fixture.validate();
  if (runs == 0) throw std::invalid_argument("runs must be >= 1");
  ToyRunStats stats;
  stats.centers = fixture.centers();
  stats.runs = runs;
  for (Index i = 0; i < ToyFixture::kSize; ++i) {
    if (std::find(stats.centers.begin(), stats.centers.end(), i) != stats.centers.end()) continue;
    auto f = fixture.objective(i);
    f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
    double quantum = 0.0;
    double classical = 0.0;
    for (std::size_t r = 0; r < runs; ++r) {
      quantum += static_cast<double>(toy_quantum_nearest_higher(fixture, i, rng));
      classical += static_cast<double>(classical_random_search_baseline(f, rng));
    }
    stats.elements.push_back({i, quantum / static_cast<double>(runs), classical / static_cast<double>(runs)});
  }
  return stats;
}

}  // namespace qdpc
