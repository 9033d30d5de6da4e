#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qdpc/decision.hpp"
#include "qdpc/qmf.hpp"
#include "support/fixtures.hpp"

using namespace qdpc;

namespace {

std::vector<double> random_permutation(std::size_t n, Rng& rng) {
  std::vector<double> f(n);
  std::iota(f.begin(), f.end(), 0.0);
  std::shuffle(f.begin(), f.end(), rng);
  return f;
}

double three_sigma(double p, std::size_t runs) { return 3.0 * std::sqrt(p * (1.0 - p) / runs); }

}  // namespace

TEST_CASE("grover success probability closed forms") {
  CHECK(grover_success_probability(16, 16, 0) == 1.0);
  CHECK(grover_success_probability(4, 1, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(grover_success_probability(9, 0, 3) == 0.0);
  const double theta = std::asin(std::sqrt(3.0 / 40.0));
  CHECK(grover_success_probability(40, 3, 2) == doctest::Approx(std::pow(std::sin(5 * theta), 2)));
  CHECK(grover_success_probability(8, 1, 1) == doctest::Approx(25.0 / 32.0).epsilon(1e-14));
  CHECK(std::sin(3 * std::asin(std::sqrt(1.0 / 8.0))) == doctest::Approx(0.8839).epsilon(1e-4));
  CHECK_THROWS_AS(grover_success_probability(4, 5, 0), std::domain_error);
}

TEST_CASE("grover trial: edge cases and round distribution") {
  Rng rng(1);
  CHECK_THROWS_AS(grover_trial(4, 5, 1.0, rng), std::domain_error);
  for (int k = 0; k < 200; ++k) {
    CHECK_FALSE(grover_trial(32, 0, 5.0, rng).success);
    const auto all = grover_trial(32, 32, 1.0, rng);
    CHECK(all.iterations == 0);
    CHECK(all.success);
  }
  std::vector<int> counts(4, 0);
  for (int k = 0; k < 40000; ++k) ++counts[grover_trial(64, 1, 3.5, rng).iterations];
  for (int c : counts) CHECK(std::abs(c - 10000) < 4 * std::sqrt(40000 * 0.25 * 0.75));
}

TEST_CASE("grover trial: success frequency matches sin^2((2r+1) theta) (chi-square, 1%)") {
  struct Case {
    std::size_t n, t;
    std::uint64_t r;
  };
  for (const Case c : {Case{64, 3, 2}, Case{100, 7, 1}, Case{1024, 1, 10}}) {
    Rng rng(derive_seed(7, {c.n, c.t, c.r}));
    const double p = grover_success_probability(c.n, c.t, c.r);
    std::size_t hits = 0;
    std::size_t draws = 0;
    while (draws < 100000) {
      const auto trial = grover_trial(c.n, c.t, static_cast<double>(c.r + 1), rng);
      if (trial.iterations != c.r) continue;
      ++draws;
      hits += trial.success;
    }
    const double expected_hit = p * draws;
    const double expected_miss = (1.0 - p) * draws;
    const double chi2 = std::pow(hits - expected_hit, 2) / expected_hit +
                        std::pow((draws - hits) - expected_miss, 2) / expected_miss;
    CHECK(chi2 < 6.635);
  }
}

TEST_CASE("search problem: marked counts, ties and tie-break") {
  const SearchProblem plain({3.0, 1.0, 1.0, kInfinity, 2.0});
  CHECK(plain.improving_count(0) == 3);
  CHECK(plain.improving_count(1) == 0);
  CHECK(plain.improving_count(2) == 0);
  CHECK(plain.improving_count(3) == 4);
  CHECK(plain.is_minimizer(1));
  CHECK(plain.is_minimizer(2));

  const SearchProblem broken({3.0, 1.0, 1.0, kInfinity, kInfinity}, 1, true);
  CHECK(broken.improving_count(2) == 1);
  CHECK(broken.improves(1, 2));
  CHECK_FALSE(broken.improves(2, 1));
  CHECK(broken.is_minimizer(1));
  CHECK_FALSE(broken.is_minimizer(2));
  CHECK(broken.improving_count(4) == 3);
  CHECK(broken.improving_count(3) == 3);
  CHECK_THROWS(SearchProblem({}));
  CHECK_THROWS(SearchProblem({1.0, std::nan("")}));
}

TEST_CASE("bbht: all marked returns at once, none marked exhausts the budget") {
  const QmfConfig config;
  Rng rng(5);
  std::vector<double> f(100, 1.0);
  f[0] = 0.0;
  std::vector<double> everything(100, 0.0);
  everything[7] = 1.0;
  const SearchProblem all(everything);
  double total = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto out = bbht_search(all, 7, 1000, config, rng);
    CHECK(out.found.has_value());
    total += out.iterations;
  }
  CHECK(total / 1000 < 2.0);

  const SearchProblem none(f);
  for (int k = 0; k < 50; ++k) {
    const auto out = bbht_search(none, 0, 300, config, rng);
    CHECK_FALSE(out.found.has_value());
    CHECK(out.iterations <= 300);
  }
}

TEST_CASE("bbht: expected iterations within 4.5 sqrt(n/t)") {
  const QmfConfig config;
  Rng rng(11);
  std::vector<double> f(1024, 1.0);
  f[500] = 0.0;
  const SearchProblem problem(f);
  double total = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto out = bbht_search(problem, 0, std::numeric_limits<std::uint64_t>::max() / 2, config, rng);
    REQUIRE(out.found == Index{500});
    total += out.iterations;
  }
  CHECK(total / 1000 <= 4.5 * std::sqrt(1024.0));
}

TEST_CASE("qmf: trivial and degenerate objectives") {
  QmfConfig config;
  Rng rng(2);
  const auto one = qmf_minimum(SearchProblem({42.0}), config, rng);
  CHECK(one.argmin_candidate == 0);
  CHECK(one.grover_iterations == 0);
  CHECK(one.success);
  const auto flat = qmf_minimum(SearchProblem(std::vector<double>(50, 3.0)), config, rng);
  CHECK(flat.success);
  CHECK_THROWS(qmf_minimum(SearchProblem({1.0, 2.0}), QmfConfig{1.5}, rng));
  CHECK_THROWS(qmf_minimum(SearchProblem({1.0, 2.0}), QmfConfig{0.1, 1.5}, rng));
}

TEST_CASE("qmf: identity objective, n = 64, epsilon = 0.1 succeeds in >= 90% of runs") {
  QmfConfig config;
  config.epsilon = 0.1;
  std::vector<double> f(64);
  std::iota(f.begin(), f.end(), 0.0);
  const SearchProblem problem(f);
  std::size_t ok = 0;
  for (std::uint64_t run = 0; run < 1000; ++run) {
    Rng rng = make_rng(3, {run});
    ok += qmf_minimum(problem, config, rng).argmin_candidate == 0;
  }
  CHECK(ok >= 900);
}

TEST_CASE("qmf: success rate >= 1 - epsilon within 3 sigma") {
  for (std::size_t n : {64u, 256u})
    for (double eps : {0.5, 0.1, 0.01}) {
      QmfConfig config;
      config.epsilon = eps;
      std::size_t ok = 0;
      const std::size_t runs = 1000;
      for (std::uint64_t run = 0; run < runs; ++run) {
        Rng rng = make_rng(17, {n, run, static_cast<std::uint64_t>(eps * 1000)});
        const SearchProblem problem(random_permutation(n, rng));
        ok += qmf_minimum(problem, config, rng).success;
      }
      CAPTURE(n);
      CAPTURE(eps);
      CHECK(static_cast<double>(ok) / runs >= 1.0 - eps - three_sigma(eps, runs));
    }
}

TEST_CASE("qmf: threshold trace strictly improves and the charge follows the rule") {
  QmfConfig config;
  config.epsilon = 0.25;
  for (std::uint64_t run = 0; run < 200; ++run) {
    Rng rng = make_rng(23, {run});
    const SearchProblem problem(random_permutation(100, rng), 7);
    const auto r = qmf_minimum(problem, config, rng);
    for (std::size_t k = 1; k < r.threshold_trace.size(); ++k)
      CHECK(problem.value(r.threshold_trace[k]) < problem.value(r.threshold_trace[k - 1]));
    CHECK(r.threshold_trace.back() == r.argmin_candidate);
    CHECK(r.charged_queries == 7 * r.grover_iterations);
    CHECK(r.grover_iterations <= config.repetitions() * config.iteration_budget(100));
  }
}

TEST_CASE("qmf: larger cutoff never lowers the success rate") {
  double previous = 0.0;
  for (double cutoff : {5.0, 10.0, 22.5}) {
    QmfConfig config;
    config.epsilon = 0.5;
    config.cutoff_factor = cutoff;
    std::size_t ok = 0;
    for (std::uint64_t run = 0; run < 10000; ++run) {
      Rng rng = make_rng(29, {run});
      const SearchProblem problem(random_permutation(128, rng));
      ok += qmf_minimum(problem, config, rng).success;
    }
    const double rate = ok / 10000.0;
    CHECK(rate >= previous);
    previous = rate;
  }
}

TEST_CASE("quantum nearest higher: global peak and exact charge") {
  const auto data = generate_uniform_ball(50, 2, 1.0, 8);
  const auto kernel = Kernel::gaussian(0.4);
  const auto reference = reference_densities(data, kernel);
  QmfConfig config;
  Rng rng(4);
  DistanceOracle oracle(data);
  const auto peak = quantum_nearest_higher(oracle, reference, reference.peak(), config, rng);
  CHECK_FALSE(peak.parent.has_value());
  CHECK(std::isinf(peak.delta));

  for (Index i = 0; i < 10; ++i) {
    DistanceOracle fresh(data);
    const auto q = quantum_nearest_higher(fresh, kernel, i, config, rng);
    CHECK(q.qmf.charged_queries == 49 + 50 * q.qmf.grover_iterations);
    CHECK(fresh.ledger().quantum_queries() == q.qmf.charged_queries);
    CHECK(fresh.ledger().classical_queries() == 0);
  }
}

TEST_CASE("quantum nearest higher: reference densities match the counted sweep") {
  const auto data = Dataset::from_rows(qdpc::testing::blob_points(8, 70, 3));
  const auto kernel = Kernel::gaussian(0.9);
  DistanceOracle oracle(data);
  CHECK(reference_densities(data, kernel).rho == compute_all_densities(oracle, kernel).rho);
}

TEST_CASE("quantum nearest higher agrees with the classical scan (n = 128, epsilon = 0.1)") {
  QmfConfig config;
  config.epsilon = 0.1;
  std::size_t agree = 0;
  const std::size_t runs = 1000;
  for (std::uint64_t ds = 0; ds < 10; ++ds) {
    const auto data = generate_uniform_ball(128, 2, 1.0, 900 + ds);
    const auto kernel = Kernel::gaussian(0.2);
    const auto reference = reference_densities(data, kernel);
    for (std::uint64_t run = 0; run < runs / 10; ++run) {
      Rng rng = make_rng(31, {ds, run});
      std::uniform_int_distribution<Index> pick(0, 127);
      const Index i = pick(rng);
      DistanceOracle quantum(data);
      const auto q = quantum_nearest_higher(quantum, reference, i, config, rng);
      DistanceOracle classical(data);
      const auto c = nearest_higher(classical, reference, i);
      agree += q.parent == c.parent && q.delta == c.delta;
    }
  }
  CHECK(static_cast<double>(agree) / runs >= 0.9 - three_sigma(0.1, runs));
}

TEST_CASE("quantum decide: i == j needs only the classification of i") {
  const auto data = generate_uniform_ball(40, 2, 1.0, 12);
  const auto kernel = Kernel::gaussian(0.5);
  QmfConfig config;
  Rng rng(1);
  DistanceOracle oracle(data);
  const auto reference = reference_densities(data, kernel);
  const auto q = quantum_decide(oracle, reference, Thresholds{0.0, 5.0}, 3, 3, config, rng);
  CHECK(q.same_cluster);
  CHECK(q.calls == 1);
}

TEST_CASE("quantum decide agrees with classical decide (n <= 256, epsilon = 0.1)") {
  QmfConfig config;
  config.epsilon = 0.1;
  std::size_t agree = 0;
  std::size_t total = 0;
  for (std::uint64_t ds = 0; ds < 6; ++ds) {
    const std::size_t n = 64 + 38 * ds;
    const auto pts = qdpc::testing::blob_points(ds + 40, n, 2);
    const auto data = Dataset::from_rows(pts);
    const auto kernel = Kernel::gaussian(1.0);
    DistanceOracle classical(data, true);
    const auto forest = build_forest(classical, kernel);
    const auto t = qdpc::testing::pick_thresholds(forest.density.rho, forest.delta);
    ChainWalker walker(classical, forest.density, t);
    for (std::uint64_t run = 0; run < 50; ++run) {
      Rng rng = make_rng(37, {ds, run});
      std::uniform_int_distribution<Index> pick(0, n - 1);
      const Index i = pick(rng);
      const Index j = pick(rng);
      DistanceOracle oracle(data);
      const auto q = quantum_decide(oracle, forest.density, t, i, j, config, rng);
      agree += q.same_cluster == walker.decide(i, j).same_cluster;
      ++total;
    }
  }
  CHECK(static_cast<double>(agree) / total >= 0.9 - three_sigma(0.1, total));
}

TEST_CASE("quantum decide: charge grows with the chain height") {
  const std::size_t n = 64;
  QmfConfig config;
  config.epsilon = 0.1;
  const Thresholds t{0.0, 1.5};

  // Path: points on a line with density falling along it, so h(k) = k - 1.
  std::vector<std::vector<double>> line;
  DensityProfile falling;
  for (std::size_t k = 0; k < n; ++k) {
    line.push_back({static_cast<double>(k)});
    falling.rho.push_back(static_cast<double>(n - k));
  }
  // Star: a centre at the origin and unit vectors, pairwise sqrt(2) apart.
  std::vector<std::vector<double>> star(n, std::vector<double>(n - 1, 0.0));
  for (std::size_t k = 1; k < n; ++k) star[k][k - 1] = 1.0;

  const auto path_data = Dataset::from_rows(line);
  const auto star_data = Dataset::from_rows(star);
  double path_charge = 0.0;
  double star_charge = 0.0;
  for (std::uint64_t run = 0; run < 20; ++run) {
    Rng rng = make_rng(41, {run});
    DistanceOracle po(path_data);
    const auto p = quantum_decide(po, falling, t, n - 1, 0, config, rng);
    DistanceOracle so(star_data);
    const auto s = quantum_decide(so, falling, t, n - 1, 1, config, rng);
    if (p.all_calls_correct) CHECK(p.calls == n);
    if (s.all_calls_correct) CHECK(s.calls == 3);
    path_charge += p.charged_queries;
    star_charge += s.charged_queries;
  }
  const double height = n - 1;
  CHECK(path_charge / star_charge >= 0.5 * height);
}
