#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "qdpc/dataset.hpp"
#include "qdpc/random.hpp"

using namespace qdpc;

namespace {

std::vector<double> column(const Dataset& data, std::size_t c) {
  std::vector<double> out;
  for (Index i = 0; i < data.size(); ++i) out.push_back(data.point(i)[c]);
  return out;
}

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double population_variance(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / v.size();
}

// Sample covariance, written independently of the library.
std::vector<std::vector<double>> covariance(const Dataset& data) {
  const std::size_t d = data.dim();
  std::vector<double> mu(d, 0.0);
  for (Index i = 0; i < data.size(); ++i)
    for (std::size_t a = 0; a < d; ++a) mu[a] += data.point(i)[a] / data.size();
  std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
  for (Index i = 0; i < data.size(); ++i)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        cov[a][b] += (data.point(i)[a] - mu[a]) * (data.point(i)[b] - mu[b]) / (data.size() - 1);
  return cov;
}

std::string temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / ("qdpc_test_" + name);
  std::ofstream(path) << contents;
  return path.string();
}

}  // namespace

TEST_CASE("dataset construction enforces its invariants") {
  CHECK_THROWS_AS(Dataset(0, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Dataset(2, {}), std::invalid_argument);
  CHECK_THROWS_AS(Dataset(2, {1.0, 2.0, 3.0}), std::invalid_argument);
  CHECK_THROWS_AS(Dataset::from_rows({{1.0, 2.0}, {3.0}}), std::invalid_argument);

  const auto data = Dataset::from_rows({{0.0, 0.0}, {3.0, 4.0}});
  CHECK(data.size() == 2);
  CHECK(data.dim() == 2);
  CHECK(data.uncounted_distance(0, 1) == 5.0);
  CHECK_THROWS_AS(data.point(2), std::out_of_range);
}

TEST_CASE("metrics") {
  const std::vector<double> a{0.0, 0.0};
  const std::vector<double> b{3.0, -4.0};
  CHECK(metric_distance(Metric::kEuclidean, a, b) == 5.0);
  CHECK(metric_distance(Metric::kManhattan, a, b) == 7.0);
  CHECK(metric_distance(Metric::kChebyshev, a, b) == 4.0);
  CHECK(metric_from_string("manhattan") == Metric::kManhattan);
  CHECK(to_string(Metric::kChebyshev) == "chebyshev");
  CHECK_THROWS_AS(metric_from_string("cosine"), std::invalid_argument);
}

TEST_CASE("uniform ball: single point lies inside the ball") {
  for (std::size_t d : {1u, 2u, 7u}) {
    const auto data = generate_uniform_ball(1, d, 2.5, 99);
    double norm2 = 0.0;
    for (double x : data.point(0)) norm2 += x * x;
    CHECK(std::sqrt(norm2) <= 2.5);
  }
}

TEST_CASE("uniform ball: mean norm matches d/(d+1)") {
  const auto data = generate_uniform_ball(10000, 2, 1.0, 2024);
  double total = 0.0;
  for (Index i = 0; i < data.size(); ++i) total += std::hypot(data.point(i)[0], data.point(i)[1]);
  CHECK(std::abs(total / data.size() - 2.0 / 3.0) < 0.02);
}

TEST_CASE("uniform ball: radial CDF matches (r/R)^d (KS distance < 0.02)") {
  for (std::size_t d : {2u, 3u, 5u}) {
    const double radius = 1.7;
    const auto data = generate_uniform_ball(10000, d, radius, 31 + d);
    std::vector<double> r;
    for (Index i = 0; i < data.size(); ++i) {
      double s = 0.0;
      for (double x : data.point(i)) s += x * x;
      r.push_back(std::sqrt(s) / radius);
    }
    std::sort(r.begin(), r.end());
    double ks = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      const double model = std::pow(r[k], static_cast<double>(d));
      ks = std::max({ks, std::abs(model - static_cast<double>(k) / r.size()),
                     std::abs(model - static_cast<double>(k + 1) / r.size())});
    }
    CHECK(ks < 0.02);
  }
}

TEST_CASE("generators are deterministic given the seed") {
  CHECK(generate_uniform_ball(50, 3, 1.0, 5) == generate_uniform_ball(50, 3, 1.0, 5));
  CHECK_FALSE(generate_uniform_ball(50, 3, 1.0, 5) == generate_uniform_ball(50, 3, 1.0, 6));
  CHECK(generate_gaussian_mixture(60, 2, {}, 8) == generate_gaussian_mixture(60, 2, {}, 8));
}

TEST_CASE("generator preconditions") {
  CHECK_THROWS(generate_uniform_ball(0, 2, 1.0, 1));
  CHECK_THROWS(generate_uniform_ball(5, 0, 1.0, 1));
  CHECK_THROWS(generate_uniform_ball(5, 2, 0.0, 1));
  GaussianMixtureOptions opt;
  opt.clusters = 4;
  CHECK_THROWS(generate_gaussian_mixture(3, 2, opt, 1));
}

TEST_CASE("gaussian mixture: degenerate single identity cluster is a standard normal sample") {
  GaussianMixtureOptions opt;
  opt.clusters = 1;
  opt.box = 0.0;
  opt.identity_covariance = true;
  const auto data = generate_gaussian_mixture(20000, 2, opt, 77);
  for (std::size_t c = 0; c < 2; ++c) {
    const auto col = column(data, c);
    // 4 sigma bands for the mean (sd 1/sqrt(n)) and variance (sd ~ sqrt(2/n)).
    CHECK(std::abs(mean_of(col)) < 4.0 / std::sqrt(20000.0));
    CHECK(std::abs(population_variance(col) - 1.0) < 4.0 * std::sqrt(2.0 / 20000.0));
  }
}

TEST_CASE("gaussian mixture: equal split with remainder to the earliest clusters") {
  GaussianMixtureOptions opt;
  opt.clusters = 3;
  opt.box = 1000.0;
  opt.covariance_scale = 1e-6;
  const auto data = generate_gaussian_mixture(11, 1, opt, 3);
  // Tiny covariances: consecutive points of one cluster are nearly equal.
  std::vector<std::size_t> sizes{1};
  for (Index i = 1; i < data.size(); ++i) {
    if (std::abs(data.point(i)[0] - data.point(i - 1)[0]) < 1.0)
      ++sizes.back();
    else
      sizes.push_back(1);
  }
  CHECK(sizes == std::vector<std::size_t>{4, 4, 3});
}

TEST_CASE("gaussian mixture: default setup yields well separated clusters") {
  bool separated = false;
  for (std::uint64_t seed = 0; seed < 5 && !separated; ++seed) {
    const auto data = generate_gaussian_mixture(1000, 2, {}, seed);
    // Cluster c occupies rows [100c, 100c + 100); compare cluster means.
    std::vector<std::array<double, 2>> means(10, {0.0, 0.0});
    for (Index i = 0; i < data.size(); ++i)
      for (std::size_t a = 0; a < 2; ++a) means[i / 100][a] += data.point(i)[a] / 100.0;
    for (std::size_t p = 0; p < 10; ++p)
      for (std::size_t q = p + 1; q < 10; ++q)
        if (std::hypot(means[p][0] - means[q][0], means[p][1] - means[q][1]) > 10.0) separated = true;
  }
  CHECK(separated);
}

TEST_CASE("csv: plain rows") {
  const auto data = parse_csv("0,0\n1,0\n0,1\n");
  CHECK(data.size() == 3);
  CHECK(data.dim() == 2);
  CHECK(data.point(2)[1] == 1.0);
}

TEST_CASE("csv: header, id column, delimiter and column selection") {
  CsvOptions opt;
  opt.header = true;
  opt.id_column = 0;
  opt.delimiter = ';';
  const auto data = parse_csv("id;x;y;z\n17;1;2;3\n4;5;6;7\n", opt);
  CHECK(data.size() == 2);
  CHECK(data.dim() == 3);
  CHECK(data.point(0)[0] == 1.0);
  CHECK(data.point(1)[2] == 7.0);

  opt.columns = {3, 1};
  const auto picked = parse_csv("id;x;y;z\n17;1;2;3\n4;5;6;7\n", opt);
  CHECK(picked.dim() == 2);
  CHECK(picked.point(0)[0] == 3.0);
  CHECK(picked.point(0)[1] == 1.0);

  CsvOptions named;
  named.header = true;
  named.column_names = {"y"};
  const auto by_name = parse_csv("x,y\n1,2\n3,4\n", named);
  CHECK(by_name.dim() == 1);
  CHECK(by_name.point(1)[0] == 4.0);
}

TEST_CASE("csv: errors carry the row number") {
  CHECK_THROWS_AS(parse_csv(""), ParseError);
  try {
    parse_csv("1,2\n3,4\n5\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  try {
    parse_csv("1,2\n3,abc\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CsvOptions header;
  header.header = true;
  CHECK_THROWS_AS(parse_csv("x,y\n", header), ParseError);
}

TEST_CASE("csv: load from file") {
  const auto path = temp_file("rows.csv", "0,0\n1,0\n0,1\n");
  CHECK(load_csv(path).size() == 3);
  std::filesystem::remove(path);
  CHECK_THROWS(load_csv("/nonexistent/qdpc/none.csv"));
}

TEST_CASE("standardize") {
  const auto data = standardize(Dataset::from_rows({{1.0, 0.0}, {1.0, 2.0}}));
  CHECK(data.point(0)[0] == 0.0);
  CHECK(data.point(1)[0] == 0.0);
  CHECK(data.point(0)[1] == -1.0);
  CHECK(data.point(1)[1] == 1.0);
  CHECK_THROWS_AS(standardize(Dataset::from_rows({{1.0}})), std::domain_error);

  const auto z = standardize(generate_gaussian_mixture(500, 4, {}, 12));
  for (std::size_t c = 0; c < z.dim(); ++c) {
    const auto col = column(z, c);
    CHECK(std::abs(mean_of(col)) < 1e-12);
    CHECK(std::abs(population_variance(col) - 1.0) < 1e-12);
  }
}

TEST_CASE("pca: full projection of rotated data is an isometry") {
  Rng rng(4);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double c = std::cos(0.7);
  const double s = std::sin(0.7);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 50; ++i) {
    const double x = 3.0 * normal(rng);
    const double y = normal(rng);
    rows.push_back({c * x - s * y, s * x + c * y, 0.5 * normal(rng)});
  }
  const auto data = Dataset::from_rows(rows);
  const auto proj = pca_project(data, 3);
  for (Index i = 0; i < data.size(); ++i)
    for (Index j = i + 1; j < data.size(); ++j)
      CHECK(std::abs(proj.uncounted_distance(i, j) - data.uncounted_distance(i, j)) < 1e-9);
}

TEST_CASE("pca: points on y = x are one-dimensional") {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 20; ++i) rows.push_back({0.1 * i, 0.1 * i});
  const auto pc = principal_components(Dataset::from_rows(rows));
  CHECK(pc.explained_variance_ratio(0) >= 0.999);
  CHECK(pc.components[0][0] == doctest::Approx(std::sqrt(0.5)));
  CHECK(pc.components[0][1] == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("pca: eigenvalues non-increasing, sign convention, diagonal projected covariance") {
  const auto data = standardize(generate_gaussian_mixture(400, 5, {}, 21));
  const auto pc = principal_components(data);
  for (std::size_t k = 1; k < pc.eigenvalues.size(); ++k) CHECK(pc.eigenvalues[k] <= pc.eigenvalues[k - 1]);
  for (const auto& v : pc.components) {
    const auto it = std::max_element(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    CHECK(*it > 0.0);
  }
  const auto proj = pca_project(data, 3);
  CHECK(proj.dim() == 3);
  const auto cov = covariance(proj);
  for (std::size_t a = 0; a < 3; ++a) {
    CHECK(cov[a][a] == doctest::Approx(pc.eigenvalues[a]).epsilon(1e-9));
    for (std::size_t b = 0; b < 3; ++b)
      if (a != b) CHECK(std::abs(cov[a][b]) < 1e-9);
  }
  CHECK_THROWS_AS(pca_project(data, 6), std::domain_error);
  CHECK_THROWS_AS(pca_project(data, 0), std::domain_error);
}
