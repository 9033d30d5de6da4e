#include "qdpc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>

#include "qdpc/random.hpp"

namespace qdpc {

std::string to_string(Metric metric) {
  switch (metric) {
    case Metric::kEuclidean: return "euclidean";
    case Metric::kManhattan: return "manhattan";
    case Metric::kChebyshev: return "chebyshev";
  }
  return "euclidean";
}

Metric metric_from_string(const std::string& name) {
  if (name == "euclidean") return Metric::kEuclidean;
  if (name == "manhattan") return Metric::kManhattan;
  if (name == "chebyshev") return Metric::kChebyshev;
  throw std::invalid_argument("unknown metric '" + name + "'");
}

double metric_distance(Metric metric, std::span<const double> a, std::span<const double> b) {
  const std::size_t d = a.size();
  switch (metric) {
    case Metric::kEuclidean: {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double t = a[k] - b[k];
        s += t * t;
      }
      return std::sqrt(s);
    }
    case Metric::kManhattan: {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += std::abs(a[k] - b[k]);
      return s;
    }
    case Metric::kChebyshev: {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s = std::max(s, std::abs(a[k] - b[k]));
      return s;
    }
  }
  return 0.0;
}

Dataset::Dataset(std::size_t dim, std::vector<double> coords, Metric metric)
    : dim_(dim), n_(0), coords_(std::move(coords)), metric_(metric) {
  if (dim_ == 0) throw std::invalid_argument("dataset dimension must be >= 1");
  if (coords_.empty()) throw std::invalid_argument("dataset must contain at least one point");
  if (coords_.size() % dim_ != 0)
    throw std::invalid_argument("coordinate count is not a multiple of the dimension");
  n_ = coords_.size() / dim_;
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows, Metric metric) {
  if (rows.empty()) throw std::invalid_argument("dataset must contain at least one point");
  const std::size_t d = rows.front().size();
  std::vector<double> coords;
  coords.reserve(rows.size() * d);
  for (const auto& r : rows) {
    if (r.size() != d) throw std::invalid_argument("all points must share one dimension");
    coords.insert(coords.end(), r.begin(), r.end());
  }
  return Dataset(d, std::move(coords), metric);
}

std::span<const double> Dataset::point(Index i) const {
  if (i >= n_) throw std::out_of_range("point index " + std::to_string(i) + " out of range");
  return {coords_.data() + i * dim_, dim_};
}

std::vector<std::vector<double>> Dataset::rows() const {
  std::vector<std::vector<double>> out;
  out.reserve(n_);
  for (Index i = 0; i < n_; ++i) {
    auto p = point(i);
    out.emplace_back(p.begin(), p.end());
  }
  return out;
}

double Dataset::uncounted_distance(Index i, Index j) const {
  return metric_distance(metric_, point(i), point(j));
}

Dataset Dataset::with_metric(Metric metric) const { return Dataset(dim_, coords_, metric); }

// ---------------------------------------------------------------------------

Dataset generate_uniform_ball(std::size_t n, std::size_t d, double radius, std::uint64_t seed) {
  if (n == 0 || d == 0) throw std::invalid_argument("uniform ball needs n >= 1 and d >= 1");
  if (!(radius > 0.0)) throw std::invalid_argument("uniform ball radius must be positive");

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> coords(n * d);
  const double inv_d = 1.0 / static_cast<double>(d);
  for (std::size_t i = 0; i < n; ++i) {
    double* x = coords.data() + i * d;
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        x[k] = normal(rng);
        norm2 += x[k] * x[k];
      }
    } while (norm2 == 0.0);
    const double r = radius * std::pow(unit(rng), inv_d) / std::sqrt(norm2);
    for (std::size_t k = 0; k < d; ++k) x[k] *= r;
  }
  return Dataset(d, std::move(coords));
}

Dataset generate_gaussian_mixture(std::size_t n, std::size_t d, const GaussianMixtureOptions& options,
                                  std::uint64_t seed) {
  const std::size_t k = options.clusters;
  if (d == 0) throw std::invalid_argument("gaussian mixture needs d >= 1");
  if (k == 0 || n < k) throw std::invalid_argument("gaussian mixture needs n >= k >= 1");
  if (options.box < 0.0) throw std::invalid_argument("gaussian mixture box must be non-negative");

  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  // Centroids first, then one covariance factor per cluster, then the draws.
  std::vector<Eigen::VectorXd> centroids(k, Eigen::VectorXd(d));
  for (auto& c : centroids)
    for (std::size_t a = 0; a < d; ++a) c(a) = options.box * unit(rng);

  std::vector<Eigen::MatrixXd> factors(k);
  for (auto& L : factors) {
    if (options.identity_covariance) {
      L = Eigen::MatrixXd::Identity(d, d);
      continue;
    }
    Eigen::MatrixXd A(d, d);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) A(r, c) = unit(rng);
    Eigen::MatrixXd cov = A * A.transpose();
    cov.diagonal().array() += static_cast<double>(d) * 1e-3;
    cov *= options.covariance_scale;
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    L = llt.matrixL();
  }

  std::vector<double> coords;
  coords.reserve(n * d);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  Eigen::VectorXd z(d);
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t count = base + (c < extra ? 1 : 0);
    for (std::size_t m = 0; m < count; ++m) {
      for (std::size_t a = 0; a < d; ++a) z(a) = normal(rng);
      const Eigen::VectorXd x = centroids[c] + factors[c] * z;
      coords.insert(coords.end(), x.data(), x.data() + d);
    }
  }
  return Dataset(d, std::move(coords));
}

// ---------------------------------------------------------------------------

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, delimiter)) cells.push_back(cell);
  if (!line.empty() && line.back() == delimiter) cells.emplace_back();
  return cells;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& raw, std::size_t line, std::size_t column) {
  const std::string cell = trim(raw);
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (!cell.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (cell.empty() || ec != std::errc() || ptr != end)
    throw ParseError(line, "column " + std::to_string(column) + ": not a number: '" + cell + "'");
  return value;
}

}  // namespace

Dataset parse_csv(const std::string& text, const CsvOptions& options) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::size_t> selected = options.columns;
  std::size_t width = 0;
  bool have_width = false;
  std::vector<double> coords;
  std::size_t rows = 0;

  if (!options.column_names.empty() && !options.header)
    throw std::invalid_argument("selecting columns by name requires a header row");

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split_line(line, options.delimiter);

    if (!have_width) {
      width = cells.size();
      have_width = true;
      if (options.id_column && *options.id_column >= width)
        throw ParseError(line_no, "id column out of range");
      if (options.header) {
        for (const auto& name : options.column_names) {
          auto it = std::find_if(cells.begin(), cells.end(),
                                 [&](const std::string& c) { return trim(c) == name; });
          if (it == cells.end()) throw ParseError(line_no, "no column named '" + name + "'");
          selected.push_back(static_cast<std::size_t>(it - cells.begin()));
        }
      }
      if (selected.empty()) {
        for (std::size_t c = 0; c < width; ++c)
          if (!options.id_column || c != *options.id_column) selected.push_back(c);
      }
      for (auto c : selected)
        if (c >= width) throw ParseError(line_no, "selected column " + std::to_string(c) + " out of range");
      if (selected.empty()) throw ParseError(line_no, "no data columns");
      if (options.header) continue;
    }

    if (cells.size() != width)
      throw ParseError(line_no, "expected " + std::to_string(width) + " fields, found " +
                                    std::to_string(cells.size()));
    for (auto c : selected) coords.push_back(parse_number(cells[c], line_no, c));
    ++rows;
  }
  if (rows == 0) throw ParseError(line_no, "no data rows");
  return Dataset(selected.size(), std::move(coords));
}

Dataset load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << file.rdbuf();
  return parse_csv(buf.str(), options);
}

Dataset standardize(const Dataset& dataset) {
  const std::size_t n = dataset.size();
  const std::size_t d = dataset.dim();
  if (n < 2) throw std::domain_error("standardize needs at least two points");
  std::vector<double> out = dataset.coords();
  for (std::size_t c = 0; c < d; ++c) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += out[i * d + c];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = out[i * d + c] - mean;
      var += t * t;
    }
    var /= static_cast<double>(n);
    const double sd = std::sqrt(var);
    // Tolerance relative to the column magnitude: round-off in the mean of a
    // constant column leaves a tiny non-zero variance.
    const bool constant = !(sd > 1e-12 * std::max(1.0, std::abs(mean)));
    for (std::size_t i = 0; i < n; ++i)
      out[i * d + c] = constant ? 0.0 : (out[i * d + c] - mean) / sd;
  }
  return Dataset(d, std::move(out), dataset.metric());
}

double PrincipalComponents::explained_variance_ratio(std::size_t c) const {
  double total = 0.0;
  for (double v : eigenvalues) total += std::max(v, 0.0);
  if (total <= 0.0) return 0.0;
  return std::max(eigenvalues.at(c), 0.0) / total;
}

PrincipalComponents principal_components(const Dataset& dataset) {
  const std::size_t n = dataset.size();
  const std::size_t d = dataset.dim();
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> X(
      dataset.coords().data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  const Eigen::RowVectorXd mean = X.colwise().mean();
  const Eigen::MatrixXd centred = X.rowwise() - mean;
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  const Eigen::MatrixXd cov = (centred.transpose() * centred) / denom;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw std::runtime_error("covariance eigendecomposition failed");

  PrincipalComponents pc;
  pc.mean.assign(mean.data(), mean.data() + d);
  // Eigen returns ascending eigenvalues.
  for (Eigen::Index c = static_cast<Eigen::Index>(d) - 1; c >= 0; --c) {
    Eigen::VectorXd v = solver.eigenvectors().col(c);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    pc.eigenvalues.push_back(solver.eigenvalues()(c));
    pc.components.emplace_back(v.data(), v.data() + d);
  }
  return pc;
}

Dataset pca_project(const Dataset& dataset, std::size_t k) {
  const std::size_t d = dataset.dim();
  if (k == 0 || k > d)
    throw std::domain_error("component count must be in [1, " + std::to_string(d) + "]");
  const auto pc = principal_components(dataset);
  const std::size_t n = dataset.size();
  std::vector<double> out(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = dataset.point(i);
    for (std::size_t c = 0; c < k; ++c) {
      double s = 0.0;
      for (std::size_t a = 0; a < d; ++a) s += (x[a] - pc.mean[a]) * pc.components[c][a];
      out[i * k + c] = s;
    }
  }
  return Dataset(k, std::move(out), dataset.metric());
}

}  // namespace qdpc
