#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdpc {

using Index = std::size_t;

enum class Metric { kEuclidean, kManhattan, kChebyshev };

std::string to_string(Metric metric);
Metric metric_from_string(const std::string& name);

/// Distance between two coordinate vectors of equal length.
double metric_distance(Metric metric, std::span<const double> a, std::span<const double> b);

/// Immutable indexed point set. Point ids are 0..n-1 in storage order.
class Dataset {
 public:
  /// `coords` is row-major with `dim` values per point.
  Dataset(std::size_t dim, std::vector<double> coords, Metric metric = Metric::kEuclidean);

  static Dataset from_rows(const std::vector<std::vector<double>>& rows,
                           Metric metric = Metric::kEuclidean);

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return dim_; }
  Metric metric() const noexcept { return metric_; }

  std::span<const double> point(Index i) const;
  const std::vector<double>& coords() const noexcept { return coords_; }
  std::vector<std::vector<double>> rows() const;

  /// Distance straight from coordinates. Bypasses query accounting; algorithm
  /// code goes through DistanceOracle instead.
  double uncounted_distance(Index i, Index j) const;

  Dataset with_metric(Metric metric) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t dim_;
  std::size_t n_;
  std::vector<double> coords_;
  Metric metric_;
};

// ---------------------------------------------------------------------------
// Synthetic generators. All are pure functions of (parameters, seed).

/// n points i.i.d. uniform in the d-ball of the given radius.
Dataset generate_uniform_ball(std::size_t n, std::size_t d, double radius, std::uint64_t seed);

struct GaussianMixtureOptions {
  std::size_t clusters = 10;
  double box = 100.0;
  /// Covariance is scale * (A A^T + d * 1e-3 * I) with A_ij ~ U[0, 1].
  double covariance_scale = 4.0;
  bool identity_covariance = false;
};

Dataset generate_gaussian_mixture(std::size_t n, std::size_t d, const GaussianMixtureOptions& options,
                                  std::uint64_t seed);

// ---------------------------------------------------------------------------
// Ingestion and preprocessing.

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct CsvOptions {
  char delimiter = ',';
  bool header = false;
  /// Column holding a row identifier. It is skipped; ids follow row order.
  std::optional<std::size_t> id_column;
  /// Columns to keep, in output order. Empty keeps every non-id column.
  std::vector<std::size_t> columns;
  /// Same as `columns` but by header name; requires `header`.
  std::vector<std::string> column_names;
};

Dataset load_csv(const std::string& path, const CsvOptions& options = {});
Dataset parse_csv(const std::string& text, const CsvOptions& options = {});

/// Per-column zero mean and unit population variance; constant columns become zero.
Dataset standardize(const Dataset& dataset);

struct PrincipalComponents {
  std::vector<double> mean;
  /// Eigenvalues of the sample covariance, non-increasing.
  std::vector<double> eigenvalues;
  /// components[c] is the c-th unit eigenvector (length d); its
  /// largest-magnitude entry is positive.
  std::vector<std::vector<double>> components;

  double explained_variance_ratio(std::size_t c) const;
};

PrincipalComponents principal_components(const Dataset& dataset);

/// Projection onto the k leading principal components (data is centred first).
Dataset pca_project(const Dataset& dataset, std::size_t k);

}  // namespace qdpc
