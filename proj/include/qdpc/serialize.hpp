#pragma once

#include <iosfwd>
#include <string>

#include "qdpc/dataset.hpp"
#include "qdpc/dpc.hpp"
#include "qdpc/scaling.hpp"
#include "qdpc/toy.hpp"

namespace qdpc {

// Dataset: {"n": ..., "d": ..., "points": [[...], ...]} or plain CSV rows.
std::string dataset_to_json(const Dataset& dataset);
Dataset dataset_from_json(const std::string& text);
std::string dataset_to_csv(const Dataset& dataset);

/// Reads .json via dataset_from_json and anything else as CSV.
Dataset load_dataset(const std::string& path, const CsvOptions& csv = {});
/// Writes .csv as CSV and anything else as JSON. Throws on I/O failure.
void save_dataset(const std::string& path, const Dataset& dataset);

/// {"parent":[..|null], "delta":[..|"inf"], "rho":[..], "labels":[..|"noise"],
///  "roots":[..], "outliers":[..]}
std::string forest_to_json(const NearestHigherForest& forest, const ClusterAssignment& assignment);

struct ForestRecord {
  NearestHigherForest forest;
  ClusterAssignment assignment;
};
ForestRecord forest_from_json(const std::string& text);

/// Decision-graph data: header "id,rho,delta", infinite delta written as "inf".
std::string rho_delta_csv(const NearestHigherForest& forest);

/// {"rho": [8 reals], "dist": [[8 x 8 reals]]}
ToyFixture toy_fixture_from_json(const std::string& text);
std::string toy_fixture_to_json(const ToyFixture& fixture);
ToyFixture load_toy_fixture(const std::string& path);

/// Header "element,quantum_mean,classical_mean,runs".
std::string toy_stats_csv(const ToyRunStats& stats);

/// Header "family,d,n,run_count,mean_H".
std::string height_report_csv_header();
std::string height_report_csv_row(const HeightEntry& entry);
/// Long format for plotting: "family,d,n,run,H".
std::string height_long_csv(const HeightScalingReport& report);

/// {"family":..., "d":..., "slope":..., "d_eff":..., "r2":...}
std::string fit_to_json(const std::string& family, std::size_t d, const FitResult& fit);

/// {"n":..., "h":..., "delta":..., "grover_iterations":..., "charged_queries":...,
///  "success":..., "seed":...}
std::string qmf_run_to_json(const QmfBenchRun& run);

/// Header "n,i,j,classical_same,classical_queries,quantum_mean_queries,quantum_mean_calls,agreement_rate".
std::string decision_benchmark_csv(const std::vector<DecisionBenchmark>& benches);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// Shortest text that parses back to the same double; "inf" for +inf.
std::string format_double(double value);

}  // namespace qdpc
