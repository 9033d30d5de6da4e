#include "qdpc/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qdpc {

using nlohmann::json;

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << contents;
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

json index_or_null(const std::optional<Index>& v) { return v ? json(*v) : json(nullptr); }

json real_or_inf(double v) { return std::isinf(v) ? json("inf") : json(v); }

double real_from(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInfinity;
    throw std::invalid_argument("unexpected string '" + j.get<std::string>() + "' in numeric field");
  }
  return j.get<double>();
}

}  // namespace

std::string dataset_to_json(const Dataset& dataset) {
  json j;
  j["n"] = dataset.size();
  j["d"] = dataset.dim();
  j["points"] = dataset.rows();
  return j.dump() + "\n";
}

Dataset dataset_from_json(const std::string& text) {
  const json j = json::parse(text);
  const auto rows = j.at("points").get<std::vector<std::vector<double>>>();
  Dataset data = Dataset::from_rows(rows);
  if (j.contains("n") && j["n"].get<std::size_t>() != data.size())
    throw std::invalid_argument("dataset JSON: n does not match the point count");
  if (j.contains("d") && j["d"].get<std::size_t>() != data.dim())
    throw std::invalid_argument("dataset JSON: d does not match the point dimension");
  return data;
}

std::string dataset_to_csv(const Dataset& dataset) {
  std::string out;
  for (Index i = 0; i < dataset.size(); ++i) {
    const auto p = dataset.point(i);
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k) out += ',';
      out += format_double(p[k]);
    }
    out += '\n';
  }
  return out;
}

Dataset load_dataset(const std::string& path, const CsvOptions& csv) {
  if (ends_with(path, ".json")) return dataset_from_json(read_file(path));
  return load_csv(path, csv);
}

void save_dataset(const std::string& path, const Dataset& dataset) {
  write_file(path, ends_with(path, ".csv") ? dataset_to_csv(dataset) : dataset_to_json(dataset));
}

std::string forest_to_json(const NearestHigherForest& forest, const ClusterAssignment& assignment) {
  json j;
  json parent = json::array();
  json delta = json::array();
  json labels = json::array();
  for (Index i = 0; i < forest.size(); ++i) {
    parent.push_back(index_or_null(forest.parent[i]));
    delta.push_back(real_or_inf(forest.delta[i]));
    labels.push_back(assignment.label[i] ? json(*assignment.label[i]) : json("noise"));
  }
  j["parent"] = std::move(parent);
  j["delta"] = std::move(delta);
  j["rho"] = forest.density.rho;
  j["labels"] = std::move(labels);
  j["roots"] = assignment.roots;
  j["outliers"] = assignment.outliers;
  return j.dump() + "\n";
}

ForestRecord forest_from_json(const std::string& text) {
  const json j = json::parse(text);
  ForestRecord rec;
  rec.forest.density.rho = j.at("rho").get<std::vector<double>>();
  for (const auto& p : j.at("parent"))
    rec.forest.parent.push_back(p.is_null() ? std::nullopt : std::optional<Index>(p.get<Index>()));
  for (const auto& d : j.at("delta")) rec.forest.delta.push_back(real_from(d));
  for (const auto& l : j.at("labels")) {
    if (l.is_string() && l.get<std::string>() == "noise")
      rec.assignment.label.emplace_back(std::nullopt);
    else
      rec.assignment.label.emplace_back(l.get<Index>());
  }
  rec.assignment.roots = j.at("roots").get<std::vector<Index>>();
  rec.assignment.outliers = j.at("outliers").get<std::vector<Index>>();
  const std::size_t n = rec.forest.density.rho.size();
  if (rec.forest.parent.size() != n || rec.forest.delta.size() != n || rec.assignment.label.size() != n)
    throw std::invalid_argument("forest JSON: array lengths differ");
  return rec;
}

std::string rho_delta_csv(const NearestHigherForest& forest) {
  std::string out = "id,rho,delta\n";
  for (Index i = 0; i < forest.size(); ++i)
    out += std::to_string(i) + ',' + format_double(forest.density.rho[i]) + ',' + format_double(forest.delta[i]) +
           '\n';
  return out;
}

ToyFixture toy_fixture_from_json(const std::string& text) {
  const json j = json::parse(text);
  ToyFixture fx;
  fx.rho = j.at("rho").get<std::vector<double>>();
  fx.dist = j.at("dist").get<std::vector<std::vector<double>>>();
  fx.validate();
  return fx;
}

std::string toy_fixture_to_json(const ToyFixture& fixture) {
  json j;
  j["rho"] = fixture.rho;
  j["dist"] = fixture.dist;
  return j.dump() + "\n";
}

ToyFixture load_toy_fixture(const std::string& path) { return toy_fixture_from_json(read_file(path)); }

std::string toy_stats_csv(const ToyRunStats& stats) {
  std::string out = "element,quantum_mean,classical_mean,runs\n";
  for (const auto& e : stats.elements)
    out += std::to_string(e.element) + ',' + format_double(e.quantum_mean) + ',' + format_double(e.classical_mean) +
           ',' + std::to_string(stats.runs) + '\n';
  return out;
}

std::string height_report_csv_header() { return "family,d,n,run_count,mean_H\n"; }

std::string height_report_csv_row(const HeightEntry& e) {
  return e.family + ',' + std::to_string(e.d) + ',' + std::to_string(e.n) + ',' + std::to_string(e.runs) + ',' +
         format_double(e.mean_height) + '\n';
}

std::string height_long_csv(const HeightScalingReport& report) {
  std::string out = "family,d,n,run,H\n";
  for (const auto& e : report.entries)
    for (std::size_t r = 0; r < e.heights.size(); ++r)
      out += e.family + ',' + std::to_string(e.d) + ',' + std::to_string(e.n) + ',' + std::to_string(r) + ',' +
             std::to_string(e.heights[r]) + '\n';
  return out;
}

std::string fit_to_json(const std::string& family, std::size_t d, const FitResult& fit) {
  json j;
  j["family"] = family;
  j["d"] = d;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["d_eff"] = real_or_inf(fit.d_eff);
  j["r2"] = fit.r_squared;
  return j.dump() + "\n";
}

std::string qmf_run_to_json(const QmfBenchRun& run) {
  json j;
  j["n"] = run.n;
  j["i"] = run.element;
  j["h"] = index_or_null(run.h);
  j["delta"] = real_or_inf(run.delta);
  j["grover_iterations"] = run.grover_iterations;
  j["charged_queries"] = run.charged_queries;
  j["success"] = run.success;
  j["seed"] = run.seed;
  return j.dump();
}

std::string decision_benchmark_csv(const std::vector<DecisionBenchmark>& benches) {
  std::string out =
      "n,i,j,classical_same,classical_queries,quantum_mean_queries,quantum_mean_calls,agreement_rate\n";
  for (const auto& b : benches)
    for (const auto& r : b.rows)
      out += std::to_string(b.n) + ',' + std::to_string(r.i) + ',' + std::to_string(r.j) + ',' +
             (r.classical_same ? "1" : "0") + ',' + std::to_string(r.classical_queries) + ',' +
             format_double(r.quantum_mean_queries) + ',' + format_double(r.quantum_mean_calls) + ',' +
             format_double(r.agreement_rate) + '\n';
  return out;
}

}  // namespace qdpc
