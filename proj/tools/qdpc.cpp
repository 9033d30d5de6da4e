// qdpc: dataset generation, clustering, decision queries, quantum benchmarks
// and scaling studies from the command line.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdpc/decision.hpp"
#include "qdpc/parallel.hpp"
#include "qdpc/qmf.hpp"
#include "qdpc/scaling.hpp"
#include "qdpc/serialize.hpp"
#include "qdpc/toy.hpp"

using namespace qdpc;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Shared flag groups.

struct InputFlags {
  std::string path;
  bool header = false;
  char delimiter = ',';
  std::optional<std::size_t> id_column;
  std::vector<std::size_t> columns;
  std::string metric = "euclidean";
  bool standardize = false;
  std::size_t pca = 0;

  void add(CLI::App* app, bool required) {
    auto* opt = app->add_option("--input", path, "Dataset file (.json, otherwise CSV)");
    if (required) opt->required();
    app->add_flag("--header", header, "CSV has a header row");
    app->add_option("--delimiter", delimiter, "CSV field delimiter");
    app->add_option("--id-column", id_column, "CSV column holding a row id (dropped)");
    app->add_option("--columns", columns, "CSV columns to keep, zero-based")->delimiter(',');
    app->add_option("--metric", metric, "euclidean or manhattan");
    app->add_flag("--standardize", standardize, "Rescale each coordinate to zero mean, unit variance");
    app->add_option("--pca", pca, "Project onto the leading K principal components (implies --standardize)");
  }

  Dataset load() const {
    CsvOptions csv;
    csv.header = header;
    csv.delimiter = delimiter;
    csv.id_column = id_column;
    csv.columns = columns;
    Dataset data = load_dataset(path, csv).with_metric(metric_from_string(metric));
    if (standardize || pca > 0) data = qdpc::standardize(data);
    if (pca > 0) {
      if (pca > data.dim()) throw UsageError("--pca exceeds the dataset dimension");
      data = pca_project(data, pca);
    }
    return data;
  }
};

struct KernelFlags {
  std::string shape = "gaussian";
  double dc = 0.0;

  void add(CLI::App* app) {
    app->add_option("--kernel", shape, "gaussian or step")->check(CLI::IsMember({"gaussian", "step"}));
    app->add_option("--dc", dc, "Kernel cutoff d_c")->required()->check(CLI::PositiveNumber);
  }
  Kernel kernel() const { return Kernel::make(shape, dc); }
};

struct PolicyFlags {
  std::string shape = "gaussian";
  std::optional<double> dc;
  KernelPolicy policy;

  void add(CLI::App* app) {
    app->add_option("--kernel", shape, "gaussian or step")->check(CLI::IsMember({"gaussian", "step"}));
    app->add_option("--dc", dc, "Fixed kernel cutoff for every dataset")->check(CLI::PositiveNumber);
    app->add_option("--nn-multiplier", policy.nn_multiplier, "d_c as a multiple of the mean nn distance")
        ->check(CLI::PositiveNumber);
    app->add_option("--nn-reference", policy.reference_points,
                    "Points in the reference subsample for the nn distance; 0 measures nn over the whole dataset");
    app->add_option("--nn-fraction", policy.subsample_fraction, "Subsample fraction used with --nn-reference 0")
        ->check(CLI::Range(0.0, 1.0));
  }
  KernelPolicy resolved() const {
    KernelPolicy p = policy;
    p.shape = Kernel::make(shape, 1.0).shape();
    p.fixed_cutoff = dc;
    return p;
  }
};

struct ThresholdFlags {
  Thresholds t;
  void add(CLI::App* app) {
    app->add_option("--rho-c", t.rho_c, "Density threshold rho_c")->required();
    app->add_option("--delta-c", t.delta_c, "Separation threshold delta_c")->required();
  }
};

struct FamilyFlags {
  std::string family = "uniform";
  std::size_t d = 2;
  std::size_t clusters = 10;
  double box = 100.0;
  double radius = 1.0;
  double covariance_scale = 4.0;
  bool identity = false;

  void add(CLI::App* app, std::size_t default_d) {
    d = default_d;
    app->add_option("--family", family, "uniform or gaussian")->check(CLI::IsMember({"uniform", "gaussian"}));
    app->add_option("--d", d, "Dimension")->check(CLI::PositiveNumber);
    app->add_option("--k", clusters, "Gaussian mixture components")->check(CLI::PositiveNumber);
    app->add_option("--box", box, "Side of the box holding mixture centres")->check(CLI::PositiveNumber);
    app->add_option("--radius", radius, "Uniform ball radius")->check(CLI::PositiveNumber);
    app->add_option("--covariance-scale", covariance_scale, "Mixture covariance scale")->check(CLI::PositiveNumber);
    app->add_flag("--identity-covariance", identity, "Mixture components with identity covariance");
  }
  FamilySpec spec() const {
    FamilySpec s = FamilySpec::parse(family);
    s.radius = radius;
    s.mixture.clusters = clusters;
    s.mixture.box = box;
    s.mixture.covariance_scale = covariance_scale;
    s.mixture.identity_covariance = identity;
    return s;
  }
};

std::vector<std::size_t> power_grid(std::size_t lo, std::size_t hi) {
  if (lo < 2 || hi < lo) throw UsageError("grid bounds must satisfy 2 <= n-min <= n-max");
  std::vector<std::size_t> grid;
  for (std::size_t n = lo; n <= hi; n *= 2) grid.push_back(n);
  return grid;
}

struct GridFlags {
  std::vector<std::size_t> grid;
  std::size_t lo;
  std::size_t hi;
  GridFlags(std::size_t lo_, std::size_t hi_) : lo(lo_), hi(hi_) {}
  void add(CLI::App* app) {
    app->add_option("--n-grid", grid, "Explicit comma-separated n values")->delimiter(',');
    app->add_option("--n-min", lo, "Smallest n of the doubling grid");
    app->add_option("--n-max", hi, "Largest n of the doubling grid");
  }
  std::vector<std::size_t> values() const { return grid.empty() ? power_grid(lo, hi) : grid; }
};

void check_index(Index i, std::size_t n, const char* name) {
  if (i >= n)
    throw UsageError(std::string("--") + name + " " + std::to_string(i) + " is out of range for n = " +
                     std::to_string(n));
}

json optional_index(const std::optional<Index>& v) { return v ? json(*v) : json(nullptr); }

json fit_json(const std::string& family, std::size_t d, const FitResult& fit) {
  return json::parse(fit_to_json(family, d, fit));
}

// Appends to a file as results arrive so that a failed run keeps what it has.
class StreamingFile {
 public:
  explicit StreamingFile(const std::string& path) : path_(path), out_(path, std::ios::trunc) {
    if (!out_) throw std::runtime_error("cannot write '" + path + "'");
  }
  void write(const std::string& text) {
    out_ << text;
    out_.flush();
    if (!out_) throw std::runtime_error("write to '" + path_ + "' failed");
  }

 private:
  std::string path_;
  std::ofstream out_;
};

// ---------------------------------------------------------------------------
// Subcommands.

void cmd_generate(const FamilyFlags& f, std::size_t n, std::uint64_t seed, const std::string& out) {
  save_dataset(out, f.spec().generate(n, f.d, seed));
}

void cmd_cluster(const InputFlags& in, const KernelFlags& k, const ThresholdFlags& th, const std::string& out,
                 std::string rho_delta_path) {
  th.t.validate();
  const Dataset data = in.load();
  DistanceOracle oracle(data, true);
  const auto forest = build_forest(oracle, k.kernel());
  const auto assignment = assign_clusters(forest, th.t);
  write_file(out, forest_to_json(forest, assignment));
  if (rho_delta_path.empty())
    rho_delta_path = (std::filesystem::path(out).parent_path() / "rho_delta.csv").string();
  write_file(rho_delta_path, rho_delta_csv(forest));
  const auto heights = tree_heights(forest);
  std::cout << "n: " << data.size() << "\n"
            << "classical_queries: " << oracle.ledger().classical_queries() << "\n"
            << "clusters: " << assignment.cluster_count() << "\n"
            << "outliers: " << assignment.outliers.size() << "\n"
            << "max_height: " << heights.max_height << "\n";
}

void cmd_decide(const InputFlags& in, const KernelFlags& k, const ThresholdFlags& th, Index i, Index j) {
  th.t.validate();
  const Dataset data = in.load();
  check_index(i, data.size(), "i");
  check_index(j, data.size(), "j");
  DistanceOracle oracle(data, true);
  const auto r = decide_same_cluster(oracle, k.kernel(), th.t, i, j);
  json out;
  out["same_cluster"] = r.same_cluster;
  out["root_i"] = r.root_i;
  out["root_j"] = r.root_j;
  out["i_outlier"] = r.i_outlier;
  out["j_outlier"] = r.j_outlier;
  out["classical_queries"] = r.classical_queries;
  std::cout << out.dump() << "\n";
}

void cmd_qdecide(const InputFlags& in, const KernelFlags& k, const ThresholdFlags& th, Index i, Index j,
                 double epsilon, std::size_t repeats, std::uint64_t seed, unsigned threads) {
  th.t.validate();
  const Dataset data = in.load();
  check_index(i, data.size(), "i");
  check_index(j, data.size(), "j");
  const Kernel kernel = k.kernel();
  DistanceOracle oracle(data, true);
  const auto classical = decide_same_cluster(oracle, kernel, th.t, i, j);

  // One run with a visible trace, then the repeated benchmark.
  QmfConfig config;
  config.epsilon = epsilon;
  config.validate();
  DistanceOracle qoracle(data);
  Rng rng = make_rng(seed, {i, j});
  const auto first = quantum_decide(qoracle, kernel, th.t, i, j, config, rng);
  const auto bench = decision_benchmark(data, {{i, j}}, th.t, kernel, epsilon, repeats, seed, threads);
  const auto& row = bench.rows.front();

  json out;
  out["classical"] = {{"same_cluster", classical.same_cluster},
                      {"root_i", classical.root_i},
                      {"root_j", classical.root_j},
                      {"classical_queries", classical.classical_queries}};
  out["quantum"] = {{"same_cluster", first.same_cluster},
                    {"root_i", optional_index(first.root_i)},
                    {"root_j", optional_index(first.root_j)},
                    {"calls", first.calls},
                    {"grover_iterations", first.grover_iterations},
                    {"charged_queries", first.charged_queries},
                    {"repeats", repeats},
                    {"epsilon", epsilon},
                    {"agreement_rate", row.agreement_rate},
                    {"mean_charged_queries", row.quantum_mean_queries},
                    {"mean_calls", row.quantum_mean_calls}};
  out["seed"] = seed;
  std::cout << out.dump() << "\n";
}

void cmd_heights(const FamilyFlags& f, const InputFlags& in, const PolicyFlags& pf, const GridFlags& grid,
                 std::size_t runs, std::uint64_t seed, unsigned threads, const std::string& out,
                 const std::string& long_out, const std::string& fit_out) {
  HeightScalingOptions opt;
  opt.family = in.path.empty() ? f.spec() : FamilySpec::subsample(in.load());
  opt.d = f.d;
  opt.n_grid = grid.values();
  opt.runs = runs;
  opt.kernel = pf.resolved();
  opt.seed = seed;
  opt.threads = threads;
  StreamingFile report(out);
  report.write(height_report_csv_header());
  opt.on_entry = [&](const HeightEntry& e) {
    report.write(height_report_csv_row(e));
    std::cerr << "n=" << e.n << " mean_H=" << format_double(e.mean_height) << "\n";
  };
  const auto result = height_scaling(opt);
  if (!long_out.empty()) write_file(long_out, height_long_csv(result));
  std::cerr << "kernel: " << result.kernel << "\n";
  if (result.fit) {
    const std::size_t d = result.entries.front().d;
    const auto text = fit_to_json(result.entries.front().family, d, *result.fit);
    if (!fit_out.empty()) write_file(fit_out, text);
    std::cout << text;
  }
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, delim);) out.push_back(cell);
  return out;
}

void cmd_fit(const std::string& input, const std::string& x_col, const std::string& y_col, std::string family,
             std::optional<std::size_t> d, const std::string& out) {
  std::istringstream text(read_file(input));
  std::string line;
  if (!std::getline(text, line)) throw std::runtime_error("'" + input + "' is empty");
  const auto header = split(line, ',');
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t c = 0; c < header.size(); ++c)
      if (header[c] == name) return c;
    return std::nullopt;
  };
  const auto xc = column(x_col);
  const auto yc = column(y_col);
  if (!xc || !yc) throw UsageError("'" + input + "' lacks a '" + (xc ? y_col : x_col) + "' column");
  const auto fc = column("family");
  const auto dc = column("d");
  std::vector<std::pair<double, double>> points;
  std::size_t line_no = 1;
  while (std::getline(text, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size())
      throw std::runtime_error(input + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " fields");
    points.emplace_back(std::stod(cells[*xc]), std::stod(cells[*yc]));
    if (family.empty() && fc) family = cells[*fc];
    if (!d && dc) d = std::stoul(cells[*dc]);
  }
  const auto text_out = fit_to_json(family.empty() ? "unknown" : family, d.value_or(0), fit_power_law(points));
  if (!out.empty()) write_file(out, text_out);
  std::cout << text_out;
}

void cmd_qbench_nh(const FamilyFlags& f, const PolicyFlags& pf, const GridFlags& grid, std::size_t runs,
                   double epsilon, std::uint64_t seed, unsigned threads, const std::string& out,
                   const std::string& fit_out) {
  QmfBenchOptions opt;
  opt.family = f.spec();
  opt.d = f.d;
  opt.n_grid = grid.values();
  opt.runs = runs;
  opt.kernel = pf.resolved();
  opt.config.epsilon = epsilon;
  opt.config.validate();
  opt.seed = seed;
  opt.threads = threads;
  std::optional<StreamingFile> file;
  if (!out.empty()) file.emplace(out);
  // Runs arrive per grid point, in run order, once that point is done.
  opt.on_run = [&](const QmfBenchRun& run) {
    if (file) file->write(qmf_run_to_json(run) + "\n");
  };
  const auto report = qmf_scaling(opt);
  json summary;
  summary["family"] = f.family;
  summary["d"] = f.d;
  summary["epsilon"] = epsilon;
  summary["entries"] = json::array();
  for (const auto& e : report.entries)
    summary["entries"].push_back({{"n", e.n},
                                  {"mean_charged_queries", e.mean_charged_queries},
                                  {"mean_grover_iterations", e.mean_grover_iterations},
                                  {"success_rate", e.success_rate}});
  if (report.fit) {
    summary["fit"] = fit_json(f.family, f.d, *report.fit);
    if (!fit_out.empty()) write_file(fit_out, fit_to_json(f.family, f.d, *report.fit));
  }
  std::cout << summary.dump() << "\n";
}

void cmd_qbench_decision(const FamilyFlags& f, const PolicyFlags& pf, const GridFlags& grid,
                         const ThresholdFlags& th, std::size_t pairs, std::size_t repeats, double epsilon,
                         std::uint64_t seed, unsigned threads, const std::string& out) {
  th.t.validate();
  DecisionScalingOptions opt;
  opt.family = f.spec();
  opt.d = f.d;
  opt.n_grid = grid.values();
  opt.pairs = pairs;
  opt.repeats = repeats;
  opt.thresholds = th.t;
  opt.kernel = pf.resolved();
  opt.epsilon = epsilon;
  opt.seed = seed;
  opt.threads = threads;
  const auto report = decision_scaling(opt);
  if (!out.empty()) write_file(out, decision_benchmark_csv(report.per_n));
  json summary;
  summary["entries"] = json::array();
  for (const auto& b : report.per_n)
    summary["entries"].push_back({{"n", b.n},
                                  {"mean_classical_queries", b.mean_classical_queries},
                                  {"mean_quantum_queries", b.mean_quantum_queries},
                                  {"ratio", b.ratio()},
                                  {"agreement_rate", b.agreement_rate}});
  summary["crossover_n"] = report.crossover_n ? json(*report.crossover_n) : json(nullptr);
  std::cout << summary.dump() << "\n";
}

void cmd_toy(const std::string& fixture_path, std::size_t runs, std::uint64_t seed, const std::string& out) {
  const ToyFixture fx = fixture_path.empty() ? default_toy_fixture() : load_toy_fixture(fixture_path);
  Rng rng(seed);
  const auto stats = toy_experiment(fx, runs, rng);
  const auto csv = toy_stats_csv(stats);
  if (!out.empty()) write_file(out, csv);
  std::cout << csv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Density peak clustering with classical and simulated quantum query models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qdpc 0.1.0");

  unsigned threads = default_thread_count();
  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", threads, "Worker threads (default: $QDPC_THREADS or 1)")
        ->check(CLI::PositiveNumber);
  };

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic dataset");
  FamilyFlags gen_family;
  gen_family.add(gen, 2);
  std::size_t gen_n = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--n", gen_n, "Number of points")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "Random seed")->required();
  gen->add_option("--out", gen_out, "Output file (.csv for CSV, otherwise JSON)")->required();

  // cluster
  auto* cl = app.add_subcommand("cluster", "Full density peak clustering");
  InputFlags cl_in;
  KernelFlags cl_kernel;
  ThresholdFlags cl_th;
  std::string cl_out;
  std::string cl_rho_delta;
  cl_in.add(cl, true);
  cl_kernel.add(cl);
  cl_th.add(cl);
  cl->add_option("--out", cl_out, "Forest and labels JSON")->required();
  cl->add_option("--rho-delta", cl_rho_delta, "Decision-graph CSV (default: rho_delta.csv next to --out)");

  // decide / qdecide
  auto* de = app.add_subcommand("decide", "Are elements i and j in the same cluster? (classical)");
  InputFlags de_in;
  KernelFlags de_kernel;
  ThresholdFlags de_th;
  Index de_i = 0;
  Index de_j = 0;
  de_in.add(de, true);
  de_kernel.add(de);
  de_th.add(de);
  de->add_option("--i", de_i, "First element")->required();
  de->add_option("--j", de_j, "Second element")->required();

  auto* qd = app.add_subcommand("qdecide", "Decision clustering with simulated quantum nearest-highers");
  InputFlags qd_in;
  KernelFlags qd_kernel;
  ThresholdFlags qd_th;
  Index qd_i = 0;
  Index qd_j = 0;
  double qd_eps = 0.1;
  std::size_t qd_repeats = 100;
  std::uint64_t qd_seed = 0;
  qd_in.add(qd, true);
  qd_kernel.add(qd);
  qd_th.add(qd);
  qd->add_option("--i", qd_i, "First element")->required();
  qd->add_option("--j", qd_j, "Second element")->required();
  qd->add_option("--epsilon", qd_eps, "Overall failure probability")->check(CLI::Range(0.0, 1.0));
  qd->add_option("--repeats", qd_repeats, "Seeded repetitions for the agreement rate")->check(CLI::PositiveNumber);
  qd->add_option("--seed", qd_seed, "Random seed")->required();
  add_threads(qd);

  // heights
  auto* he = app.add_subcommand("heights", "Nearest-higher tree height scaling");
  FamilyFlags he_family;
  InputFlags he_in;
  PolicyFlags he_policy;
  GridFlags he_grid(256, 8192);
  std::size_t he_runs = 5;
  std::uint64_t he_seed = 0;
  std::string he_out;
  std::string he_long;
  std::string he_fit;
  he_family.add(he, 2);
  he_in.add(he, false);
  he_policy.add(he);
  he_grid.add(he);
  he->add_option("--runs", he_runs, "Datasets per grid point")->check(CLI::PositiveNumber);
  he->add_option("--seed", he_seed, "Random seed")->required();
  he->add_option("--out", he_out, "Report CSV (family,d,n,run_count,mean_H)")->required();
  he->add_option("--long", he_long, "Per-run CSV (family,d,n,run,H)");
  he->add_option("--fit", he_fit, "Fit JSON");
  add_threads(he);

  // fit
  auto* fi = app.add_subcommand("fit", "Power-law fit of a CSV column against n");
  std::string fi_in;
  std::string fi_x = "n";
  std::string fi_y = "mean_H";
  std::string fi_family;
  std::optional<std::size_t> fi_d;
  std::string fi_out;
  fi->add_option("--input", fi_in, "CSV with a header row")->required();
  fi->add_option("--x", fi_x, "Column holding n");
  fi->add_option("--y", fi_y, "Column holding the measured value");
  fi->add_option("--family", fi_family, "Family label (default: from the CSV)");
  fi->add_option("--d", fi_d, "Dimension label (default: from the CSV)");
  fi->add_option("--out", fi_out, "Fit JSON");

  // qbench
  auto* qb = app.add_subcommand("qbench", "Quantum query benchmarks");
  std::string qb_mode = "nh";
  FamilyFlags qb_family;
  PolicyFlags qb_policy;
  GridFlags qb_grid(64, 4096);
  ThresholdFlags qb_th;  // filled from the optional flags below
  std::optional<double> qb_rho_c;
  std::optional<double> qb_delta_c;
  std::size_t qb_runs = 200;
  std::size_t qb_pairs = 4;
  std::size_t qb_repeats = 5;
  double qb_eps = 0.1;
  std::uint64_t qb_seed = 0;
  std::string qb_out;
  std::string qb_fit;
  qb->add_option("--mode", qb_mode, "nh: nearest-higher cost vs n; decision: quantum vs classical decision")
      ->check(CLI::IsMember({"nh", "decision"}));
  qb_family.add(qb, 3);
  qb_policy.add(qb);
  qb_grid.add(qb);
  qb->add_option("--runs", qb_runs, "Runs per grid point (nh)")->check(CLI::PositiveNumber);
  qb->add_option("--pairs", qb_pairs, "Random pairs per grid point (decision)")->check(CLI::PositiveNumber);
  qb->add_option("--repeats", qb_repeats, "Quantum repetitions per pair (decision)")->check(CLI::PositiveNumber);
  qb->add_option("--rho-c", qb_rho_c, "Density threshold (decision)");
  qb->add_option("--delta-c", qb_delta_c, "Separation threshold (decision)");
  qb->add_option("--epsilon", qb_eps, "Failure probability")->check(CLI::Range(0.0, 1.0));
  qb->add_option("--seed", qb_seed, "Random seed")->required();
  qb->add_option("--out", qb_out, "Per-run JSON lines (nh) or per-pair CSV (decision)");
  qb->add_option("--fit", qb_fit, "Fit JSON (nh)");
  add_threads(qb);

  // toy
  auto* toy = app.add_subcommand("toy", "Eight-element one-round Grover experiment");
  std::string toy_fixture;
  std::size_t toy_runs = 1000;
  std::uint64_t toy_seed = 0;
  std::string toy_out;
  toy->add_option("--fixture", toy_fixture, "Fixture JSON (default: built-in)");
  toy->add_option("--runs", toy_runs, "Runs per element and strategy")->check(CLI::PositiveNumber);
  toy->add_option("--seed", toy_seed, "Random seed")->required();
  toy->add_option("--out", toy_out, "CSV (element,quantum_mean,classical_mean,runs)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      cmd_generate(gen_family, gen_n, gen_seed, gen_out);
    } else if (*cl) {
      cmd_cluster(cl_in, cl_kernel, cl_th, cl_out, cl_rho_delta);
    } else if (*de) {
      cmd_decide(de_in, de_kernel, de_th, de_i, de_j);
    } else if (*qd) {
      cmd_qdecide(qd_in, qd_kernel, qd_th, qd_i, qd_j, qd_eps, qd_repeats, qd_seed, threads);
    } else if (*he) {
      cmd_heights(he_family, he_in, he_policy, he_grid, he_runs, he_seed, threads, he_out, he_long, he_fit);
    } else if (*fi) {
      cmd_fit(fi_in, fi_x, fi_y, fi_family, fi_d, fi_out);
    } else if (*qb) {
      if (qb_mode == "nh") {
        cmd_qbench_nh(qb_family, qb_policy, qb_grid, qb_runs, qb_eps, qb_seed, threads, qb_out, qb_fit);
      } else {
        if (!qb_rho_c || !qb_delta_c) throw UsageError("--mode decision requires --rho-c and --delta-c");
        qb_th.t = Thresholds{*qb_rho_c, *qb_delta_c};
        cmd_qbench_decision(qb_family, qb_policy, qb_grid, qb_th, qb_pairs, qb_repeats, qb_eps, qb_seed, threads,
                            qb_out);
      }
    } else if (*toy) {
      cmd_toy(toy_fixture, toy_runs, toy_seed, toy_out);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
