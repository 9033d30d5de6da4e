#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qdpc/decision.hpp"
#include "qdpc/qmf.hpp"
#include "qdpc/scaling.hpp"
#include "qdpc/statevector.hpp"
#include "qdpc/toy.hpp"

namespace py = pybind11;
using namespace qdpc;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Dataset to_dataset(const Array& points, const std::string& metric) {
  if (points.ndim() != 2) throw std::invalid_argument("points must be a 2-D array of shape (n, d)");
  const auto n = static_cast<std::size_t>(points.shape(0));
  const auto d = static_cast<std::size_t>(points.shape(1));
  std::vector<double> coords(points.data(), points.data() + n * d);
  return Dataset(d, std::move(coords), metric_from_string(metric));
}

Array to_array(const Dataset& data) {
  Array out({data.size(), data.dim()});
  std::copy(data.coords().begin(), data.coords().end(), out.mutable_data());
  return out;
}

py::object index_or_none(const std::optional<Index>& v) { return v ? py::cast(*v) : py::none(); }

py::dict fit_dict(const FitResult& fit) {
  py::dict d;
  d["slope"] = fit.slope;
  d["intercept"] = fit.intercept;
  d["d_eff"] = fit.d_eff;
  d["r2"] = fit.r_squared;
  return d;
}

py::dict cluster(const Array& points, const std::string& kernel, double dc, double rho_c, double delta_c,
                 const std::string& metric) {
  const Dataset data = to_dataset(points, metric);
  const Thresholds t{rho_c, delta_c};
  t.validate();
  DistanceOracle oracle(data, true);
  const auto forest = build_forest(oracle, Kernel::make(kernel, dc));
  const auto assignment = assign_clusters(forest, t);
  py::list parent;
  py::list labels;
  for (Index i = 0; i < forest.size(); ++i) {
    parent.append(index_or_none(forest.parent[i]));
    labels.append(index_or_none(assignment.label[i]));
  }
  py::dict out;
  out["rho"] = forest.density.rho;
  out["delta"] = forest.delta;
  out["parent"] = parent;
  out["labels"] = labels;
  out["roots"] = assignment.roots;
  out["outliers"] = assignment.outliers;
  out["max_height"] = tree_heights(forest).max_height;
  out["classical_queries"] = oracle.ledger().classical_queries();
  return out;
}

py::dict decide(const Array& points, Index i, Index j, const std::string& kernel, double dc, double rho_c,
                double delta_c, const std::string& metric) {
  const Dataset data = to_dataset(points, metric);
  if (i >= data.size() || j >= data.size()) throw py::index_error("element index out of range");
  DistanceOracle oracle(data, true);
  const auto r = decide_same_cluster(oracle, Kernel::make(kernel, dc), Thresholds{rho_c, delta_c}, i, j);
  py::dict out;
  out["same_cluster"] = r.same_cluster;
  out["root_i"] = r.root_i;
  out["root_j"] = r.root_j;
  out["i_outlier"] = r.i_outlier;
  out["j_outlier"] = r.j_outlier;
  out["classical_queries"] = r.classical_queries;
  return out;
}

py::dict quantum_decide_py(const Array& points, Index i, Index j, const std::string& kernel, double dc,
                           double rho_c, double delta_c, double epsilon, std::uint64_t seed,
                           const std::string& metric) {
  const Dataset data = to_dataset(points, metric);
  if (i >= data.size() || j >= data.size()) throw py::index_error("element index out of range");
  QmfConfig config;
  config.epsilon = epsilon;
  config.validate();
  DistanceOracle oracle(data);
  Rng rng(seed);
  const auto r = quantum_decide(oracle, Kernel::make(kernel, dc), Thresholds{rho_c, delta_c}, i, j, config, rng);
  py::dict out;
  out["same_cluster"] = r.same_cluster;
  out["root_i"] = index_or_none(r.root_i);
  out["root_j"] = index_or_none(r.root_j);
  out["i_outlier"] = r.i_outlier;
  out["j_outlier"] = r.j_outlier;
  out["calls"] = r.calls;
  out["grover_iterations"] = r.grover_iterations;
  out["charged_queries"] = r.charged_queries;
  return out;
}

py::dict quantum_nearest_higher_py(const Array& points, Index i, const std::string& kernel, double dc,
                                   double epsilon, std::uint64_t seed, const std::string& metric) {
  const Dataset data = to_dataset(points, metric);
  if (i >= data.size()) throw py::index_error("element index out of range");
  QmfConfig config;
  config.epsilon = epsilon;
  config.validate();
  DistanceOracle oracle(data);
  Rng rng(seed);
  const auto r = quantum_nearest_higher(oracle, Kernel::make(kernel, dc), i, config, rng);
  py::dict out;
  out["parent"] = index_or_none(r.parent);
  out["delta"] = r.delta;
  out["grover_iterations"] = r.qmf.grover_iterations;
  out["charged_queries"] = r.qmf.charged_queries;
  out["quantum_queries"] = oracle.ledger().quantum_queries();
  out["success"] = r.qmf.success;
  return out;
}

py::dict qmf_minimum_py(std::vector<double> values, double epsilon, std::uint64_t seed) {
  QmfConfig config;
  config.epsilon = epsilon;
  config.validate();
  Rng rng(seed);
  const auto r = qmf_minimum(SearchProblem(std::move(values)), config, rng);
  py::dict out;
  out["argmin"] = r.argmin_candidate;
  out["grover_iterations"] = r.grover_iterations;
  out["charged_queries"] = r.charged_queries;
  out["success"] = r.success;
  out["threshold_trace"] = r.threshold_trace;
  return out;
}

py::array_t<double> grover_probabilities(int qubits, const std::vector<bool>& marks, int rounds) {
  auto state = uniform_state(qubits);
  const OracleTable table{marks};
  for (int r = 0; r < rounds; ++r) apply_grover_iteration(state, table);
  py::array_t<double> out(state.dimension());
  for (Index k = 0; k < state.dimension(); ++k) out.mutable_at(k) = state.probability(k);
  return out;
}

py::dict height_scaling_py(const std::string& family, std::size_t d, std::vector<std::size_t> n_grid,
                           std::size_t runs, std::uint64_t seed, unsigned threads, std::optional<double> dc) {
  HeightScalingOptions opt;
  opt.family = FamilySpec::parse(family);
  opt.d = d;
  opt.n_grid = std::move(n_grid);
  opt.runs = runs;
  opt.seed = seed;
  opt.threads = threads;
  opt.kernel.fixed_cutoff = dc;
  HeightScalingReport report;
  {
    py::gil_scoped_release release;
    report = height_scaling(opt);
  }
  py::list entries;
  for (const auto& e : report.entries) {
    py::dict row;
    row["n"] = e.n;
    row["mean_height"] = e.mean_height;
    row["heights"] = e.heights;
    entries.append(row);
  }
  py::dict out;
  out["entries"] = entries;
  out["fit"] = report.fit ? py::object(fit_dict(*report.fit)) : py::none();
  out["kernel"] = report.kernel;
  return out;
}

py::dict fit_power_law_py(const std::vector<double>& n, const std::vector<double>& values) {
  if (n.size() != values.size()) throw std::invalid_argument("n and values differ in length");
  std::vector<std::pair<double, double>> points;
  for (std::size_t k = 0; k < n.size(); ++k) points.emplace_back(n[k], values[k]);
  return fit_dict(fit_power_law(points));
}

py::list toy_experiment_py(std::size_t runs, std::uint64_t seed) {
  Rng rng(seed);
  const auto stats = toy_experiment(default_toy_fixture(), runs, rng);
  py::list out;
  for (const auto& e : stats.elements) {
    py::dict row;
    row["element"] = e.element;
    row["quantum_mean"] = e.quantum_mean;
    row["classical_mean"] = e.classical_mean;
    out.append(row);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Density peak clustering with classical and simulated quantum query models";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def("generate_uniform_ball",
        [](std::size_t n, std::size_t d, std::uint64_t seed, double radius) {
          return to_array(generate_uniform_ball(n, d, radius, seed));
        },
        py::arg("n"), py::arg("d"), py::arg("seed"), py::arg("radius") = 1.0);
  m.def("generate_gaussian_mixture",
        [](std::size_t n, std::size_t d, std::uint64_t seed, std::size_t clusters, double box,
           double covariance_scale, bool identity_covariance) {
          GaussianMixtureOptions opt;
          opt.clusters = clusters;
          opt.box = box;
          opt.covariance_scale = covariance_scale;
          opt.identity_covariance = identity_covariance;
          return to_array(generate_gaussian_mixture(n, d, opt, seed));
        },
        py::arg("n"), py::arg("d"), py::arg("seed"), py::arg("clusters") = 10, py::arg("box") = 100.0,
        py::arg("covariance_scale") = 4.0, py::arg("identity_covariance") = false);
  m.def("standardize", [](const Array& points) { return to_array(standardize(to_dataset(points, "euclidean"))); },
        py::arg("points"));
  m.def("pca_project",
        [](const Array& points, std::size_t k) { return to_array(pca_project(to_dataset(points, "euclidean"), k)); },
        py::arg("points"), py::arg("k"));

  m.def("cluster", &cluster, py::arg("points"), py::arg("kernel"), py::arg("dc"), py::arg("rho_c"),
        py::arg("delta_c"), py::arg("metric") = "euclidean",
        "Full clustering on a memoized oracle; returns rho, delta, parent, labels (None = noise), roots, "
        "outliers, max_height and classical_queries.");
  m.def("decide", &decide, py::arg("points"), py::arg("i"), py::arg("j"), py::arg("kernel"), py::arg("dc"),
        py::arg("rho_c"), py::arg("delta_c"), py::arg("metric") = "euclidean");
  m.def("quantum_decide", &quantum_decide_py, py::arg("points"), py::arg("i"), py::arg("j"), py::arg("kernel"),
        py::arg("dc"), py::arg("rho_c"), py::arg("delta_c"), py::arg("epsilon") = 0.1, py::arg("seed") = 0,
        py::arg("metric") = "euclidean");
  m.def("quantum_nearest_higher", &quantum_nearest_higher_py, py::arg("points"), py::arg("i"),
        py::arg("kernel"), py::arg("dc"), py::arg("epsilon") = 0.1, py::arg("seed") = 0,
        py::arg("metric") = "euclidean");
  m.def("qmf_minimum", &qmf_minimum_py, py::arg("values"), py::arg("epsilon") = 0.1, py::arg("seed") = 0);
  m.def("grover_success_probability", &grover_success_probability, py::arg("n"), py::arg("t"), py::arg("r"));
  m.def("grover_probabilities", &grover_probabilities, py::arg("qubits"), py::arg("marks"), py::arg("rounds") = 1,
        "Basis-state probabilities after the given number of Grover rounds from the uniform state.");
  m.def("height_scaling", &height_scaling_py, py::arg("family"), py::arg("d"), py::arg("n_grid"),
        py::arg("runs") = 5, py::arg("seed") = 0, py::arg("threads") = 1, py::arg("dc") = py::none());
  m.def("fit_power_law", &fit_power_law_py, py::arg("n"), py::arg("values"));
  m.def("toy_experiment", &toy_experiment_py, py::arg("runs") = 1000, py::arg("seed") = 0);
}
