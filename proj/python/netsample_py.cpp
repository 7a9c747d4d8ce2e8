#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "netsample/errors.hpp"
#include "netsample/graph.hpp"
#include "netsample/sbm.hpp"
#include "netsample/spectral.hpp"
#include "netsample/tree.hpp"
#include "netsample/variance.hpp"
#include "netsample/walk.hpp"

namespace py = pybind11;
using namespace netsample;

namespace {

Graph graph_from_edges(std::size_t n, const std::vector<std::tuple<NodeId, NodeId, double>>& edges) {
  std::vector<WeightedEdge> list;
  list.reserve(edges.size());
  for (const auto& [u, v, w] : edges) list.push_back({u, v, w});
  return Graph::from_edges(n, list);
}

py::dict report_dict(const VarianceReport& r) {
  py::dict d;
  d["n"] = r.n;
  d["population"] = r.population;
  d["lambda2"] = r.lambda2;
  d["g_lambda2"] = r.g_lambda2;
  d["var_rds"] = r.var_rds;
  d["sigma2"] = r.sigma2;
  d["var_iid"] = r.var_iid;
  d["design_effect"] = r.design_effect;
  d["rho2"] = r.rho2;
  d["de_lower"] = r.de_lower ? py::cast(*r.de_lower) : py::none();
  d["de_upper"] = r.de_upper ? py::cast(*r.de_upper) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(netsample, m) {
  m.doc() = "Referral-tree sampling: exact variance, spectra, and simulation";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<Graph>(m, "Graph")
      .def_static("from_edges", &graph_from_edges, py::arg("node_count"), py::arg("edges"))
      .def_static("parse", &parse_edge_list, py::arg("text"))
      .def_static("load", [](const std::string& path) { return load_edge_list(path); }, py::arg("path"))
      .def_property_readonly("node_count", &Graph::node_count)
      .def_property_readonly("edge_count", &Graph::edge_count)
      .def("degree", &Graph::degree)
      .def_property_readonly("labels", &Graph::labels);
  m.def("prepare_network", &prepare_network, py::arg("graph"), py::arg("k") = 2);

  py::class_<ReferralForest>(m, "ReferralForest")
      .def_static("from_parents", [](std::vector<std::int64_t> p) { return ReferralForest::from_parents(std::move(p)); })
      .def_static("parse", &parse_tree)
      .def_property_readonly("size", &ReferralForest::size)
      .def_property_readonly("height", &ReferralForest::height)
      .def_property_readonly("parents", &ReferralForest::parents)
      .def("bfs_prefix", &ReferralForest::bfs_prefix);
  m.def("m_tree", [](std::uint32_t mm, std::uint32_t h) { return gen_m_tree(mm, h); }, py::arg("m"), py::arg("height"));
  m.def(
      "gw_tree",
      [](const std::string& offspring, std::size_t min_size, std::uint64_t seed) {
        return gen_gw_tree(OffspringSpec::parse(offspring), GwStop::min_size(min_size), seed).tree;
      },
      py::arg("offspring"), py::arg("min_size"), py::arg("seed"));

  py::class_<DistanceSpectrum>(m, "DistanceSpectrum")
      .def_readonly("counts", &DistanceSpectrum::counts)
      .def_readonly("infinite_pairs", &DistanceSpectrum::infinite_pairs)
      .def_readonly("n", &DistanceSpectrum::n);
  m.def("distance_spectrum", &distance_spectrum);
  m.def("g_eval", &g_eval, py::arg("spectrum"), py::arg("z"));
  m.def(
      "threshold",
      [](double mm, double lambda2) {
        const auto t = threshold_params(mm, lambda2);
        py::dict d;
        d["beta"] = t.beta;
        d["alpha"] = t.alpha;
        d["regime"] = to_string(t.regime);
        d["exponent"] = t.predicted_exponent;
        return d;
      },
      py::arg("m"), py::arg("lambda2"));

  m.def(
      "two_block_sbm",
      [](std::size_t n, double degree, double lambda2, std::uint64_t seed) {
        auto s = sample_sbm(two_block_spec(n, two_block_params(n, degree, lambda2)), seed);
        return py::make_tuple(std::move(s.graph), s.blocks);
      },
      py::arg("node_count"), py::arg("degree"), py::arg("lambda2"), py::arg("seed"));

  py::class_<SpectralKernel>(m, "Spectrum")
      .def_property_readonly("eigenvalues", [](const SpectralKernel& s) { return s.eigenvalues; })
      .def_property_readonly("eigenfunctions", [](const SpectralKernel& s) { return s.eigenfunctions; })
      .def_property_readonly("stationary", [](const SpectralKernel& s) { return s.kernel.stationary; })
      .def_property_readonly("transition", [](const SpectralKernel& s) { return s.kernel.transition; });
  m.def(
      "srw_spectrum",
      [](const Graph& g, bool allow_periodic) {
        SpectralTolerances tol;
        tol.allow_periodic = allow_periodic;
        return spectral_decompose(srw_kernel(g), tol);
      },
      py::arg("graph"), py::arg("allow_periodic") = false);
  m.def(
      "kernel_spectrum",
      [](const Eigen::MatrixXd& p, bool allow_periodic) {
        SpectralTolerances tol;
        tol.allow_periodic = allow_periodic;
        return spectral_decompose(custom_kernel(p), tol);
      },
      py::arg("transition"), py::arg("allow_periodic") = false);

  m.def(
      "variance_exact",
      [](const SpectralKernel& s, const std::vector<double>& y, const ReferralForest& t) {
        return report_dict(variance_exact(s, y, distance_spectrum(t)));
      },
      py::arg("spectrum"), py::arg("y"), py::arg("tree"));

  m.def(
      "mc_design_effect",
      [](const Graph& g, const std::vector<double>& y, const std::vector<std::size_t>& n_grid,
         std::size_t replicates, std::uint64_t seed, const std::string& mode, std::size_t budget,
         std::size_t gw_target, const std::string& offspring, bool quarter_variance, unsigned threads) {
        SimConfig cfg;
        cfg.replicates = replicates;
        cfg.seed = seed;
        cfg.mode = parse_sample_mode(mode);
        cfg.sample_budget = budget;
        cfg.gw_target_size = gw_target;
        cfg.offspring = OffspringSpec::parse(offspring);
        cfg.quarter_variance = quarter_variance;
        cfg.threads = threads;
        py::list rows;
        for (const auto& r : mc_design_effect(g, y, cfg, n_grid)) {
          py::dict d;
          d["n"] = r.n;
          d["mode"] = to_string(r.mode);
          d["de"] = r.de;
          d["de_se"] = r.de_se;
          d["mean_rn"] = r.mean_rn;
          d["rn_se"] = r.rn_se;
          rows.append(d);
        }
        return rows;
      },
      py::arg("graph"), py::arg("y"), py::arg("n_grid"), py::arg("replicates") = 1000, py::arg("seed") = 1,
      py::arg("mode") = "with", py::arg("budget") = 500, py::arg("gw_target") = 2000,
      py::arg("offspring") = "binom:1,2,0.5", py::arg("quarter_variance") = false, py::arg("threads") = 0);
}
