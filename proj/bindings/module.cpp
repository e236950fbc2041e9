#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <span>
#include <vector>

#include "tdmr/channel.hpp"
#include "tdmr/config.hpp"
#include "tdmr/detector.hpp"
#include "tdmr/grid.hpp"
#include "tdmr/infotheory.hpp"

namespace py = pybind11;
using namespace tdmr;

namespace {

BipolarPattern to_pattern(const std::vector<int>& values) { return BipolarPattern(values); }

std::vector<int> from_pattern(const BipolarPattern& p) {
    std::vector<int> v(static_cast<std::size_t>(p.size()));
    for (int i = 0; i < p.size(); ++i) v[static_cast<std::size_t>(i)] = p[i];
    return v;
}

std::span<const double> as_span(const Eigen::VectorXd& y) { return {y.data(), static_cast<std::size_t>(y.size())}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Simplified TDMR channel model: signal-dependent noise, exact densities, "
              "symmetric mutual information and ML detection.";
    m.attr("__version__") = kVersion;
    m.attr("MAX_EXHAUSTIVE_CELLS") = kMaxExhaustiveCells;

    py::class_<GridTopology>(m, "GridTopology")
        .def_readonly("rows", &GridTopology::rows)
        .def_readonly("cols", &GridTopology::cols)
        .def_readonly("n", &GridTopology::n)
        .def("neighbors", [](const GridTopology& g, int i) { return g.neighbors.at(static_cast<std::size_t>(i)); })
        .def("edges",
             [](const GridTopology& g) {
                 std::vector<std::pair<int, int>> out;
                 out.reserve(g.edges.size());
                 for (const auto& e : g.edges) out.emplace_back(e.a, e.b);
                 return out;
             })
        .def("__repr__", [](const GridTopology& g) {
            return "GridTopology(" + std::to_string(g.rows) + "x" + std::to_string(g.cols) + ")";
        });

    m.def("build_grid", &build_grid, py::arg("rows"), py::arg("cols"), py::arg("max_cells") = 0);

    py::class_<ChannelParams>(m, "ChannelParams")
        .def(py::init([](double alpha, double beta, double sigma_s, double sigma_j) {
                 return ChannelParams{alpha, beta, sigma_s, sigma_j};
             }),
             py::arg("alpha") = 1.5, py::arg("beta") = 0.5, py::arg("sigma_s") = 0.0,
             py::arg("sigma_j") = 0.0)
        .def_readwrite("alpha", &ChannelParams::alpha)
        .def_readwrite("beta", &ChannelParams::beta)
        .def_readwrite("sigma_s", &ChannelParams::sigma_s)
        .def_readwrite("sigma_j", &ChannelParams::sigma_j);

    m.def("interference_matrix", &interference_matrix, py::arg("topology"), py::arg("alpha"),
          py::arg("beta"));

    m.def(
        "mean_readback",
        [](const GridTopology& t, const ChannelParams& p, const std::vector<int>& x) {
            return mean_readback(t, p, to_pattern(x));
        },
        py::arg("topology"), py::arg("params"), py::arg("x"));

    m.def(
        "covariance_matrix",
        [](const GridTopology& t, const ChannelParams& p, const std::vector<int>& x) {
            return covariance_matrix(t, p, to_pattern(x));
        },
        py::arg("topology"), py::arg("params"), py::arg("x"));

    m.def(
        "sample_readback",
        [](const GridTopology& t, const ChannelParams& p, const std::vector<int>& x,
           std::uint64_t seed, std::int64_t trials) {
            const BipolarPattern pattern = to_pattern(x);
            Eigen::MatrixXd out(trials, t.n);
            for (std::int64_t row = 0; row < trials; ++row) {
                RngStream rng = RngStream::for_trial(seed, static_cast<std::uint64_t>(row));
                out.row(row) = sample_readback(rng, t, p, pattern).transpose();
            }
            return out;
        },
        py::arg("topology"), py::arg("params"), py::arg("x"), py::arg("seed"),
        py::arg("trials") = 1);

    py::class_<PatternTable>(m, "PatternTable")
        .def(py::init<const GridTopology&, const ChannelParams&>(), py::arg("topology"),
             py::arg("params"))
        .def_property_readonly("n", &PatternTable::n)
        .def("__len__", &PatternTable::size)
        .def("mirror", &PatternTable::mirror, py::arg("rank"))
        .def("pattern",
             [](const PatternTable& t, std::size_t k) { return from_pattern(t.pattern(k)); },
             py::arg("rank"))
        .def("mean",
             [](const PatternTable& t, std::size_t k) { return Eigen::VectorXd(t.mean(k)); },
             py::arg("rank"))
        .def("log_det", &PatternTable::log_det, py::arg("rank"))
        .def("factor", &PatternTable::factor, py::arg("rank"))
        .def(
            "log_conditional_density",
            [](const PatternTable& t, const Eigen::VectorXd& y, std::size_t k) {
                return t.log_conditional_density(as_span(y), k);
            },
            py::arg("y"), py::arg("rank"))
        .def(
            "mixture_log_density",
            [](const PatternTable& t, const Eigen::VectorXd& y) {
                return t.mixture_log_density(as_span(y));
            },
            py::arg("y"));

    m.def("conditional_entropy_bits", &conditional_entropy_bits, py::arg("table"));

    py::class_<MIEstimate>(m, "MIEstimate")
        .def_readonly("value_bits", &MIEstimate::value_bits)
        .def_readonly("h_y_bits", &MIEstimate::h_y_bits)
        .def_readonly("h_y_given_x_bits", &MIEstimate::h_y_given_x_bits)
        .def_readonly("std_error_bits", &MIEstimate::std_error_bits)
        .def_readonly("t_max", &MIEstimate::t_max)
        .def_readonly("seed", &MIEstimate::seed)
        .def("__repr__", [](const MIEstimate& e) {
            return "MIEstimate(value_bits=" + std::to_string(e.value_bits) +
                   ", std_error_bits=" + std::to_string(e.std_error_bits) + ")";
        });

    m.def("mc_symmetric_mi", &mc_symmetric_mi, py::arg("topology"), py::arg("params"),
          py::arg("t_max"), py::arg("seed"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());

    py::class_<QuadratureSpec> quad_spec(m, "QuadratureSpec");
    py::enum_<QuadratureSpec::Rule>(quad_spec, "Rule")
        .value("TRAPEZOID", QuadratureSpec::Rule::kTrapezoid)
        .value("SIMPSON", QuadratureSpec::Rule::kSimpson);
    quad_spec.def_static("defaults_for", &QuadratureSpec::defaults_for, py::arg("table"))
        .def_readwrite("lower", &QuadratureSpec::lower)
        .def_readwrite("upper", &QuadratureSpec::upper)
        .def_readwrite("step", &QuadratureSpec::step)
        .def_readwrite("rule", &QuadratureSpec::rule)
        .def("halved", &QuadratureSpec::halved);

    py::class_<MixtureQuadrature>(m, "MixtureQuadrature")
        .def_readonly("mass", &MixtureQuadrature::mass)
        .def_readonly("h_y_bits", &MixtureQuadrature::h_y_bits);

    m.def("quad_mixture_stats", &quad_mixture_stats, py::arg("table"), py::arg("spec"));
    m.def(
        "quad_symmetric_mi",
        [](const PatternTable& table, const QuadratureSpec* spec) {
            return spec ? quad_symmetric_mi(table, *spec) : quad_symmetric_mi(table);
        },
        py::arg("table"), py::arg("spec") = nullptr);

    m.def(
        "distance",
        [](const Eigen::VectorXd& y, const PatternTable& t, std::size_t k) {
            return distance(as_span(y), t, k);
        },
        py::arg("y"), py::arg("table"), py::arg("rank"));
    m.def(
        "ml_detect_index",
        [](const Eigen::VectorXd& y, const PatternTable& t) {
            DensityScratch scratch = t.make_scratch();
            return ml_detect_index(as_span(y), t, scratch);
        },
        py::arg("y"), py::arg("table"));
    m.def(
        "ml_detect",
        [](const Eigen::VectorXd& y, const PatternTable& t) {
            return from_pattern(ml_detect(as_span(y), t));
        },
        py::arg("y"), py::arg("table"));

    py::class_<DecisionRaster>(m, "DecisionRaster")
        .def_readonly("y_min", &DecisionRaster::y_min)
        .def_readonly("y_max", &DecisionRaster::y_max)
        .def_readonly("resolution", &DecisionRaster::resolution)
        .def("point", &DecisionRaster::point, py::arg("k"))
        .def("label", &DecisionRaster::label, py::arg("i"), py::arg("j"))
        .def_property_readonly("labels", [](const DecisionRaster& r) {
            py::array_t<std::uint32_t> out({r.resolution, r.resolution});
            auto view = out.mutable_unchecked<2>();
            std::size_t idx = 0;
            for (int i = 0; i < r.resolution; ++i) {
                for (int j = 0; j < r.resolution; ++j) view(i, j) = r.labels[idx++];
            }
            return out;
        });

    m.def("decision_raster", &decision_raster, py::arg("table"), py::arg("y_min"),
          py::arg("y_max"), py::arg("resolution"));

    py::class_<SweepPoint>(m, "SweepPoint")
        .def_readonly("sigma_s", &SweepPoint::sigma_s)
        .def_readonly("sigma_j", &SweepPoint::sigma_j)
        .def_readonly("estimate", &SweepPoint::estimate);

    m.def("sweep", &sweep, py::arg("topology"), py::arg("alpha"), py::arg("beta"),
          py::arg("sigma_s_list"), py::arg("sigma_j_list"), py::arg("t_max"), py::arg("seed"),
          py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());
}
