#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rlab/cli_io.hpp"
#include "rlab/discriminant.hpp"
#include "rlab/errors.hpp"
#include "rlab/experiments.hpp"
#include "rlab/projection.hpp"
#include "rlab/serialize.hpp"
#include "rlab/topology.hpp"

namespace py = pybind11;
using namespace rlab;

namespace {

HomogeneousPolynomial polynomial(int n, int d, const std::vector<double>& coeffs) {
  return HomogeneousPolynomial(make_basis(n, d), coeffs);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Kostlan polynomials, discriminant distance and certified topology";

  // Translators are tried newest first, so the base class goes in first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<UncertifiedError>(m, "UncertifiedError", PyExc_RuntimeError);
  py::register_exception<GramDegeneracyError>(m, "GramDegeneracyError", PyExc_ArithmeticError);

  py::class_<HomogeneousPolynomial>(m, "Polynomial")
      .def(py::init(&polynomial), py::arg("n"), py::arg("degree"), py::arg("coeffs"))
      .def_property_readonly("n", &HomogeneousPolynomial::n)
      .def_property_readonly("degree", &HomogeneousPolynomial::degree)
      .def_property_readonly("coeffs",
                             [](const HomogeneousPolynomial& p) {
                               const auto c = p.coeffs();
                               return py::array_t<double>(static_cast<py::ssize_t>(c.size()), c.data());
                             })
      .def("norm", &HomogeneousPolynomial::norm)
      .def("__call__",
           [](const HomogeneousPolynomial& p, const std::vector<double>& x) {
             if (x.size() != static_cast<std::size_t>(p.n() + 1)) throw InvalidArgument("point has wrong length");
             return p(x);
           })
      .def("to_json", [](const HomogeneousPolynomial& p) { return to_json(p).dump(); })
      .def_static("from_json", [](const std::string& s) { return polynomial_from_json(Json::parse(s)); });

  m.def(
      "sample",
      [](int n, int d, std::uint64_t seed, std::uint64_t index) {
        return sample_gaussian(make_basis(n, d), sample_stream(seed, d, index));
      },
      py::arg("n"), py::arg("degree"), py::arg("seed") = 0, py::arg("index") = 0,
      "Kostlan sample; the same (seed, degree, index) stream the experiments use.");

  m.def(
      "distance",
      [](const HomogeneousPolynomial& p, int grid_density, bool refine) {
        py::gil_scoped_release release;
        return to_json(distance_to_discriminant(p, grid_density, refine)).dump();
      },
      py::arg("p"), py::arg("grid_density") = 0, py::arg("refine") = true);

  m.def("count_real_roots", [](const HomogeneousPolynomial& p) { return to_json(count_real_roots(p)).dump(); });

  m.def(
      "curve_topology",
      [](const HomogeneousPolynomial& p, int resolution) {
        py::gil_scoped_release release;
        return to_json(curve_topology(p, resolution)).dump();
      },
      py::arg("p"), py::arg("resolution") = kDefaultResolution);

  m.def(
      "curve_svg", [](const HomogeneousPolynomial& p, int resolution) { return curve_svg(curve_topology(p, resolution)); },
      py::arg("p"), py::arg("resolution") = kDefaultResolution);

  m.def(
      "split",
      [](const HomogeneousPolynomial& p, int ell) { return to_json(split(p, build_sigma(p.n()), ell)).dump(); },
      py::arg("p"), py::arg("ell") = 1);

  m.def(
      "approximate",
      [](const HomogeneousPolynomial& p, int ell) {
        py::gil_scoped_release release;
        const auto dist = distance_to_discriminant(p);
        return to_json(approx_pipeline(p, build_sigma(p.n()), ell, dist)).dump();
      },
      py::arg("p"), py::arg("ell") = 1);

  m.def("harnack_bound", &harnack_bound);

  m.def("config_hash", [](const std::string& config) { return config_hash(config_from_json(Json::parse(config))); });

  m.def(
      "run_experiment",
      [](const std::string& config, int threads) {
        auto cfg = config_from_json(Json::parse(config));
        cfg.threads = threads;
        py::gil_scoped_release release;
        return record_to_json(run_experiment(cfg)).dump();
      },
      py::arg("config"), py::arg("threads") = 1);

  m.def("record_to_csv", [](const std::string& record) { return record_to_csv(record_from_json(Json::parse(record))); });

  m.def("chart", [](const std::string& record) { return chart_svg(record_from_json(Json::parse(record))); });
}
