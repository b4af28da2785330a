#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wco/errors.hpp"
#include "wco/json_io.hpp"

namespace py = pybind11;
using namespace wco;
using json_io::json;

namespace {

// results cross the boundary as the same documents the CLI writes
py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_py(const py::object& o) {
  return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

WcoSpec make_spec(const Weight& w, int degree, const std::optional<BlaschkeProduct>& b, int grid,
                  int iters) {
  if (b) return WcoSpec::from_blaschke(*b, w, grid, iters);
  return WcoSpec::model(degree, w);
}

SpectrumOptions spectrum_options(int max_period, int depth, double zero_tol, double lambda_rel_tol) {
  SpectrumOptions o;
  o.max_period = max_period;
  o.depth = depth;
  o.zero_tol = zero_tol;
  o.lambda_rel_tol = lambda_rel_tol;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectra of weighted composition operators f -> w * f(B) on the disc algebra";

  static py::exception<Error> wco_error(m, "WcoError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(wco_error, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  py::class_<BlaschkeProduct>(m, "BlaschkeProduct")
      .def(py::init<std::vector<cplx>, double>(), py::arg("zeros"), py::arg("rotation") = 0.0)
      .def_static("power", &BlaschkeProduct::power, py::arg("d"))
      .def_property_readonly("zeros", &BlaschkeProduct::zeros)
      .def_property_readonly("rotation", &BlaschkeProduct::rotation)
      .def_property_readonly("degree", &BlaschkeProduct::degree)
      .def("__call__", &BlaschkeProduct::evaluate, py::arg("z"))
      .def("circle_map", &BlaschkeProduct::circle_map, py::arg("t"))
      .def("to_dict", [](const BlaschkeProduct& b) { return to_py(json_io::to_json(b)); })
      .def_static("from_dict", [](const py::object& o) { return json_io::blaschke_from_json(from_py(o)); })
      .def("__repr__", [](const BlaschkeProduct& b) {
        return "BlaschkeProduct(" + json_io::to_json(b).dump() + ")";
      });

  py::class_<Weight>(m, "Weight")
      .def_static("constant", &Weight::constant, py::arg("c"))
      .def_static("polynomial", &Weight::polynomial, py::arg("coeffs"))
      .def_static("from_dict", [](const py::object& o) { return json_io::weight_from_json(from_py(o)); })
      .def("to_dict", [](const Weight& w) { return to_py(json_io::to_json(w)); })
      .def("on_circle", py::overload_cast<double>(&Weight::on_circle, py::const_), py::arg("t"))
      .def("modulus", [](const Weight& w, const std::string& t) { return w.modulus(Angle::parse(t)); },
           py::arg("t"), "|w| at an angle given as \"p/q\" or a decimal string")
      .def("modulus", py::overload_cast<double>(&Weight::modulus, py::const_), py::arg("t"))
      .def("rotated", &Weight::rotated, py::arg("alpha"))
      .def("taylor_coefficients", &Weight::taylor_coefficients)
      .def("sup_modulus", &Weight::sup_modulus, py::arg("n") = 1 << 14)
      .def_property_readonly("kind", &Weight::kind);

  m.def("classify", [](const BlaschkeProduct& b) { return to_py(json_io::to_json(classify(b))); },
        py::arg("b"));
  m.def("semiconjugacy",
        [](const BlaschkeProduct& b, int grid, int iters) {
          return to_py(json_io::to_json(shub_semiconjugacy(b, grid, iters)));
        },
        py::arg("b"), py::arg("grid") = 4096, py::arg("iters") = 40);
  m.def("periodic_orbits",
        [](int d, int max_period) {
          json out = json::array();
          for (const auto& o : periodic_orbits(d, max_period)) out.push_back(json_io::to_json(o));
          return to_py(out);
        },
        py::arg("d"), py::arg("max_period"));

  m.def("spectral_radius",
        [](const Weight& w, int degree, int max_period, std::optional<BlaschkeProduct> b, int grid) {
          const auto spec = make_spec(w, degree, b, 4096, 40);
          const int mp = max_period > 0 ? max_period : default_max_period(spec.degree);
          return to_py(json_io::to_json(spectral_radius(spec, mp, grid)));
        },
        py::arg("weight"), py::arg("degree") = 2, py::arg("max_period") = 0,
        py::arg("blaschke") = py::none(), py::arg("grid") = 1 << 16);

  m.def("assemble_spectrum",
        [](const Weight& w, int degree, std::optional<BlaschkeProduct> b, int max_period, int depth,
           double zero_tol, double lambda_rel_tol) {
          const auto spec = make_spec(w, degree, b, 4096, 40);
          return to_py(json_io::to_json(
              assemble_spectrum(spec, spectrum_options(max_period, depth, zero_tol, lambda_rel_tol))));
        },
        py::arg("weight"), py::arg("degree") = 2, py::arg("blaschke") = py::none(),
        py::arg("max_period") = 0, py::arg("depth") = 10, py::arg("zero_tol") = 1e-10,
        py::arg("lambda_rel_tol") = 2e-3);

  m.def("scan",
        [](const Weight& w, const std::vector<double>& radii, int degree, int depth) {
          const auto report = conjecture1_scan(WcoSpec::model(degree, w), radii, depth);
          auto out = json_io::to_json(report);
          out["csv"] = report.csv();
          return to_py(out);
        },
        py::arg("weight"), py::arg("radii"), py::arg("degree") = 2, py::arg("depth") = 10);

  m.def("verify_example6",
        [](int k, int n_max, std::size_t grid, double tol) {
          return to_py(json_io::to_json(verify_example6(k, n_max, grid, tol)));
        },
        py::arg("k"), py::arg("n_max"), py::arg("grid") = 200000, py::arg("tol") = 1e-9);

  m.def("build_t6",
        [](const std::vector<cplx>& lambdas, int degree, int max_period) {
          const auto built = theorem6_build_weight(degree, lambdas, max_period);
          return py::make_tuple(built.weight, to_py(json_io::to_json(built)));
        },
        py::arg("lambdas"), py::arg("degree") = 2, py::arg("max_period") = 6,
        "Returns (weight, report) for increasing |lambda|");

  m.def("build_t11",
        [](const std::vector<double>& lambdas, int n_trunc, int degree, int layers, int max_period) {
          const auto rep = theorem11_build_weight(degree, lambdas, n_trunc, layers, max_period);
          return py::make_tuple(rep.built.weight, to_py(json_io::to_json(rep)));
        },
        py::arg("lambdas"), py::arg("n_trunc"), py::arg("degree") = 2, py::arg("layers") = 4,
        py::arg("max_period") = 8, "Returns (weight, report) for decreasing lambdas");

  m.def("annulus",
        [](const BlaschkeProduct& b, const Weight& w, int grid) {
          return to_py(json_io::to_json(proposition1_annulus(b, w, grid)));
        },
        py::arg("b"), py::arg("weight"), py::arg("grid") = 4096);

  m.def("outer_from_modulus",
        [](std::vector<double> samples, const std::vector<std::pair<std::string, int>>& zeros) {
          ModulusProfile p;
          p.samples = std::move(samples);
          for (const auto& [angle, order] : zeros) p.prescribed_zeros.push_back({Angle::parse(angle), order});
          const auto a = outer_from_modulus(p);
          return py::make_tuple(a.weight(), to_py(json_io::to_json(a)));
        },
        py::arg("samples"), py::arg("zeros") = std::vector<std::pair<std::string, int>>{},
        "Samples on a uniform power-of-two grid; zeros as (\"p/q\", order)");
}
