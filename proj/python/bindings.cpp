#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "fracground/barrier.hpp"
#include "fracground/cli.hpp"
#include "fracground/error.hpp"
#include "fracground/field_io.hpp"
#include "fracground/frac_ops.hpp"
#include "fracground/minimize.hpp"
#include "fracground/rearrange.hpp"

namespace py = pybind11;
using namespace fracground;

namespace {

// Fields cross the boundary as (grid, ndarray of shape (M,)*N).
py::array_t<double> to_array(const ScalarField& f) {
  std::vector<py::ssize_t> shape(f.grid.dim(), f.grid.points());
  py::array_t<double> out(shape);
  std::copy(f.values.begin(), f.values.end(), out.mutable_data());
  return out;
}

ScalarField from_array(const BoxGrid& g, py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  if (static_cast<std::size_t>(a.size()) != g.size())
    throw py::value_error("array has " + std::to_string(a.size()) + " values, grid needs " +
                          std::to_string(g.size()));
  return ScalarField(g, std::vector<double>(a.data(), a.data() + a.size()));
}

py::object to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral solver and checks for (-Delta)^s u + u = |u|^{p-1} u";

  static py::exception<Error> exc(m, "FracgroundError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = exc;
      PyErr_SetObject(err.ptr(), py::make_tuple(std::string(code_name(e.code())), e.what()).ptr());
    }
  });

  py::class_<ProblemParams>(m, "ProblemParams")
      .def(py::init<int, double, double>(), py::arg("dim"), py::arg("order"), py::arg("power"))
      .def_property_readonly("dim", &ProblemParams::dim)
      .def_property_readonly("order", &ProblemParams::order)
      .def_property_readonly("power", &ProblemParams::power)
      .def_property_readonly("critical_power", &ProblemParams::critical_power)
      .def_property_readonly("sobolev_exponent", &ProblemParams::sobolev_exponent)
      .def_property_readonly("subcritical", &ProblemParams::subcritical);

  py::class_<BoxGrid>(m, "BoxGrid")
      .def(py::init(&make_grid), py::arg("dim"), py::arg("points"), py::arg("half_width"))
      .def_property_readonly("dim", &BoxGrid::dim)
      .def_property_readonly("points", &BoxGrid::points)
      .def_property_readonly("half_width", &BoxGrid::half_width)
      .def_property_readonly("spacing", &BoxGrid::spacing)
      .def_property_readonly("size", &BoxGrid::size)
      .def("coordinates", [](const BoxGrid& g) {
        py::array_t<double> x(g.points());
        for (int j = 0; j < g.points(); ++j) x.mutable_at(j) = g.coordinate(j);
        return x;
      })
      .def("__repr__", [](const BoxGrid& g) {
        std::ostringstream os;
        os << "BoxGrid(dim=" << g.dim() << ", points=" << g.points() << ", half_width=" << g.half_width() << ")";
        return os.str();
      });

  m.def("frac_laplacian", [](const BoxGrid& g, py::array_t<double> a, double s) {
    return to_array(frac_laplacian(from_array(g, a), s));
  }, py::arg("grid"), py::arg("values"), py::arg("s"));
  m.def("seminorm_spectral_squared", [](const BoxGrid& g, py::array_t<double> a, double s) {
    return seminorm_spectral_squared(from_array(g, a), s);
  }, py::arg("grid"), py::arg("values"), py::arg("s"));
  m.def("seminorm_direct_squared", [](const BoxGrid& g, py::array_t<double> a, double s, bool nearest) {
    return seminorm_direct_squared(from_array(g, a), s, Reduction::deterministic,
                                   nearest ? DirectKernel::nearest_image : DirectKernel::periodized);
  }, py::arg("grid"), py::arg("values"), py::arg("s"), py::arg("nearest_image") = false);
  m.def("equivalence_constant", [](int dim, double s) { return equivalence_constant(dim, s).value; },
        py::arg("dim"), py::arg("s"));
  m.def("G", &G_value, py::arg("t"), py::arg("p"));
  m.def("g", &g_value, py::arg("t"), py::arg("p"));
  m.def("zeta_min", &zeta_min, py::arg("p"));
  m.def("constraint_V", [](const BoxGrid& g, py::array_t<double> a, double p) {
    return constraint_V(from_array(g, a), p);
  }, py::arg("grid"), py::arg("values"), py::arg("p"));
  m.def("energy", [](const BoxGrid& g, py::array_t<double> a, double s, double p, bool gagliardo) {
    return energy(from_array(g, a), s, p, gagliardo ? Normalization::gagliardo : Normalization::spectral);
  }, py::arg("grid"), py::arg("values"), py::arg("s"), py::arg("p"), py::arg("gagliardo") = false);
  m.def("lp_norm", [](const BoxGrid& g, py::array_t<double> a, double q) {
    return lp_norm(from_array(g, a), q);
  }, py::arg("grid"), py::arg("values"), py::arg("q"));

  m.def("rearrange_decreasing", [](const BoxGrid& g, py::array_t<double> a) {
    return to_array(rearrange_decreasing(from_array(g, a)));
  }, py::arg("grid"), py::arg("values"));
  m.def("polya_szego_gap", [](const BoxGrid& g, py::array_t<double> a, double s) {
    return polya_szego_gap(from_array(g, a), s);
  }, py::arg("grid"), py::arg("values"), py::arg("s"));
  m.def("radial_profile", [](const BoxGrid& g, py::array_t<double> a) {
    const auto prof = radial_profile(from_array(g, a));
    return py::make_tuple(prof.radii, prof.values);
  }, py::arg("grid"), py::arg("values"));

  m.def("make_barrier", [](const BoxGrid& g, double zeta, double radius, std::optional<double> sigma) {
    return to_array(make_barrier({zeta, radius, sigma}, g));
  }, py::arg("grid"), py::arg("zeta"), py::arg("radius"), py::arg("sigma") = py::none());
  m.def("barrier_constraint_scan", [](double p, double zeta, const BoxGrid& g) {
    return to_py(to_json(barrier_constraint_scan(p, zeta, g)));
  }, py::arg("p"), py::arg("zeta"), py::arg("grid"));
  m.def("default_zeta", &default_zeta, py::arg("p"));

  m.def("solve_ground_state", [](const ProblemParams& prm, const BoxGrid& g, double tol_grad, int max_iters) {
    SolverConfig cfg(prm, g);
    cfg.tol_grad = tol_grad;
    cfg.max_iters = max_iters;
    const auto run = solve_ground_state(cfg);
    py::dict out;
    out["report"] = to_py(to_json(run.minimizer, false));
    out["certificate"] = to_py(to_json(run.certificate));
    out["barrier"] = to_py(to_json(run.barrier));
    out["grid"] = run.solution.grid;
    out["solution"] = to_array(run.solution);
    return out;
  }, py::arg("params"), py::arg("grid"), py::arg("tol_grad") = 1e-7, py::arg("max_iters") = 5000);
  m.def("certify", [](const BoxGrid& g, py::array_t<double> a, const ProblemParams& prm) {
    return to_py(to_json(certify(from_array(g, a), prm)));
  }, py::arg("grid"), py::arg("values"), py::arg("params"));
  m.def("petviashvili_solve", [](const BoxGrid& g, py::array_t<double> a, const ProblemParams& prm, int max_iters) {
    return to_array(petviashvili_solve(from_array(g, a), prm, max_iters).field);
  }, py::arg("grid"), py::arg("values"), py::arg("params"), py::arg("max_iters") = 2000);
  m.def("dilation_probe", [](const BoxGrid& g, py::array_t<double> a, const ProblemParams& prm,
                             const std::vector<double>& sigmas) {
    std::vector<std::tuple<double, double>> rows;
    for (const auto& r : dilation_probe(prm, from_array(g, a), sigmas)) rows.emplace_back(r.sigma, r.T);
    return rows;
  }, py::arg("grid"), py::arg("values"), py::arg("params"), py::arg("sigmas"));

  m.def("write_field", [](const std::filesystem::path& path, const BoxGrid& g, py::array_t<double> a,
                          std::optional<double> order) { write_field(from_array(g, a), path, order); },
        py::arg("path"), py::arg("grid"), py::arg("values"), py::arg("order") = py::none());
  m.def("read_field", [](const std::filesystem::path& path) {
    auto file = read_field_file(path);
    return py::make_tuple(file.field.grid, to_array(file.field), file.order);
  }, py::arg("path"));

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
