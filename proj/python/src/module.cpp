#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "grasscurve/curve.hpp"
#include "grasscurve/errors.hpp"
#include "grasscurve/families.hpp"
#include "grasscurve/gauge.hpp"
#include "grasscurve/invariants.hpp"
#include "grasscurve/io.hpp"
#include "grasscurve/solver.hpp"

namespace py = pybind11;
using namespace grasscurve;

namespace {

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Curve curve_from_blocks(int n, int d, const std::vector<Eigen::MatrixXcd>& blocks) {
  std::vector<CoeffBlock> out;
  for (const auto& b : blocks) {
    if (b.rows() != 2 || b.cols() != n) throw InputError("each coefficient block must be 2 x n");
    out.emplace_back(b);
  }
  return Curve(n, d, std::move(out));
}

}  // namespace

PYBIND11_MODULE(_grasscurve, m) {
  m.doc() = "Constantly curved holomorphic 2-spheres in G(2, n+2)";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());

  py::class_<Curve>(m, "Curve")
      .def(py::init(&curve_from_blocks), py::arg("n"), py::arg("d"), py::arg("blocks"))
      .def_property_readonly("n", &Curve::n)
      .def_property_readonly("d", &Curve::d)
      .def_property_readonly("deg_max", &Curve::deg_max)
      .def("block", [](const Curve& c, int alpha) { return Eigen::MatrixXcd(c.block(alpha)); }, py::arg("alpha"))
      .def("with_degree", &Curve::with_degree, py::arg("d"))
      .def("to_json", [](const Curve& c) { return dump_curve(c); })
      .def_static("from_json", [](const std::string& s) { return parse_curve(s).curve; }, py::arg("text"))
      .def("__repr__", [](const Curve& c) {
        return "Curve(n=" + std::to_string(c.n()) + ", d=" + std::to_string(c.d()) + ")";
      });

  m.def("family_dn", &family_dn, py::arg("n"));
  m.def("family_d2n", &family_d2n, py::arg("n"));
  m.def("veronese", &veronese, py::arg("d"));

  m.def("verify", [](const Curve& c, double tol) { return to_py(to_json(verify(c, tol))); }, py::arg("curve"),
        py::arg("tol") = kDefaultCcTol);
  m.def("gram_max_residual", [](const Curve& c) { return gram_residual(c).max_abs; }, py::arg("curve"));
  m.def("fullness_rank", [](const Curve& c) { return fullness_rank(c); }, py::arg("curve"));
  m.def("ramification", [](const Curve& c) { return to_py(to_json(ramification(c))); }, py::arg("curve"));
  m.def("tail_probe", [](const Curve& c, double tol) { return to_py(to_json(tail_probe(c, tol))); },
        py::arg("curve"), py::arg("tol") = 1e-8);
  m.def("curvature_at", &curvature_at, py::arg("curve"), py::arg("z"));
  m.def("gauss_slack", &gauss_slack, py::arg("curve"), py::arg("z"));
  m.def("det_a1_sq", &det_a1_sq, py::arg("curve"), py::arg("z"));

  m.def("apply_mobius",
        [](const Curve& c, cplx a, cplx b, cplx cc, cplx d) { return apply_mobius(c, Mobius{a, b, cc, d}); },
        py::arg("curve"), py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"));
  m.def("apply_unitary", &apply_unitary, py::arg("curve"), py::arg("u"));
  m.def("canonicalize", &canonicalize_a1, py::arg("curve"));

  m.def(
      "search",
      [](int n, int d, int restarts, std::uint64_t seed, double tol, int threads) {
        SearchProblem p;
        p.n = n;
        p.d = d;
        p.restarts = restarts;
        p.rng_seed = seed;
        p.tol_feasible = tol;
        p.threads = threads;
        SearchReport rep;
        {
          py::gil_scoped_release release;
          rep = search(p);
        }
        py::object curve = rep.best_curve ? py::cast(*rep.best_curve) : py::none();
        return py::make_tuple(to_py(to_json(rep)), curve);
      },
      py::arg("n"), py::arg("d"), py::arg("restarts") = 200, py::arg("seed") = 42, py::arg("tol") = 1e-10,
      py::arg("threads") = 0);
}
