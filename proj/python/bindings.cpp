#include "hexconf/conformal.hpp"
#include "hexconf/errors.hpp"
#include "hexconf/hexagon.hpp"
#include "hexconf/solve.hpp"
#include "hexconf/triangulation.hpp"
#include "hexconf/volume.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace hexconf;

namespace {

CornerAlpha corner(const std::array<double, 3>& a) { return CornerAlpha{a}; }

// eta given as (e_ij, e_ik, e_jk)
FaceEta face_eta(const std::array<double, 3>& e) { return FaceEta::from_pairs(e[0], e[1], e[2]); }

py::dict flow_rows(const FlowTrace& trace) {
  const auto n = static_cast<Eigen::Index>(trace.rows.size());
  Eigen::VectorXd t(n), dt(n), resid(n), calabi(n), pot(n), margin(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const FlowRow& r = trace.rows[i];
    t[i] = r.t;
    dt[i] = r.dt;
    resid[i] = r.resid_inf;
    calabi[i] = r.calabi_energy;
    pot[i] = r.potential;
    margin[i] = r.min_margin;
  }
  py::dict d;
  d["t"] = t;
  d["dt"] = dt;
  d["resid_inf"] = resid;
  d["calabi_energy"] = calabi;
  d["potential"] = pot;
  d["min_margin"] = margin;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Discrete conformal structures built from right-angled hyperbolic hexagons";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  auto validation = py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
  py::register_exception<EtaOutOfRange>(m, "EtaOutOfRange", validation.ptr());
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<NotAdmissible>(m, "NotAdmissible", error.ptr());
  py::register_exception<LengthMismatch>(m, "LengthMismatch", error.ptr());
  auto not_spd = py::register_exception<NotSPD>(m, "NotSPD", error.ptr());
  py::register_exception<JacobianNotPD>(m, "JacobianNotPD", not_spd.ptr());

  py::class_<Surface>(m, "Surface")
      .def_property_readonly("n_boundary", &Surface::n_boundary)
      .def_property_readonly("strict", &Surface::strict)
      .def_property_readonly("n_edges", [](const Surface& s) { return s.edges().size(); })
      .def_property_readonly("n_faces", [](const Surface& s) { return s.faces().size(); })
      .def_property_readonly("warnings", &Surface::warnings)
      .def("edge_etas", [](const Surface& s) {
        std::vector<double> out;
        for (const Edge& e : s.edges()) out.push_back(e.eta);
        return out;
      })
      .def("structure_violations", [](const Surface& s) {
        py::list out;
        for (const StructureViolation& v : check_structure_condition(s)) {
          out.append(py::make_tuple(v.face_id, v.label, v.value));
        }
        return out;
      })
      .def("to_json", &surface_to_json);

  m.def("load_surface", [](const std::string& path, bool strict) { return load_surface(path, strict); },
        py::arg("path"), py::arg("strict") = true);
  m.def("parse_surface", &parse_surface, py::arg("text"), py::arg("strict") = true);

  m.def("edge_length_alpha", &edge_length_alpha, py::arg("a_i"), py::arg("a_j"), py::arg("eta"));
  m.def("edge_length_u", &edge_length_u, py::arg("u_i"), py::arg("u_j"), py::arg("eta"));
  m.def("hexagon_angles", [](double l_ij, double l_ik, double l_jk) {
        const HexagonMetric h = hexagon_angles(l_ij, l_ik, l_jk);
        return py::make_tuple(h.theta[0], h.theta[1], h.theta[2], h.A);
      }, py::arg("l_ij"), py::arg("l_ik"), py::arg("l_jk"));
  m.def("face_jacobian", [](const std::array<double, 3>& alpha, const std::array<double, 3>& eta) {
        const CornerAlpha a = corner(alpha);
        const FaceEta e = face_eta(eta);
        return Mat3(face_jacobian_closed(a, e, face_metric(a, e)));
      }, py::arg("alpha"), py::arg("eta"), "dtheta/dalpha for one face; eta is (e_ij, e_ik, e_jk)");

  m.def("admissibility", [](const Surface& s, const Vec& alpha) {
        const AdmissibilityReport r = admissibility(s, alpha);
        py::dict d;
        d["admissible"] = r.admissible;
        d["margins"] = r.margins;
        d["nearest_edge"] = r.nearest_edge_id;
        d["min_margin"] = r.min_margin;
        d["distance"] = r.distance_estimate;
        return d;
      }, py::arg("surface"), py::arg("alpha"));
  m.def("curvature", [](const Surface& s, const Vec& alpha) { return curvature(s, alpha).K; },
        py::arg("surface"), py::arg("alpha"));
  m.def("global_jacobian", [](const Surface& s, const Vec& alpha) { return global_jacobian(s, alpha).dense; },
        py::arg("surface"), py::arg("alpha"));
  m.def("default_base", &default_base, py::arg("surface"));
  m.def("energy", [](const Surface& s, const Vec& a, std::optional<Vec> base) {
        return energy(s, a, base ? *base : default_base(s)).value;
      }, py::arg("surface"), py::arg("alpha"), py::arg("base") = py::none());
  m.def("calabi_energy", &calabi_energy, py::arg("K"), py::arg("Kbar"));
  m.def("spd_power", &spd_power, py::arg("J"), py::arg("s"));

  m.def("solve_prescribed", [](const Surface& s, const Vec& alpha0, const Vec& Kbar, double tol, int max_iters) {
        NewtonConfig cfg;
        cfg.tol = tol;
        cfg.max_iters = max_iters;
        const NewtonResult r = solve_prescribed(s, alpha0, Kbar, cfg);
        std::vector<double> resid;
        for (const NewtonIterate& it : r.log) resid.push_back(it.resid_inf);
        return py::make_tuple(r.alpha, to_string(r.status), resid);
      }, py::arg("surface"), py::arg("alpha0"), py::arg("Kbar"), py::arg("tol") = 1e-10,
      py::arg("max_iters") = 100);

  m.def("run_flow", [](const Surface& s, const Vec& alpha0, const Vec& Kbar, const std::string& method,
                       double order, double dt, double tol, long max_steps) {
        FlowConfig cfg;
        cfg.method = parse_flow_method(method);
        cfg.s = order;
        cfg.dt0 = dt;
        cfg.tol = tol;
        cfg.max_steps = max_steps;
        const FlowResult r = run_flow(s, alpha0, Kbar, cfg);
        return py::make_tuple(r.alpha, to_string(r.trace.status), flow_rows(r.trace));
      }, py::arg("surface"), py::arg("alpha0"), py::arg("Kbar"), py::arg("method") = "ricci",
      py::arg("s") = 0.5, py::arg("dt") = 0.1, py::arg("tol") = 1e-10, py::arg("max_steps") = 100000);

  m.def("relative_volume", [](const std::array<double, 3>& eta, const std::array<double, 3>& base,
                              const std::array<double, 3>& alpha) {
        return relative_volume(PyramidChart(face_eta(eta), corner(base)), corner(alpha)).value;
      }, py::arg("eta"), py::arg("base"), py::arg("alpha"));
  m.def("volume_hessian", [](const std::array<double, 3>& eta, const std::array<double, 3>& alpha) {
        const CornerAlpha a = corner(alpha);
        return Mat3(volume_hessian(PyramidChart(face_eta(eta), a), a));
      }, py::arg("eta"), py::arg("alpha"));
}
