#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "parasphere/runner.hpp"

namespace py = pybind11;
using namespace parasphere;

namespace {

SKPoint point_of(const Prepotential& F, const std::vector<cplx>& z) {
    return make_point(F, z);
}

} // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "special Kähler geometry / parabolic affine sphere kernels";

    py::register_exception<ParseError>(mod, "ExprParseError", PyExc_ValueError);
    py::register_exception<DomainError>(mod, "ExprDomainError", PyExc_ValueError);
    py::register_exception<DegeneratePoint>(mod, "DegeneratePointError", PyExc_ValueError);
    py::register_exception<ConfigError>(mod, "ConfigError", PyExc_ValueError);

    py::class_<MatrixSignature>(mod, "Signature")
        .def_readonly("pos", &MatrixSignature::pos)
        .def_readonly("neg", &MatrixSignature::neg)
        .def("__repr__", [](const MatrixSignature& s) {
            return "(" + std::to_string(s.pos) + ", " + std::to_string(s.neg) + ")";
        });

    py::class_<HoloJet>(mod, "HoloJet")
        .def_readonly("m", &HoloJet::m)
        .def_readonly("value", &HoloJet::value)
        .def_readonly("grad", &HoloJet::grad)
        .def("hess", &HoloJet::hess_at)
        .def("third", &HoloJet::third_at);

    py::class_<Prepotential>(mod, "Prepotential")
        .def(py::init<const std::string&, int>(), py::arg("text"), py::arg("m"))
        .def_property_readonly("m", &Prepotential::arity)
        .def_property_readonly("source", &Prepotential::source)
        .def("value", &Prepotential::value)
        .def("jet", &Prepotential::jet)
        .def("is_quadratic", &Prepotential::is_quadratic);

    py::class_<SKPoint>(mod, "SKPoint")
        .def_readonly("z", &SKPoint::z)
        .def_readonly("A", &SKPoint::A)
        .def_readonly("B", &SKPoint::B)
        .def_readonly("nondegenerate", &SKPoint::nondegenerate)
        .def_property_readonly("sigB", [](const SKPoint& p) {
            if (!p.sigB) throw std::runtime_error("signature undefined at degenerate point");
            return *p.sigB;
        });

    py::enum_<ConnectionKind>(mod, "ConnectionKind")
        .value("INDUCED", ConnectionKind::Induced)
        .value("CONJUGATE", ConnectionKind::Conjugate);

    mod.def("make_point", &point_of, py::arg("F"), py::arg("z"),
            py::keep_alive<0, 1>());
    mod.def("hermitian_form", &hermitian_form);
    mod.def("hermitian_form_oracle", &hermitian_form_oracle);
    mod.def("ambient_gamma", &ambient_gamma);
    mod.def("lagrangian_residual", &lagrangian_residual);
    mod.def("conjugacy_residual", &conjugacy_residual, py::arg("p"),
            py::arg("k1") = ConnectionKind::Induced,
            py::arg("k2") = ConnectionKind::Conjugate,
            py::arg("fd_metric_derivative") = false);
    mod.def("special_residuals",
            [](const SKPoint& p) { return special_residuals(p); });
    mod.def("nijenhuis_residual",
            [](const SKPoint& p) { return nijenhuis_residual(p); });
    mod.def("curvature_torsion", [](ConnectionKind k, const SKPoint& p) {
        return curvature_torsion(k, p);
    });
    mod.def("shape_tensor", [](const SKPoint& p) {
        ShapeResult s = shape_tensor(p);
        return py::make_tuple(s.S, s.lambda);
    });
    mod.def("gauss_curvature", [](const SKPoint& p) { return gauss_curvature(p); });
    mod.def("scalar_curvature", [](const SKPoint& p) { return scalar_curvature(p); });

    mod.def("metric_G", &metric_G);
    mod.def("darboux", &darboux);
    mod.def("ma_residual", &ma_residual);
    mod.def("potential_u",
            [](const Prepotential& F, const std::vector<cplx>& base,
               const std::vector<cplx>& z) { return potential_u(F, base, z); });
    // matrix input passed as nested lists; the numpy->Eigen load path is
    // broken in this pybind11 build
    mod.def("hermitian_signature", [](const std::vector<std::vector<cplx>>& rows) {
        const auto n = static_cast<Eigen::Index>(rows.size());
        CMat H(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (static_cast<Eigen::Index>(rows[i].size()) != n)
                throw std::invalid_argument("matrix must be square");
            for (Eigen::Index j = 0; j < n; ++j) H(i, j) = rows[i][j];
        }
        return hermitian_signature(H);
    });

    mod.def("run_check", [](const std::string& config_json, double tol_scale, int jobs) {
        RunConfig cfg = RunConfig::from_json(nlohmann::json::parse(config_json));
        CheckOutcome out = run_check(cfg, tol_scale, jobs);
        return py::make_tuple(out.exit_code, out.report.dump(2));
    }, py::arg("config_json"), py::arg("tol_scale") = 1.0, py::arg("jobs") = 1);
}
