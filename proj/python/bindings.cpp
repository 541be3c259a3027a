#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "ulam/adversary.hpp"
#include "ulam/constants.hpp"
#include "ulam/error.hpp"
#include "ulam/io.hpp"
#include "ulam/oracle.hpp"
#include "ulam/shadowing.hpp"

namespace py = pybind11;
using namespace ulam;

namespace {

using ComplexArray = py::array_t<Scalar, py::array::c_style | py::array::forcecast>;

// Accepts shape (N,) or (N, d).
Sequence to_sequence(const ComplexArray& values, std::size_t dim)
{
    if (values.ndim() == 1) {
        if (dim != 1) {
            throw Error(ErrorKind::InvalidInput, "1-D array given for a spec with dim " + std::to_string(dim));
        }
        Sequence s(static_cast<std::size_t>(values.shape(0)), 1);
        for (py::ssize_t n = 0; n < values.shape(0); ++n) {
            s[n][0] = values.at(n);
        }
        return s;
    }
    if (values.ndim() != 2 || static_cast<std::size_t>(values.shape(1)) != dim) {
        throw Error(ErrorKind::InvalidInput, "expected an array of shape (N, " + std::to_string(dim) + ")");
    }
    Sequence s(static_cast<std::size_t>(values.shape(0)), dim);
    for (py::ssize_t n = 0; n < values.shape(0); ++n) {
        for (py::ssize_t c = 0; c < values.shape(1); ++c) {
            s[n][c] = values.at(n, c);
        }
    }
    return s;
}

ComplexArray to_array(const Sequence& s)
{
    ComplexArray out({static_cast<py::ssize_t>(s.size()), static_cast<py::ssize_t>(s.dim())});
    auto view = out.mutable_unchecked<2>();
    for (std::size_t n = 0; n < s.size(); ++n) {
        for (std::size_t c = 0; c < s.dim(); ++c) {
            view(n, c) = s[n][c];
        }
    }
    return out;
}

Field field_of(const std::string& name)
{
    if (name == "real") {
        return Field::Real;
    }
    if (name == "complex") {
        return Field::Complex;
    }
    throw Error(ErrorKind::InvalidSpec, "field must be 'real' or 'complex'");
}

Norm norm_of(const std::string& name)
{
    if (name == "sup") {
        return Norm::Sup;
    }
    if (name == "euclid") {
        return Norm::Euclid;
    }
    throw Error(ErrorKind::InvalidSpec, "norm must be 'sup' or 'euclid'");
}

struct Analysis {
    RootSet roots;
    VandermondeData data;
};

Analysis outside_roots(const RecurrenceSpec& spec)
{
    auto roots = characteristic_roots(spec);
    auto data = VandermondeData::build(roots);
    return {std::move(roots), std::move(data)};
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Ulam stability of linear recurrences with constant coefficients";

    // Messages start with the error kind, e.g. "NotUlamStable: ...".
    py::register_exception<Error>(m, "UlamError", PyExc_ValueError);

    py::class_<RecurrenceSpec>(m, "Spec")
        .def(py::init([](std::vector<Scalar> a, const std::string& field, std::size_t dim, const std::string& norm) {
                 return RecurrenceSpec(std::move(a), field_of(field), dim, norm_of(norm));
             }),
             py::arg("a"), py::arg("field") = "real", py::arg("dim") = 1, py::arg("norm") = "sup")
        .def_property_readonly("order", &RecurrenceSpec::order)
        .def_property_readonly("coefficients",
                               [](const RecurrenceSpec& s) {
                                   return std::vector<Scalar>(s.coefficients().begin(), s.coefficients().end());
                               })
        .def_property_readonly("field", [](const RecurrenceSpec& s) { return s.field() == Field::Real ? "real" : "complex"; })
        .def_property_readonly("dim", &RecurrenceSpec::dim)
        .def_property_readonly("norm", [](const RecurrenceSpec& s) { return s.norm() == Norm::Sup ? "sup" : "euclid"; })
        .def("to_json", [](const RecurrenceSpec& s) { return io::to_json(s).dump(); })
        .def("__repr__", [](const RecurrenceSpec& s) { return "Spec(" + io::to_json(s).dump() + ")"; });

    m.def("load_spec", &io::load_spec, py::arg("path"));
    m.def("parse_spec", [](const std::string& text) { return io::parse_spec(io::json::parse(text)); }, py::arg("text"));

    py::class_<RootSet>(m, "RootSet")
        .def_readonly("roots", &RootSet::roots)
        .def_readonly("moduli", &RootSet::moduli)
        .def_readonly("radii", &RootSet::radii)
        .def_readonly("min_separation", &RootSet::min_separation)
        .def_readonly("on_unit_circle", &RootSet::on_unit_circle)
        .def_readonly("near_degenerate", &RootSet::near_degenerate)
        .def_property_readonly("classification",
                               [](const RootSet& r) { return std::string(to_string(r.classification)); });

    m.def("characteristic_roots", [](const RecurrenceSpec& spec) { return characteristic_roots(spec); },
          py::arg("spec"));
    m.def("roots_from_list", [](std::vector<Scalar> roots) { return RootSet::from_roots(std::move(roots)); },
          py::arg("roots"));

    py::class_<ConstantResult>(m, "ConstantResult")
        .def_readonly("value", &ConstantResult::value)
        .def_readonly("tail_bound", &ConstantResult::tail_bound)
        .def_readonly("terms", &ConstantResult::terms_used)
        .def_property_readonly("kind", [](const ConstantResult& c) { return std::string(to_string(c.kind)); })
        .def_property_readonly("lower", &ConstantResult::lower)
        .def_property_readonly("upper", &ConstantResult::upper);

    m.def("classical_constant", [](const RootSet& roots) { return classical_constant(roots); }, py::arg("roots"));
    m.def(
        "best_constant",
        [](const RootSet& roots, double tol, std::size_t max_terms) {
            return best_constant(roots, VandermondeData::build(roots), {tol, max_terms});
        },
        py::arg("roots"), py::arg("tol") = SeriesConfig{}.tol, py::arg("max_terms") = SeriesConfig{}.max_terms);
    m.def(
        "closed_form_small_order",
        [](const RootSet& roots, double tol) { return closed_form_small_order(roots, {tol, SeriesConfig{}.max_terms}); },
        py::arg("roots"), py::arg("tol") = SeriesConfig{}.tol);
    m.def(
        "reference_sum",
        [](const RootSet& roots, std::size_t terms) { return oracle::reference_sum(VandermondeData::build(roots), terms); },
        py::arg("roots"), py::arg("terms"));

    m.def(
        "simulate",
        [](const RecurrenceSpec& spec, const ComplexArray& initial, const ComplexArray& forcing, std::size_t steps) {
            const Forcing f(to_sequence(forcing, spec.dim()), spec.norm());
            return to_array(simulate(spec, to_sequence(initial, spec.dim()), f, steps).values);
        },
        py::arg("spec"), py::arg("initial"), py::arg("forcing"), py::arg("steps"));
    m.def(
        "residuals",
        [](const RecurrenceSpec& spec, const ComplexArray& traj) {
            return to_array(residuals(spec, to_sequence(traj, spec.dim())).values());
        },
        py::arg("spec"), py::arg("traj"));

    m.def(
        "shadow",
        [](const RecurrenceSpec& spec, const ComplexArray& traj) {
            const auto a = outside_roots(spec);
            const auto kr = best_constant(a.roots, a.data);
            const Trajectory x{to_sequence(traj, spec.dim()), 0};
            const auto result = shadow_direct(spec, a.roots, a.data, x, kr);
            const auto report = verify_shadow(spec, x, result);
            py::dict out;
            out["shadow"] = to_array(result.shadow.values);
            out["cert_error"] = result.cert_error;
            out["deviation"] = result.deviation;
            out["eps"] = result.eps;
            out["bound"] = result.bound;
            out["max_deviation"] = result.max_deviation;
            out["kr"] = kr.value;
            out["pass"] = report.pass;
            out["message"] = report.message;
            return out;
        },
        py::arg("spec"), py::arg("traj"));

    m.def(
        "sharpness",
        [](const RecurrenceSpec& spec, double eps, double tol) {
            const auto a = outside_roots(spec);
            const auto kr = best_constant(a.roots, a.data);
            const auto r = sharpness_experiment(spec, a.roots, a.data, kr, eps, tol);
            py::dict out;
            out["ratio"] = r.achieved_ratio;
            out["kr"] = r.kr_value;
            out["gap"] = r.gap;
            out["terms"] = r.horizon;
            out["zero_shadow"] = r.zero_shadow;
            return out;
        },
        py::arg("spec"), py::arg("eps") = 1.0, py::arg("tol") = 0.01);
}
