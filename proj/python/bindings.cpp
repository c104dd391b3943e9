#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tgeom/algebra.hpp"
#include "tgeom/calculus.hpp"
#include "tgeom/degeneracy.hpp"
#include "tgeom/examples.hpp"
#include "tgeom/io.hpp"
#include "tgeom/lines.hpp"
#include "tgeom/tubes.hpp"

namespace py = pybind11;
using namespace tgeom;

namespace {

// nlohmann json -> Python object through the json module; reports are small.
py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

nlohmann::json from_py(const py::object& o) {
    return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

py::array_t<double> tensor_array(const Tensor3& t) {
    py::array_t<double> a({t.d, t.d, t.d});
    std::copy(t.v.begin(), t.v.end(), a.mutable_data());
    return a;
}

py::array_t<double> tensor_array(const Tensor4& t) {
    py::array_t<double> a({t.d, t.d, t.d, t.d});
    std::copy(t.v.begin(), t.v.end(), a.mutable_data());
    return a;
}

Mat stack(const std::vector<Vec>& pts) {
    if (pts.empty()) return Mat(0, 0);
    Mat m(pts.size(), pts.front().size());
    for (size_t i = 0; i < pts.size(); ++i) m.row(i) = pts[i].transpose();
    return m;
}

Kind kind_arg(const std::string& s) { return kind_from_string(s); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "World-function geometry: products, tubes, gradient lines, coincidence calculus";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<ComplexBranchError>(m, "ComplexBranchError", PyExc_ArithmeticError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

    py::class_<World>(m, "World")
        .def_property_readonly("dim", &World::dim)
        .def_property_readonly("name", &World::name)
        .def_property_readonly("spec", [](const World& w) -> py::object {
            return w.spec() ? to_py(world_spec_to_json(*w.spec())) : py::none();
        })
        .def("sigma", &World::sigma, py::arg("x"), py::arg("xp"))
        .def("G", &World::G, py::arg("x"), py::arg("xp"))
        .def("A", &World::A, py::arg("x"), py::arg("xp"))
        .def("decompose", &World::decompose, py::arg("x"), py::arg("xp"))
        .def("__repr__", [](const World& w) { return "<tgeom.World " + w.name() + " dim=" + std::to_string(w.dim()) + ">"; });

    m.def("make_world", [](const py::object& spec) { return make_world(world_spec_from_json(from_py(spec))); }, py::arg("spec"),
          "Build a world from a spec dict: kind, dim, metric, and b/alpha/beta/a3 as the kind requires.");
    m.def("load_world", [](const std::string& path) { return make_world(load_world_spec(path)); }, py::arg("path"));

    // algebra
    m.def("vector_product", &vector_product, py::arg("world"), py::arg("P0"), py::arg("P1"), py::arg("Q0"), py::arg("Q1"));
    m.def("multivector_product", &multivector_product, py::arg("world"), py::arg("P"), py::arg("Q"));
    m.def("gram_fn", &gram_fn, py::arg("world"), py::arg("P"));
    m.def("squared_length", [](const World& w, const Multivector& P) {
        const SquaredLength l = squared_length(w, P);
        return py::dict(py::arg("value") = l.value, py::arg("timelike") = l.timelike);
    }, py::arg("world"), py::arg("P"));
    m.def("collinearity_residual", [](const World& w, const std::string& kind, const Multivector& P, const Multivector& Q) {
        return collinearity_residual(w, kind_arg(kind), P, Q);
    }, py::arg("world"), py::arg("kind"), py::arg("P"), py::arg("Q"));
    m.def("parallelism_residual",
          [](const World& w, const std::string& kind, bool parallel, const Multivector& P, const Multivector& Q) {
              return parallelism_residual(w, kind_arg(kind), parallel ? Sense::parallel : Sense::antiparallel, P, Q);
          },
          py::arg("world"), py::arg("kind"), py::arg("parallel"), py::arg("P"), py::arg("Q"));

    // tubes
    m.def("tube_residual", [](const World& w, const Multivector& skeleton, const std::string& kind, const Vec& R) {
        return tube_residual(w, TubeSpec{skeleton, kind_arg(kind)}, R);
    }, py::arg("world"), py::arg("skeleton"), py::arg("kind"), py::arg("R"));
    m.def("first_order_factors", [](const World& w, const std::string& kind, const Vec& P0, const Vec& P1, const Vec& P2) {
        const FirstOrderFactors f = first_order_factors(w, kind_arg(kind), P0, P1, P2);
        return py::dict(py::arg("F0") = f.F0, py::arg("F1") = f.F1, py::arg("F2") = f.F2, py::arg("F3") = f.F3,
                        py::arg("eta") = f.eta, py::arg("product") = f.product());
    }, py::arg("world"), py::arg("kind"), py::arg("P0"), py::arg("P1"), py::arg("P2"));
    m.def("tube_section", [](const World& w, const Vec& y, const std::string& kind, const std::vector<double>& taus, int threads) {
        py::list out;
        for (const SectionSample& s : sample_axisymmetric_tube(w, y, kind_arg(kind), taus, threads))
            out.append(py::dict(py::arg("tau") = s.tau, py::arg("radii") = s.radii, py::arg("multiplicity") = s.multiplicity));
        return out;
    }, py::arg("world"), py::arg("y"), py::arg("kind"), py::arg("taus"), py::arg("threads") = 1);
    m.def("broken_tube", [](const World& w, const std::string& kind, const Vec& P0, const Vec& direction, double mu, int steps) {
        const Kind k = kind_arg(kind);
        const BrokenTube b = build_broken_tube(w, k, P0, broken_tube_seed(w, k, P0, direction, mu), mu, steps);
        return py::dict(py::arg("vertices") = stack(b.vertices), py::arg("length_error") = b.length_error,
                        py::arg("parallel_residual") = b.parallel_residual, py::arg("multiplicity") = b.multiplicity);
    }, py::arg("world"), py::arg("kind"), py::arg("P0"), py::arg("direction"), py::arg("mu"), py::arg("steps"));

    // lines
    auto traj = [](const Trajectory& t) {
        return py::dict(py::arg("params") = t.params, py::arg("points") = stack(t.points), py::arg("residuals") = t.residuals,
                        py::arg("energy") = t.energy, py::arg("warnings") = t.warnings);
    };
    m.def("gradient_line", [traj](const World& w, const std::string& kind, const Vec& xA, const Vec& xB, const std::vector<double>& taus) {
        return traj(gradient_line_implicit(w, kind_arg(kind), xA, xB, taus));
    }, py::arg("world"), py::arg("kind"), py::arg("xA"), py::arg("xB"), py::arg("taus"));
    m.def("gradient_line_ode",
          [traj](const World& w, const std::string& kind, const Vec& x0, const Vec& v0, double t0, double t1, int steps,
                 const std::string& form) { return traj(gradient_line_ode(w, kind_arg(kind), x0, v0, t0, t1, steps, ode_form_from_string(form))); },
          py::arg("world"), py::arg("kind"), py::arg("x0"), py::arg("v0"), py::arg("t0"), py::arg("t1"), py::arg("steps"),
          py::arg("form") = "tilde");
    m.def("implicit_tangent", [](const World& w, const std::string& kind, const Vec& xA, const Vec& xB) {
        return implicit_tangent(w, kind_arg(kind), xA, xB);
    }, py::arg("world"), py::arg("kind"), py::arg("xA"), py::arg("xB"));

    // calculus
    m.def("coefficients", [](const World& w, const Vec& x) {
        const CoincidenceCoefficients c = coincidence_coefficients(w, x);
        return py::dict(py::arg("a") = c.a, py::arg("g") = c.g, py::arg("g_inv") = c.g_inv, py::arg("g_tilde") = c.g_tilde,
                        py::arg("a3") = tensor_array(c.a3), py::arg("g3") = tensor_array(c.g3), py::arg("gamma") = tensor_array(c.gamma),
                        py::arg("beta") = tensor_array(c.beta), py::arg("gamma_tilde_future") = tensor_array(c.gamma_tilde_f),
                        py::arg("gamma_tilde_past") = tensor_array(c.gamma_tilde_p));
    }, py::arg("world"), py::arg("x"));
    m.def("curvature", [](const World& w, const Vec& x, const Vec& xp) {
        const CurvatureBundle c = curvature(w, x, xp);
        return py::dict(py::arg("g") = c.g, py::arg("riemann") = tensor_array(c.riemann),
                        py::arg("riemann_tilde_future") = tensor_array(c.riemann_tilde_f),
                        py::arg("riemann_tilde_past") = tensor_array(c.riemann_tilde_p),
                        py::arg("f_coincident") = tensor_array(c.f_coincident), py::arg("f_tilde") = tensor_array(c.f_tilde));
    }, py::arg("world"), py::arg("x"), py::arg("xp"));

    // degeneracy
    m.def("check_euclideaness", [](const World& w, int n, int probes, unsigned seed) {
        return to_py(report_to_json(euclideaness_check(w, n, default_basis(w.dim()), default_probes(w.dim(), probes, seed))));
    }, py::arg("world"), py::arg("n"), py::arg("probes") = 50, py::arg("seed") = 12345u);
    m.def("check_degeneration", [](const World& w, const Vec& x) {
        return to_py(report_to_json(degeneration_check(w, x, default_probe_dirs(w.dim()))));
    }, py::arg("world"), py::arg("x"));

    // closed forms
    m.def("case1_radii", &case1_radii, py::arg("tau"), py::arg("g"));
    m.def("case1_waist", [](double g) -> py::object {
        const auto wst = case1_waist(g);
        if (!wst) return py::none();
        return py::make_tuple(wst->r1, wst->r2);
    }, py::arg("g"));
    m.def("case2_asymptotic_radius", &case2_asymptotic_radius, py::arg("alpha"), py::arg("beta"), py::arg("y_norm"));
}
