#include "wdgopt/rates.hpp"
#include "wdgopt/report.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace wdg;

namespace {

py::dict report_dict(const VerificationReport& r) {
    py::dict d;
    d["samples"] = r.samples;
    d["max_violation"] = r.max_violation;
    d["tol"] = r.tol;
    d["passed"] = r.passed;
    d["worst_case"] = py::make_tuple(r.worst_case.x, r.worst_case.y, r.worst_case.z);
    return d;
}

py::dict params_dict(const Params& p) {
    py::dict d;
    if (const auto* w = std::get_if<WdgParams>(&p)) {
        d["alpha"] = w->alpha;
        d["beta"] = w->beta;
        d["gamma"] = w->gamma;
    } else {
        const auto& q = std::get<PlWdgParams>(p);
        d["alpha"] = q.alpha;
        d["beta"] = q.beta;
    }
    return d;
}

Theorem theorem_for(const Trace& tr, const Objective& f, const std::optional<std::string>& key) {
    return key ? parse_theorem(*key) : default_theorem(tr, f);
}

Mat stack(const Trace& tr, bool aux) {
    if (tr.records.empty()) return Mat();
    const auto& first = aux ? tr.records.front().v : tr.records.front().x;
    Mat out(tr.records.size(), first.size());
    for (std::size_t i = 0; i < tr.records.size(); ++i)
        out.row(i) = (aux ? tr.records[i].v : tr.records[i].x).transpose();
    return out;
}

template <class F>
Eigen::VectorXd column(const Trace& tr, F get) {
    Eigen::VectorXd out(tr.records.size());
    for (std::size_t i = 0; i < tr.records.size(); ++i) out(i) = get(tr.records[i]);
    return out;
}

}  // namespace

PYBIND11_MODULE(_wdgopt, m) {
    m.doc() = "Weak discrete gradients, abstract schemes and rate certificates";

    py::class_<Objective>(m, "Objective")
        .def_readonly("name", &Objective::name)
        .def_readonly("dim", &Objective::dim)
        .def_property_readonly("L", [](const Objective& f) { return f.smoothness; })
        .def_property_readonly("mu", [](const Objective& f) { return f.strong_convexity; })
        .def_readonly("convex", &Objective::convex)
        .def_readonly("pl_constant", &Objective::pl_constant)
        .def_property_readonly("optimum",
                               [](const Objective& f) -> py::object {
                                   if (!f.optimum) return py::none();
                                   return py::make_tuple(f.optimum->x, f.optimum->value);
                               })
        .def("__call__", [](const Objective& f, const Vec& x) { return f.eval(x); })
        .def("eval", [](const Objective& f, const Vec& x) { return f.eval(x); })
        .def("grad", [](const Objective& f, const Vec& x) { return f.grad(x); })
        .def("gap", &Objective::gap)
        .def("__repr__", [](const Objective& f) { return "<Objective " + f.name + ">"; });

    m.def("problem", &problem_by_key, py::arg("key"));
    m.def("quadratic_2d", &quadratic_2d);
    m.def("quartic_2d", [](std::optional<Vec> anchor) { return anchor ? quartic_2d(*anchor) : quartic_2d(); },
          py::arg("anchor") = py::none());
    m.def("pl_sine", &pl_sine);
    m.def("composite_2d", [] { return composite_2d().sum; });
    m.def("make_quadratic", [](const Mat& Q, const Vec& b, double c) { return make_quadratic(Q, b, c); },
          py::arg("Q"), py::arg("b"), py::arg("c") = 0.0);
    m.def("make_composite", [](const Objective& f1, const Objective& f2) { return make_composite(f1, f2).sum; });

    m.def("eval_wdg", [](const std::string& kind, const Objective& f, const Vec& y, const Vec& z) {
        return eval_wdg(parse_wdg_kind(kind), f, y, z);
    });
    m.def(
        "wdg_params",
        [](const std::string& kind, double L, double mu, int d) {
            const auto k = parse_wdg_kind(kind);
            if (k.is_sum()) throw std::invalid_argument("sum kinds need an objective; use wdg_params_for");
            return params_dict(wdg_params(k.first(), L, mu, d));
        },
        py::arg("kind"), py::arg("L"), py::arg("mu"), py::arg("d") = 2);
    m.def("wdg_params_for", [](const std::string& kind, const Objective& f) {
        return params_dict(wdg_params(parse_wdg_kind(kind), f));
    });
    m.def(
        "pl_wdg_params",
        [](const std::string& kind, double L, int d) { return params_dict(pl_wdg_params(parse_wdg_kind(kind), L, d)); },
        py::arg("kind"), py::arg("L"), py::arg("d") = 1);

    m.def(
        "check_wdg_inequality",
        [](const Objective& f, const std::string& kind, long n, std::uint64_t seed, double tol) {
            const auto k = parse_wdg_kind(kind);
            return report_dict(check_wdg_inequality(f, k, wdg_params(k, f), n, seed, tol));
        },
        py::arg("f"), py::arg("kind"), py::arg("n") = 10000, py::arg("seed") = kDefaultSeed, py::arg("tol") = 1e-8);
    m.def(
        "check_strict_chain_rule",
        [](const Objective& f, const std::string& kind, long n, std::uint64_t seed, double tol) {
            return report_dict(check_strict_chain_rule(f, parse_wdg_kind(kind), n, seed, tol));
        },
        py::arg("f"), py::arg("kind"), py::arg("n") = 10000, py::arg("seed") = kDefaultSeed, py::arg("tol") = 1e-9);
    m.def(
        "check_pl_conditions",
        [](const Objective& f, const std::string& kind, long n, std::uint64_t seed, double tol) {
            const auto k = parse_wdg_kind(kind);
            return report_dict(check_pl_conditions(f, k, pl_wdg_params(k, f.L(), f.dim), n, seed, tol));
        },
        py::arg("f"), py::arg("kind"), py::arg("n") = 10000, py::arg("seed") = kDefaultSeed, py::arg("tol") = 1e-8);
    m.def("counterexample_strict_dg", &counterexample_strict_dg, py::arg("Q"), py::arg("x"));

    py::class_<Trace>(m, "Trace")
        .def_property_readonly("scheme", [](const Trace& t) { return scheme_key(t.scheme); })
        .def_property_readonly("wdg", [](const Trace& t) { return t.kind.key(); })
        .def_readonly("h", &Trace::h)
        .def_property_readonly("params", [](const Trace& t) { return params_dict(t.params); })
        .def_readonly("aborted", &Trace::aborted)
        .def_readonly("abort_reason", &Trace::abort_reason)
        .def_property_readonly("k", [](const Trace& t) { return column(t, [](const TraceRecord& r) { return double(r.k); }); })
        .def_property_readonly("x", [](const Trace& t) { return stack(t, false); })
        .def_property_readonly("v", [](const Trace& t) { return stack(t, true); })
        .def_property_readonly("f_gap", [](const Trace& t) { return column(t, [](const TraceRecord& r) { return r.f_gap; }); })
        .def_property_readonly("inner_iters",
                               [](const Trace& t) { return column(t, [](const TraceRecord& r) { return double(r.inner_iters); }); })
        .def_property_readonly("residual",
                               [](const Trace& t) { return column(t, [](const TraceRecord& r) { return r.residual; }); })
        .def("__len__", [](const Trace& t) { return t.records.size(); })
        .def(
            "certify",
            [](const Trace& t, const Objective& f, std::optional<std::string> theorem, double slack) {
                const auto c = certify_trace(t, theorem_for(t, f, theorem), f, slack);
                py::dict d;
                d["theorem"] = theorem_key(c.theorem);
                d["passed"] = c.passed();
                d["first_violation"] = c.first_violation;
                d["bound"] = c.bound;
                d["observed"] = c.observed;
                d["floor"] = c.floor;
                d["floor_steps"] = c.floor_steps;
                return d;
            },
            py::arg("f"), py::arg("theorem") = py::none(), py::arg("slack") = 1e-8)
        .def(
            "lyapunov",
            [](const Trace& t, const Objective& f, std::optional<std::string> theorem) {
                const auto s = lyapunov_series(t, theorem_for(t, f, theorem), f);
                const auto mono = check_lyapunov_monotone(s);
                py::dict d;
                d["energy"] = s.energy;
                d["discounted"] = s.discounted;
                d["rate"] = s.rate;
                d["nonincreasing"] = mono.passed;
                return d;
            },
            py::arg("f"), py::arg("theorem") = py::none());

    m.def(
        "run",
        [](const Objective& f, const std::string& scheme, const std::string& wdg, std::optional<double> h, int iters,
           std::optional<Vec> x0, std::optional<Vec> v0, const std::string& z, double imp_tol, int imp_maxiter) {
            SchemeConfig cfg;
            cfg.scheme = parse_scheme(scheme);
            cfg.h = h;
            cfg.iterations = iters;
            cfg.x0 = x0 ? *x0 : Vec::Ones(f.dim);
            cfg.v0 = v0;
            cfg.z_strategy = parse_z_strategy(z);
            cfg.solver.tol = imp_tol;
            cfg.solver.max_iter = imp_maxiter;
            py::gil_scoped_release unlocked;
            return run_scheme(f, parse_wdg_kind(wdg), cfg);
        },
        py::arg("f"), py::arg("scheme") = "gradient-flow", py::arg("wdg") = "ee", py::arg("h") = py::none(),
        py::arg("iters") = 100, py::arg("x0") = py::none(), py::arg("v0") = py::none(),
        py::arg("z_strategy") = "theorem", py::arg("imp_tol") = 1e-10, py::arg("imp_maxiter") = 200);

    m.def(
        "rates_table",
        [](double L, double mu, int d, double mu2) { return format_rates_table(rates_table(L, mu, d, mu2), L, mu, d); },
        py::arg("L"), py::arg("mu"), py::arg("d") = 2, py::arg("mu2") = 0.0);

    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
}
