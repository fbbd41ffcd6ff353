#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <stdexcept>

#include "ricci/acceptance.hpp"
#include "ricci/quasiconv.hpp"

namespace py = pybind11;
using namespace ricci;

namespace {

ClassId class_from_name(const std::string& name) {
    const auto id = parse_class_id(name);
    if (!id) throw std::invalid_argument("unknown class \"" + name + "\"");
    return *id;
}

ClassParams make_params(std::optional<double> k, std::optional<double> a2,
                        std::optional<double> a3) {
    ClassParams p;
    p.k = k;
    p.a2 = a2;
    p.a3 = a3;
    return p;
}

DiagonalMetric metric_from(const std::array<double, 4>& v) { return {v[0], v[1], v[2], v[3]}; }
InitialData init_from(const std::array<double, 4>& v) { return {v[0], v[1], v[2], v[3]}; }

std::array<double, 4> to_array(const DiagonalMetric& m) { return {m.a, m.b, m.c, m.d}; }

Mat4 mat_from(const std::array<std::array<double, 4>, 4>& rows) {
    Mat4 m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

std::array<std::array<double, 4>, 4> mat_to(const Mat4& m) {
    std::array<std::array<double, 4>, 4> rows{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    return rows;
}

FrameParams frame_from(const std::string& cls, const std::vector<double>& values) {
    FrameParams f;
    f.cls = class_from_name(cls);
    f.values = values;
    if (f.values.size() != frame_arity(f.cls)) {
        throw std::invalid_argument("frame params arity does not match class");
    }
    return f;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Ricci flow on locally homogeneous closed 4-manifolds: core operations";

    m.def("class_ids", [] {
        std::vector<std::string> out;
        for (ClassId id : all_class_ids) out.emplace_back(to_string(id));
        return out;
    });

    m.def("class_dimension",
          [](const std::string& cls) { return class_dimension(class_from_name(cls)); },
          py::arg("cls"));

    m.def(
        "rhs",
        [](const std::string& cls, const std::array<double, 4>& state, std::optional<double> k,
           std::optional<double> a2, std::optional<double> a3) {
            return rhs(class_from_name(cls), make_params(k, a2, a3), metric_from(state));
        },
        py::arg("cls"), py::arg("state"), py::arg("k") = std::nullopt, py::arg("a2") = std::nullopt,
        py::arg("a3") = std::nullopt);

    m.def(
        "closed_form",
        [](const std::string& cls, const std::array<double, 4>& init, double t,
           std::optional<double> k, std::optional<double> a2,
           std::optional<double> a3) -> py::object {
            const ClosedForm cf =
                closed_form(class_from_name(cls), make_params(k, a2, a3), init_from(init), t);
            py::dict out;
            switch (cf.kind) {
                case ClosedFormKind::Full:
                    out["kind"] = "full";
                    out["state"] = to_array(*cf.state);
                    break;
                case ClosedFormKind::Partial:
                    out["kind"] = "partial";
                    out["D"] = *cf.d_component;
                    break;
                case ClosedFormKind::Unavailable:
                    out["kind"] = "unavailable";
                    break;
            }
            return out;
        },
        py::arg("cls"), py::arg("init"), py::arg("t"), py::arg("k") = std::nullopt,
        py::arg("a2") = std::nullopt, py::arg("a3") = std::nullopt);

    m.def(
        "conserved",
        [](const std::string& cls, const std::array<double, 4>& init, std::optional<double> k,
           std::optional<double> a2, std::optional<double> a3) {
            std::vector<std::pair<std::string, double>> out;
            for (const ConservedQuantity& q :
                 conserved(class_from_name(cls), make_params(k, a2, a3), init_from(init))) {
                out.emplace_back(q.name, q.initial);
            }
            return out;
        },
        py::arg("cls"), py::arg("init"), py::arg("k") = std::nullopt, py::arg("a2") = std::nullopt,
        py::arg("a3") = std::nullopt);

    m.def(
        "asymptotic_profile",
        [](const std::string& cls, const std::array<double, 4>& init, std::optional<double> k,
           std::optional<double> a2, std::optional<double> a3) {
            std::vector<std::tuple<std::string, std::string, double>> out;
            for (const AsymptoticDescriptor& d : asymptotic_profile(
                     class_from_name(cls), make_params(k, a2, a3), init_from(init))) {
                out.emplace_back(std::string(to_string(d.component)),
                                 std::string(to_string(d.kind)), d.value);
            }
            return out;
        },
        py::arg("cls"), py::arg("init"), py::arg("k") = std::nullopt, py::arg("a2") = std::nullopt,
        py::arg("a3") = std::nullopt);

    m.def(
        "norm_sq",
        [](const std::array<double, 4>& g, const std::array<std::array<double, 4>, 4>& h) {
            SymmetricMetric4 sym;
            for (int i = 0; i < 4; ++i)
                for (int j = i; j < 4; ++j) {
                    const double hij = h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                    const double hji = h[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
                    if (hij != hji) throw std::invalid_argument("h must be symmetric");
                    sym(i, j) = hij;
                }
            return norm_sq(metric_from(g), sym);
        },
        py::arg("g"), py::arg("h"));

    m.def(
        "frame_quotient",
        [](const std::array<std::array<double, 4>, 4>& lam,
           const std::array<std::array<double, 4>, 4>& lam_prime) {
            return mat_to(frame_quotient(mat_from(lam), mat_from(lam_prime)));
        },
        py::arg("lam"), py::arg("lam_prime"));

    m.def(
        "reduced_params",
        [](const std::string& cls, const std::array<std::array<double, 4>, 4>& lam,
           const std::array<std::array<double, 4>, 4>& lam_prime) {
            return reduced_params(class_from_name(cls), mat_from(lam), mat_from(lam_prime)).values;
        },
        py::arg("cls"), py::arg("lam"), py::arg("lam_prime"));

    m.def(
        "congruence_transport",
        [](const std::string& cls, const std::vector<double>& frame,
           const std::array<double, 4>& diag) {
            const SymmetricMetric4 out =
                congruence_transport(transition_from_params(frame_from(cls, frame)),
                                     metric_from(diag));
            std::array<std::array<double, 4>, 4> rows{};
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = out(i, j);
            return rows;
        },
        py::arg("cls"), py::arg("frame"), py::arg("diag"));

    m.def(
        "integrate",
        [](const std::string& cls, const std::array<double, 4>& init, double t_end,
           std::optional<double> k, std::optional<double> a2, std::optional<double> a3,
           double rel_tol, double abs_tol) {
            IntegratorConfig cfg;
            cfg.rel_tol = rel_tol;
            cfg.abs_tol = abs_tol;
            cfg.t_end = t_end;
            const Trajectory traj =
                integrate(class_from_name(cls), make_params(k, a2, a3), init_from(init), cfg);
            std::vector<std::array<double, 4>> states;
            states.reserve(traj.states().size());
            for (const DiagonalMetric& s : traj.states()) states.push_back(to_array(s));
            py::dict out;
            out["t"] = traj.times();
            out["states"] = states;
            return out;
        },
        py::arg("cls"), py::arg("init"), py::arg("t_end"), py::arg("k") = std::nullopt,
        py::arg("a2") = std::nullopt, py::arg("a3") = std::nullopt, py::arg("rel_tol") = 1e-10,
        py::arg("abs_tol") = 1e-12);

    m.def(
        "evaluate_at",
        [](const std::string& cls, const std::array<double, 4>& init, double t_end, double t,
           std::optional<double> k, std::optional<double> a2, std::optional<double> a3) {
            IntegratorConfig cfg;
            cfg.t_end = t_end;
            const Trajectory traj =
                integrate(class_from_name(cls), make_params(k, a2, a3), init_from(init), cfg);
            return to_array(traj.evaluate_at(t));
        },
        py::arg("cls"), py::arg("init"), py::arg("t_end"), py::arg("t"), py::arg("k") = std::nullopt,
        py::arg("a2") = std::nullopt, py::arg("a3") = std::nullopt);

    m.def(
        "conserved_drift",
        [](const std::string& cls, const std::array<double, 4>& init, double t_end,
           std::optional<double> k, std::optional<double> a2, std::optional<double> a3,
           double rel_tol) {
            IntegratorConfig cfg;
            cfg.rel_tol = rel_tol;
            cfg.t_end = t_end;
            const Trajectory traj =
                integrate(class_from_name(cls), make_params(k, a2, a3), init_from(init), cfg);
            return conserved_drift(traj);
        },
        py::arg("cls"), py::arg("init"), py::arg("t_end"), py::arg("k") = std::nullopt,
        py::arg("a2") = std::nullopt, py::arg("a3") = std::nullopt, py::arg("rel_tol") = 1e-10);

    m.def(
        "validate_closed_form",
        [](const std::string& cls, const std::array<double, 4>& init,
           const std::vector<double>& samples, std::optional<double> k, std::optional<double> a2,
           std::optional<double> a3) {
            return validate_closed_form(class_from_name(cls), make_params(k, a2, a3),
                                        init_from(init), samples);
        },
        py::arg("cls"), py::arg("init"), py::arg("samples"), py::arg("k") = std::nullopt,
        py::arg("a2") = std::nullopt, py::arg("a3") = std::nullopt);

    m.def(
        "validate_asymptotics",
        [](const std::string& cls, const std::array<double, 4>& init, double horizon,
           std::optional<double> k, std::optional<double> a2, std::optional<double> a3) {
            const AsymptoticsReport rep = validate_asymptotics(
                class_from_name(cls), make_params(k, a2, a3), init_from(init), horizon);
            std::vector<std::tuple<std::string, std::string, double, double>> checks;
            for (const AsymptoticsCheck& c : rep.checks) {
                checks.emplace_back(std::string(to_string(c.descriptor.component)),
                                    std::string(to_string(c.descriptor.kind)), c.descriptor.value,
                                    c.residual);
            }
            py::dict out;
            out["checks"] = checks;
            out["path"] = std::string(to_string(rep.path));
            out["horizon"] = rep.horizon;
            return out;
        },
        py::arg("cls"), py::arg("init"), py::arg("horizon"), py::arg("k") = std::nullopt,
        py::arg("a2") = std::nullopt, py::arg("a3") = std::nullopt);

    m.def(
        "analytic_membership",
        [](const std::string& cls, const std::array<double, 4>& init,
           const std::array<double, 4>& init_bar, const std::vector<double>& frame,
           std::optional<double> k, std::optional<double> a2, std::optional<double> a3) {
            const AnalyticResult r =
                analytic_membership(class_from_name(cls), make_params(k, a2, a3), init_from(init),
                                    init_from(init_bar), frame_from(cls, frame));
            std::vector<std::tuple<std::string, double, std::string>> residuals;
            for (const MembershipResidual& e : r.residuals) {
                residuals.emplace_back(e.name, e.value, std::string(to_string(e.kind)));
            }
            py::dict out;
            out["member"] = r.member;
            out["residuals"] = residuals;
            return out;
        },
        py::arg("cls"), py::arg("init"), py::arg("init_bar"), py::arg("frame"),
        py::arg("k") = std::nullopt, py::arg("a2") = std::nullopt, py::arg("a3") = std::nullopt);

    m.def(
        "numeric_membership",
        [](const std::string& cls, const std::array<double, 4>& init,
           const std::array<double, 4>& init_bar, const std::vector<double>& frame, double epsilon,
           std::optional<double> k, std::optional<double> a2, std::optional<double> a3) {
            const QCVerdict v =
                numeric_membership(class_from_name(cls), make_params(k, a2, a3), init_from(init),
                                   init_from(init_bar), frame_from(cls, frame), epsilon);
            py::dict out;
            out["decision"] = std::string(to_string(v.decision));
            out["tail"] = v.tail;
            out["horizon"] = v.horizon;
            out["path"] = std::string(to_string(v.path));
            return out;
        },
        py::arg("cls"), py::arg("init"), py::arg("init_bar"), py::arg("frame"),
        py::arg("epsilon") = 1e-2, py::arg("k") = std::nullopt, py::arg("a2") = std::nullopt,
        py::arg("a3") = std::nullopt);

    m.def(
        "dimension_probe",
        [](const std::string& cls, const std::array<double, 4>& init, std::optional<double> k,
           std::optional<double> a2, std::optional<double> a3) {
            return dimension_probe(class_from_name(cls), make_params(k, a2, a3), init_from(init));
        },
        py::arg("cls"), py::arg("init"), py::arg("k") = std::nullopt, py::arg("a2") = std::nullopt,
        py::arg("a3") = std::nullopt);

    m.def(
        "norm_timeseries",
        [](const std::string& cls, const std::array<double, 4>& init,
           const std::array<double, 4>& init_bar, const std::vector<double>& frame,
           const std::vector<double>& grid, std::optional<double> k, std::optional<double> a2,
           std::optional<double> a3) {
            return norm_timeseries(class_from_name(cls), make_params(k, a2, a3), init_from(init),
                                   init_from(init_bar), frame_from(cls, frame), grid);
        },
        py::arg("cls"), py::arg("init"), py::arg("init_bar"), py::arg("frame"), py::arg("grid"),
        py::arg("k") = std::nullopt, py::arg("a2") = std::nullopt, py::arg("a3") = std::nullopt);

    m.def("run_acceptance", [](std::uint64_t seed) {
        AcceptanceOptions opts;
        opts.seed = seed;
        std::vector<std::tuple<int, std::string, bool, std::string>> out;
        for (const CriterionResult& r : run_acceptance(opts)) {
            out.emplace_back(r.id, r.name, r.pass, r.detail);
        }
        return out;
    }, py::arg("seed") = kDefaultSeed);

    m.attr("__version__") = "0.1.0";
}
