#include "ricci/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace ricci {

namespace {

using nlohmann::json;

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be finite");
    }
}

json lambdas_to_json(const InitialData& d) {
    return json::array({d.lambda1, d.lambda2, d.lambda3, d.lambda4});
}

InitialData lambdas_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 4) {
        throw std::invalid_argument(std::string(what) + " must be an array of 4 reals");
    }
    InitialData d{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
    for (int i = 0; i < 4; ++i) require_finite(d[i], what);
    return d;
}

json mat_to_json(const Mat4& m) {
    json rows = json::array();
    for (int i = 0; i < 4; ++i) {
        json row = json::array();
        for (int j = 0; j < 4; ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

Mat4 mat_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 4) {
        throw std::invalid_argument(std::string(what) + " must be a 4x4 array");
    }
    Mat4 m;
    for (int i = 0; i < 4; ++i) {
        if (!j[static_cast<std::size_t>(i)].is_array() || j[static_cast<std::size_t>(i)].size() != 4) {
            throw std::invalid_argument(std::string(what) + " must be a 4x4 array");
        }
        for (int k = 0; k < 4; ++k) {
            m(i, k) = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].get<double>();
            require_finite(m(i, k), what);
        }
    }
    return m;
}

bool optional_equal(const std::optional<double>& a, const std::optional<double>& b) {
    return a.has_value() == b.has_value() && (!a || *a == *b);
}

}  // namespace

bool operator==(const Scenario& lhs, const Scenario& rhs) {
    auto init_eq = [](const InitialData& a, const InitialData& b) {
        return a.lambda1 == b.lambda1 && a.lambda2 == b.lambda2 && a.lambda3 == b.lambda3 &&
               a.lambda4 == b.lambda4;
    };
    if (lhs.cls != rhs.cls) return false;
    if (!optional_equal(lhs.params.k, rhs.params.k) || !optional_equal(lhs.params.a2, rhs.params.a2) ||
        !optional_equal(lhs.params.a3, rhs.params.a3))
        return false;
    if (!init_eq(lhs.init, rhs.init)) return false;
    if (lhs.init_bar.has_value() != rhs.init_bar.has_value()) return false;
    if (lhs.init_bar && !init_eq(*lhs.init_bar, *rhs.init_bar)) return false;
    if (lhs.frame_matrices.has_value() != rhs.frame_matrices.has_value()) return false;
    if (lhs.frame_matrices) {
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                if (lhs.frame_matrices->first(i, j) != rhs.frame_matrices->first(i, j)) return false;
                if (lhs.frame_matrices->second(i, j) != rhs.frame_matrices->second(i, j)) return false;
            }
    }
    if (lhs.frame_params.has_value() != rhs.frame_params.has_value()) return false;
    if (lhs.frame_params && (lhs.frame_params->cls != rhs.frame_params->cls ||
                             lhs.frame_params->values != rhs.frame_params->values))
        return false;
    const auto& li = lhs.integrator;
    const auto& ri = rhs.integrator;
    if (li.rel_tol != ri.rel_tol || li.abs_tol != ri.abs_tol || li.t_end != ri.t_end ||
        li.max_steps != ri.max_steps || li.initial_step != ri.initial_step)
        return false;
    if (lhs.qc.epsilon != rhs.qc.epsilon ||
        lhs.qc.horizon_closed_form != rhs.qc.horizon_closed_form ||
        lhs.qc.horizon_numeric != rhs.qc.horizon_numeric)
        return false;
    return lhs.output.trajectory_csv == rhs.output.trajectory_csv &&
           lhs.output.report_json == rhs.output.report_json;
}

FrameParams resolve_frame(const Scenario& s) {
    if (s.frame_matrices) {
        return reduced_params(s.cls, s.frame_matrices->first, s.frame_matrices->second);
    }
    if (s.frame_params) return *s.frame_params;
    return zero_frame(s.cls);
}

nlohmann::json scenario_to_json(const Scenario& s) {
    json j;
    j["class"] = std::string(to_string(s.cls));
    json params = json::object();
    if (s.params.k) params["k"] = *s.params.k;
    if (s.params.a2) params["a2"] = *s.params.a2;
    if (s.params.a3) params["a3"] = *s.params.a3;
    j["params"] = params;
    j["init"] = lambdas_to_json(s.init);
    if (s.init_bar) j["init_bar"] = lambdas_to_json(*s.init_bar);
    if (s.frame_matrices) {
        j["frame"] = {{"lambda", mat_to_json(s.frame_matrices->first)},
                      {"lambda_prime", mat_to_json(s.frame_matrices->second)}};
    } else if (s.frame_params) {
        j["frame"] = {{"params", s.frame_params->values}};
    }
    j["integrator"] = {{"rel_tol", s.integrator.rel_tol},
                       {"abs_tol", s.integrator.abs_tol},
                       {"t_end", s.integrator.t_end},
                       {"max_steps", s.integrator.max_steps},
                       {"initial_step", s.integrator.initial_step}};
    j["qc"] = {{"epsilon", s.qc.epsilon},
               {"horizon_closed_form", s.qc.horizon_closed_form},
               {"horizon_numeric", s.qc.horizon_numeric}};
    j["output"] = {{"trajectory_csv", s.output.trajectory_csv},
                   {"report_json", s.output.report_json}};
    return j;
}

Scenario scenario_from_json(const nlohmann::json& j) {
    Scenario s;
    if (!j.contains("class") || !j["class"].is_string()) {
        throw std::invalid_argument("scenario requires a \"class\" string");
    }
    const auto cls = parse_class_id(j["class"].get<std::string>());
    if (!cls) {
        throw std::invalid_argument("unknown class \"" + j["class"].get<std::string>() + "\"");
    }
    s.cls = *cls;
    if (j.contains("params")) {
        const json& p = j["params"];
        if (p.contains("k")) s.params.k = p["k"].get<double>();
        if (p.contains("a2")) s.params.a2 = p["a2"].get<double>();
        if (p.contains("a3")) s.params.a3 = p["a3"].get<double>();
        for (const char* name : {"k", "a2", "a3"}) {
            if (p.contains(name)) require_finite(p[name].get<double>(), name);
        }
    }
    if (!j.contains("init")) throw std::invalid_argument("scenario requires \"init\"");
    s.init = lambdas_from_json(j["init"], "init");
    if (j.contains("init_bar")) s.init_bar = lambdas_from_json(j["init_bar"], "init_bar");
    if (j.contains("frame")) {
        const json& f = j["frame"];
        const bool has_mats = f.contains("lambda") || f.contains("lambda_prime");
        const bool has_params = f.contains("params");
        if (has_mats && has_params) {
            throw std::invalid_argument("frame must give either matrices or params, not both");
        }
        if (has_mats) {
            if (!f.contains("lambda") || !f.contains("lambda_prime")) {
                throw std::invalid_argument("frame matrices require both lambda and lambda_prime");
            }
            s.frame_matrices = {mat_from_json(f["lambda"], "frame.lambda"),
                                mat_from_json(f["lambda_prime"], "frame.lambda_prime")};
        } else if (has_params) {
            FrameParams fp;
            fp.cls = s.cls;
            fp.values = f["params"].get<std::vector<double>>();
            for (double v : fp.values) require_finite(v, "frame.params");
            if (fp.values.size() != frame_arity(s.cls)) {
                throw std::invalid_argument("frame params arity does not match class");
            }
            s.frame_params = fp;
        } else {
            throw std::invalid_argument("frame must give matrices or params");
        }
    }
    if (j.contains("integrator")) {
        const json& c = j["integrator"];
        if (c.contains("rel_tol")) s.integrator.rel_tol = c["rel_tol"].get<double>();
        if (c.contains("abs_tol")) s.integrator.abs_tol = c["abs_tol"].get<double>();
        if (c.contains("t_end")) s.integrator.t_end = c["t_end"].get<double>();
        if (c.contains("max_steps")) s.integrator.max_steps = c["max_steps"].get<std::size_t>();
        if (c.contains("initial_step")) s.integrator.initial_step = c["initial_step"].get<double>();
        if (!(s.integrator.rel_tol > 0.0) || !(s.integrator.abs_tol > 0.0) ||
            !(s.integrator.t_end > 0.0) || !(s.integrator.initial_step > 0.0)) {
            throw std::invalid_argument("integrator settings must be positive");
        }
    }
    if (j.contains("qc")) {
        const json& c = j["qc"];
        if (c.contains("epsilon")) s.qc.epsilon = c["epsilon"].get<double>();
        if (c.contains("horizon_closed_form"))
            s.qc.horizon_closed_form = c["horizon_closed_form"].get<double>();
        if (c.contains("horizon_numeric")) s.qc.horizon_numeric = c["horizon_numeric"].get<double>();
        if (!(s.qc.epsilon > 0.0) || !(s.qc.horizon_closed_form > 0.0) ||
            !(s.qc.horizon_numeric > 0.0)) {
            throw std::invalid_argument("qc settings must be positive");
        }
    }
    if (j.contains("output")) {
        const json& o = j["output"];
        if (o.contains("trajectory_csv")) s.output.trajectory_csv = o["trajectory_csv"].get<std::string>();
        if (o.contains("report_json")) s.output.report_json = o["report_json"].get<std::string>();
    }
    validate_inputs(s.cls, s.params, s.init);
    return s;
}

Scenario scenario_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
    json j;
    in >> j;
    return scenario_from_json(j);
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << j.dump(2) << '\n';
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& os, const std::vector<double>& times,
                          const std::vector<DiagonalMetric>& states,
                          const std::vector<double>* norms) {
    os << (norms ? "t,A,B,C,D,norm\n" : "t,A,B,C,D\n");
    for (std::size_t i = 0; i < times.size(); ++i) {
        os << format_real(times[i]);
        for (int k = 0; k < 4; ++k) os << ',' << format_real(states[i][k]);
        if (norms) os << ',' << format_real((*norms)[i]);
        os << '\n';
    }
}

bool operator==(const ResidualEntry& a, const ResidualEntry& b) {
    return a.name == b.name && a.value == b.value && a.kind == b.kind;
}
bool operator==(const DriftEntry& a, const DriftEntry& b) {
    return a.name == b.name && a.initial == b.initial && a.max_drift == b.max_drift &&
           a.relative == b.relative;
}
bool operator==(const AsymptoticsEntry& a, const AsymptoticsEntry& b) {
    return a.component == b.component && a.descriptor == b.descriptor && a.target == b.target &&
           a.residual == b.residual;
}
bool operator==(const FlowSection& a, const FlowSection& b) {
    return a.path == b.path && a.steps == b.steps && a.final_state == b.final_state &&
           a.drift == b.drift && a.asymptotics == b.asymptotics;
}
bool operator==(const QCSection& a, const QCSection& b) {
    return a.analytic_member == b.analytic_member && a.residuals == b.residuals &&
           a.numeric_decision == b.numeric_decision && a.tail == b.tail && a.horizon == b.horizon &&
           a.path == b.path;
}
bool operator==(const DimSection& a, const DimSection& b) {
    return a.probe == b.probe && a.expected == b.expected && a.pass == b.pass;
}
bool operator==(const CriterionResult& a, const CriterionResult& b) {
    return a.id == b.id && a.name == b.name && a.pass == b.pass && a.detail == b.detail;
}
bool operator==(const ValidateSection& a, const ValidateSection& b) {
    return a.criteria == b.criteria && a.all_pass == b.all_pass;
}
bool operator==(const RunReport& a, const RunReport& b) {
    return a.command == b.command && a.scenario == b.scenario && a.flow == b.flow && a.qc == b.qc &&
           a.dim == b.dim && a.validate == b.validate && a.wall_ms == b.wall_ms;
}

namespace {

json drift_to_json(const DriftEntry& d) {
    return {{"name", d.name}, {"initial", d.initial}, {"max_drift", d.max_drift}, {"relative", d.relative}};
}
DriftEntry drift_from_json(const json& j) {
    return {j["name"].get<std::string>(), j["initial"].get<double>(), j["max_drift"].get<double>(),
            j["relative"].get<bool>()};
}
json asym_to_json(const AsymptoticsEntry& a) {
    return {{"component", a.component}, {"descriptor", a.descriptor}, {"target", a.target},
            {"residual", a.residual}};
}
AsymptoticsEntry asym_from_json(const json& j) {
    return {j["component"].get<std::string>(), j["descriptor"].get<std::string>(),
            j["target"].get<double>(), j["residual"].get<double>()};
}
json residual_to_json(const ResidualEntry& r) {
    return {{"name", r.name}, {"value", r.value}, {"kind", r.kind}};
}
ResidualEntry residual_from_json(const json& j) {
    return {j["name"].get<std::string>(), j["value"].get<double>(), j["kind"].get<std::string>()};
}

}  // namespace

nlohmann::json report_to_json(const RunReport& r) {
    json j;
    j["command"] = r.command;
    j["scenario"] = r.scenario;
    j["wall_ms"] = r.wall_ms;
    if (r.flow) {
        json f;
        f["path"] = r.flow->path;
        f["steps"] = r.flow->steps;
        f["final_state"] = r.flow->final_state;
        f["conserved_drift"] = json::array();
        for (const auto& d : r.flow->drift) f["conserved_drift"].push_back(drift_to_json(d));
        f["asymptotics"] = json::array();
        for (const auto& a : r.flow->asymptotics) f["asymptotics"].push_back(asym_to_json(a));
        j["flow"] = f;
    }
    if (r.qc) {
        json q;
        q["analytic_member"] = r.qc->analytic_member;
        q["residuals"] = json::array();
        for (const auto& e : r.qc->residuals) q["residuals"].push_back(residual_to_json(e));
        q["numeric_decision"] = r.qc->numeric_decision;
        q["tail"] = json::array();
        for (const auto& [t, n] : r.qc->tail) q["tail"].push_back(json::array({t, n}));
        q["horizon"] = r.qc->horizon;
        q["path"] = r.qc->path;
        j["qc"] = q;
    }
    if (r.dim) {
        j["dim"] = {{"probe", r.dim->probe}, {"expected", r.dim->expected}, {"pass", r.dim->pass}};
    }
    if (r.validate) {
        json v;
        v["criteria"] = json::array();
        for (const auto& c : r.validate->criteria) {
            v["criteria"].push_back(
                {{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        }
        v["all_pass"] = r.validate->all_pass;
        j["validate"] = v;
    }
    return j;
}

RunReport report_from_json(const nlohmann::json& j) {
    RunReport r;
    r.command = j["command"].get<std::string>();
    r.scenario = j["scenario"];
    r.wall_ms = j["wall_ms"].get<double>();
    if (j.contains("flow")) {
        FlowSection f;
        f.path = j["flow"]["path"].get<std::string>();
        f.steps = j["flow"]["steps"].get<std::size_t>();
        f.final_state = j["flow"]["final_state"].get<std::vector<double>>();
        for (const auto& d : j["flow"]["conserved_drift"]) f.drift.push_back(drift_from_json(d));
        for (const auto& a : j["flow"]["asymptotics"]) f.asymptotics.push_back(asym_from_json(a));
        r.flow = std::move(f);
    }
    if (j.contains("qc")) {
        QCSection q;
        q.analytic_member = j["qc"]["analytic_member"].get<bool>();
        for (const auto& e : j["qc"]["residuals"]) q.residuals.push_back(residual_from_json(e));
        q.numeric_decision = j["qc"]["numeric_decision"].get<std::string>();
        for (const auto& s : j["qc"]["tail"]) {
            q.tail.emplace_back(s[0].get<double>(), s[1].get<double>());
        }
        q.horizon = j["qc"]["horizon"].get<double>();
        q.path = j["qc"]["path"].get<std::string>();
        r.qc = std::move(q);
    }
    if (j.contains("dim")) {
        r.dim = DimSection{j["dim"]["probe"].get<int>(), j["dim"]["expected"].get<int>(),
                           j["dim"]["pass"].get<bool>()};
    }
    if (j.contains("validate")) {
        ValidateSection v;
        for (const auto& c : j["validate"]["criteria"]) {
            v.criteria.push_back({c["id"].get<int>(), c["name"].get<std::string>(),
                                  c["pass"].get<bool>(), c["detail"].get<std::string>()});
        }
        v.all_pass = j["validate"]["all_pass"].get<bool>();
        r.validate = std::move(v);
    }
    return r;
}

}  // namespace ricci
