#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "ricci/scenario.hpp"

using namespace ricci;
using testutil::Rng;

namespace {

ClassParams params_for(ClassId id, Rng& rng) {
    ClassParams p;
    if (id == ClassId::A2iv) p.k = rng.uniform(1.5, 3.0);
    if (id == ClassId::A3) p.k = rng.uniform(0.5, 2.0);
    if (id == ClassId::A7ii) p.a2 = rng.uniform(-0.8, 0.8);
    if (id == ClassId::A9ii) p.a3 = rng.uniform(0.5, 2.0);
    return p;
}

InitialData init_for(ClassId id, const ClassParams& p, Rng& rng) {
    InitialData d{rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0),
                  rng.uniform(0.5, 2.0)};
    if (id == ClassId::A7ii) d.lambda2 = (1.0 - *p.a2 * *p.a2) * d.lambda3;
    if (id == ClassId::A9ii) d.lambda2 = d.lambda1;
    return d;
}

Scenario random_scenario(Rng& rng) {
    Scenario s;
    s.cls = all_class_ids[static_cast<std::size_t>(rng.gen() % all_class_ids.size())];
    s.params = params_for(s.cls, rng);
    s.init = init_for(s.cls, s.params, rng);
    if (rng.gen() % 2 == 0) s.init_bar = init_for(s.cls, s.params, rng);
    const int frame_mode = static_cast<int>(rng.gen() % 3);
    if (frame_mode == 1 && frame_arity(s.cls) > 0) {
        FrameParams f = zero_frame(s.cls);
        for (double& v : f.values) v = rng.uniform(-1.0, 1.0);
        s.frame_params = f;
    } else if (frame_mode == 2) {
        s.frame_matrices = {Mat4::identity(), Mat4::identity()};
    }
    s.integrator.rel_tol = rng.uniform(1e-12, 1e-6);
    s.integrator.t_end = rng.uniform(1.0, 1000.0);
    s.qc.epsilon = rng.uniform(1e-3, 1e-1);
    s.output.trajectory_csv = "out" + std::to_string(rng.gen() % 100) + ".csv";
    return s;
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("scenario JSON round-trips losslessly") {
    Rng rng(401);
    for (int trial = 0; trial < 100; ++trial) {
        const Scenario s = random_scenario(rng);
        const Scenario back = scenario_from_json(scenario_to_json(s));
        CHECK(back == s);
    }
}

TEST_CASE("scenario validation rejects malformed input") {
    nlohmann::json j;
    j["class"] = "A11";
    j["init"] = {1, 2, 3, 4};
    CHECK_THROWS_AS(scenario_from_json(j), std::invalid_argument);

    j["class"] = "A5";
    j["init"] = {1, 2, 3};
    CHECK_THROWS_AS(scenario_from_json(j), std::invalid_argument);

    j["init"] = {1, 2, 3, 4};
    CHECK_NOTHROW(scenario_from_json(j));

    j["frame"] = {{"params", {0.1, 0.2, 0.3, 0.4}},
                  {"lambda", nlohmann::json::array()}};
    CHECK_THROWS_AS(scenario_from_json(j), std::invalid_argument);

    j["frame"] = {{"params", {0.1, 0.2}}};  // wrong arity for this class
    CHECK_THROWS_AS(scenario_from_json(j), std::invalid_argument);

    j.erase("frame");
    j["integrator"] = {{"rel_tol", -1.0}};
    CHECK_THROWS_AS(scenario_from_json(j), std::invalid_argument);
    j.erase("integrator");

    j["class"] = "A7ii";
    j["params"] = {{"a2", 0.5}};
    j["init"] = {1, 1, 1, 1};  // violates lambda2 = (1-a2^2) lambda3
    CHECK_THROWS_AS(scenario_from_json(j), std::invalid_argument);
}

TEST_CASE("missing frame spec resolves to the zero frame") {
    nlohmann::json j;
    j["class"] = "A8";
    j["init"] = {1, 2, 3, 4};
    const Scenario s = scenario_from_json(j);
    const FrameParams f = resolve_frame(s);
    CHECK(f.values == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("frame matrices resolve through the reduced parameters") {
    nlohmann::json j;
    j["class"] = "A2iv";
    j["params"] = {{"k", 2.0}};
    j["init"] = {1, 1, 1, 1};
    j["frame"] = {
        {"lambda", {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {1, 2, 3, 1}}},
        {"lambda_prime", {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0.5, 1, 1, 1}}},
    };
    const FrameParams f = resolve_frame(scenario_from_json(j));
    REQUIRE(f.values.size() == 3);
    CHECK(f.values[0] == doctest::Approx(0.5));
    CHECK(f.values[1] == doctest::Approx(1.0));
    CHECK(f.values[2] == doctest::Approx(2.0));
}

TEST_CASE("trajectory CSV is byte-stable") {
    const std::vector<double> times{0.0, 0.5, 1.0};
    const std::vector<DiagonalMetric> states{{1, 1, 1, 1}, {1.25, 0.8, 1, 1.25}, {2, 0.5, 1, 2}};
    std::ostringstream a, b;
    write_trajectory_csv(a, times, states);
    write_trajectory_csv(b, times, states);
    CHECK(a.str() == b.str());
    CHECK(a.str().substr(0, 10) == "t,A,B,C,D\n");
}

TEST_CASE("trajectory CSV carries the norm column when asked") {
    const std::vector<double> times{0.0, 1.0};
    const std::vector<DiagonalMetric> states{{1, 1, 1, 1}, {2, 0.5, 1, 2}};
    const std::vector<double> norms{0.0, 0.125};
    std::ostringstream os;
    write_trajectory_csv(os, times, states, &norms);
    CHECK(os.str().substr(0, 15) == "t,A,B,C,D,norm\n");
    CHECK(os.str().find("0.125") != std::string::npos);
}

TEST_CASE("17 significant digits round-trip through the text form") {
    const double v = 0.1 + 0.2;  // not representable exactly
    CHECK(std::stod(format_real(v)) == v);
    CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("run reports round-trip losslessly") {
    RunReport r;
    r.command = "qc";
    r.scenario = nlohmann::json{{"class", "A5"}};
    QCSection q;
    q.analytic_member = true;
    q.residuals.push_back({"L1*L2", 1.1e-16, "equality-on-initial-data"});
    q.numeric_decision = "Converges";
    q.tail = {{1.0, 0.25}, {2.0, 0.125}};
    q.horizon = 1e5;
    q.path = "numeric";
    r.qc = q;
    r.wall_ms = 12.5;
    const RunReport back = report_from_json(report_to_json(r));
    CHECK(back == r);

    RunReport f;
    f.command = "flow";
    f.scenario = nlohmann::json{{"class", "A7i"}};
    FlowSection section;
    section.path = "numeric";
    section.steps = 42;
    section.final_state = {1.0, 2.0, 3.0, 4.0};
    section.drift.push_back({"BCD^2", 96.0, 3.2e-10, true});
    section.asymptotics.push_back({"A", "LinearGrowth", 4.0, 1e-3});
    f.flow = section;
    const RunReport back2 = report_from_json(report_to_json(f));
    CHECK(back2 == f);

    RunReport d;
    d.command = "dim";
    d.scenario = nlohmann::json::object();
    d.dim = DimSection{3, 3, true};
    CHECK(report_from_json(report_to_json(d)) == d);

    RunReport v;
    v.command = "validate";
    v.scenario = nlohmann::json::object();
    ValidateSection vs;
    vs.criteria.push_back({1, "closed-form oracle equivalence", true, "max rel err 1e-9"});
    vs.all_pass = true;
    v.validate = vs;
    CHECK(report_from_json(report_to_json(v)) == v);
}

}  // TEST_SUITE
