#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "ricci/quasiconv.hpp"

using namespace ricci;

namespace {

ClassParams with_k(double k) {
    ClassParams p;
    p.k = k;
    return p;
}
ClassParams with_a2(double a2) {
    ClassParams p;
    p.a2 = a2;
    return p;
}
ClassParams with_a3(double a3) {
    ClassParams p;
    p.a3 = a3;
    return p;
}

struct ClassCase {
    ClassId cls;
    ClassParams params;
    InitialData init;
};

std::vector<ClassCase> valid_cases() {
    return {
        {ClassId::A1, {}, {1, 2, 3, 4}},
        {ClassId::A2iv, with_k(2.0), {1, 2, 3, 4}},
        {ClassId::A3, with_k(1.0), {1, 2, 5, 1}},
        {ClassId::A4, {}, {1, 1, 1, 1}},
        {ClassId::A5, {}, {2, 3, 1, 1}},
        {ClassId::A6, {}, {1, 1, 1, 1}},
        {ClassId::A7i, {}, {1, 2, 3, 4}},
        {ClassId::A7ii, with_a2(0.5), {1, 0.75, 1, 1}},
        {ClassId::A8, {}, {1, 1, 1, 1}},
        {ClassId::A9ii, with_a3(1.0), {1, 1, 2, 1}},
    };
}

}  // namespace

TEST_SUITE("quasiconv") {

TEST_CASE("identical data with a zero frame is always a member") {
    for (const ClassCase& c : valid_cases()) {
        const auto r = analytic_membership(c.cls, c.params, c.init, c.init, zero_frame(c.cls));
        CHECK(r.member);
        for (const MembershipResidual& e : r.residuals) CHECK(std::abs(e.value) < 1e-12);
    }
}

TEST_CASE("product-constrained class accepts a balanced pair") {
    const auto r = analytic_membership(ClassId::A3, with_k(1.0), {1, 2, 5, 1}, {2, 1, 5, 7},
                                       zero_frame(ClassId::A3));
    CHECK(r.member);
}

TEST_CASE("scaling family accepts k-scaled data and rejects a frame offset") {
    FrameParams frame = zero_frame(ClassId::A4);
    const InitialData init{1, 1, 1, 1};
    const InitialData bar{2, 0.5, 1, 2};
    CHECK(analytic_membership(ClassId::A4, {}, init, bar, frame).member);
    frame.values[3] = 0.1;  // excluded d
    const auto r = analytic_membership(ClassId::A4, {}, init, bar, frame);
    CHECK(!r.member);
    bool has_exclusion = false;
    for (const MembershipResidual& e : r.residuals) {
        if (e.kind == ConstraintKind::FrameExclusion && e.name == "d") {
            has_exclusion = true;
            CHECK(e.value == 0.1);
        }
    }
    CHECK(has_exclusion);
}

TEST_CASE("weighted-product constraint accepts 18 = 18") {
    const auto r = analytic_membership(ClassId::A7i, {}, {5, 1, 2, 3}, {7, 2, 1, 3},
                                       zero_frame(ClassId::A7i));
    CHECK(r.member);
}

TEST_CASE("numeric verdict for identical metrics is Converges with a zero tail") {
    for (const ClassCase& c : valid_cases()) {
        const auto v = numeric_membership(c.cls, c.params, c.init, c.init, zero_frame(c.cls));
        CHECK(v.decision == Decision::Converges);
        for (const auto& [t, n] : v.tail) CHECK(n <= 1e-12);
    }
}

TEST_CASE("free fourth coefficient converges on the exact-solution path") {
    const auto v = numeric_membership(ClassId::A2iv, with_k(2.0), {1, 1, 1, 1}, {1, 1, 1, 5},
                                      zero_frame(ClassId::A2iv));
    CHECK(v.decision == Decision::Converges);
    CHECK(v.path == EvalPath::ClosedForm);
    // the tail is |D - Dbar|/D = 4/(1 + 28 t)
    for (const auto& [t, n] : v.tail) {
        CHECK(n == doctest::Approx(4.0 / (1.0 + 28.0 * t)).epsilon(1e-9));
    }
}

TEST_CASE("scaled first coefficient diverges with a unit tail") {
    const auto v = numeric_membership(ClassId::A2iv, with_k(2.0), {1, 1, 1, 1}, {2, 1, 1, 1},
                                      zero_frame(ClassId::A2iv));
    CHECK(v.decision == Decision::Diverges);
    CHECK(v.tail.back().second == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("excluded frame offset diverges under integration") {
    FrameParams frame = zero_frame(ClassId::A8);
    frame.values[0] = 0.5;
    const auto v = numeric_membership(ClassId::A8, {}, {1, 1, 1, 1}, {1, 1, 1, 1}, frame);
    CHECK(v.path == EvalPath::Numeric);
    CHECK(v.decision == Decision::Diverges);
    CHECK(!analytic_membership(ClassId::A8, {}, {1, 1, 1, 1}, {1, 1, 1, 1}, frame).member);
}

TEST_CASE("probe recovers every class dimension") {
    for (const ClassCase& c : valid_cases()) {
        CHECK(dimension_probe(c.cls, c.params, c.init) == class_dimension(c.cls));
    }
}

TEST_CASE("norm timeseries vanishes for identical data") {
    for (const auto& [t, n] : norm_timeseries(ClassId::A5, {}, {2, 3, 1, 1}, {2, 3, 1, 1},
                                              zero_frame(ClassId::A5), {0.0, 1.0, 10.0})) {
        CHECK(n == 0.0);
    }
}

TEST_CASE("norm at t = 0 is the plain coefficient mismatch") {
    const auto series = norm_timeseries(ClassId::A5, {}, {1, 1, 1, 1}, {1, 1, 1, 2},
                                        zero_frame(ClassId::A5), {0.0});
    REQUIRE(series.size() == 1);
    CHECK(series[0].second == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("norm with a frame offset matches the displayed two-term value") {
    FrameParams frame = zero_frame(ClassId::A2iv);
    frame.values = {1.0, 0.0, 0.0};
    const auto series = norm_timeseries(ClassId::A2iv, with_k(2.0), {1, 1, 1, 1}, {1, 1, 1, 1},
                                        frame, {1000.0});
    REQUIRE(series.size() == 1);
    const double d = 1.0 + 28.0 * 1000.0;
    const double expected = std::sqrt(2.0 / d + 1.0 / (d * d));
    CHECK(series[0].second == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("zero-frame norm reduces to the four diagonal ratios") {
    testutil::Rng rng(301);
    const InitialData init{1, 2, 3, 4};
    const InitialData bar{1.5, 1.7, 3.2, 4.4};
    const std::vector<double> grid{0.0, 0.5, 1.0, 2.0, 5.0};
    const auto series =
        norm_timeseries(ClassId::A7i, {}, init, bar, zero_frame(ClassId::A7i), grid);
    // independent evaluation from two integrations
    IntegratorConfig cfg;
    cfg.t_end = 5.0;
    const Trajectory tg = integrate(ClassId::A7i, {}, init, cfg);
    const Trajectory tb = integrate(ClassId::A7i, {}, bar, cfg);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const DiagonalMetric g = tg.evaluate_at(grid[i]);
        const DiagonalMetric b = tb.evaluate_at(grid[i]);
        double s = 0.0;
        for (int k = 0; k < 4; ++k) {
            const double r = (g[k] - b[k]) / g[k];
            s += r * r;
        }
        CHECK(std::abs(series[i].second - std::sqrt(s)) <= 1e-12 * std::max(1.0, std::sqrt(s)));
    }
}

TEST_CASE("constraint residuals are symmetric on satisfying pairs") {
    struct Pair {
        ClassId cls;
        ClassParams params;
        InitialData a;
        InitialData b;
    };
    const double sqrt13 = std::sqrt(13.0);
    const std::vector<Pair> pairs = {
        {ClassId::A3, with_k(1.0), {1, 2, 5, 1}, {2, 1, 5, 7}},
        {ClassId::A4, {}, {1, 1, 1, 1}, {2, 0.5, 1, 2}},
        {ClassId::A5, {}, {2, 3, 1, 1}, {3, 2, 1, 9}},
        {ClassId::A6, {}, {1, 1, 1, 1}, {2, 1, 0.5, 4}},
        {ClassId::A7i, {}, {5, 1, 2, 3}, {7, 2, 1, 3}},
        {ClassId::A8, {}, {1, 1, 1, 1}, {0.8, 2, 0.5, 1}},
        {ClassId::A9ii, with_a3(1.0), {1, 1, 2, 1}, {2, 2, (1.0 + sqrt13) / 3.0, 0.5}},
    };
    for (const Pair& p : pairs) {
        const auto fwd = analytic_membership(p.cls, p.params, p.a, p.b, zero_frame(p.cls));
        const auto rev = analytic_membership(p.cls, p.params, p.b, p.a, zero_frame(p.cls));
        CHECK(fwd.member);
        CHECK(rev.member);
    }
}

TEST_CASE("frame differences shift the class parameter of the second metric") {
    FrameParams f = zero_frame(ClassId::A7ii);
    f.values[1] = 0.2;
    CHECK(*bar_class_params(ClassId::A7ii, with_a2(0.5), f).a2 == doctest::Approx(0.3));
    FrameParams g = zero_frame(ClassId::A9ii);
    g.values[0] = -0.25;
    CHECK(*bar_class_params(ClassId::A9ii, with_a3(1.0), g).a3 == doctest::Approx(1.25));
}

TEST_CASE("derived orbit constant is conserved along an integrated trajectory") {
    IntegratorConfig cfg;
    cfg.t_end = 1000.0;
    const InitialData init{1, 1, 2, 1};
    const Trajectory traj = integrate(ClassId::A9ii, with_a3(1.0), init, cfg);
    const double c1 = a9ii_c1(init);
    CHECK(c1 == doctest::Approx(0.75));
    for (const DiagonalMetric& s : traj.states()) {
        const double v = (s.a + s.c) / (s.a * s.c * s.c);
        CHECK(std::abs(v - c1) <= 1e-8 * c1);
    }
    // the C(A) relation holds along the orbit
    for (double t : {1.0, 10.0, 100.0}) {
        const DiagonalMetric s = traj.evaluate_at(t);
        CHECK(s.c == doctest::Approx(a9ii_c_from_a(s.a, c1)).epsilon(1e-8));
    }
}

}  // TEST_SUITE
