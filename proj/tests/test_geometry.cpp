#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "helpers.hpp"
#include "ricci/geometry.hpp"

using namespace ricci;
using testutil::Rng;

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

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("trivial class has a vanishing right-hand side") {
    const auto d = rhs(ClassId::A1, {}, {1.7, 0.3, 2.9, 4.2});
    for (double v : d) CHECK(v == 0.0);
}

TEST_CASE("right-hand sides at the unit state") {
    const auto a5 = rhs(ClassId::A5, {}, {1, 1, 1, 1});
    CHECK(a5[0] == doctest::Approx(1.0));
    CHECK(a5[1] == doctest::Approx(-1.0));
    CHECK(a5[2] == 0.0);
    CHECK(a5[3] == doctest::Approx(4.0));

    const auto a7i = rhs(ClassId::A7i, {}, {1, 1, 1, 1});
    CHECK(a7i[0] == doctest::Approx(4.0));
    CHECK(a7i[1] == doctest::Approx(1.0));
    CHECK(a7i[2] == doctest::Approx(1.0));
    CHECK(a7i[3] == doctest::Approx(-1.0));

    const auto a2 = rhs(ClassId::A2iv, with_k(2.0), {5, 6, 7, 8});
    CHECK(a2[0] == 0.0);
    CHECK(a2[1] == 0.0);
    CHECK(a2[2] == 0.0);
    CHECK(a2[3] == doctest::Approx(28.0));
}

TEST_CASE("right-hand side rejects non-positive states") {
    CHECK_THROWS_AS(rhs(ClassId::A5, {}, {1, 0, 1, 1}), std::domain_error);
    CHECK_THROWS_AS(rhs(ClassId::A7i, {}, {1, 1, -2, 1}), std::domain_error);
}

TEST_CASE("right-hand side stays finite across magnitudes") {
    Rng rng(201);
    for (ClassId id : all_class_ids) {
        ClassParams params;
        if (id == ClassId::A2iv) params = with_k(2.0);
        if (id == ClassId::A3) params = with_k(1.0);
        if (id == ClassId::A7ii) params = with_a2(0.5);
        if (id == ClassId::A9ii) params = with_a3(1.0);
        for (int trial = 0; trial < 100; ++trial) {
            DiagonalMetric s{std::pow(10.0, rng.uniform(-8, 8)), std::pow(10.0, rng.uniform(-8, 8)),
                             std::pow(10.0, rng.uniform(-8, 8)), std::pow(10.0, rng.uniform(-8, 8))};
            for (double v : rhs(id, params, s)) CHECK(!std::isnan(v));
        }
    }
}

TEST_CASE("closed forms at t = 1 from the unit state") {
    const auto a2 = closed_form(ClassId::A2iv, with_k(2.0), {1, 1, 1, 1}, 1.0);
    REQUIRE(a2.kind == ClosedFormKind::Full);
    CHECK(a2.state->a == 1.0);
    CHECK(a2.state->d == doctest::Approx(29.0));

    const auto a4 = closed_form(ClassId::A4, {}, {1, 1, 1, 1}, 1.0);
    REQUIRE(a4.kind == ClosedFormKind::Full);
    CHECK(a4.state->a == doctest::Approx(std::cbrt(4.0)));
    CHECK(a4.state->b == doctest::Approx(1.0 / std::cbrt(4.0)));
    CHECK(a4.state->c == 1.0);
    CHECK(a4.state->d == doctest::Approx(std::cbrt(4.0)));

    const auto a6 = closed_form(ClassId::A6, {}, {1, 1, 1, 1}, 1.0);
    REQUIRE(a6.kind == ClosedFormKind::Full);
    CHECK(a6.state->a == doctest::Approx(std::cbrt(4.0)));
    CHECK(a6.state->b == doctest::Approx(1.0));
    CHECK(a6.state->c == doctest::Approx(1.0 / std::cbrt(4.0)));
    CHECK(a6.state->d == doctest::Approx(std::pow(4.0, 2.0 / 3.0)));

    const auto a7ii = closed_form(ClassId::A7ii, with_a2(0.0), {1, 1, 1, 1}, 1.0);
    REQUIRE(a7ii.kind == ClosedFormKind::Full);
    CHECK(a7ii.state->a == doctest::Approx(5.0));
    CHECK(a7ii.state->b == doctest::Approx(std::cbrt(4.0)));
    CHECK(a7ii.state->c == doctest::Approx(std::cbrt(4.0)));
    CHECK(a7ii.state->d == doctest::Approx(1.0 / std::cbrt(4.0)));
}

TEST_CASE("closed-form availability per class") {
    CHECK(closed_form(ClassId::A5, {}, {1, 2, 3, 4}, 1.0).kind == ClosedFormKind::Unavailable);
    CHECK(closed_form(ClassId::A8, {}, {1, 2, 3, 4}, 1.0).kind == ClosedFormKind::Unavailable);
    CHECK(closed_form(ClassId::A3, with_k(1.0), {1, 2, 3, 4}, 1.0).kind ==
          ClosedFormKind::Unavailable);
    CHECK(closed_form(ClassId::A3, with_k(1.0), {2, 2, 3, 4}, 1.0).kind == ClosedFormKind::Full);

    const auto a7i = closed_form(ClassId::A7i, {}, {1, 2, 3, 4}, 1.0);
    REQUIRE(a7i.kind == ClosedFormKind::Partial);
    CHECK(*a7i.d_component == doctest::Approx(4.0 * std::cbrt(1.0 / (1.0 + 3.0 * 4.0 / 6.0))));

    const auto a9 = closed_form(ClassId::A9ii, with_a3(2.0), {1, 1, 2, 5}, 3.0);
    REQUIRE(a9.kind == ClosedFormKind::Partial);
    CHECK(*a9.d_component == doctest::Approx(5.0 + 4.0 * 4.0 * 3.0));
}

TEST_CASE("closed form rejects negative times") {
    CHECK_THROWS_AS(closed_form(ClassId::A4, {}, {1, 1, 1, 1}, -0.5), std::invalid_argument);
}

TEST_CASE("closed-form derivative matches the right-hand side") {
    // central finite differences over random base points; this is the oracle
    // that freezes the reconstructed A4 system
    Rng rng(202);
    struct Case {
        ClassId cls;
        ClassParams params;
    };
    const Case cases[] = {
        {ClassId::A1, {}},          {ClassId::A2iv, with_k(-2.0)}, {ClassId::A3, with_k(1.5)},
        {ClassId::A4, {}},          {ClassId::A6, {}},             {ClassId::A7ii, with_a2(0.5)},
        {ClassId::A7ii, with_a2(0.0)},
    };
    for (const Case& c : cases) {
        for (int trial = 0; trial < 200; ++trial) {
            InitialData init{rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0),
                             rng.uniform(0.5, 2.0)};
            if (c.cls == ClassId::A3) init.lambda2 = init.lambda1;
            if (c.cls == ClassId::A7ii) {
                const double a2 = *c.params.a2;
                init.lambda2 = (1.0 - a2 * a2) * init.lambda3;
            }
            const double t = rng.uniform(0.1, 50.0);
            const double h = 1e-6 * std::max(1.0, t);
            const DiagonalMetric up = *closed_form(c.cls, c.params, init, t + h).state;
            const DiagonalMetric dn = *closed_form(c.cls, c.params, init, t - h).state;
            const DiagonalMetric at = *closed_form(c.cls, c.params, init, t).state;
            const auto derivative = rhs(c.cls, c.params, at);
            for (int i = 0; i < 4; ++i) {
                const double fd = (up[i] - dn[i]) / (2.0 * h);
                const double scale = std::max({std::abs(derivative[static_cast<std::size_t>(i)]),
                                               std::abs(fd), 1e-3});
                CHECK(std::abs(fd - derivative[static_cast<std::size_t>(i)]) <= 1e-6 * scale);
            }
        }
    }
}

TEST_CASE("conserved sets carry the stated initial values") {
    const auto a5 = conserved(ClassId::A5, {}, {2, 3, 1, 1});
    REQUIRE(a5.size() == 2);
    CHECK(a5[0].name == "AB");
    CHECK(a5[0].initial == doctest::Approx(6.0));
    CHECK(a5[1].name == "C");
    CHECK(a5[1].initial == doctest::Approx(1.0));

    const auto a7i = conserved(ClassId::A7i, {}, {1, 2, 3, 4});
    REQUIRE(a7i.size() == 2);
    CHECK(a7i[0].name == "BCD^2");
    CHECK(a7i[0].initial == doctest::Approx(96.0));
    CHECK(a7i[1].name == "AD(B-C)");
    CHECK(a7i[1].initial == doctest::Approx(-4.0));

    const auto a9 = conserved(ClassId::A9ii, with_a3(1.0), {1, 1, 2, 1});
    REQUIRE(a9.size() == 1);
    CHECK(a9[0].name == "(A+C)/(AC^2)");
    CHECK(a9[0].initial == doctest::Approx(0.75));

    // evaluators reproduce the initial value on the exact initial state
    for (const auto& q : a7i) CHECK(q.eval({1, 2, 3, 4}) == q.initial);
}

TEST_CASE("class dimensions are the frozen table") {
    CHECK(class_dimension(ClassId::A1) == 0);
    CHECK(class_dimension(ClassId::A2iv) == 1);
    CHECK(class_dimension(ClassId::A3) == 2);
    CHECK(class_dimension(ClassId::A4) == 1);
    CHECK(class_dimension(ClassId::A5) == 2);
    CHECK(class_dimension(ClassId::A6) == 2);
    CHECK(class_dimension(ClassId::A7i) == 3);
    CHECK(class_dimension(ClassId::A7ii) == 2);
    CHECK(class_dimension(ClassId::A8) == 2);
    CHECK(class_dimension(ClassId::A9ii) == 2);
}

TEST_CASE("asymptotic profiles") {
    const auto a3 = asymptotic_profile(ClassId::A3, with_k(1.0), {1, 4, 5, 1});
    REQUIRE(a3.size() == 4);
    CHECK(a3[0].kind == AsymptoticKind::Limit);
    CHECK(a3[0].value == doctest::Approx(2.0));
    CHECK(a3[1].value == doctest::Approx(2.0));
    CHECK(a3[2].kind == AsymptoticKind::Limit);
    CHECK(a3[2].value == doctest::Approx(5.0));
    CHECK(a3[3].kind == AsymptoticKind::GrowthPower);
    CHECK(a3[3].value == doctest::Approx(1.0));

    const auto a8 = asymptotic_profile(ClassId::A8, {}, {1, 1, 1, 1});
    CHECK(a8[0].kind == AsymptoticKind::Limit);
    CHECK(a8[0].value == doctest::Approx(1.0));  // k4 = 2

    const auto a9 = asymptotic_profile(ClassId::A9ii, with_a3(1.0), {1, 1, 2, 1});
    CHECK(a9[2].kind == AsymptoticKind::Limit);
    CHECK(a9[2].value == doctest::Approx(1.0 / std::sqrt(0.75)));

    const auto a5 = asymptotic_profile(ClassId::A5, {}, {1, 1, 1, 1});
    CHECK(a5[0].kind == AsymptoticKind::DivergesToInfinity);
    CHECK(a5[1].kind == AsymptoticKind::DecaysToZero);
    CHECK(a5[2].kind == AsymptoticKind::Limit);
    CHECK(a5[3].kind == AsymptoticKind::DivergesToInfinity);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(validate_inputs(ClassId::A2iv, with_k(0.0), {1, 1, 1, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_inputs(ClassId::A2iv, with_k(1.0), {1, 1, 1, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_inputs(ClassId::A2iv, with_k(-0.5), {1, 1, 1, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_inputs(ClassId::A2iv, {}, {1, 1, 1, 1}), std::invalid_argument);
    CHECK_NOTHROW(validate_inputs(ClassId::A2iv, with_k(2.0), {1, 1, 1, 1}));

    CHECK_THROWS_AS(validate_inputs(ClassId::A7ii, with_a2(1.0), {1, 1, 1, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_inputs(ClassId::A7ii, with_a2(0.5), {1, 1, 1, 1}),
                    std::invalid_argument);  // lambda2 != 0.75 lambda3
    CHECK_NOTHROW(validate_inputs(ClassId::A7ii, with_a2(0.5), {1, 0.75, 1, 1}));

    CHECK_THROWS_AS(validate_inputs(ClassId::A9ii, with_a3(0.0), {1, 1, 1, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_inputs(ClassId::A9ii, with_a3(1.0), {1, 2, 1, 1}),
                    std::invalid_argument);
    CHECK_NOTHROW(validate_inputs(ClassId::A9ii, with_a3(1.0), {1, 1, 2, 1}));

    CHECK_THROWS_AS(validate_inputs(ClassId::A5, {}, {0.0, 1, 1, 1}), std::invalid_argument);
}

TEST_CASE("class ids parse and format round-trip") {
    for (ClassId id : all_class_ids) {
        const auto parsed = parse_class_id(to_string(id));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == id);
    }
    CHECK(!parse_class_id("A10").has_value());
    CHECK(!parse_class_id("").has_value());
}

}  // TEST_SUITE
