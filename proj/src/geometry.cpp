#include "ricci/geometry.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ricci {

namespace {

constexpr double kDataTol = 1e-12;  // relative tolerance on initial-data identities

double require_param(const std::optional<double>& p, const char* name, ClassId id) {
    if (!p) {
        std::ostringstream os;
        os << "class " << to_string(id) << " requires parameter " << name;
        throw std::invalid_argument(os.str());
    }
    return *p;
}

bool rel_equal(double x, double y) {
    return std::abs(x - y) <= kDataTol * std::max(std::abs(x), std::abs(y));
}

double cbrt_pow(double base, double third_exponent) {
    // base^(third_exponent/3) for positive base
    return std::pow(base, third_exponent / 3.0);
}

}  // namespace

void validate_inputs(ClassId id, const ClassParams& params, const InitialData& init) {
    for (int i = 0; i < 4; ++i) {
        if (!(init[i] > 0.0) || !std::isfinite(init[i])) {
            throw std::invalid_argument("initial data must be strictly positive and finite");
        }
    }
    switch (id) {
        case ClassId::A2iv: {
            const double k = require_param(params.k, "k", id);
            if (k == 0.0 || k == 1.0 || k == -0.5) {
                throw std::invalid_argument("A2iv requires k not in {0, 1, -1/2}");
            }
            break;
        }
        case ClassId::A3:
            require_param(params.k, "k", id);
            break;
        case ClassId::A7ii: {
            const double a2 = require_param(params.a2, "a2", id);
            if (!(a2 * a2 < 1.0)) {
                throw std::invalid_argument("A7ii requires a2^2 < 1");
            }
            if (!rel_equal(init.lambda2, (1.0 - a2 * a2) * init.lambda3)) {
                throw std::invalid_argument(
                    "A7ii requires lambda2 = (1 - a2^2) lambda3 for a consistent solution");
            }
            break;
        }
        case ClassId::A9ii: {
            const double a3 = require_param(params.a3, "a3", id);
            if (a3 == 0.0) {
                throw std::invalid_argument("A9ii requires a3 != 0");
            }
            if (!rel_equal(init.lambda1, init.lambda2)) {
                throw std::invalid_argument("A9ii requires lambda1 = lambda2");
            }
            break;
        }
        default:
            break;
    }
}

std::array<double, 4> rhs(ClassId id, const ClassParams& params, const DiagonalMetric& state) {
    require_valid(state);
    const double A = state.a, B = state.b, C = state.c, D = state.d;
    switch (id) {
        case ClassId::A1:
            return {0.0, 0.0, 0.0, 0.0};
        case ClassId::A2iv: {
            const double k = require_param(params.k, "k", id);
            return {0.0, 0.0, 0.0, 4.0 * (k * k + k + 1.0)};
        }
        case ClassId::A3: {
            const double k = require_param(params.k, "k", id);
            return {-(A * A - B * B) / (B * D), -(B * B - A * A) / (A * D), 0.0,
                    ((A - B) * (A - B) + 12.0 * k * k * A * B) / (A * B)};
        }
        case ClassId::A4:
            // derivative of the exact solution written in state variables,
            // using AB and D/A constant along the flow
            return {B / D, -B * B / (A * D), 0.0, B / A};
        case ClassId::A5:
            return {B / D, -B * B / (A * D), 0.0, 3.0 + B / A};
        case ClassId::A6:
            return {B / D, (A * C - B * B) / (A * D), -C * C / (B * D), B / A + C / B};
        case ClassId::A7i:
            return {B / C + C / B + 2.0, C / A + D / C - B * B / (A * C),
                    B / A + D / B - C * C / (A * B), -D * D / (B * C)};
        case ClassId::A7ii: {
            const double a2 = require_param(params.a2, "a2", id);
            const double q = 1.0 - a2 * a2;
            return {(B * B + 2.0 * (1.0 + a2 * a2) * B * C + q * q * C * C) / (B * C),
                    (A * D - B * B + q * q * C * C) / (A * C),
                    (A * D + B * B - q * q * C * C) / (A * B), -D * D / (B * C)};
        }
        case ClassId::A8:
            return {C / B + B / C - 2.0, -B * B / (A * C) + C / A + D / C,
                    -C * C / (A * B) + B / A + D / B, -D * D / (B * C)};
        case ClassId::A9ii: {
            const double a3 = require_param(params.a3, "a3", id);
            const double dA = C / A + 2.0;
            return {dA, dA, -C * C / (A * A), 4.0 * a3 * a3};
        }
    }
    return {0.0, 0.0, 0.0, 0.0};
}

ClosedForm closed_form(ClassId id, const ClassParams& params, const InitialData& init, double t) {
    if (t < 0.0) throw std::invalid_argument("closed form requires t >= 0");
    validate_inputs(id, params, init);
    const double l1 = init.lambda1, l2 = init.lambda2, l3 = init.lambda3, l4 = init.lambda4;
    ClosedForm out;
    switch (id) {
        case ClassId::A1:
            out.kind = ClosedFormKind::Full;
            out.state = DiagonalMetric{l1, l2, l3, l4};
            return out;
        case ClassId::A2iv: {
            const double k = *params.k;
            out.kind = ClosedFormKind::Full;
            out.state = DiagonalMetric{l1, l2, l3, l4 + 4.0 * (k * k + k + 1.0) * t};
            return out;
        }
        case ClassId::A3: {
            if (!rel_equal(l1, l2)) return out;  // Unavailable
            const double k = *params.k;
            out.kind = ClosedFormKind::Full;
            out.state = DiagonalMetric{l1, l2, l3, l4 + 12.0 * k * k * t};
            return out;
        }
        case ClassId::A4: {
            const double u = 1.0 + 3.0 * l2 / (l1 * l4) * t;
            out.kind = ClosedFormKind::Full;
            out.state = DiagonalMetric{l1 * cbrt_pow(u, 1.0), l2 * cbrt_pow(u, -1.0), l3,
                                       l4 * cbrt_pow(u, 1.0)};
            return out;
        }
        case ClassId::A5:
            return out;
        case ClassId::A6: {
            const double e0 = l2 / (l1 * l4);
            const double f0 = l3 / (l2 * l4);
            const double u = 3.0 * e0 * t + 1.0;
            const double v = 3.0 * f0 * t + 1.0;
            out.kind = ClosedFormKind::Full;
            out.state = DiagonalMetric{l1 * cbrt_pow(u, 1.0),
                                       l2 * cbrt_pow(u, -1.0) * cbrt_pow(v, 1.0),
                                       l3 * cbrt_pow(v, -1.0),
                                       l4 * cbrt_pow(u, 1.0) * cbrt_pow(v, 1.0)};
            return out;
        }
        case ClassId::A7i:
            out.kind = ClosedFormKind::Partial;
            out.d_component = l4 * cbrt_pow(1.0 + 3.0 * l4 / (l2 * l3) * t, -1.0);
            return out;
        case ClassId::A7ii: {
            const double a2 = *params.a2;
            const double q = 1.0 - a2 * a2;
            const double w = l2 * l2 * l2 + 3.0 * q * l2 * l4 * t;
            const double w13 = cbrt_pow(w, 1.0);
            out.kind = ClosedFormKind::Full;
            out.state = DiagonalMetric{l1 + 4.0 * t, w13, w13 / q, l2 * l4 / w13};
            return out;
        }
        case ClassId::A8:
            return out;
        case ClassId::A9ii:
            out.kind = ClosedFormKind::Partial;
            out.d_component = l4 + 4.0 * (*params.a3) * (*params.a3) * t;
            return out;
    }
    return out;
}

bool has_full_closed_form(ClassId id, const ClassParams& params, const InitialData& init) {
    switch (id) {
        case ClassId::A1:
        case ClassId::A2iv:
        case ClassId::A4:
        case ClassId::A6:
        case ClassId::A7ii:
            return true;
        case ClassId::A3:
            (void)params;
            return rel_equal(init.lambda1, init.lambda2);
        default:
            return false;
    }
}

double a9ii_c1(const InitialData& init) {
    return (init.lambda1 + init.lambda3) / (init.lambda1 * init.lambda3 * init.lambda3);
}

double a9ii_c_from_a(double a_value, double c1) {
    return (1.0 + std::sqrt(1.0 + 4.0 * c1 * a_value * a_value)) / (2.0 * c1 * a_value);
}

ConservedSet conserved(ClassId id, const ClassParams& params, const InitialData& init) {
    validate_inputs(id, params, init);
    const double l1 = init.lambda1, l2 = init.lambda2, l3 = init.lambda3, l4 = init.lambda4;
    ConservedSet set;
    auto add = [&set](std::string name, double initial,
                      std::function<double(const DiagonalMetric&)> eval) {
        set.push_back({std::move(name), initial, std::move(eval)});
    };
    switch (id) {
        case ClassId::A1:
            add("A", l1, [](const DiagonalMetric& s) { return s.a; });
            add("B", l2, [](const DiagonalMetric& s) { return s.b; });
            add("C", l3, [](const DiagonalMetric& s) { return s.c; });
            add("D", l4, [](const DiagonalMetric& s) { return s.d; });
            break;
        case ClassId::A2iv:
            add("A", l1, [](const DiagonalMetric& s) { return s.a; });
            add("B", l2, [](const DiagonalMetric& s) { return s.b; });
            add("C", l3, [](const DiagonalMetric& s) { return s.c; });
            break;
        case ClassId::A3:
            add("AB", l1 * l2, [](const DiagonalMetric& s) { return s.a * s.b; });
            add("C", l3, [](const DiagonalMetric& s) { return s.c; });
            break;
        case ClassId::A4:
            add("AB", l1 * l2, [](const DiagonalMetric& s) { return s.a * s.b; });
            add("C", l3, [](const DiagonalMetric& s) { return s.c; });
            add("D/A", l4 / l1, [](const DiagonalMetric& s) { return s.d / s.a; });
            break;
        case ClassId::A5:
            add("AB", l1 * l2, [](const DiagonalMetric& s) { return s.a * s.b; });
            add("C", l3, [](const DiagonalMetric& s) { return s.c; });
            break;
        case ClassId::A6:
            break;
        case ClassId::A7i:
            add("BCD^2", l2 * l3 * l4 * l4,
                [](const DiagonalMetric& s) { return s.b * s.c * s.d * s.d; });
            add("AD(B-C)", l1 * l4 * (l2 - l3),
                [](const DiagonalMetric& s) { return s.a * s.d * (s.b - s.c); });
            break;
        case ClassId::A7ii:
            add("BD", l2 * l4, [](const DiagonalMetric& s) { return s.b * s.d; });
            add("B/C", l2 / l3, [](const DiagonalMetric& s) { return s.b / s.c; });
            break;
        case ClassId::A8:
            add("BCD^2", l2 * l3 * l4 * l4,
                [](const DiagonalMetric& s) { return s.b * s.c * s.d * s.d; });
            add("AD(B+C)", l1 * l4 * (l2 + l3),
                [](const DiagonalMetric& s) { return s.a * s.d * (s.b + s.c); });
            break;
        case ClassId::A9ii:
            add("(A+C)/(AC^2)", a9ii_c1(init),
                [](const DiagonalMetric& s) { return (s.a + s.c) / (s.a * s.c * s.c); });
            break;
    }
    return set;
}

int class_dimension(ClassId id) {
    switch (id) {
        case ClassId::A1: return 0;
        case ClassId::A2iv: return 1;
        case ClassId::A3: return 2;
        case ClassId::A4: return 1;
        case ClassId::A5: return 2;
        case ClassId::A6: return 2;
        case ClassId::A7i: return 3;
        case ClassId::A7ii: return 2;
        case ClassId::A8: return 2;
        case ClassId::A9ii: return 2;
    }
    return 0;
}

std::string_view to_string(Component c) {
    switch (c) {
        case Component::A: return "A";
        case Component::B: return "B";
        case Component::C: return "C";
        case Component::D: return "D";
    }
    return "?";
}

std::string_view to_string(AsymptoticKind k) {
    switch (k) {
        case AsymptoticKind::Limit: return "Limit";
        case AsymptoticKind::GrowthPower: return "GrowthPower";
        case AsymptoticKind::LinearGrowth: return "LinearGrowth";
        case AsymptoticKind::DivergesToInfinity: return "DivergesToInfinity";
        case AsymptoticKind::DecaysToZero: return "DecaysToZero";
    }
    return "?";
}

std::vector<AsymptoticDescriptor> asymptotic_profile(ClassId id, const ClassParams& params,
                                                     const InitialData& init) {
    validate_inputs(id, params, init);
    const double l1 = init.lambda1, l2 = init.lambda2, l3 = init.lambda3, l4 = init.lambda4;
    using K = AsymptoticKind;
    switch (id) {
        case ClassId::A1:
            return {{Component::A, K::Limit, l1},
                    {Component::B, K::Limit, l2},
                    {Component::C, K::Limit, l3},
                    {Component::D, K::Limit, l4}};
        case ClassId::A2iv: {
            const double k = *params.k;
            return {{Component::A, K::Limit, l1},
                    {Component::B, K::Limit, l2},
                    {Component::C, K::Limit, l3},
                    {Component::D, K::LinearGrowth, 4.0 * (k * k + k + 1.0)}};
        }
        case ClassId::A3: {
            const double k = *params.k;
            if (rel_equal(l1, l2)) {
                return {{Component::A, K::Limit, l1},
                        {Component::B, K::Limit, l2},
                        {Component::C, K::Limit, l3},
                        {Component::D, K::LinearGrowth, 12.0 * k * k}};
            }
            const double g = std::sqrt(l1 * l2);
            return {{Component::A, K::Limit, g},
                    {Component::B, K::Limit, g},
                    {Component::C, K::Limit, l3},
                    {Component::D, K::GrowthPower, 1.0}};
        }
        case ClassId::A4:
            return {{Component::A, K::GrowthPower, 1.0 / 3.0},
                    {Component::B, K::GrowthPower, -1.0 / 3.0},
                    {Component::C, K::Limit, l3},
                    {Component::D, K::GrowthPower, 1.0 / 3.0}};
        case ClassId::A5:
            return {{Component::A, K::DivergesToInfinity, 0.0},
                    {Component::B, K::DecaysToZero, 0.0},
                    {Component::C, K::Limit, l3},
                    {Component::D, K::DivergesToInfinity, 0.0}};
        case ClassId::A6:
            // B tends to lambda2 (F0/E0)^{1/3} = lambda2 (lambda1 lambda3 / lambda2^2)^{1/3}
            return {{Component::A, K::GrowthPower, 1.0 / 3.0},
                    {Component::B, K::Limit, l2 * std::cbrt(l1 * l3 / (l2 * l2))},
                    {Component::C, K::GrowthPower, -1.0 / 3.0},
                    {Component::D, K::GrowthPower, 2.0 / 3.0}};
        case ClassId::A7i:
            return {{Component::A, K::LinearGrowth, 4.0},
                    {Component::B, K::GrowthPower, 1.0 / 3.0},
                    {Component::C, K::GrowthPower, 1.0 / 3.0},
                    {Component::D, K::GrowthPower, -1.0 / 3.0}};
        case ClassId::A7ii:
            return {{Component::A, K::LinearGrowth, 4.0},
                    {Component::B, K::GrowthPower, 1.0 / 3.0},
                    {Component::C, K::GrowthPower, 1.0 / 3.0},
                    {Component::D, K::GrowthPower, -1.0 / 3.0}};
        case ClassId::A8: {
            const double k4 = l1 * (l2 + l3) / std::sqrt(l2 * l3);
            return {{Component::A, K::Limit, k4 / 2.0},
                    {Component::B, K::GrowthPower, 1.0 / 3.0},
                    {Component::C, K::GrowthPower, 1.0 / 3.0},
                    {Component::D, K::GrowthPower, -1.0 / 3.0}};
        }
        case ClassId::A9ii: {
            const double a3 = *params.a3;
            return {{Component::A, K::LinearGrowth, 2.0},
                    {Component::B, K::LinearGrowth, 2.0},
                    {Component::C, K::Limit, 1.0 / std::sqrt(a9ii_c1(init))},
                    {Component::D, K::LinearGrowth, 4.0 * a3 * a3}};
        }
    }
    return {};
}

}  // namespace ricci
