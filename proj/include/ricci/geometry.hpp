#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ricci/class_id.hpp"
#include "ricci/metric.hpp"

namespace ricci {

// Class parameters; which field is meaningful depends on the class:
// k for A2iv and A3, a2 for A7ii, a3 for A9ii.
struct ClassParams {
    std::optional<double> k;
    std::optional<double> a2;
    std::optional<double> a3;
};

// Initial metric coefficients (lambda_1..lambda_4), all strictly positive.
struct InitialData {
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double lambda3 = 1.0;
    double lambda4 = 1.0;

    DiagonalMetric metric() const { return {lambda1, lambda2, lambda3, lambda4}; }
    double operator[](int i) const {
        switch (i) {
            case 0: return lambda1;
            case 1: return lambda2;
            case 2: return lambda3;
            default: return lambda4;
        }
    }
};

// Throws std::invalid_argument on missing/forbidden class parameters or
// inconsistent initial data (A2iv: k not in {0, 1, -1/2}; A7ii: a2^2 < 1 and
// lambda2 = (1 - a2^2) lambda3; A9ii: a3 != 0 and lambda1 = lambda2).
void validate_inputs(ClassId id, const ClassParams& params, const InitialData& init);

// Right-hand side (dA/dt, dB/dt, dC/dt, dD/dt) of the class's flow at the
// given state. A1 is the trivial flow; A9ii uses the reduced system with
// dB/dt locked to dA/dt.
std::array<double, 4> rhs(ClassId id, const ClassParams& params, const DiagonalMetric& state);

enum class ClosedFormKind { Full, Partial, Unavailable };

struct ClosedForm {
    ClosedFormKind kind = ClosedFormKind::Unavailable;
    std::optional<DiagonalMetric> state;  // Full only
    std::optional<double> d_component;    // Partial: D(t)
};

// Exact solution where one exists. Full for A1, A2iv, A4, A6, A7ii and for A3
// with lambda1 = lambda2; Partial (D only) for A7i and A9ii; Unavailable for
// A5, A8 and A3 with unequal lambda1, lambda2. Throws on t < 0.
ClosedForm closed_form(ClassId id, const ClassParams& params, const InitialData& init, double t);

bool has_full_closed_form(ClassId id, const ClassParams& params, const InitialData& init);

// Orbit constant of the reduced A9ii system, (A + C)/(A C^2) at the start.
double a9ii_c1(const InitialData& init);

// C as a function of A along an A9ii orbit with constant c1.
double a9ii_c_from_a(double a_value, double c1);

// A quantity constant along the flow, stored with its initial value and an
// evaluator over states.
struct ConservedQuantity {
    std::string name;
    double initial = 0.0;
    std::function<double(const DiagonalMetric&)> eval;
};

using ConservedSet = std::vector<ConservedQuantity>;

ConservedSet conserved(ClassId id, const ClassParams& params, const InitialData& init);

// Dimension of the quasi-convergence equivalence class (number of free
// initial-data parameters).
int class_dimension(ClassId id);

enum class Component { A, B, C, D };
std::string_view to_string(Component c);

enum class AsymptoticKind {
    Limit,              // value: the finite positive limit
    GrowthPower,        // value: the exponent p in y ~ t^p
    LinearGrowth,       // value: the slope s in y ~ s t
    DivergesToInfinity, // no quantified rate
    DecaysToZero,       // no quantified rate
};
std::string_view to_string(AsymptoticKind k);

struct AsymptoticDescriptor {
    Component component = Component::A;
    AsymptoticKind kind = AsymptoticKind::Limit;
    double value = 0.0;  // unused for the unquantified kinds
};

// Machine-checkable long-time behavior of each component.
std::vector<AsymptoticDescriptor> asymptotic_profile(ClassId id, const ClassParams& params,
                                                     const InitialData& init);

}  // namespace ricci
