#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ricci/flow.hpp"
#include "ricci/geometry.hpp"
#include "ricci/metric.hpp"

namespace ricci {

enum class ConstraintKind { EqualityOnInitialData, FrameExclusion };
std::string_view to_string(ConstraintKind k);

struct MembershipResidual {
    std::string name;
    double value = 0.0;
    ConstraintKind kind = ConstraintKind::EqualityOnInitialData;
};

// Scale-free equality constraints a second metric's initial data must satisfy
// to lie in the equivalence class of (params, init); residuals vanish at
// init_bar = init.
struct EqualityConstraint {
    std::string name;
    std::function<double(const InitialData&)> residual;
};

std::vector<EqualityConstraint> equality_constraints(ClassId id, const ClassParams& params,
                                                     const InitialData& init);

struct AnalyticResult {
    bool member = false;
    std::vector<MembershipResidual> residuals;
};

// Decides membership from the class's constraints: every equality residual
// below 1e-12 and every excluded frame parameter exactly zero.
AnalyticResult analytic_membership(ClassId id, const ClassParams& params, const InitialData& init,
                                   const InitialData& init_bar, const FrameParams& frame);

enum class Decision { Converges, Diverges, Inconclusive };
std::string_view to_string(Decision d);
std::optional<Decision> parse_decision(std::string_view text);

struct QCVerdict {
    Decision decision = Decision::Inconclusive;
    std::vector<std::pair<double, double>> tail;  // (t, |gbar - g|_g)
    std::vector<MembershipResidual> residuals;
    double horizon = 0.0;
    EvalPath path = EvalPath::Numeric;
};

struct HorizonSchedule {
    double t0 = 1.0;
    double ratio = 2.0;
    double max_closed_form = 1e8;
    double max_numeric = 1e5;
};

// Side of the comparison the norm is taken in. The per-class analysis
// measures the difference in the first metric; the second is exposed for
// robustness experiments.
enum class NormSide { First, Second };

// Tracks |gbar(t) - g(t)|_g on a geometric time grid, with the second metric
// evolving in its own frame and transported by the class's transition
// pattern, and classifies the tail. Closed forms are used when both metrics
// have one; integration otherwise (a failure there yields Inconclusive with
// the partial tail).
QCVerdict numeric_membership(ClassId id, const ClassParams& params, const InitialData& init,
                             const InitialData& init_bar, const FrameParams& frame,
                             double epsilon = 1e-2, const HorizonSchedule& schedule = {},
                             NormSide side = NormSide::First);

// Estimated dimension of the equivalence class: parameter count minus the
// numerical rank of the constraint Jacobian at init_bar = init (central
// differences, relative step 1e-6; rank threshold 1e-8 of the largest
// singular value). Frame freedom is not counted.
int dimension_probe(ClassId id, const ClassParams& params, const InitialData& init);

// |gbar(t) - g(t)|_g at each requested time.
std::vector<std::pair<double, double>> norm_timeseries(ClassId id, const ClassParams& params,
                                                       const InitialData& init,
                                                       const InitialData& init_bar,
                                                       const FrameParams& frame,
                                                       const std::vector<double>& grid,
                                                       NormSide side = NormSide::First);

// Class parameters of the second metric implied by the frame difference; the
// A7ii and A9ii transition parameters shift the class parameter itself
// (a2' = a2 - b, a3' = a3 - a).
ClassParams bar_class_params(ClassId id, const ClassParams& params, const FrameParams& frame);

}  // namespace ricci
