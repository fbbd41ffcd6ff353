#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ricci/geometry.hpp"
#include "ricci/metric.hpp"

namespace ricci {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double t_end = 1.0;
    std::size_t max_steps = 10'000'000;
    double initial_step = 1e-4;
};

// One accepted step's dense-output coefficients (4th-order interpolant).
struct DenseCoeffs {
    std::array<std::array<double, 4>, 5> r{};
};

// Immutable solution curve: accepted grid, states, and per-step interpolants.
class Trajectory {
public:
    Trajectory(ClassId cls, ClassParams params, InitialData init, std::vector<double> times,
               std::vector<DiagonalMetric> states, std::vector<DenseCoeffs> dense);

    ClassId cls() const { return cls_; }
    const ClassParams& params() const { return params_; }
    const InitialData& init() const { return init_; }
    const std::vector<double>& times() const { return times_; }
    const std::vector<DiagonalMetric>& states() const { return states_; }
    double t_end() const { return times_.back(); }
    std::size_t steps() const { return dense_.size(); }

    // Dense-output interpolation; exact (bit-identical) at grid points.
    // Throws std::out_of_range outside [0, t_end].
    DiagonalMetric evaluate_at(double t) const;

private:
    ClassId cls_;
    ClassParams params_;
    InitialData init_;
    std::vector<double> times_;
    std::vector<DiagonalMetric> states_;
    std::vector<DenseCoeffs> dense_;
};

// Positivity became unreachable at the minimal step (or the step size
// underflowed); the explicit scheme cannot continue.
struct StiffnessError : std::runtime_error {
    explicit StiffnessError(const std::string& what) : std::runtime_error(what) {}
};

// Step budget exhausted; carries the partial trajectory computed so far.
struct IntegrationError : std::runtime_error {
    IntegrationError(const std::string& what, Trajectory partial_trajectory)
        : std::runtime_error(what), partial(std::move(partial_trajectory)) {}
    Trajectory partial;
};

// Embedded Runge-Kutta 5(4) pair with PI step control. A step is rejected
// (halved) whenever any state component would leave the positive cone; local
// error is controlled in the mixed norm max(|e_i| / (abs_tol + rel_tol |y_i|)).
// Step growth is capped at 1.5x per step.
Trajectory integrate(ClassId cls, const ClassParams& params, const InitialData& init,
                     const IntegratorConfig& config);

struct DriftRecord {
    std::string name;
    double initial = 0.0;
    double max_drift = 0.0;
    bool relative = true;  // false when the initial value is 0 (absolute drift)
};

// Per-functional drift over the trajectory grid.
std::vector<DriftRecord> conserved_drift_detail(const Trajectory& traj);

// Max drift over all conserved functionals and grid points (relative, except
// absolute for functionals whose initial value is 0).
double conserved_drift(const Trajectory& traj);

// Integrates numerically and compares against the exact solution at each
// sample; returns the max componentwise relative error. Throws
// std::invalid_argument when the class has no full closed form.
double validate_closed_form(ClassId cls, const ClassParams& params, const InitialData& init,
                            const std::vector<double>& t_samples,
                            const IntegratorConfig& config = {});

enum class EvalPath { ClosedForm, Numeric };
std::string_view to_string(EvalPath p);

struct AsymptoticsCheck {
    AsymptoticDescriptor descriptor;
    double residual = 0.0;
};

struct AsymptoticsReport {
    std::vector<AsymptoticsCheck> checks;
    EvalPath path = EvalPath::Numeric;
    double horizon = 0.0;
};

// Residuals against the class's asymptotic profile at the horizon:
//   Limit(v):          |y(T)/v - 1|
//   GrowthPower(p):    |log(y(2T)/y(T))/log 2 - p|
//   LinearGrowth(s):   |y(T)/(s T) - 1|
//   DivergesToInfinity: y(0)/y(T)
//   DecaysToZero:       y(T)/y(0)
// Uses the exact solution instead of integration for horizons of 1e6 and
// beyond when one exists.
AsymptoticsReport validate_asymptotics(ClassId cls, const ClassParams& params,
                                       const InitialData& init, double horizon,
                                       const IntegratorConfig& config = {});

}  // namespace ricci
