#include "ricci/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ricci {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double a21 = 0.2;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double c2 = 0.2, c3 = 0.3, c4 = 0.8, c5 = 8.0 / 9.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// dense-output weights
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;       // Lund stabilization
constexpr double kMaxGrowth = 1.5;   // per-step growth cap
constexpr double kMaxShrink = 0.2;
constexpr double kMinStep = 1e-14;

using Vec4 = std::array<double, 4>;

bool all_positive(const Vec4& y) {
    for (double v : y)
        if (!(v > 0.0)) return false;
    return true;
}

DiagonalMetric to_metric(const Vec4& y) { return {y[0], y[1], y[2], y[3]}; }

}  // namespace

Trajectory::Trajectory(ClassId cls, ClassParams params, InitialData init, std::vector<double> times,
                       std::vector<DiagonalMetric> states, std::vector<DenseCoeffs> dense)
    : cls_(cls),
      params_(std::move(params)),
      init_(init),
      times_(std::move(times)),
      states_(std::move(states)),
      dense_(std::move(dense)) {}

DiagonalMetric Trajectory::evaluate_at(double t) const {
    if (t < times_.front() || t > times_.back()) {
        throw std::out_of_range("evaluate_at: time outside the integrated range");
    }
    // exact at accepted grid points
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    if (it != times_.end() && *it == t) {
        return states_[static_cast<std::size_t>(it - times_.begin())];
    }
    const std::size_t step = static_cast<std::size_t>(it - times_.begin()) - 1;
    const double h = times_[step + 1] - times_[step];
    const double theta = (t - times_[step]) / h;
    const double theta1 = 1.0 - theta;
    const auto& r = dense_[step].r;
    Vec4 y;
    for (int i = 0; i < 4; ++i) {
        y[static_cast<std::size_t>(i)] =
            r[0][static_cast<std::size_t>(i)] +
            theta * (r[1][static_cast<std::size_t>(i)] +
                     theta1 * (r[2][static_cast<std::size_t>(i)] +
                               theta * (r[3][static_cast<std::size_t>(i)] +
                                        theta1 * r[4][static_cast<std::size_t>(i)])));
    }
    return to_metric(y);
}

Trajectory integrate(ClassId cls, const ClassParams& params, const InitialData& init,
                     const IntegratorConfig& config) {
    validate_inputs(cls, params, init);
    if (!(config.rel_tol > 0.0) || !(config.abs_tol > 0.0)) {
        throw std::invalid_argument("integrator tolerances must be positive");
    }
    if (!(config.t_end > 0.0)) {
        throw std::invalid_argument("t_end must be positive");
    }

    auto f = [&](const Vec4& y) -> Vec4 { return rhs(cls, params, to_metric(y)); };

    std::vector<double> times{0.0};
    std::vector<DiagonalMetric> states{init.metric()};
    std::vector<DenseCoeffs> dense;

    Vec4 y{init.lambda1, init.lambda2, init.lambda3, init.lambda4};
    double t = 0.0;
    double h = std::min(config.initial_step, config.t_end);
    Vec4 k1 = f(y);
    double err_old = 1e-4;
    std::size_t attempts = 0;

    auto partial = [&]() {
        return Trajectory(cls, params, init, times, states, dense);
    };

    while (t < config.t_end) {
        if (++attempts > config.max_steps) {
            throw IntegrationError("step budget exhausted before t_end", partial());
        }
        if (h < kMinStep) {
            throw StiffnessError("positivity unreachable at the minimal step size");
        }
        bool last = false;
        if (t + h >= config.t_end) {
            h = config.t_end - t;
            last = true;
        }

        Vec4 k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, ys{}, ynew{};
        bool positive = true;

        for (std::size_t i = 0; i < 4; ++i) ys[i] = y[i] + h * a21 * k1[i];
        positive = all_positive(ys);
        if (positive) {
            k2 = f(ys);
            for (std::size_t i = 0; i < 4; ++i) ys[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
            positive = all_positive(ys);
        }
        if (positive) {
            k3 = f(ys);
            for (std::size_t i = 0; i < 4; ++i)
                ys[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            positive = all_positive(ys);
        }
        if (positive) {
            k4 = f(ys);
            for (std::size_t i = 0; i < 4; ++i)
                ys[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            positive = all_positive(ys);
        }
        if (positive) {
            k5 = f(ys);
            for (std::size_t i = 0; i < 4; ++i)
                ys[i] = y[i] +
                        h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            positive = all_positive(ys);
        }
        if (positive) {
            k6 = f(ys);
            for (std::size_t i = 0; i < 4; ++i)
                ynew[i] = y[i] +
                          h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
            positive = all_positive(ynew);
        }
        if (!positive) {
            h *= 0.5;
            continue;
        }
        k7 = f(ynew);

        double err = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            const double ei =
                h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sk = config.abs_tol + config.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err = std::max(err, std::abs(ei) / sk);
        }

        const double fac11 = std::pow(err, 0.2 - kBeta * 0.75);
        if (err > 1.0) {
            h /= std::min(1.0 / kMaxShrink, fac11 / kSafety);
            continue;
        }

        // accept
        DenseCoeffs dc;
        for (std::size_t i = 0; i < 4; ++i) {
            const double ydiff = ynew[i] - y[i];
            const double bspl = h * k1[i] - ydiff;
            dc.r[0][i] = y[i];
            dc.r[1][i] = ydiff;
            dc.r[2][i] = bspl;
            dc.r[3][i] = ydiff - h * k7[i] - bspl;
            dc.r[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                              d7 * k7[i]);
        }
        dense.push_back(dc);
        t = last ? config.t_end : t + h;
        times.push_back(t);
        states.push_back(to_metric(ynew));
        y = ynew;
        k1 = k7;

        double fac = fac11 / std::pow(err_old, kBeta);
        fac = std::max(1.0 / kMaxGrowth, std::min(1.0 / kMaxShrink, fac / kSafety));
        h = h / fac;
        err_old = std::max(err, 1e-4);
    }

    return Trajectory(cls, params, init, std::move(times), std::move(states), std::move(dense));
}

std::vector<DriftRecord> conserved_drift_detail(const Trajectory& traj) {
    const ConservedSet set = conserved(traj.cls(), traj.params(), traj.init());
    std::vector<DriftRecord> out;
    out.reserve(set.size());
    for (const ConservedQuantity& q : set) {
        DriftRecord rec{q.name, q.initial, 0.0, q.initial != 0.0};
        for (const DiagonalMetric& s : traj.states()) {
            const double diff = std::abs(q.eval(s) - q.initial);
            rec.max_drift = std::max(rec.max_drift, rec.relative ? diff / std::abs(q.initial) : diff);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

double conserved_drift(const Trajectory& traj) {
    double worst = 0.0;
    for (const DriftRecord& rec : conserved_drift_detail(traj)) {
        worst = std::max(worst, rec.max_drift);
    }
    return worst;
}

double validate_closed_form(ClassId cls, const ClassParams& params, const InitialData& init,
                            const std::vector<double>& t_samples, const IntegratorConfig& config) {
    if (!has_full_closed_form(cls, params, init)) {
        throw std::invalid_argument("class has no full closed form for this initial data");
    }
    if (t_samples.empty()) return 0.0;
    IntegratorConfig cfg = config;
    cfg.t_end = *std::max_element(t_samples.begin(), t_samples.end());
    const Trajectory traj = integrate(cls, params, init, cfg);
    double worst = 0.0;
    for (double t : t_samples) {
        const DiagonalMetric numeric = traj.evaluate_at(t);
        const DiagonalMetric exact = *closed_form(cls, params, init, t).state;
        for (int i = 0; i < 4; ++i) {
            worst = std::max(worst, std::abs(numeric[i] - exact[i]) / std::abs(exact[i]));
        }
    }
    return worst;
}

std::string_view to_string(EvalPath p) {
    return p == EvalPath::ClosedForm ? "closed-form" : "numeric";
}

AsymptoticsReport validate_asymptotics(ClassId cls, const ClassParams& params,
                                       const InitialData& init, double horizon,
                                       const IntegratorConfig& config) {
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    const auto profile = asymptotic_profile(cls, params, init);

    const bool closed = has_full_closed_form(cls, params, init) && horizon >= 1e6;
    std::optional<Trajectory> traj;
    if (!closed) {
        IntegratorConfig cfg = config;
        cfg.t_end = 2.0 * horizon;  // GrowthPower compares y(2T) with y(T)
        traj = integrate(cls, params, init, cfg);
    }
    auto state_at = [&](double t) -> DiagonalMetric {
        if (closed) return *closed_form(cls, params, init, t).state;
        return traj->evaluate_at(t);
    };

    const DiagonalMetric y0 = init.metric();
    const DiagonalMetric yT = state_at(horizon);
    const DiagonalMetric y2T = state_at(2.0 * horizon);

    AsymptoticsReport report;
    report.path = closed ? EvalPath::ClosedForm : EvalPath::Numeric;
    report.horizon = horizon;
    for (const AsymptoticDescriptor& d : profile) {
        const int i = static_cast<int>(d.component);
        double residual = 0.0;
        switch (d.kind) {
            case AsymptoticKind::Limit:
                residual = std::abs(yT[i] / d.value - 1.0);
                break;
            case AsymptoticKind::GrowthPower:
                residual = std::abs(std::log(y2T[i] / yT[i]) / std::log(2.0) - d.value);
                break;
            case AsymptoticKind::LinearGrowth:
                residual = std::abs(yT[i] / (d.value * horizon) - 1.0);
                break;
            case AsymptoticKind::DivergesToInfinity:
                residual = y0[i] / yT[i];
                break;
            case AsymptoticKind::DecaysToZero:
                residual = yT[i] / y0[i];
                break;
        }
        report.checks.push_back({d, residual});
    }
    return report;
}

}  // namespace ricci
