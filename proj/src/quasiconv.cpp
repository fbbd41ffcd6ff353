#include "ricci/quasiconv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ricci {

namespace {

constexpr double kEqualityTol = 1e-12;
constexpr double kDivergedCap = 1e6;

double ratio_residual(double num, double den) { return num / den - 1.0; }

// Jacobi eigenvalue iteration for a symmetric n x n matrix (n <= 4).
void jacobi_eigenvalues(double m[4][4], int n, double out[4]) {
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += m[i][j] * m[i][j];
        if (off < 1e-300) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (m[p][q] == 0.0) continue;
                const double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double mkp = m[k][p], mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for (int k = 0; k < n; ++k) {
                    const double mpk = m[p][k], mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
    }
    for (int i = 0; i < n; ++i) out[i] = m[i][i];
}

const char* frame_param_name(ClassId id, std::size_t index) {
    static const char* names[] = {"a", "b", "c", "d", "e", "f"};
    (void)id;
    return names[index];
}

}  // namespace

std::string_view to_string(ConstraintKind k) {
    return k == ConstraintKind::EqualityOnInitialData ? "equality-on-initial-data"
                                                      : "frame-exclusion";
}

std::string_view to_string(Decision d) {
    switch (d) {
        case Decision::Converges: return "Converges";
        case Decision::Diverges: return "Diverges";
        case Decision::Inconclusive: return "Inconclusive";
    }
    return "?";
}

std::optional<Decision> parse_decision(std::string_view text) {
    for (Decision d : {Decision::Converges, Decision::Diverges, Decision::Inconclusive}) {
        if (text == to_string(d)) return d;
    }
    return std::nullopt;
}

std::vector<EqualityConstraint> equality_constraints(ClassId id, const ClassParams& params,
                                                     const InitialData& init) {
    const double l1 = init.lambda1, l2 = init.lambda2, l3 = init.lambda3, l4 = init.lambda4;
    std::vector<EqualityConstraint> out;
    auto add = [&out](std::string name, std::function<double(const InitialData&)> fn) {
        out.push_back({std::move(name), std::move(fn)});
    };
    switch (id) {
        case ClassId::A1:
            add("L1", [l1](const InitialData& b) { return ratio_residual(b.lambda1, l1); });
            add("L2", [l2](const InitialData& b) { return ratio_residual(b.lambda2, l2); });
            add("L3", [l3](const InitialData& b) { return ratio_residual(b.lambda3, l3); });
            add("L4", [l4](const InitialData& b) { return ratio_residual(b.lambda4, l4); });
            break;
        case ClassId::A2iv:
            add("L1", [l1](const InitialData& b) { return ratio_residual(b.lambda1, l1); });
            add("L2", [l2](const InitialData& b) { return ratio_residual(b.lambda2, l2); });
            add("L3", [l3](const InitialData& b) { return ratio_residual(b.lambda3, l3); });
            break;
        case ClassId::A3:
        case ClassId::A5:
            add("L1*L2", [l1, l2](const InitialData& b) {
                return ratio_residual(b.lambda1 * b.lambda2, l1 * l2);
            });
            add("L3", [l3](const InitialData& b) { return ratio_residual(b.lambda3, l3); });
            break;
        case ClassId::A4:
            add("L3", [l3](const InitialData& b) { return ratio_residual(b.lambda3, l3); });
            add("L1*L2", [l1, l2](const InitialData& b) {
                return ratio_residual(b.lambda1 * b.lambda2, l1 * l2);
            });
            add("L4/L1", [l1, l4](const InitialData& b) {
                return ratio_residual(b.lambda4 / b.lambda1, l4 / l1);
            });
            break;
        case ClassId::A6: {
            const double e0 = l2 / (l1 * l4);
            const double f0 = l3 / (l2 * l4);
            add("L1*(E0)^{1/3}", [l1, e0](const InitialData& b) {
                const double eb = b.lambda2 / (b.lambda1 * b.lambda4);
                return (b.lambda1 / l1) * std::cbrt(eb / e0) - 1.0;
            });
            add("L2*(F0/E0)^{1/3}", [l2, e0, f0](const InitialData& b) {
                const double eb = b.lambda2 / (b.lambda1 * b.lambda4);
                const double fb = b.lambda3 / (b.lambda2 * b.lambda4);
                return (b.lambda2 / l2) * std::cbrt(e0 / eb) * std::cbrt(fb / f0) - 1.0;
            });
            add("L3/(F0)^{1/3}", [l3, f0](const InitialData& b) {
                const double fb = b.lambda3 / (b.lambda2 * b.lambda4);
                return (b.lambda3 / l3) * std::cbrt(f0 / fb) - 1.0;
            });
            add("L4*(E0*F0)^{1/3}", [l4, e0, f0](const InitialData& b) {
                const double eb = b.lambda2 / (b.lambda1 * b.lambda4);
                const double fb = b.lambda3 / (b.lambda2 * b.lambda4);
                return (b.lambda4 / l4) * std::cbrt(eb / e0) * std::cbrt(fb / f0) - 1.0;
            });
            break;
        }
        case ClassId::A7i:
            add("L2*L3*L4^2", [l2, l3, l4](const InitialData& b) {
                return ratio_residual(b.lambda2 * b.lambda3 * b.lambda4 * b.lambda4,
                                      l2 * l3 * l4 * l4);
            });
            break;
        case ClassId::A7ii: {
            const double a2 = params.a2.value_or(0.0);
            const double q = 1.0 - a2 * a2;
            add("L2*L4", [l2, l4](const InitialData& b) {
                return ratio_residual(b.lambda2 * b.lambda4, l2 * l4);
            });
            add("L2/((1-a2^2)L3)", [q](const InitialData& b) {
                return ratio_residual(b.lambda2, q * b.lambda3);
            });
            break;
        }
        case ClassId::A8:
            add("L2*L3*L4^2", [l2, l3, l4](const InitialData& b) {
                return ratio_residual(b.lambda2 * b.lambda3 * b.lambda4 * b.lambda4,
                                      l2 * l3 * l4 * l4);
            });
            add("L1*L4*(L2+L3)", [l1, l2, l3, l4](const InitialData& b) {
                return ratio_residual(b.lambda1 * b.lambda4 * (b.lambda2 + b.lambda3),
                                      l1 * l4 * (l2 + l3));
            });
            break;
        case ClassId::A9ii: {
            const double c1 = a9ii_c1(init);
            add("L2/L1", [](const InitialData& b) { return ratio_residual(b.lambda2, b.lambda1); });
            add("c1", [c1](const InitialData& b) {
                const double cb = (b.lambda1 + b.lambda3) / (b.lambda1 * b.lambda3 * b.lambda3);
                return ratio_residual(cb, c1);
            });
            break;
        }
    }
    return out;
}

AnalyticResult analytic_membership(ClassId id, const ClassParams& params, const InitialData& init,
                                   const InitialData& init_bar, const FrameParams& frame) {
    if (frame.cls != id || frame.values.size() != frame_arity(id)) {
        throw std::invalid_argument("frame parameters do not match class");
    }
    AnalyticResult result;
    result.member = true;
    for (const EqualityConstraint& c : equality_constraints(id, params, init)) {
        const double r = c.residual(init_bar);
        result.residuals.push_back({c.name, r, ConstraintKind::EqualityOnInitialData});
        if (!(std::abs(r) < kEqualityTol)) result.member = false;
    }
    for (std::size_t idx : excluded_frame_indices(id)) {
        const double r = frame.values[idx];
        result.residuals.push_back(
            {frame_param_name(id, idx), r, ConstraintKind::FrameExclusion});
        if (r != 0.0) result.member = false;
    }
    return result;
}

ClassParams bar_class_params(ClassId id, const ClassParams& params, const FrameParams& frame) {
    ClassParams bar = params;
    if (id == ClassId::A7ii) bar.a2 = *params.a2 - frame.values[1];
    if (id == ClassId::A9ii) bar.a3 = *params.a3 - frame.values[0];
    return bar;
}

namespace {

// Evaluates one side of the comparison at arbitrary times, by exact solution
// when the class has one and by dense-output integration otherwise.
class StateSource {
public:
    StateSource(ClassId id, const ClassParams& params, const InitialData& init, double t_max,
                const IntegratorConfig& base)
        : id_(id), params_(params), init_(init) {
        validate_inputs(id, params, init);
        closed_ = has_full_closed_form(id, params, init);
        if (!closed_) {
            IntegratorConfig cfg = base;
            cfg.t_end = t_max;
            traj_.emplace(integrate(id, params, init, cfg));
        }
    }

    bool closed_form_path() const { return closed_; }

    DiagonalMetric at(double t) const {
        if (closed_) return *closed_form(id_, params_, init_, t).state;
        return traj_->evaluate_at(t);
    }

private:
    ClassId id_;
    ClassParams params_;
    InitialData init_;
    bool closed_ = false;
    std::optional<Trajectory> traj_;
};

double norm_at(ClassId id, const FrameParams& frame, const DiagonalMetric& g,
               const DiagonalMetric& gbar_beta, NormSide side) {
    const TransitionMatrix a = transition_from_params(frame);
    const SymmetricMetric4 gbar_alpha = congruence_transport(a, gbar_beta);
    const SymmetricMetric4 diff = gbar_alpha - SymmetricMetric4::from_diagonal(g);
    (void)id;
    if (side == NormSide::First) return std::sqrt(norm_sq(g, diff));
    return std::sqrt(norm_sq_general(gbar_alpha, diff));
}

std::vector<double> geometric_grid(const HorizonSchedule& schedule, double t_max) {
    std::vector<double> grid;
    for (double t = schedule.t0; t < t_max; t *= schedule.ratio) grid.push_back(t);
    grid.push_back(t_max);
    return grid;
}

}  // namespace

QCVerdict numeric_membership(ClassId id, const ClassParams& params, const InitialData& init,
                             const InitialData& init_bar, const FrameParams& frame,
                             double epsilon, const HorizonSchedule& schedule, NormSide side) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");

    QCVerdict verdict;
    verdict.residuals = analytic_membership(id, params, init, init_bar, frame).residuals;

    const ClassParams params_bar = bar_class_params(id, params, frame);
    const bool closed = has_full_closed_form(id, params, init) &&
                        has_full_closed_form(id, params_bar, init_bar);
    const double t_max = closed ? schedule.max_closed_form : schedule.max_numeric;
    verdict.horizon = t_max;
    verdict.path = closed ? EvalPath::ClosedForm : EvalPath::Numeric;

    const std::vector<double> grid = geometric_grid(schedule, t_max);
    try {
        const StateSource g_side(id, params, init, t_max, {});
        const StateSource bar_side(id, params_bar, init_bar, t_max, {});
        for (double t : grid) {
            verdict.tail.emplace_back(t, norm_at(id, frame, g_side.at(t), bar_side.at(t), side));
        }
    } catch (const StiffnessError&) {
        verdict.decision = Decision::Inconclusive;
        return verdict;
    } catch (const IntegrationError&) {
        verdict.decision = Decision::Inconclusive;
        return verdict;
    }

    const auto& tail = verdict.tail;
    const std::size_t count = tail.size();
    bool exceeded_cap = false;
    for (const auto& [t, n] : tail) {
        if (n > kDivergedCap) exceeded_cap = true;
    }
    const std::size_t quarter = std::max<std::size_t>(1, count / 4);
    double quarter_min = tail[count - 1].second;
    for (std::size_t i = count - quarter; i < count; ++i) {
        quarter_min = std::min(quarter_min, tail[i].second);
    }

    const std::size_t window = std::min<std::size_t>(8, count - 1);
    bool decreasing = true;
    const double negligible = 1e-3 * epsilon;
    for (std::size_t i = count - window; i < count; ++i) {
        const double prev = tail[i - 1].second;
        const double cur = tail[i].second;
        if (!(cur < prev || cur < negligible)) decreasing = false;
    }

    if (tail.back().second < epsilon && decreasing) {
        verdict.decision = Decision::Converges;
    } else if (quarter_min > 10.0 * epsilon || exceeded_cap) {
        verdict.decision = Decision::Diverges;
    } else {
        verdict.decision = Decision::Inconclusive;
    }
    return verdict;
}

int dimension_probe(ClassId id, const ClassParams& params, const InitialData& init) {
    validate_inputs(id, params, init);
    const std::vector<EqualityConstraint> constraints = equality_constraints(id, params, init);

    // A9ii: lambda2 = lambda1 is structural; probe over (lambda1, lambda3,
    // lambda4) with the structural constraint substituted out.
    const bool reduced = id == ClassId::A9ii;
    const int nparams = reduced ? 3 : 4;

    std::vector<const EqualityConstraint*> active;
    for (const EqualityConstraint& c : constraints) {
        if (reduced && c.name == "L2/L1") continue;
        active.push_back(&c);
    }
    const int m = static_cast<int>(active.size());

    auto apply = [&](const std::array<double, 4>& p) {
        InitialData b;
        if (reduced) {
            b = InitialData{p[0], p[0], p[1], p[2]};
        } else {
            b = InitialData{p[0], p[1], p[2], p[3]};
        }
        std::vector<double> r(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) r[static_cast<std::size_t>(i)] = active[static_cast<std::size_t>(i)]->residual(b);
        return r;
    };

    std::array<double, 4> base{};
    if (reduced) {
        base = {init.lambda1, init.lambda3, init.lambda4, 0.0};
    } else {
        base = {init.lambda1, init.lambda2, init.lambda3, init.lambda4};
    }

    // Jacobian by central differences, relative step 1e-6
    double jac[4][4] = {};
    for (int j = 0; j < nparams; ++j) {
        const double h = 1e-6 * base[static_cast<std::size_t>(j)];
        std::array<double, 4> up = base, dn = base;
        up[static_cast<std::size_t>(j)] += h;
        dn[static_cast<std::size_t>(j)] -= h;
        const std::vector<double> ru = apply(up);
        const std::vector<double> rd = apply(dn);
        for (int i = 0; i < m; ++i) {
            jac[i][j] = (ru[static_cast<std::size_t>(i)] - rd[static_cast<std::size_t>(i)]) / (2.0 * h);
        }
    }

    // rank via singular values: eigenvalues of J^T J
    double jtj[4][4] = {};
    for (int i = 0; i < nparams; ++i)
        for (int j = 0; j < nparams; ++j) {
            double s = 0.0;
            for (int k = 0; k < m; ++k) s += jac[k][i] * jac[k][j];
            jtj[i][j] = s;
        }
    double eig[4] = {};
    jacobi_eigenvalues(jtj, nparams, eig);
    double sigma_max = 0.0;
    for (int i = 0; i < nparams; ++i) sigma_max = std::max(sigma_max, std::sqrt(std::max(eig[i], 0.0)));
    int rank = 0;
    for (int i = 0; i < nparams; ++i) {
        if (std::sqrt(std::max(eig[i], 0.0)) > 1e-8 * sigma_max) ++rank;
    }
    return nparams - rank;
}

std::vector<std::pair<double, double>> norm_timeseries(ClassId id, const ClassParams& params,
                                                       const InitialData& init,
                                                       const InitialData& init_bar,
                                                       const FrameParams& frame,
                                                       const std::vector<double>& grid,
                                                       NormSide side) {
    std::vector<std::pair<double, double>> out;
    if (grid.empty()) return out;
    const double t_max = *std::max_element(grid.begin(), grid.end());
    const ClassParams params_bar = bar_class_params(id, params, frame);
    const StateSource g_side(id, params, init, std::max(t_max, 1e-12), {});
    const StateSource bar_side(id, params_bar, init_bar, std::max(t_max, 1e-12), {});
    for (double t : grid) {
        out.emplace_back(t, norm_at(id, frame, g_side.at(t), bar_side.at(t), side));
    }
    return out;
}

}  // namespace ricci
