#pragma once

#include <cstdint>
#include <vector>

#include "ricci/scenario.hpp"

namespace ricci {

inline constexpr std::uint64_t kDefaultSeed = 20250810;

enum class InjectedFault { None, Drift };

struct AcceptanceOptions {
    double rel_tol = 1e-10;            // trajectory tolerance for criteria 1-3
    double closed_form_threshold = 1e-7;
    std::uint64_t seed = kDefaultSeed;
    int threads = 0;                   // 0: worker_count()
    InjectedFault fault = InjectedFault::None;
};

// Loose-tolerance mode: integrate at `tol` and accept closed-form errors up
// to 10 * tol.
AcceptanceOptions with_tolerance_override(AcceptanceOptions opts, double tol);

// Runs every verification criterion and reports one result per criterion.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

}  // namespace ricci
