#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ricci/flow.hpp"
#include "ricci/geometry.hpp"
#include "ricci/metric.hpp"
#include "ricci/quasiconv.hpp"

namespace ricci {

struct QCConfig {
    double epsilon = 1e-2;
    double horizon_closed_form = 1e8;
    double horizon_numeric = 1e5;
};

struct OutputPaths {
    std::string trajectory_csv = "trajectory.csv";
    std::string report_json = "report.json";
};

// One run description: class, data, optional comparison metric and frame,
// integrator and quasi-convergence settings, output paths.
struct Scenario {
    ClassId cls = ClassId::A1;
    ClassParams params;
    InitialData init;
    std::optional<InitialData> init_bar;
    std::optional<std::pair<FrameMatrix, FrameMatrix>> frame_matrices;  // Lambda, Lambda'
    std::optional<FrameParams> frame_params;
    IntegratorConfig integrator;
    QCConfig qc;
    OutputPaths output;
};

bool operator==(const Scenario& lhs, const Scenario& rhs);

// Frame parameters resolved from whichever of the two frame forms the
// scenario carries (zero frame when neither is present).
FrameParams resolve_frame(const Scenario& s);

nlohmann::json scenario_to_json(const Scenario& s);
// Throws std::invalid_argument on malformed input (unknown class, wrong
// arities, both frame forms present, non-finite numbers).
Scenario scenario_from_json(const nlohmann::json& j);

Scenario scenario_from_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

// "t,A,B,C,D" rows, one per grid point, 17 significant digits; a trailing
// norm column when norms are given.
void write_trajectory_csv(std::ostream& os, const std::vector<double>& times,
                          const std::vector<DiagonalMetric>& states,
                          const std::vector<double>* norms = nullptr);

std::string format_real(double v);  // 17 significant digits

struct ResidualEntry {
    std::string name;
    double value = 0.0;
    std::string kind;
};
struct DriftEntry {
    std::string name;
    double initial = 0.0;
    double max_drift = 0.0;
    bool relative = true;
};
struct AsymptoticsEntry {
    std::string component;
    std::string descriptor;
    double target = 0.0;
    double residual = 0.0;
};
struct FlowSection {
    std::string path;
    std::size_t steps = 0;
    std::vector<double> final_state;
    std::vector<DriftEntry> drift;
    std::vector<AsymptoticsEntry> asymptotics;
};
struct QCSection {
    bool analytic_member = false;
    std::vector<ResidualEntry> residuals;
    std::string numeric_decision;
    std::vector<std::pair<double, double>> tail;
    double horizon = 0.0;
    std::string path;
};
struct DimSection {
    int probe = 0;
    int expected = 0;
    bool pass = false;
};
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};
struct ValidateSection {
    std::vector<CriterionResult> criteria;
    bool all_pass = false;
};

// Full record of one CLI run; serializes and re-parses losslessly.
struct RunReport {
    std::string command;
    nlohmann::json scenario;
    std::optional<FlowSection> flow;
    std::optional<QCSection> qc;
    std::optional<DimSection> dim;
    std::optional<ValidateSection> validate;
    double wall_ms = 0.0;
};

bool operator==(const FlowSection&, const FlowSection&);
bool operator==(const QCSection&, const QCSection&);
bool operator==(const DimSection&, const DimSection&);
bool operator==(const CriterionResult&, const CriterionResult&);
bool operator==(const ValidateSection&, const ValidateSection&);
bool operator==(const ResidualEntry&, const ResidualEntry&);
bool operator==(const DriftEntry&, const DriftEntry&);
bool operator==(const AsymptoticsEntry&, const AsymptoticsEntry&);
bool operator==(const RunReport&, const RunReport&);

nlohmann::json report_to_json(const RunReport& r);
RunReport report_from_json(const nlohmann::json& j);

}  // namespace ricci
