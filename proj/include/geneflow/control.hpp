#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "geneflow/dynamics.hpp"
#include "geneflow/steady.hpp"

namespace geneflow {

// everything a controllability question needs
struct Scenario {
    std::string name = "scenario";
    double theta = 0.33;
    DriftField drift = DriftField::homogeneous();
    DomainGeometry geometry = DomainGeometry::interval(1.0);
    int n = 201;
    double dt = 0.0;  // 0: PdeStepper default
    double tol = 1e-3;
    double T_max = 200.0;
    // staircase
    double delta1 = 0.05;
    double T1 = 20.0;
    double gain = 5.0;
    int path_K = 9;
    double record_every = 0.0;  // staircase snapshots; 0 = none
    std::optional<BistableNonlinearity> custom_f;  // tabulated f, overrides theta's cubic

    BistableNonlinearity nonlinearity() const { return custom_f ? *custom_f : BistableNonlinearity::cubic(theta); }
    PdeStepper stepper() const { return PdeStepper(nonlinearity(), drift, geometry, n, dt); }
};

struct Leg {
    double s_from = 0.0, s_to = 0.0;
    double time = 0.0;
    double sup_error = 0.0;
    double u_min = 1.0, u_max = 0.0;
};

struct StaircaseResult {
    bool success = false;
    double total_time = 0.0;
    std::string stage;   // "step1", "path", "leg <k>"
    std::string reason;  // "barrier-to-0", "path-inadmissible", "leg-stall", "time-budget"
    std::vector<Leg> legs;
    double u_min = 1.0, u_max = 0.0;
    double terminal_error = 0.0;
    GridProfile final_profile;
    std::vector<PdeState> snapshots;  // every Scenario::record_every
    std::vector<ControlSample> controls;
};

StaircaseResult staircase_to_theta(const Scenario& sc, const GridProfile& p0);
StaircaseResult staircase_to_theta(const Scenario& sc, const GridProfile& p0, double T1, double T_max);

struct TargetVerdict {
    double start = 0.0;   // p0 constant
    std::string target;   // "0", "theta", "1"
    std::string status;   // converged | blocked | failed | indeterminate
    double time = 0.0;
    double residual_sup = 0.0;
    std::string detail;
    std::optional<Barrier> witness;
    bool witness_orders = false;  // trajectory stays on the witness' side within 1e-6
};

struct ControllabilityReport {
    std::vector<TargetVerdict> verdicts;
    bool all_converged() const;
};

ControllabilityReport controllability_report(const Scenario& sc, const std::vector<double>& starts = {0.0, 1.0});

struct MinTimeResult {
    double parameter = 0.0;
    double T_min = std::numeric_limits<double>::infinity();
    std::string strategy = "staircase";
    int probes = 0;
    bool monotone = true;  // feasibility never went back to false above a feasible horizon
};

MinTimeResult minimal_time_to_theta(const Scenario& sc, const std::vector<double>& horizon_grid);

struct MinTimeRow {
    double sigma;
    MinTimeResult result;
};

// one minimal-time search per sigma, `jobs` at a time
std::vector<MinTimeRow> mintime_scan(DriftFamily family, const std::vector<double>& sigmas, const Scenario& base,
                                     const std::vector<double>& horizon_grid, int jobs = 1);

}  // namespace geneflow
