#pragma once

#include <functional>
#include <string>
#include <vector>

#include "geneflow/discrete.hpp"
#include "geneflow/model.hpp"

namespace geneflow {

struct PdeState {
    double t = 0.0;
    GridProfile profile;
};

// boundary values as a function of (t, state); fixed values must lie in [0,1], feedback output is clamped
class ControlSchedule {
public:
    enum class Kind { constant, piecewise, feedback };

    static ControlSchedule constant(double u);
    static ControlSchedule constant(double left, double right);
    // u(t) = u_i on [t_i, t_{i+1})
    static ControlSchedule piecewise(std::vector<double> t, std::vector<double> u);
    // u = target boundary value + gain (target - state) at the node next to the boundary
    static ControlSchedule feedback(GridProfile target, double gain);

    Kind kind() const { return kind_; }
    // returns {left, right}; left is ignored for balls
    std::pair<double, double> at(double t, const std::vector<double>& state) const;

private:
    Kind kind_ = Kind::constant;
    double left_ = 0.0, right_ = 0.0, gain_ = 0.0;
    std::vector<double> ts_, us_;
    std::vector<double> target_;
};

// implicit diffusion + drift, explicit reaction
class PdeStepper {
public:
    // dt <= 0 picks 0.4 min(h^2/2, 1/M)
    PdeStepper(const BistableNonlinearity& nl, const DriftField& drift, const DomainGeometry& g, int n,
               double dt = 0.0);

    static double default_dt(const BistableNonlinearity& nl, const DomainGeometry& g, int n);

    void step(PdeState& s, double u_left, double u_right) const;
    double dt() const { return dt_; }
    int n() const { return op_.n(); }
    const DomainGeometry& geometry() const { return op_.geometry(); }
    const WeightedOperator& op() const { return op_; }
    const BistableNonlinearity& nonlinearity() const { return nl_; }

private:
    BistableNonlinearity nl_;
    WeightedOperator op_;
    ImplicitSolver solver_;
    double dt_;
};

struct ControlSample {
    double t, left, right;
};

struct Simulation {
    std::vector<PdeState> snapshots;
    std::vector<double> dist0, dist_theta, dist1;  // per snapshot
    std::vector<ControlSample> controls;           // logged at snapshot cadence
    double control_min = 1.0, control_max = 0.0;   // over every step
    PdeState final_state;
    int steps = 0;
};

// snapshot_every <= 0: only initial and final states
Simulation simulate(const PdeStepper& st, const GridProfile& p0, const ControlSchedule& u, double T,
                    double snapshot_every = 0.0);

struct Verdict {
    enum class Status { converged, blocked };
    Status status = Status::converged;
    double time = 0.0;          // convergence time, or when the stall was detected
    double residual_sup = 0.0;  // sup |p - a| at that time
    GridProfile profile;        // final state
    std::vector<PdeState> history;
};

std::string to_string(Verdict::Status s);

// static control u = a. "horizon-too-short" when neither converged nor stalled by T_max
Verdict asymptotic_verdict(const PdeStepper& st, const GridProfile& p0, double a, double T_max, double tol = 1e-3,
                           int history_points = 50);

}  // namespace geneflow
