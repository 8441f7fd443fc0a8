#include "geneflow/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace geneflow {

ControlSchedule ControlSchedule::constant(double u) { return constant(u, u); }

ControlSchedule ControlSchedule::constant(double left, double right) {
    if (!(left >= 0.0 && left <= 1.0 && right >= 0.0 && right <= 1.0))
        throw Error("invalid-control", "static control must lie in [0,1]");
    ControlSchedule c;
    c.left_ = left;
    c.right_ = right;
    return c;
}

ControlSchedule ControlSchedule::piecewise(std::vector<double> t, std::vector<double> u) {
    if (t.empty() || t.size() != u.size()) throw Error("invalid-control", "need matching, nonempty t and u");
    if (!std::is_sorted(t.begin(), t.end())) throw Error("invalid-control", "times must increase");
    for (double v : u)
        if (!(v >= 0.0 && v <= 1.0)) throw Error("invalid-control", "control values must lie in [0,1]");
    ControlSchedule c;
    c.kind_ = Kind::piecewise;
    c.ts_ = std::move(t);
    c.us_ = std::move(u);
    return c;
}

ControlSchedule ControlSchedule::feedback(GridProfile target, double gain) {
    ControlSchedule c;
    c.kind_ = Kind::feedback;
    c.gain_ = gain;
    c.left_ = std::clamp(target.values.front(), 0.0, 1.0);
    c.right_ = std::clamp(target.values.back(), 0.0, 1.0);
    c.target_ = std::move(target.values);
    return c;
}

std::pair<double, double> ControlSchedule::at(double t, const std::vector<double>& p) const {
    switch (kind_) {
        case Kind::constant: return {left_, right_};
        case Kind::piecewise: {
            auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
            size_t k = it == ts_.begin() ? 0 : size_t(it - ts_.begin()) - 1;
            return {us_[k], us_[k]};
        }
        case Kind::feedback: {
            const size_t n = p.size();
            double l = left_ + gain_ * (target_[1] - p[1]);
            double r = right_ + gain_ * (target_[n - 2] - p[n - 2]);
            return {std::clamp(l, 0.0, 1.0), std::clamp(r, 0.0, 1.0)};
        }
    }
    return {0.0, 0.0};
}

double PdeStepper::default_dt(const BistableNonlinearity& nl, const DomainGeometry& g, int n) {
    double h = g.width() / (n - 1);
    double M = lipschitz_and_sup_fprime(nl).lipschitz;
    return 0.4 * std::min(0.5 * h * h, 1.0 / M);
}

PdeStepper::PdeStepper(const BistableNonlinearity& nl, const DriftField& drift, const DomainGeometry& g, int n,
                       double dt)
    : nl_(nl),
      op_(WeightedOperator::from_drift(g, n, drift)),
      solver_(op_, dt > 0.0 ? dt : default_dt(nl, g, n)),
      dt_(dt > 0.0 ? dt : default_dt(nl, g, n)) {
    if (!drift.is_spatial()) throw Error("invalid-drift", "the PDE stepper needs a spatial density");
    if (dt_ * lipschitz_and_sup_fprime(nl).lipschitz >= 1.0)
        throw Error("dt-too-large", "dt * sup|f'| must stay below 1 for a monotone reaction step");
}

void PdeStepper::step(PdeState& s, double u_left, double u_right) const {
    if (!(u_left >= 0.0 && u_left <= 1.0 && u_right >= 0.0 && u_right <= 1.0))
        throw Error("invalid-control", "boundary values must lie in [0,1]");
    auto& p = s.profile.values;
    for (double& v : p) v += dt_ * nl_.f(v);
    solver_.solve(p, u_left, u_right);
    s.t += dt_;
}

Simulation simulate(const PdeStepper& st, const GridProfile& p0, const ControlSchedule& u, double T,
                    double snapshot_every) {
    if (p0.n() != st.n()) throw Error("invalid-grid", "initial datum and stepper grids differ");
    const double th = st.nonlinearity().theta();
    Simulation sim;
    PdeState s{0.0, p0};
    auto record = [&](double uL, double uR) {
        sim.snapshots.push_back(s);
        sim.dist0.push_back(sup_distance(s.profile, 0.0));
        sim.dist_theta.push_back(sup_distance(s.profile, th));
        sim.dist1.push_back(sup_distance(s.profile, 1.0));
        sim.controls.push_back({s.t, uL, uR});
    };
    auto [l0, r0] = u.at(0.0, s.profile.values);
    record(l0, r0);
    const long nsteps = std::lround(std::ceil(T / st.dt() - 1e-9));
    // snapshot on the nearest step to each multiple of snapshot_every, so cadences do not drift
    const double every = snapshot_every > 0 ? std::max(snapshot_every, st.dt()) : 2.0 * T + 1.0;
    long next = 1;
    double uL = l0, uR = r0;
    for (long k = 1; k <= nsteps; ++k) {
        std::tie(uL, uR) = u.at(s.t, s.profile.values);
        sim.control_min = std::min({sim.control_min, uL, uR});
        sim.control_max = std::max({sim.control_max, uL, uR});
        st.step(s, uL, uR);
        if (s.t >= next * every - 0.5 * st.dt()) {
            ++next;
            if (k != nsteps) record(uL, uR);
        }
    }
    record(uL, uR);
    sim.steps = static_cast<int>(nsteps);
    sim.final_state = s;
    return sim;
}

std::string to_string(Verdict::Status s) { return s == Verdict::Status::converged ? "converged" : "blocked"; }

Verdict asymptotic_verdict(const PdeStepper& st, const GridProfile& p0, double a, double T_max, double tol,
                           int history_points) {
    if (!(tol > 0.0)) throw Error("invalid-scalar", "tol must be positive");
    if (!(a >= 0.0 && a <= 1.0)) throw Error("invalid-control", "target must lie in [0,1]");
    Verdict v;
    PdeState s{0.0, p0};
    const double dt = st.dt();
    const long nsteps = std::lround(std::ceil(T_max / dt - 1e-9));
    const long window = std::max(1L, std::lround(0.1 * T_max / dt));
    const long hist_every = std::max(1L, nsteps / std::max(1, history_points));
    std::vector<double> anchor = s.profile.values;
    v.history.push_back(s);

    auto dist = [&] { return sup_distance(s.profile, a); };
    if (dist() < tol) {
        v.status = Verdict::Status::converged;
        v.residual_sup = dist();
        v.profile = s.profile;
        return v;
    }
    for (long k = 1; k <= nsteps; ++k) {
        st.step(s, a, a);
        if (k % hist_every == 0) v.history.push_back(s);
        double d = dist();
        if (d < tol) {
            v.status = Verdict::Status::converged;
            v.time = s.t;
            v.residual_sup = d;
            v.profile = s.profile;
            v.history.push_back(s);
            return v;
        }
        if (k % window == 0) {
            double change = 0.0;
            for (int i = 0; i < st.n(); ++i) change = std::max(change, std::abs(s.profile.values[i] - anchor[i]));
            if (change < 0.1 * tol) {
                v.status = Verdict::Status::blocked;
                v.time = s.t;
                v.residual_sup = d;
                v.profile = s.profile;
                v.history.push_back(s);
                return v;
            }
            anchor = s.profile.values;
        }
    }
    throw Error("horizon-too-short", "neither converged nor stalled within T_max");
}

}  // namespace geneflow
