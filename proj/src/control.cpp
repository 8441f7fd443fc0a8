#include "geneflow/control.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace geneflow {

namespace {

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

StaircaseResult fail(StaircaseResult r, std::string stage, std::string reason, const PdeState& s) {
    r.success = false;
    r.stage = std::move(stage);
    r.reason = std::move(reason);
    r.total_time = s.t;
    r.final_profile = s.profile;
    r.snapshots.push_back(s);
    return r;
}

}  // namespace

StaircaseResult staircase_to_theta(const Scenario& sc, const GridProfile& p0) {
    return staircase_to_theta(sc, p0, sc.T1, sc.T_max);
}

StaircaseResult staircase_to_theta(const Scenario& sc, const GridProfile& p0, double T1, double T_max) {
    const auto nl = sc.nonlinearity();
    const double th = nl.theta(), delta = sc.delta1;
    auto st = sc.stepper();
    const double dt = st.dt();
    StaircaseResult res;
    PdeState s{0.0, p0};
    const long rec = sc.record_every > 0 ? std::max(1L, std::lround(sc.record_every / dt)) : 0;
    long count = 0;
    auto advance = [&](double l, double r) {
        st.step(s, l, r);
        if (rec && ++count % rec == 0) {
            res.snapshots.push_back(s);
            res.controls.push_back({s.t, l, r});
        }
    };
    if (rec) res.snapshots.push_back(s);

    if (sup_distance(s.profile, th) <= delta) {
        res.success = true;
        res.terminal_error = sup_distance(s.profile, th);
        res.final_profile = s.profile;
        return res;
    }

    // step 1: u = 0 until the state is near 0
    const long window = std::max(1L, std::lround(std::min(5.0, 0.1 * T_max) / dt));
    std::vector<double> anchor = s.profile.values;
    for (long k = 1; sup_distance(s.profile, 0.0) > 0.5 * delta; ++k) {
        if (s.t >= T_max) return fail(res, "step1", "time-budget", s);
        advance(0.0, 0.0);
        res.u_min = 0.0;
        if (k % window == 0) {
            if (sup_diff(s.profile.values, anchor) < 0.1 * sc.tol) return fail(res, "step1", "barrier-to-0", s);
            anchor = s.profile.values;
        }
    }

    SteadyPath path;
    try {
        path = build_steady_path(nl, sc.drift, sc.geometry, sc.path_K, delta, sc.n);
    } catch (const Error& e) {
        return fail(res, "path", e.code(), s);
    }
    if (!path.admissible) return fail(res, "path", "path-inadmissible", s);

    // one step moves the probe node by sens * (boundary change); keep gain * sens <= 1 or the
    // sampled loop chatters between the clamps
    double sens = 0.0;
    {
        const auto& op = st.op();
        const int n = op.n();
        auto at = [&](int i, double edge) { return dt * edge / (1.0 + dt * (op.lo()[i] + op.up()[i])); };
        sens = at(n - 2, op.up()[n - 2]);
        if (op.first() == 1) sens = std::max(sens, at(1, op.lo()[1]));
    }
    const double gain = std::min(sc.gain, 1.0 / sens);

    for (size_t k = 1; k < path.profiles.size(); ++k) {
        const auto& target = path.profiles[k];
        auto u = ControlSchedule::feedback(target, gain);
        Leg leg;
        leg.s_from = path.s[k - 1];
        leg.s_to = path.s[k];
        const double t0 = s.t;
        while (sup_distance(s.profile, target) > 0.5 * delta) {
            if (s.t - t0 >= T1) {
                res.legs.push_back(leg);
                return fail(res, "leg " + std::to_string(k), "leg-stall", s);
            }
            if (s.t >= T_max) {
                res.legs.push_back(leg);
                return fail(res, "leg " + std::to_string(k), "time-budget", s);
            }
            auto [l, r] = u.at(s.t, s.profile.values);
            leg.u_min = std::min({leg.u_min, l, r});
            leg.u_max = std::max({leg.u_max, l, r});
            advance(l, r);
        }
        leg.time = s.t - t0;
        leg.sup_error = sup_distance(s.profile, target);
        res.u_min = std::min(res.u_min, leg.u_min);
        res.u_max = std::max(res.u_max, leg.u_max);
        res.legs.push_back(leg);
    }
    res.terminal_error = sup_distance(s.profile, th);
    if (res.terminal_error > delta) return fail(res, "final", "leg-stall", s);
    if (s.t > T_max) return fail(res, "final", "time-budget", s);
    res.success = true;
    res.total_time = s.t;
    res.final_profile = s.profile;
    if (rec) res.snapshots.push_back(s);
    return res;
}

bool ControllabilityReport::all_converged() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const TargetVerdict& v) { return v.status == "converged"; });
}

ControllabilityReport controllability_report(const Scenario& sc, const std::vector<double>& starts) {
    ControllabilityReport rep;
    const auto nl = sc.nonlinearity();
    auto st = sc.stepper();
    BarrierOptions bopt;
    bopt.n = sc.n;
    for (double a0 : starts) {
        GridProfile p0(sc.geometry, sc.n, a0);
        for (double target : {0.0, 1.0}) {
            TargetVerdict tv;
            tv.start = a0;
            tv.target = target == 0.0 ? "0" : "1";
            try {
                auto v = asymptotic_verdict(st, p0, target, sc.T_max, sc.tol);
                tv.status = to_string(v.status);
                tv.time = v.time;
                tv.residual_sup = v.residual_sup;
                if (v.status == Verdict::Status::blocked) {
                    tv.witness = target == 0.0 ? find_barrier_zero(nl, sc.drift, sc.geometry, bopt)
                                               : find_barrier_one(nl, sc.drift, sc.geometry, bopt);
                    if (tv.witness) {
                        const auto& w = tv.witness->profile.values;
                        tv.witness_orders = std::all_of(v.history.begin(), v.history.end(), [&](const PdeState& s) {
                            for (size_t i = 0; i < w.size(); ++i) {
                                double p = s.profile.values[i];
                                if (target == 0.0 ? p < w[i] - 1e-6 : p > w[i] + 1e-6) return false;
                            }
                            return true;
                        });
                    } else {
                        tv.detail = "no barrier found";
                    }
                }
            } catch (const Error& e) {
                tv.status = "indeterminate";
                tv.detail = e.code();
            }
            rep.verdicts.push_back(std::move(tv));
        }
        TargetVerdict tv;
        tv.start = a0;
        tv.target = "theta";
        auto r = staircase_to_theta(sc, p0);
        tv.status = r.success ? "converged" : "failed";
        tv.time = r.total_time;
        tv.residual_sup = r.success ? r.terminal_error : sup_distance(r.final_profile, sc.theta);
        if (!r.success) {
            tv.detail = r.stage + ": " + r.reason;
            if (r.reason == "barrier-to-0") tv.witness = find_barrier_zero(nl, sc.drift, sc.geometry, bopt);
        }
        rep.verdicts.push_back(std::move(tv));
    }
    return rep;
}

MinTimeResult minimal_time_to_theta(const Scenario& sc, const std::vector<double>& horizon_grid) {
    MinTimeResult out;
    std::vector<double> grid = horizon_grid;
    std::sort(grid.begin(), grid.end());
    if (grid.empty()) return out;
    GridProfile p0(sc.geometry, sc.n, 0.0);
    std::vector<std::pair<double, bool>> probed;
    auto feasible = [&](size_t k) {
        ++out.probes;
        bool ok = staircase_to_theta(sc, p0, grid[k], grid[k]).success;
        probed.emplace_back(grid[k], ok);
        return ok;
    };
    long lo = -1, hi = static_cast<long>(grid.size()) - 1;
    if (!feasible(hi)) return out;
    while (hi - lo > 1) {
        long mid = (lo + hi) / 2;
        (feasible(mid) ? hi : lo) = mid;
    }
    out.T_min = grid[hi];
    for (auto& [ta, oka] : probed)
        for (auto& [tb, okb] : probed)
            if (oka && !okb && tb > ta) out.monotone = false;
    return out;
}

std::vector<MinTimeRow> mintime_scan(DriftFamily family, const std::vector<double>& sigmas, const Scenario& base,
                                     const std::vector<double>& horizon_grid, int jobs) {
    std::vector<MinTimeRow> rows(sigmas.size());
    auto one = [&](size_t k) {
        Scenario sc = base;
        sc.drift = family == DriftFamily::homogeneous ? DriftField::homogeneous()
                                                      : DriftField::family(family, sigmas[k], base.drift.rate());
        auto r = minimal_time_to_theta(sc, horizon_grid);
        r.parameter = sigmas[k];
        return MinTimeRow{sigmas[k], r};
    };
    jobs = std::max(1, jobs);
    for (size_t start = 0; start < sigmas.size(); start += jobs) {
        std::vector<std::future<MinTimeRow>> fut;
        for (size_t k = start; k < std::min(sigmas.size(), start + jobs); ++k)
            fut.push_back(std::async(std::launch::async, one, k));
        for (size_t k = 0; k < fut.size(); ++k) rows[start + k] = fut[k].get();
    }
    return rows;
}

}  // namespace geneflow
