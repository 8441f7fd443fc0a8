// Acceptance checks. One PASS/FAIL line per criterion; exit status 0 only if every selected one passes.
//   acceptance               run all
//   acceptance --criterion 7 run one
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "geneflow/control.hpp"
#include "geneflow/energy.hpp"
#include "geneflow/spectral.hpp"
#include "geneflow/transform.hpp"

using namespace geneflow;

namespace tol {
constexpr double theta = 0.33;
// 1
constexpr double barrier_residual = 1e-6;
constexpr double barrier_deviation = 0.1;
constexpr double fig45_seconds = 10.0;
// 2
constexpr double witness_order = 1e-6;
constexpr double fig6_seconds = 30.0;
// 3
constexpr double eigen_rel = 1e-4;
constexpr double slope_lo = 1.8, slope_hi = 2.2;
// 4
constexpr double crossover_rel = 0.10;
// 5
constexpr double ratio_lo = 1.8, ratio_hi = 2.2;
constexpr double unblock_seconds = 60.0;
// 6
constexpr double plateau = 1e-6;
// 7
constexpr double minimizer_residual = 1e-5;
// 8
constexpr double laplace_rel = 0.01;
// 9
constexpr double factor_lo = 3.5, factor_hi = 4.5;
constexpr double NN_theta_abs = 1e-10;
// 10
constexpr double staircase_mintime_seconds = 300.0;
}  // namespace tol

namespace {

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string num(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.6g", v);
    return b;
}

DriftField fig_drift(double sigma) { return DriftField::family(DriftFamily::gauss_out, sigma, 1.0); }

// energy along the shooting trajectory has to pass through the right level set
bool phase_crossing_ok(const Barrier& b, const BistableNonlinearity& nl, bool to_one) {
    if (!b.trajectory) return false;
    const auto& s = b.trajectory->samples;
    double e0 = phase_energy(nl, s.front().p, s.front().v);
    double r_end = to_one ? *b.trajectory->r_one : *b.trajectory->r_zero;
    double e1 = phase_energy(nl, b.trajectory->p_at(r_end), b.trajectory->v_at(r_end));
    if (to_one) return e0 < nl.F(1.0) && e1 >= nl.F(1.0);
    return e0 > nl.F(0.0) && e0 < nl.F(1.0) && e1 > nl.F(0.0);
}

Outcome barrier_pair(double sigma) {
    auto nl = BistableNonlinearity::cubic(tol::theta);
    auto g = DomainGeometry::interval(2.5);
    Outcome o;
    std::ostringstream d;
    bool ok = true;
    for (bool one : {true, false}) {
        auto b = one ? find_barrier_one(nl, fig_drift(sigma), g) : find_barrier_zero(nl, fig_drift(sigma), g);
        d << (one ? "barrier-to-1: " : "barrier-to-0: ");
        if (!b) {
            d << "none; ";
            ok = false;
            continue;
        }
        double dev = one ? 1.0 - b->min : b->max;
        bool cross = phase_crossing_ok(*b, nl, one);
        d << "residual " << num(b->residual) << ", deviation " << num(dev) << ", phase " << (cross ? "ok" : "off")
          << "; ";
        ok = ok && b->residual < tol::barrier_residual && dev > tol::barrier_deviation && cross;
    }
    o.pass = ok;
    o.detail = d.str();
    return o;
}

Outcome criterion1() {
    auto t0 = Clock::now();
    auto o = barrier_pair(40.0);
    double s = seconds_since(t0);
    o.detail += "time " + num(s) + " s";
    o.pass = o.pass && s < tol::fig45_seconds;
    return o;
}

Outcome blocking(double sigma) {
    auto nl = BistableNonlinearity::cubic(tol::theta);
    Scenario sc;
    sc.drift = fig_drift(sigma);
    sc.geometry = DomainGeometry::interval(2.5);
    sc.n = 201;
    sc.T_max = 200.0;
    auto st = sc.stepper();
    Outcome o;
    std::ostringstream d;
    auto v0 = asymptotic_verdict(st, GridProfile(sc.geometry, sc.n, 1.0), 0.0, sc.T_max, sc.tol);
    auto v1 = asymptotic_verdict(st, GridProfile(sc.geometry, sc.n, 0.0), 1.0, sc.T_max, sc.tol);
    d << "1->0 " << to_string(v0.status) << ", 0->1 " << to_string(v1.status);
    bool ok = v0.status == Verdict::Status::blocked && v1.status == Verdict::Status::blocked;
    BarrierOptions bo;
    bo.n = sc.n;
    auto w = find_barrier_zero(nl, sc.drift, sc.geometry, bo);
    if (!w) {
        d << ", no barrier-to-0 witness";
        ok = false;
    } else {
        double worst = 0.0;
        for (const auto& snap : v0.history)
            for (int i = 0; i < sc.n; ++i) worst = std::max(worst, w->profile.values[i] - snap.profile.values[i]);
        d << ", witness excess " << num(worst);
        ok = ok && worst <= tol::witness_order;
    }
    o.pass = ok;
    o.detail = d.str();
    return o;
}

Outcome criterion2() {
    auto t0 = Clock::now();
    Outcome o;
    try {
        o = blocking(40.0);
    } catch (const Error& e) {
        o = {false, std::string("error ") + e.code()};
    }
    double s = seconds_since(t0);
    o.detail += "; time " + num(s) + " s";
    o.pass = o.pass && s < tol::fig6_seconds;
    return o;
}

Outcome criterion3() {
    bool ok = true;
    std::ostringstream d;
    for (double L : {1.0, 2.5}) {
        auto g = DomainGeometry::interval(L);
        double exact = M_PI * M_PI / (4 * L * L);
        double rel = std::abs(dirichlet_lambda1(g, 512).lambda - exact) / exact;
        auto fit = dirichlet_convergence(g, {64, 128, 256, 512}, exact);
        d << "L=" << L << ": rel " << num(rel) << ", slope " << num(fit.slope) << "; ";
        ok = ok && rel < tol::eigen_rel && fit.slope >= tol::slope_lo && fit.slope <= tol::slope_hi;
    }
    return {ok, d.str()};
}

Outcome criterion4() {
    auto nl = BistableNonlinearity::cubic(tol::theta);
    auto hom = DriftField::homogeneous();
    const double L_star = M_PI / (2 * std::sqrt(lipschitz_and_sup_fprime(nl).lipschitz));
    std::vector<std::future<std::pair<bool, bool>>> jobs;
    std::vector<double> Ls;
    for (int k = 0; k < 20; ++k) Ls.push_back(0.5 + 3.5 * k / 19.0);
    for (double L : Ls)
        jobs.push_back(std::async(std::launch::async, [&, L] {
            auto g = DomainGeometry::interval(L);
            bool holds = uniqueness_certificate(nl, hom, g, CertificateKind::zero_bc).holds;
            bool none = !find_barrier_zero(nl, hom, g).has_value();
            return std::make_pair(holds, none);
        }));
    int agree = 0, barriers = 0;
    double first_fail = NAN, first_barrier = NAN;
    for (size_t k = 0; k < Ls.size(); ++k) {
        auto [holds, none] = jobs[k].get();
        agree += holds == none;
        barriers += !none;
        if (!holds && std::isnan(first_fail)) first_fail = Ls[k];
        if (!none && std::isnan(first_barrier)) first_barrier = Ls[k];
    }
    std::ostringstream d;
    d << agree << "/20 agree, " << barriers << " with a barrier, certificate crossover near " << num(first_fail)
      << ", first barrier at " << (std::isnan(first_barrier) ? std::string("none") : num(first_barrier))
      << ", expected " << num(L_star);
    bool ok = agree == 20 && !std::isnan(first_barrier) &&
              std::abs(first_barrier - L_star) <= tol::crossover_rel * L_star &&
              std::abs(first_fail - L_star) <= tol::crossover_rel * L_star;
    return {ok, d.str()};
}

Outcome criterion5() {
    auto t0 = Clock::now();
    std::ostringstream d;
    bool ok = true;
    auto g6 = DomainGeometry::interval(6.0);
    for (double s : {1.0, 0.5}) {
        auto in = [&](double sig) { return DriftField::family(DriftFamily::gauss_in, sig, 1.0); };
        double ratio = drift_lambda1(in(s / 2), g6, 1024).lambda / drift_lambda1(in(s), g6, 1024).lambda;
        d << "ratio(" << s << ") " << num(ratio) << "; ";
        ok = ok && ratio >= tol::ratio_lo && ratio <= tol::ratio_hi;
    }
    int cases = 0, good = 0;
    for (double sigma : {0.25, 0.125})
        for (double L : {1.0, 2.5, 4.0}) {
            Scenario sc;
            sc.drift = DriftField::family(DriftFamily::gauss_in, sigma, 1.0);
            sc.geometry = DomainGeometry::interval(L);
            sc.n = 201;
            auto rep = controllability_report(sc, {0.0, 1.0});
            ++cases;
            if (rep.all_converged()) {
                ++good;
            } else {
                for (const auto& v : rep.verdicts)
                    if (v.status != "converged")
                        d << "[sigma " << sigma << " L " << L << " " << v.start << "->" << v.target << " " << v.status
                          << "] ";
            }
        }
    double secs = seconds_since(t0);
    d << good << "/" << cases << " reports all converged; time " << num(secs) << " s";
    ok = ok && good == cases && secs < tol::unblock_seconds;
    return {ok, d.str()};
}

Outcome criterion6() {
    auto nl = BistableNonlinearity::cubic(tol::theta);
    std::vector<double> r;
    std::ostringstream d;
    for (double a : {0.2, 0.1, 0.05, 0.025, 0.0125}) {
        auto t = shoot_radial(nl, fig_drift(40.0), a, 1, 100.0);
        r.push_back(t.r_theta ? *t.r_theta : NAN);
        d << num(r.back()) << " ";
    }
    bool ok = true;
    for (size_t k = 1; k < r.size(); ++k) ok = ok && r[k] - r[k - 1] > tol::plateau;
    // no saturation: the last increment keeps at least half the size of the first
    ok = ok && (r[4] - r[3]) >= 0.5 * (r[1] - r[0]);
    return {ok, "r_theta = " + d.str()};
}

Outcome criterion7() {
    auto nl = BistableNonlinearity::cubic(tol::theta);
    auto g = DomainGeometry::interval(2.5);
    auto drift = DriftField::family(DriftFamily::gauss_out, 1.0, 1.0);
    const double delta = 2.5 / 4;
    const int n = 2001;
    auto thr = negative_energy_sigma_threshold(nl, drift, g, delta, n);
    if (thr.status != SigmaThreshold::Status::found) return {false, "no finite sigma*"};
    auto eta = plateau_ramp_eta(delta, g, n);
    double s = thr.sigma_star;
    double e_half = energy_sigma(nl, drift.with_sigma(s / 2), eta).value;
    double e_twice = energy_sigma(nl, drift.with_sigma(2 * s), eta).value;
    auto mr = minimize_energy(nl, drift.with_sigma(s / 2), eta);
    std::ostringstream d;
    d << "sigma* " << num(s) << ", E(eta) at sigma*/2 " << num(e_half) << ", at 2 sigma* " << num(e_twice)
      << ", minimiser energy " << num(mr.energy) << ", residual " << num(mr.residual);
    bool ok = e_half < 0 && e_twice > 0 && mr.energy < 0 && mr.residual < tol::minimizer_residual;
    return {ok, d.str()};
}

Outcome criterion8() {
    auto r = laplace_ratio_check(1.0, 1, [](double) { return 1.0; }, {1e-4});
    double target = std::sqrt(M_PI) / 2;
    double rel = std::abs(r[0] - target) / target;
    return {rel < tol::laplace_rel, "ratio " + num(r[0]) + " vs " + num(target) + ", rel " + num(rel)};
}

Outcome criterion9() {
    auto nl = BistableNonlinearity::cubic(tol::theta);
    auto m = GeneFlowMap::build([](double p) { return 1.0 + p; });
    auto g = DomainGeometry::interval(1.0);
    // same data as the transform-check experiment: a smooth bump of height theta, horizon 10
    auto p0 = [](double x) { return 0.5 * (1.0 + std::cos(M_PI * x)) * tol::theta; };
    auto study = equivalence_refinement(nl, m, g, p0, 0.0, 0.0, 10.0, {0.01, 0.005, 0.0025});
    double NN = m.forward(tol::theta), exact = (std::pow(1.33, 3) - 1) / 7;
    bool ok = std::abs(NN - exact) < tol::NN_theta_abs;
    std::ostringstream d;
    d << "factors";
    for (double f : study.factor) {
        d << " " << num(f);
        ok = ok && f >= tol::factor_lo && f <= tol::factor_hi;
    }
    d << ", NN(theta) error " << num(std::abs(NN - exact));
    return {ok, d.str()};
}

std::vector<double> horizon_grid(double step, double max) {
    std::vector<double> h;
    for (double t = step; t <= max + 1e-9; t += step) h.push_back(t);
    return h;
}

Outcome criterion10() {
    auto t0 = Clock::now();
    std::ostringstream d;
    Scenario sc;
    sc.geometry = DomainGeometry::interval(1.0);
    sc.n = 201;
    auto st = staircase_to_theta(sc, GridProfile(sc.geometry, sc.n, 1.0));
    bool ok = st.success && st.u_min >= 0.0 && st.u_max <= 1.0;
    d << "staircase " << (st.success ? "ok" : st.reason) << " at t=" << num(st.total_time) << ", u in ["
      << num(st.u_min) << ", " << num(st.u_max) << "]; ";

    Scenario base;
    base.geometry = DomainGeometry::interval(2.5);
    base.n = 101;
    const std::vector<double> sigmas{16.0, 4.0, 1.0, 0.5};
    auto grid = horizon_grid(0.5, 80.0);
    auto scan = [&](DriftFamily fam) {
        Scenario b = base;
        b.drift = DriftField::family(fam, 1.0, 2.0);
        return mintime_scan(fam, sigmas, b, grid, 8);
    };
    auto in = scan(DriftFamily::gauss_in);
    auto out = scan(DriftFamily::gauss_out);
    d << "gauss_in";
    bool dec = true;
    for (size_t k = 0; k < in.size(); ++k) {
        d << " " << num(in[k].result.T_min);
        dec = dec && std::isfinite(in[k].result.T_min);
        if (k) dec = dec && in[k].result.T_min <= in[k - 1].result.T_min;
    }
    dec = dec && in.back().result.T_min < in.front().result.T_min;
    d << "; gauss_out";
    for (const auto& r : out) d << " " << num(r.result.T_min);
    // +inf tail: once infinite, infinite for every smaller sigma, and at least the smallest one is
    bool tail = !std::isfinite(out.back().result.T_min);
    bool seen = false;
    for (const auto& r : out) {
        if (!std::isfinite(r.result.T_min)) seen = true;
        else if (seen) tail = false;
    }
    double secs = seconds_since(t0);
    d << "; time " << num(secs) << " s";
    ok = ok && dec && tail && secs < tol::staircase_mintime_seconds;
    return {ok, d.str()};
}

// ---- invariant suite ----

bool comparison_principle(std::string& why) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto nl = BistableNonlinearity::cubic(tol::theta);
    for (int k = 0; k < 50; ++k) {
        double L = 0.5 + 3.0 * U(rng);
        auto fam = std::array{DriftFamily::homogeneous, DriftFamily::gauss_out, DriftFamily::gauss_in,
                              DriftFamily::abs_exp}[k % 4];
        auto drift = fam == DriftFamily::homogeneous ? DriftField::homogeneous()
                                                     : DriftField::family(fam, 0.3 + 3.0 * U(rng), 1.0);
        auto g = DomainGeometry::interval(L);
        PdeStepper st(nl, drift, g, 81);
        double a1 = U(rng), a2 = U(rng), c1 = U(rng), c2 = U(rng);
        auto lo = GridProfile::sample(g, 81, [&](double x) { return 0.5 * a1 * (1 + std::sin(3 * x + a2)); });
        auto hi = lo;
        for (int i = 0; i < 81; ++i) hi.values[i] = std::min(1.0, lo.values[i] + 0.3 * U(rng));
        double ul = std::min(c1, c2), uh = std::max(c1, c2);
        PdeState p{0, lo}, q{0, hi};
        for (int s = 0; s < 400; ++s) {
            st.step(p, ul, ul);
            st.step(q, uh, uh);
            for (int i = 0; i < 81; ++i)
                if (p.profile.values[i] > q.profile.values[i] + 1e-12) {
                    why = "order lost in pair " + std::to_string(k);
                    return false;
                }
        }
    }
    return true;
}

bool invariant_region(std::string& why) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto nl = BistableNonlinearity::cubic(tol::theta);
    for (int k = 0; k < 20; ++k) {
        auto g = DomainGeometry::interval(0.5 + 4 * U(rng));
        PdeStepper st(nl, DriftField::family(DriftFamily::gauss_out, 0.2 + U(rng), 1.0), g, 101);
        PdeState s{0, GridProfile::sample(g, 101, [&](double) { return U(rng); })};
        for (int j = 0; j < 300; ++j) {
            double u = U(rng) < 0.5 ? 0.0 : 1.0;
            st.step(s, u, U(rng));
            if (s.profile.min() < -1e-14 || s.profile.max() > 1 + 1e-14) {
                why = "left [0,1] in run " + std::to_string(k);
                return false;
            }
        }
    }
    return true;
}

bool argmin_is_steady(std::string& why) {
    auto nl = BistableNonlinearity::cubic(tol::theta);
    auto g = DomainGeometry::interval(2.5);
    auto drift = DriftField::family(DriftFamily::gauss_out, 0.1, 1.0);
    auto mr = minimize_energy(nl, drift, plateau_ramp_eta(0.625, g, 401));
    PdeStepper st(nl, drift, g, 401);
    PdeState s{0, mr.profile};
    for (int k = 0; k < 200; ++k) st.step(s, 0.0, 0.0);
    double drift_away = sup_distance(s.profile, mr.profile);
    if (mr.residual > 1e-8 || drift_away > 1e-6) {
        why = "minimiser residual " + num(mr.residual) + ", moved " + num(drift_away);
        return false;
    }
    return true;
}

bool phase_energy_law(std::string& why) {
    // E = v^2/2 + F(p) obeys dE/dr = -((d-1)/r + b) v^2; compare the energy change between accepted
    // steps with a Simpson integral of the right-hand side (midpoint from the dense output)
    auto nl = BistableNonlinearity::cubic(tol::theta);
    for (int d : {1, 2, 3}) {
        auto drift = DriftField::family(DriftFamily::gauss_out, 0.7, 1.0);
        auto t = shoot_radial(nl, drift, 0.8, d, 3.0);
        auto rhs = [&](double r, double v) {
            double c = drift.coefficient(r) + (r > 0 ? (d - 1) / r : 0.0);
            return -c * v * v;
        };
        double integral = 0.0, worst = 0.0;
        const auto& S = t.samples;
        const double e0 = phase_energy(nl, S[0].p, S[0].v);
        for (size_t k = 1; k < S.size(); ++k) {
            double a = S[k - 1].r, b = S[k].r, m = 0.5 * (a + b);
            integral += (b - a) / 6 * (rhs(a, S[k - 1].v) + 4 * rhs(m, t.v_at(m)) + rhs(b, S[k].v));
            double e = phase_energy(nl, S[k].p, S[k].v);
            worst = std::max(worst, std::abs(e - e0 - integral) / std::max(1.0, std::abs(e)));
        }
        if (worst > 1e-7) {
            why = "energy balance off by " + num(worst) + " in d=" + std::to_string(d);
            return false;
        }
    }
    return true;
}

Outcome criterion11() {
    std::ostringstream d;
    bool ok = true;
    std::vector<std::pair<std::string, std::function<bool(std::string&)>>> parts = {
        {"comparison", comparison_principle},
        {"invariant-region", invariant_region},
        {"argmin-steady", argmin_is_steady},
        {"phase-energy", phase_energy_law}};
    for (auto& [name, fn] : parts) {
        std::string why;
        bool r = fn(why);
        d << name << " " << (r ? "ok" : "FAIL(" + why + ")") << "; ";
        ok = ok && r;
    }
    return {ok, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    int only = 0;
    bool info = true;
    app.add_option("--criterion", only, "run a single criterion (1-11)")->check(CLI::Range(1, 11));
    app.add_flag("!--no-info", info, "skip the informational sigma=0.5 lines");
    CLI11_PARSE(app, argc, argv);

    std::vector<std::function<Outcome()>> all = {criterion1, criterion2, criterion3, criterion4,
                                                 criterion5, criterion6, criterion7, criterion8,
                                                 criterion9, criterion10, criterion11};
    int failed = 0;
    for (int k = 1; k <= 11; ++k) {
        if (only && k != only) continue;
        Outcome o;
        try {
            o = all[k - 1]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("CRITERION %d %s: %s\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
        // same checks with a stronger drift, to show the phenomena exist; never gating
        if (info && (k == 1 || k == 2)) {
            auto i = k == 1 ? barrier_pair(0.5) : blocking(0.5);
            std::printf("  info (sigma=0.5, not gating) %s: %s\n", i.pass ? "pass" : "fail", i.detail.c_str());
        }
    }
    return failed ? 1 : 0;
}
