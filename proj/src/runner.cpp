#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>

#include "geneflow/energy.hpp"
#include "geneflow/io.hpp"
#include "geneflow/spectral.hpp"
#include "geneflow/transform.hpp"

namespace geneflow {

namespace fs = std::filesystem;

namespace {

struct Out {
    fs::path dir;
    std::string hash;
    std::string file(const std::string& name) const { return (dir / name).string(); }
};

json barrier_json(const Barrier& b, double fine) {
    json j = {{"found", true},
              {"boundary_value", b.boundary_value},
              {"residual", b.residual},
              {"fine_residual", fine},
              {"min", b.min},
              {"max", b.max},
              {"alpha", b.alpha},
              {"b_eff_at_boundary", b.b_eff_boundary},
              {"source", b.source}};
    if (b.trajectory) {
        const auto& t = *b.trajectory;
        auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
        j["events"] = {{"r_theta", opt(t.r_theta)},
                       {"r_half_theta", opt(t.r_half_theta)},
                       {"r_one", opt(t.r_one)},
                       {"r_zero", opt(t.r_zero)},
                       {"blow_up", t.blow_up}};
    }
    return j;
}

// the two energy level sets {E = F(0)} and {E = F(1)} in the (p, v) plane
std::vector<SvgSeries> level_sets(const BistableNonlinearity& nl) {
    std::vector<SvgSeries> out;
    for (double level : {nl.F(0.0), nl.F(1.0)}) {
        SvgSeries up{level == nl.F(0.0) ? "E = F(0)" : "E = F(1)", level == nl.F(0.0) ? "blue" : "red", {}, {}, true};
        SvgSeries dn{"", up.color, {}, {}, true};
        for (int k = 0; k <= 400; ++k) {
            double p = -0.05 + 1.1 * k / 400.0;
            double r = 2.0 * (level - nl.F(p));
            double v = r >= 0 ? std::sqrt(r) : NAN;
            up.x.push_back(p);
            up.y.push_back(v);
            dn.x.push_back(p);
            dn.y.push_back(-v);
        }
        out.push_back(up);
        out.push_back(dn);
    }
    return out;
}

void dump_trajectory(const Out& o, const std::string& name, const RadialTrajectory& t) {
    CsvWriter w(o.file(name), o.hash, {"r", "p", "v"});
    for (const auto& s : t.samples) w.row({s.r, s.p, s.v});
}

void dump_profile(const Out& o, const std::string& name, const GridProfile& p) {
    CsvWriter w(o.file(name), o.hash, {"x", "p"});
    for (int i = 0; i < p.n(); ++i) w.row({p.x(i), p.values[i]});
}

SvgSeries profile_series(const GridProfile& p, const std::string& label, const std::string& color) {
    SvgSeries s{label, color, {}, {}, false};
    for (int i = 0; i < p.n(); ++i) {
        s.x.push_back(p.x(i));
        s.y.push_back(p.values[i]);
    }
    return s;
}

std::string shade(size_t k, size_t n) {
    // light red to black as time goes on
    double t = n > 1 ? double(k) / (n - 1) : 1.0;
    int r = static_cast<int>(std::lround(230 * (1 - t))), g = static_cast<int>(std::lround(120 * (1 - t)));
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, g);
    return buf;
}

void dump_snapshots(const Out& o, const std::string& stem, const std::vector<PdeState>& snaps, const std::string& title) {
    {
        CsvWriter w(o.file(stem + ".csv"), o.hash, {"t", "x", "p"});
        for (const auto& s : snaps)
            for (int i = 0; i < s.profile.n(); ++i) w.row({s.t, s.profile.x(i), s.profile.values[i]});
    }
    std::vector<SvgSeries> ser;
    const size_t stride = std::max<size_t>(1, snaps.size() / 12);
    for (size_t k = 0; k < snaps.size(); k += stride) ser.push_back(profile_series(snaps[k].profile, "", shade(k, snaps.size())));
    ser.push_back(profile_series(snaps.back().profile, "t=" + fmt(snaps.back().t), "black"));
    write_svg(o.file(stem + ".svg"), title, "x", "p", ser);
}

json run_barriers(const RunConfig& cfg, const Out& o) {
    const auto& sc = cfg.sc;
    auto nl = sc.nonlinearity();
    BarrierOptions opt;
    opt.n = sc.n;
    json sum;
    for (std::string which : {"one", "zero"}) {
        if (cfg.boundary != "both" && cfg.boundary != which) continue;
        auto b = which == "one" ? find_barrier_one(nl, sc.drift, sc.geometry, opt)
                                : find_barrier_zero(nl, sc.drift, sc.geometry, opt);
        std::string stem = "barrier_" + which;
        if (!b) {
            sum[stem] = {{"found", false}, {"b_eff_at_boundary", sc.drift.coefficient(sc.geometry.inradius())}};
            continue;
        }
        double fine = barrier_fine_check(*b, nl, sc.drift, 2 * sc.n - 1);
        sum[stem] = barrier_json(*b, fine);
        dump_profile(o, stem + ".csv", b->profile);
        write_svg(o.file(stem + "_profile.svg"), "barrier, boundary value " + fmt(b->boundary_value), "x", "p",
                  {profile_series(b->profile, "p", "black")});
        if (b->trajectory) {
            dump_trajectory(o, stem + "_trajectory.csv", *b->trajectory);
            auto ser = level_sets(nl);
            SvgSeries tr{"trajectory", "black", {}, {}, false};
            for (const auto& s : b->trajectory->samples) {
                tr.x.push_back(s.p);
                tr.y.push_back(s.v);
            }
            ser.push_back(tr);
            write_svg(o.file(stem + "_phase.svg"), "phase portrait", "p", "p'", ser);
        }
        std::ofstream(o.file(stem + ".json")) << sum[stem].dump(2) << "\n";
    }
    return sum;
}

json run_phase(const RunConfig& cfg, const Out& o) {
    const auto& sc = cfg.sc;
    auto nl = sc.nonlinearity();
    auto ser = level_sets(nl);
    json sum = json::array();
    for (size_t k = 0; k < cfg.alphas.size(); ++k) {
        auto t = shoot_radial(nl, sc.drift, cfg.alphas[k], sc.geometry.dim(), sc.geometry.inradius());
        dump_trajectory(o, "trajectory_" + std::to_string(k) + ".csv", t);
        SvgSeries s{"alpha=" + fmt(cfg.alphas[k]), shade(k, cfg.alphas.size()), {}, {}, false};
        for (const auto& q : t.samples) {
            s.x.push_back(q.p);
            s.y.push_back(q.v);
        }
        ser.push_back(s);
        auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
        sum.push_back({{"alpha", cfg.alphas[k]},
                       {"r_theta", opt(t.r_theta)},
                       {"r_half_theta", opt(t.r_half_theta)},
                       {"r_one", opt(t.r_one)},
                       {"r_zero", opt(t.r_zero)},
                       {"r_end", t.r_end()},
                       {"blow_up", t.blow_up}});
    }
    write_svg(o.file("phase.svg"), "phase portrait", "p", "p'", ser);
    return {{"trajectories", sum}};
}

json run_simulate(const RunConfig& cfg, const Out& o) {
    const auto& sc = cfg.sc;
    auto st = sc.stepper();
    json sum = json::array();
    for (size_t k = 0; k < cfg.runs.size(); ++k) {
        const auto& run = cfg.runs[k];
        auto p0 = make_initial(run.initial, cfg);
        auto u = run.control.kind == "static" ? ControlSchedule::constant(run.control.left, run.control.right)
                                              : ControlSchedule::piecewise(run.control.t, run.control.u);
        auto sim = simulate(st, p0, u, cfg.T, cfg.snapshot_every);
        std::string stem = "run_" + std::to_string(k);
        dump_snapshots(o, stem, sim.snapshots, "simulation " + std::to_string(k));
        {
            CsvWriter w(o.file(stem + "_distances.csv"), o.hash, {"t", "dist0", "dist_theta", "dist1", "u_left", "u_right"});
            for (size_t i = 0; i < sim.snapshots.size(); ++i)
                w.row({sim.snapshots[i].t, sim.dist0[i], sim.dist_theta[i], sim.dist1[i], sim.controls[i].left,
                       sim.controls[i].right});
        }
        json r = {{"steps", sim.steps},
                  {"dt", st.dt()},
                  {"control_min", sim.control_min},
                  {"control_max", sim.control_max},
                  {"final_dist0", sim.dist0.back()},
                  {"final_dist_theta", sim.dist_theta.back()},
                  {"final_dist1", sim.dist1.back()}};
        if (run.control.kind == "static" && run.control.left == run.control.right) {
            try {
                auto v = asymptotic_verdict(st, p0, run.control.left, sc.T_max, sc.tol);
                r["verdict"] = {{"status", to_string(v.status)}, {"time", v.time}, {"residual_sup", v.residual_sup}};
            } catch (const Error& e) {
                r["verdict"] = {{"status", "indeterminate"}, {"detail", e.code()}};
            }
        }
        sum.push_back(r);
    }
    return {{"runs", sum}};
}

json run_staircase(const RunConfig& cfg, const Out& o) {
    json sum = json::array();
    for (double a : cfg.starts) {
        Scenario sc = cfg.sc;
        auto r = staircase_to_theta(sc, GridProfile(sc.geometry, sc.n, a));
        std::string stem = "staircase_from_" + fmt(a);
        if (!r.snapshots.empty()) dump_snapshots(o, stem, r.snapshots, "staircase from p0 = " + fmt(a));
        json legs = json::array();
        for (const auto& l : r.legs)
            legs.push_back({{"s_from", l.s_from}, {"s_to", l.s_to}, {"time", l.time}, {"sup_error", l.sup_error},
                            {"u_min", l.u_min}, {"u_max", l.u_max}});
        sum.push_back({{"start", a},
                       {"success", r.success},
                       {"total_time", r.total_time},
                       {"stage", r.stage},
                       {"reason", r.reason},
                       {"terminal_error", r.terminal_error},
                       {"u_min", r.u_min},
                       {"u_max", r.u_max},
                       {"legs", legs}});
    }
    return {{"staircase", sum}};
}

json run_report(const RunConfig& cfg, const Out& o) {
    auto rep = controllability_report(cfg.sc, cfg.starts);
    json arr = json::array();
    int w = 0;
    for (const auto& v : rep.verdicts) {
        json j = {{"start", v.start},   {"target", v.target},      {"status", v.status},
                  {"time", v.time},     {"residual_sup", v.residual_sup}, {"detail", v.detail}};
        if (v.witness) {
            std::string name = "witness_" + std::to_string(w++) + ".csv";
            dump_profile(o, name, v.witness->profile);
            j["witness"] = {{"file", name}, {"residual", v.witness->residual}, {"orders_trajectory", v.witness_orders}};
        }
        arr.push_back(j);
    }
    json sum = {{"verdicts", arr}, {"all_converged", rep.all_converged()}};
    std::ofstream(o.file("report.json")) << sum.dump(2) << "\n";
    return sum;
}

json run_mintime(const RunConfig& cfg, const Out& o, int jobs) {
    CsvWriter w(o.file("mintime.csv"), o.hash, {"family", "sigma", "T_min"});
    std::vector<SvgSeries> ser;
    const char* colors[] = {"#c0392b", "#27ae60", "#2471a3", "#7d3c98", "#b9770e"};
    json sum = json::array();
    int c = 0;
    for (const auto& [fam, rate] : cfg.mt_families) {
        Scenario base = cfg.sc;
        base.drift = fam == DriftFamily::homogeneous ? DriftField::homogeneous() : DriftField::family(fam, 1.0, rate);
        auto rows = mintime_scan(fam, cfg.sigmas, base, cfg.horizons, jobs);
        SvgSeries s{to_string(fam), colors[c++ % 5], {}, {}, false};
        for (const auto& r : rows) {
            w.row(std::vector<std::string>{to_string(fam), fmt(r.sigma), fmt(r.result.T_min)});
            s.x.push_back(std::log10(r.sigma));
            s.y.push_back(r.result.T_min);
            sum.push_back({{"family", to_string(fam)},
                           {"rate", rate},
                           {"sigma", r.sigma},
                           {"T_min", std::isfinite(r.result.T_min) ? json(r.result.T_min) : json("inf")},
                           {"probes", r.result.probes},
                           {"monotone", r.result.monotone}});
        }
        ser.push_back(s);
    }
    write_svg(o.file("mintime.svg"), "minimal time 0 -> theta (gaps: no finite time)", "log10 sigma", "T_min", ser);
    return {{"mintime", sum}};
}

json run_eigen(const RunConfig& cfg, const Out& o) {
    const auto& sc = cfg.sc;
    auto nl = sc.nonlinearity();
    auto plain = dirichlet_lambda1(sc.geometry, sc.n);
    auto weighted = sc.drift.kind() == DriftFamily::homogeneous ? plain : drift_lambda1(sc.drift, sc.geometry, sc.n);
    {
        CsvWriter w(o.file("eigen.csv"), o.hash, {"x", "dirichlet", "weighted"});
        for (int i = 0; i < sc.n; ++i)
            w.row({plain.eigenprofile.x(i), plain.eigenprofile.values[i], weighted.eigenprofile.values[i]});
    }
    auto zc = uniqueness_certificate(nl, sc.drift, sc.geometry, CertificateKind::zero_bc, sc.n);
    auto gc = uniqueness_certificate(nl, sc.drift, sc.geometry, CertificateKind::general, sc.n);
    auto cert = [](const Certificate& c) {
        return json{{"holds", c.holds}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"log_weight_oscillation", c.log_weight_oscillation}};
    };
    write_svg(o.file("eigen.svg"), "first eigenfunctions", "x", "u",
              {profile_series(plain.eigenprofile, "Dirichlet", "black"),
               profile_series(weighted.eigenprofile, "weighted", "#c0392b")});
    json sum = {{"lambda_dirichlet", plain.lambda},
                {"lambda_weighted", weighted.lambda},
                {"n", sc.n},
                {"residual", plain.residual},
                {"residual_weighted", weighted.residual},
                {"lipschitz", zc.lipschitz},
                {"max_fprime", zc.sup_fprime},
                {"certificate_zero_bc", cert(zc)},
                {"certificate_general", cert(gc)}};
    std::ofstream(o.file("eigen.json")) << sum.dump(2) << "\n";
    return sum;
}

json run_energy(const RunConfig& cfg, const Out& o) {
    const auto& sc = cfg.sc;
    auto nl = sc.nonlinearity();
    double delta = cfg.energy_delta > 0 ? cfg.energy_delta : sc.geometry.inradius() / 4;
    auto thr = negative_energy_sigma_threshold(nl, sc.drift, sc.geometry, delta, sc.n);
    auto eta = plateau_ramp_eta(delta, sc.geometry, sc.n);
    {
        CsvWriter w(o.file("energy_sigma.csv"), o.hash, {"sigma", "energy_eta_normalized"});
        for (int k = 0; k <= 60; ++k) {
            double s = std::pow(10.0, -3.0 + 6.0 * k / 60.0);
            auto op = WeightedOperator::from_drift(sc.geometry, sc.n, sc.drift.with_sigma(s));
            w.row({s, energy_on(nl, op, eta.values, true).value});
        }
    }
    json sum = {{"delta", delta},
                {"sigma_star", std::isfinite(thr.sigma_star) ? json(thr.sigma_star) : json("inf")},
                {"status", thr.status == SigmaThreshold::Status::found               ? "found"
                           : thr.status == SigmaThreshold::Status::negative_everywhere ? "negative-everywhere"
                                                                                      : "no-sign-change"},
                {"evaluations", thr.evaluations}};
    if (thr.status == SigmaThreshold::Status::found) {
        auto mr = minimize_energy(nl, sc.drift.with_sigma(thr.sigma_star / 2), eta);
        dump_profile(o, "minimizer.csv", mr.profile);
        write_svg(o.file("minimizer.svg"), "energy minimiser at sigma*/2", "x", "p",
                  {profile_series(mr.profile, "minimiser", "black"), profile_series(eta, "eta", "#2471a3")});
        sum["minimizer"] = {{"energy", mr.energy}, {"residual", mr.residual}, {"iterations", mr.iterations},
                            {"polished", mr.polished}};
    }
    std::ofstream(o.file("energy.json")) << sum.dump(2) << "\n";
    return sum;
}

json run_transform(const RunConfig& cfg, const Out& o) {
    auto nl = cfg.sc.nonlinearity();
    auto m = GeneFlowMap::build(make_N(cfg.N_kind, cfg.N_coef));
    {
        CsvWriter w(o.file("transform.csv"), o.hash, {"p", "NN(p)", "ftilde(NN(p))"});
        for (int k = 0; k <= 200; ++k) {
            double p = k / 200.0, q = m.forward(p);
            w.row({p, q, tilde_f(m, nl, q).value});
        }
    }
    auto tf = tilde_nonlinearity(m, nl);
    auto chk = validate_bistable([&](double q) { return tf.f(q); }, tf.theta(), 10000, 1e-9);
    const auto& g = cfg.sc.geometry;
    const double R = g.inradius(), th = nl.theta();
    auto p0 = [&](double x) { return 0.5 * (1.0 + std::cos(M_PI * x / R)) * th; };
    auto study = equivalence_refinement(nl, m, g, p0, 0.0, 0.0, cfg.gf_T, cfg.gf_h);
    json sum = {{"NN_theta", m.forward(th)},
                {"scale", m.scale()},
                {"tilde_bistable", chk.structure()},
                {"tilde_integral", chk.integral},
                {"h", study.h},
                {"discrepancy", study.discrepancy},
                {"factor", study.factor}};
    std::ofstream(o.file("transform.json")) << sum.dump(2) << "\n";
    return sum;
}

}  // namespace

json run_experiment(const RunConfig& cfg, const std::string& out_dir, int jobs) {
    Out o{out_dir, scenario_hash(cfg.source)};
    fs::create_directories(o.dir);
    json sum;
    const auto& e = cfg.experiment;
    if (e == "barriers") sum = run_barriers(cfg, o);
    else if (e == "phase-portrait") sum = run_phase(cfg, o);
    else if (e == "simulate") sum = run_simulate(cfg, o);
    else if (e == "staircase") sum = run_staircase(cfg, o);
    else if (e == "report") sum = run_report(cfg, o);
    else if (e == "mintime-scan") sum = run_mintime(cfg, o, jobs);
    else if (e == "eigen") sum = run_eigen(cfg, o);
    else if (e == "energy") sum = run_energy(cfg, o);
    else if (e == "transform-check") sum = run_transform(cfg, o);
    else throw ConfigError("experiment", "unknown experiment '" + e + "'");
    sum["scenario"] = cfg.name;
    sum["experiment"] = e;
    sum["scenario_hash"] = o.hash;
    sum["version"] = kVersion;
    std::ofstream(o.file("summary.json")) << sum.dump(2) << "\n";
    return sum;
}

}  // namespace geneflow
