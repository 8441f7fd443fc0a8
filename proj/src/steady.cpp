#include "geneflow/steady.hpp"

#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>
#include <limits>

#include "geneflow/energy.hpp"

namespace geneflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Hermite {
    double t, H;
    explicit Hermite(double t_, double H_) : t(t_), H(H_) {}
    double eval(double y0, double dy0, double y1, double dy1) const {
        double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * H * dy0 + (-2 * t3 + 3 * t2) * y1 +
               (t3 - t2) * H * dy1;
    }
};

double hermite_p(const RadialSample& a, const RadialSample& b, double r) {
    Hermite hm((r - a.r) / (b.r - a.r), b.r - a.r);
    return hm.eval(a.p, a.v, b.p, b.v);
}

double hermite_v(const RadialSample& a, const RadialSample& b, double r) {
    Hermite hm((r - a.r) / (b.r - a.r), b.r - a.r);
    return hm.eval(a.v, a.a, b.v, b.a);
}

// first r in [a.r, b.r] where the Hermite interpolant equals level
double locate(const RadialSample& a, const RadialSample& b, double level) {
    double lo = a.r, hi = b.r;
    double slo = a.p - level;
    for (int k = 0; k < 80 && hi - lo > 1e-15 * std::max(1.0, hi); ++k) {
        double mid = 0.5 * (lo + hi);
        double s = hermite_p(a, b, mid) - level;
        if ((s < 0) == (slo < 0) && s != 0.0) {
            lo = mid;
            slo = s;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double RadialTrajectory::p_at(double r) const {
    if (r <= samples.front().r) return samples.front().p;
    if (r >= samples.back().r) return samples.back().p;
    auto it = std::upper_bound(samples.begin(), samples.end(), r,
                               [](double x, const RadialSample& s) { return x < s.r; });
    return hermite_p(*(it - 1), *it, r);
}

double RadialTrajectory::v_at(double r) const {
    if (r <= samples.front().r) return samples.front().v;
    if (r >= samples.back().r) return samples.back().v;
    auto it = std::upper_bound(samples.begin(), samples.end(), r,
                               [](double x, const RadialSample& s) { return x < s.r; });
    return hermite_v(*(it - 1), *it, r);
}

RadialTrajectory shoot_radial(const BistableNonlinearity& nl, const DriftField& drift, double alpha, int d,
                              double r_max, double h_max) {
    if (!std::isfinite(alpha) || !(r_max > 0.0)) throw Error("invalid-scalar", "bad shooting arguments");
    if (h_max <= 0.0) h_max = std::min(1e-3 * r_max, drift.sigma() / 10.0);
    const double th = nl.theta();
    auto accel = [&](double r, double p, double v) {
        double damp = drift.coefficient(r);
        if (d > 1) damp += (d - 1) / r;
        return -nl.f(p) - damp * v;
    };

    RadialTrajectory tr;
    tr.sigma = drift.sigma();
    tr.alpha = alpha;
    tr.theta = th;
    tr.d = d;
    tr.samples.push_back({0.0, alpha, 0.0, -nl.f(alpha) / d});

    double r = 0.0, p = alpha, v = 0.0;
    if (d > 1) {
        // second order Taylor start off the singular origin
        double r0 = std::min(1e-4, 0.1 * h_max);
        double fa = nl.f(alpha);
        r = r0;
        p = alpha - fa * r0 * r0 / (2.0 * d);
        v = -fa * r0 / d;
        tr.samples.push_back({r, p, v, accel(r, p, v)});
    }

    // Dormand-Prince 5(4)
    static const double c[7] = {0, 1. / 5, 3. / 10, 4. / 5, 8. / 9, 1, 1};
    static const double A[7][6] = {{0},
                                   {1. / 5},
                                   {3. / 40, 9. / 40},
                                   {44. / 45, -56. / 15, 32. / 9},
                                   {19372. / 6561, -25360. / 2187, 64448. / 6561, -212. / 729},
                                   {9017. / 3168, -355. / 33, 46732. / 5247, 49. / 176, -5103. / 18656},
                                   {35. / 384, 0, 500. / 1113, 125. / 192, -2187. / 6784, 11. / 84}};
    static const double E[7] = {71. / 57600, 0, -71. / 16695, 71. / 1920, -17253. / 339200, 22. / 525, -1. / 40};
    const double tol = 1e-11;

    bool inc_ok = true, dec_ok = true;
    double h = std::min(h_max, 1e-3);
    while (r < r_max) {
        if (r_max - r < 1e-13 * r_max) break;
        h = std::min(h, r_max - r);
        double kp[7], kv[7], pn = p, vn = v;
        for (int s = 0; s < 7; ++s) {
            double ps = p, vs = v;
            for (int j = 0; j < s; ++j) {
                ps += h * A[s][j] * kp[j];
                vs += h * A[s][j] * kv[j];
            }
            kp[s] = vs;
            kv[s] = accel(r + c[s] * h, ps, vs);
            if (s == 6) {  // FSAL: the last stage point is the 5th order solution
                pn = ps;
                vn = vs;
            }
        }
        double ep = 0, ev = 0;
        for (int s = 0; s < 7; ++s) {
            ep += h * E[s] * kp[s];
            ev += h * E[s] * kv[s];
        }
        double sp = tol + tol * std::max(std::abs(p), std::abs(pn));
        double sv = tol + tol * std::max(std::abs(v), std::abs(vn));
        double err = std::max(std::abs(ep) / sp, std::abs(ev) / sv);
        if (!std::isfinite(err)) err = 1e10;
        if (err <= 1.0) {
            bool last = (r_max - (r + h)) < 1e-13 * r_max;
            r = last ? r_max : r + h;
            p = pn;
            v = vn;
            RadialSample cur{r, p, v, accel(r, p, v)};
            const RadialSample prev = tr.samples.back();
            tr.samples.push_back(cur);

            if (!tr.r_one) inc_ok = inc_ok && cur.v > 0.0;
            if (!tr.r_zero) dec_ok = dec_ok && cur.v < 0.0;
            auto crosses = [&](double level) {
                return (prev.p - level) * (cur.p - level) < 0.0 || (cur.p == level && prev.p != level);
            };
            if (!tr.r_theta && crosses(th)) tr.r_theta = locate(prev, cur, th);
            if (!tr.r_half_theta && crosses(0.5 * th)) tr.r_half_theta = locate(prev, cur, 0.5 * th);
            if (!tr.r_one && prev.p < 1.0 && cur.p >= 1.0) {
                tr.r_one = locate(prev, cur, 1.0);
                tr.increasing_to_one = inc_ok;
            }
            if (!tr.r_zero && prev.p > 0.0 && cur.p <= 0.0) {
                tr.r_zero = locate(prev, cur, 0.0);
                tr.decreasing_to_zero = dec_ok;
            }
            if (p < -0.1 || p > 1.1) {
                tr.exit = ShotExit::left_band;
                return tr;
            }
            if (std::abs(v) > 1e3) {
                tr.exit = ShotExit::velocity_blowup;
                tr.blow_up = true;
                return tr;
            }
            double fac = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h = std::min(h_max, h * std::min(5.0, fac));
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
        if (h < 1e-14 * std::max(1.0, r))
            throw Error("stiff-failure", "step size collapsed at r=" + std::to_string(r));
    }
    tr.exit = ShotExit::reached_rmax;
    return tr;
}

namespace {

// trajectory on the nodes of g, radius stretched so that r_cut lands on the boundary
std::vector<double> resample(const RadialTrajectory& tr, const DomainGeometry& g, int n, double r_cut) {
    GridProfile gp(g, n, 0.0);
    std::vector<double> out(n);
    const double k = r_cut / g.inradius();
    for (int i = 0; i < n; ++i) out[i] = tr.p_at(k * g.radius_of(gp.x(i)));
    return out;
}

std::optional<Barrier> polish_barrier(const BistableNonlinearity& nl, const DriftField& drift,
                                      const DomainGeometry& g, int n, std::vector<double> guess, double bv) {
    guess.front() = bv;
    guess.back() = bv;
    if (!g.is_interval()) guess.front() = std::clamp(guess.front(), 0.0, 1.0);
    auto op = WeightedOperator::from_drift(g, n, drift);
    auto nr = newton_steady(op, nl, std::move(guess));
    if (!(nr.residual < 1e-6)) return std::nullopt;
    GridProfile prof(g, nr.values);
    if (prof.min() < -1e-9 || prof.max() > 1.0 + 1e-9) return std::nullopt;
    for (double& v : prof.values) v = std::clamp(v, 0.0, 1.0);
    if (sup_distance(prof, bv) <= 0.1) return std::nullopt;
    Barrier b;
    b.profile = prof;
    b.boundary_value = bv;
    b.residual = op.residual(nl, prof.values);
    b.min = prof.min();
    b.max = prof.max();
    b.b_eff_boundary = drift.coefficient(g.inradius());
    return b;
}

// final shot: steps well below the grid spacing so the dense output does not pollute second differences
double fine_step(const DriftField& drift, double R, int n) {
    return std::min({1e-3 * R, drift.sigma() / 10.0, R / (8.0 * (n - 1))});
}

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

std::optional<Barrier> find_barrier_one(const BistableNonlinearity& nl, const DriftField& drift,
                                        const DomainGeometry& g, const BarrierOptions& opt) {
    if (!drift.is_spatial() || !drift.is_even()) return std::nullopt;
    const double R = g.inradius(), th = nl.theta();
    const int d = g.dim();
    const double r_max = R * (1 + 1e-9);
    auto reach = [&](double a) {
        auto tr = shoot_radial(nl, drift, a, d, r_max);
        return (tr.r_one && tr.increasing_to_one) ? *tr.r_one : kInf;
    };

    std::vector<double> as;
    for (int k = 1; k <= 72; ++k) as.push_back(th * std::pow(10.0, -k / 6.0));
    for (int j = 1; j <= 4; ++j) as.push_back(th * (1.0 - std::pow(10.0, -j)));
    as = sorted_unique(as);

    int j = -1;
    for (size_t k = 0; k < as.size(); ++k)
        if (reach(as[k]) <= R) {
            j = static_cast<int>(k);
            break;
        }
    if (j < 0) return std::nullopt;
    double lo = j ? as[j - 1] : 0.0, hi = as[j];
    for (int it = 0; it < 200; ++it) {
        if (R - reach(hi) <= 1e-11 * R || hi - lo <= 1e-16 * hi) break;
        double mid = 0.5 * (lo + hi);
        (reach(mid) <= R ? hi : lo) = mid;
    }
    auto tr = shoot_radial(nl, drift, hi, d, r_max, fine_step(drift, R, opt.n));
    if (!tr.r_one) return std::nullopt;
    auto b = polish_barrier(nl, drift, g, opt.n, resample(tr, g, opt.n, *tr.r_one), 1.0);
    if (!b) return std::nullopt;
    b->alpha = hi;
    b->source = "shooting";
    b->trajectory = std::move(tr);
    return b;
}

std::optional<Barrier> find_barrier_zero(const BistableNonlinearity& nl, const DriftField& drift,
                                         const DomainGeometry& g, const BarrierOptions& opt) {
    if (!drift.is_spatial()) return std::nullopt;
    const double R = g.inradius(), th = nl.theta();
    const int d = g.dim();
    const double r_max = R * (1 + 1e-9);
    std::optional<Barrier> best;

    if (drift.is_even()) {
        auto reach = [&](double a) {
            auto tr = shoot_radial(nl, drift, a, d, r_max);
            return (tr.r_zero && tr.decreasing_to_zero) ? *tr.r_zero : kInf;
        };
        std::vector<double> as;
        for (int j = 1; j < 64; ++j) as.push_back(th + (1.0 - th) * j / 64.0);
        for (int k = 9; k <= 96; ++k) as.push_back(1.0 - (1.0 - th) * std::pow(10.0, -k / 8.0));
        as = sorted_unique(as);
        std::vector<double> rs(as.size());
        for (size_t k = 0; k < as.size(); ++k) rs[k] = reach(as[k]);
        int j = -1;
        for (int k = static_cast<int>(as.size()) - 1; k >= 0; --k)
            if (rs[k] <= R) {
                j = k;
                break;
            }
        if (j >= 0) {
            double lo = as[j], hi = (j + 1 < static_cast<int>(as.size())) ? as[j + 1] : 1.0;
            for (int it = 0; it < 200; ++it) {
                if (R - reach(lo) <= 1e-11 * R || hi - lo <= 1e-16) break;
                double mid = 0.5 * (lo + hi);
                (reach(mid) <= R ? lo : hi) = mid;
            }
            auto tr = shoot_radial(nl, drift, lo, d, r_max, fine_step(drift, R, opt.n));
            if (tr.r_zero) {
                best = polish_barrier(nl, drift, g, opt.n, resample(tr, g, opt.n, *tr.r_zero), 0.0);
                if (best) {
                    best->alpha = lo;
                    best->source = "shooting";
                    best->trajectory = std::move(tr);
                }
            }
        }
    }

    if (opt.cross_check) {
        auto eta = plateau_ramp_eta(R / 4.0, g, opt.n);
        auto mr = minimize_energy(nl, drift, eta);
        if (mr.profile.max() > 0.1 && mr.residual < 1e-6) {
            auto cand = polish_barrier(nl, drift, g, opt.n, mr.profile.values, 0.0);
            if (cand && (!best || cand->residual < best->residual)) {
                cand->alpha = g.is_interval() ? cand->profile.at(0.0) : cand->profile.values.front();
                cand->source = "energy";
                // same solution as the shooting one: keep its trajectory for diagnostics
                if (best && sup_distance(cand->profile, best->profile) < 1e-6) cand->trajectory = best->trajectory;
                best = std::move(cand);
            }
        }
    }
    return best;
}

double barrier_fine_check(const Barrier& b, const BistableNonlinearity& nl, const DriftField& drift, int m) {
    const auto& prof = b.profile;
    const auto& g = prof.geometry;
    GridProfile fine(g, m, 0.0);
    if (b.trajectory) {
        const auto& tr = *b.trajectory;
        double rc = b.boundary_value == 1.0 ? tr.r_one.value_or(g.inradius()) : tr.r_zero.value_or(g.inradius());
        fine.values = resample(tr, g, m, rc);
    } else {
        // C2 spline through the coarse solution; endpoint slopes from one-sided 3rd order differences
        const auto& v = prof.values;
        const double h = prof.h();
        const size_t k = v.size() - 1;
        double d0 = (-11 * v[0] + 18 * v[1] - 9 * v[2] + 2 * v[3]) / (6 * h);
        double d1 = (11 * v[k] - 18 * v[k - 1] + 9 * v[k - 2] - 2 * v[k - 3]) / (6 * h);
        boost::math::interpolators::cardinal_cubic_b_spline<double> spl(v.begin(), v.end(), g.left(), h, d0, d1);
        for (int i = 0; i < m; ++i) fine.values[i] = spl(fine.x(i));
    }
    fine.values.back() = b.boundary_value;
    if (g.is_interval()) fine.values.front() = b.boundary_value;
    auto op = WeightedOperator::from_drift(g, m, drift);
    return op.residual(nl, fine.values);
}

double critical_radius_R_star(const BistableNonlinearity& nl, const DriftField& drift, int d,
                              const std::vector<double>& probes, int n) {
    double best = kInf;
    BarrierOptions opt;
    opt.n = n;
    for (auto it = probes.rbegin(); it != probes.rend(); ++it) {
        auto g = d == 1 ? DomainGeometry::interval(*it) : DomainGeometry::ball(*it, d);
        if (!find_barrier_one(nl, drift, g, opt)) break;
        best = *it;
    }
    return best;
}

WeightedIVP solve_radial_weighted(const BistableNonlinearity& nl, const DriftField& drift, double s, int d, double R,
                                  double h) {
    if (!(s >= 0.0 && s <= 1.0)) throw Error("invalid-scalar", "s must lie in [0,1]");
    int n = std::max(3, static_cast<int>(std::lround(R / h)) + 1);
    h = R / (n - 1);
    const double th = nl.theta();
    const double lw0 = drift.log_weight(0.0);
    auto w = [&](double r) { return std::exp(drift.log_weight(r) - lw0); };
    const double M = lipschitz_and_sup_fprime(nl).lipschitz;

    // Picard region [0, r1] with contraction factor <= 1/2
    double r1 = std::min(R, 0.1);
    for (int k = 0; k < 30; ++k) {
        double wmax = 0, wmin = kInf;
        for (int j = 0; j <= 50; ++j) {
            double wr = w(r1 * j / 50.0);
            wmax = std::max(wmax, wr);
            wmin = std::min(wmin, wr);
        }
        double q = M * (wmax / wmin) * r1 * r1 / (2.0 * d);
        if (q <= 0.5) break;
        r1 *= 0.7;
    }
    int m = static_cast<int>(std::floor(r1 / h + 1e-9));
    if (m < 2) throw Error("contraction-failure", "grid step too coarse for the Picard region; reduce h");
    r1 = m * h;

    std::vector<double> r(n), p(n, s * th), wv(n), rd(n);
    for (int i = 0; i < n; ++i) {
        r[i] = i * h;
        wv[i] = w(r[i]);
        rd[i] = std::pow(r[i], d - 1);
    }
    // p(r) = s theta - int_0^r (1/(l^{d-1} w)) int_0^l t^{d-1} w f(p) dt dl
    double prev_change = kInf;
    for (int it = 0; it < 500; ++it) {
        std::vector<double> inner(m + 1, 0.0), ratio(m + 1, 0.0), np(m + 1, s * th);
        for (int i = 1; i <= m; ++i) {
            double g0 = rd[i - 1] * wv[i - 1] * nl.f(p[i - 1]), g1 = rd[i] * wv[i] * nl.f(p[i]);
            inner[i] = inner[i - 1] + 0.5 * h * (g0 + g1);
            ratio[i] = inner[i] / (rd[i] * wv[i]);
        }
        double change = 0.0;
        for (int i = 1; i <= m; ++i) {
            np[i] = np[i - 1] - 0.5 * h * (ratio[i - 1] + ratio[i]);
            change = std::max(change, std::abs(np[i] - p[i]));
        }
        std::copy(np.begin(), np.end(), p.begin());
        if (change < 1e-15) break;
        if (it > 5 && change > prev_change) throw Error("contraction-failure", "Picard iteration diverges");
        prev_change = change;
    }

    // flux q = r^{d-1} w p'
    double q = 0.0;
    {
        double acc = 0.0;
        for (int i = 1; i <= m; ++i)
            acc += 0.5 * h * (rd[i - 1] * wv[i - 1] * nl.f(p[i - 1]) + rd[i] * wv[i] * nl.f(p[i]));
        q = -acc;
    }
    auto rhs = [&](double rr, double pp, double qq, double& dp, double& dq) {
        double ww = w(rr), rr1 = std::pow(rr, d - 1);
        dp = qq / (rr1 * ww);
        dq = -rr1 * ww * nl.f(pp);
    };
    WeightedIVP out;
    out.picard_radius = r1;
    for (int i = m; i + 1 < n; ++i) {
        double pp = p[i];
        if (out.escaped || pp < -0.5 || pp > 1.5) {
            out.escaped = true;
            p[i + 1] = p[i];
            continue;
        }
        double k1p, k1q, k2p, k2q, k3p, k3q, k4p, k4q;
        rhs(r[i], pp, q, k1p, k1q);
        rhs(r[i] + h / 2, pp + h / 2 * k1p, q + h / 2 * k1q, k2p, k2q);
        rhs(r[i] + h / 2, pp + h / 2 * k2p, q + h / 2 * k2q, k3p, k3q);
        rhs(r[i] + h, pp + h * k3p, q + h * k3q, k4p, k4q);
        p[i + 1] = pp + h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
        q += h / 6 * (k1q + 2 * k2q + 2 * k3q + k4q);
        if (!std::isfinite(p[i + 1]) || !std::isfinite(q)) {
            out.escaped = true;
            p[i + 1] = pp;
        }
    }
    if (p.back() < -0.5 || p.back() > 1.5) out.escaped = true;
    out.profile = GridProfile(DomainGeometry::ball(R, d), p);
    return out;
}

namespace {

struct MemberResult {
    std::optional<GridProfile> profile;
    std::string why;
};

MemberResult even_member(const BistableNonlinearity& nl, const DriftField& drift, const DomainGeometry& g, int n,
                         double s) {
    GridProfile gp(g, n, 0.0);
    const double h = gp.h();
    if (s == 0.0) return {gp, ""};
    if (s == 1.0) return {GridProfile(g, n, nl.theta()), ""};
    auto ivp = solve_radial_weighted(nl, drift, s, g.dim(), g.inradius(), h / 2);
    if (ivp.escaped) return {std::nullopt, "escaped"};
    const auto& iv = ivp.profile.values;
    for (int i = 0; i < n; ++i) {
        double r = g.radius_of(gp.x(i));
        int k = std::clamp(static_cast<int>(std::lround(r / (h / 2))), 0, static_cast<int>(iv.size()) - 1);
        gp.values[i] = iv[k];
    }
    auto op = WeightedOperator::from_drift(g, n, drift);
    auto nr = newton_steady(op, nl, gp.values);
    if (!(nr.residual < 1e-8)) return {std::nullopt, "newton"};
    return {GridProfile(g, nr.values), ""};
}

std::optional<GridProfile> continue_member(const BistableNonlinearity& nl, const DriftField& drift,
                                           const DomainGeometry& g, int n, double s) {
    auto hom = even_member(nl, DriftField::homogeneous(), g, n, s);
    if (!hom.profile) return std::nullopt;
    std::vector<double> p = hom.profile->values;
    for (double t : {0.25, 0.5, 0.75, 1.0}) {
        WeightedOperator op(g, n, [&](double x) { return t * drift.log_weight(x); });
        auto nr = newton_steady(op, nl, p);
        if (!(nr.residual < 1e-8)) return std::nullopt;
        p = nr.values;
    }
    return GridProfile(g, p);
}

MemberResult member(const BistableNonlinearity& nl, const DriftField& drift, const DomainGeometry& g, int n,
                    double s) {
    if (drift.is_even()) return even_member(nl, drift, g, n, s);
    if (auto m = continue_member(nl, drift, g, n, s)) return {m, ""};
    // inflate the domain by 5%, continue there, restrict back and re-polish
    double R2 = 1.05 * g.inradius();
    auto g2 = g.is_interval() ? DomainGeometry::interval(R2) : DomainGeometry::ball(R2, g.dim());
    int n2 = static_cast<int>(std::lround((n - 1) * 1.05)) + 1;
    auto big = continue_member(nl, drift, g2, n2, s);
    if (!big) throw Error("continuation-failure", "Newton continuation failed at s=" + std::to_string(s));
    GridProfile gp(g, n, 0.0);
    for (int i = 0; i < n; ++i) gp.values[i] = big->at(gp.x(i));
    auto op = WeightedOperator::from_drift(g, n, drift);
    auto nr = newton_steady(op, nl, gp.values);
    if (!(nr.residual < 1e-8))
        throw Error("continuation-failure", "restriction failed to converge at s=" + std::to_string(s));
    return {GridProfile(g, nr.values), ""};
}

}  // namespace

SteadyPath build_steady_path(const BistableNonlinearity& nl, const DriftField& drift, const DomainGeometry& g, int K,
                             double delta, int n) {
    if (K < 2 || !(delta > 0.0)) throw Error("invalid-scalar", "need K >= 2 and delta > 0");
    SteadyPath path;
    path.delta = delta;
    std::vector<double> ss;
    std::vector<GridProfile> ps;
    for (int k = 0; k < K; ++k) {
        double s = double(k) / (K - 1);
        auto m = member(nl, drift, g, n, s);
        if (!m.profile) {
            path.failure = "member at s=" + std::to_string(s) + " " + m.why;
            path.s = ss;
            path.profiles = ps;
            return path;
        }
        ss.push_back(s);
        ps.push_back(*m.profile);
    }
    const size_t cap = 4096;
    bool refined = true;
    while (refined) {
        refined = false;
        for (size_t k = 0; k + 1 < ps.size(); ++k) {
            if (sup_distance(ps[k], ps[k + 1]) <= delta) continue;
            if (ps.size() >= cap || ss[k + 1] - ss[k] < 1e-9) {
                path.failure = "gap above delta near s=" + std::to_string(ss[k]);
                break;
            }
            double s = 0.5 * (ss[k] + ss[k + 1]);
            auto m = member(nl, drift, g, n, s);
            if (!m.profile) {
                // keep only the part of the path below the failing s
                path.failure = "member at s=" + std::to_string(s) + " " + m.why;
                ss.resize(k + 1);
                ps.resize(k + 1);
                break;
            }
            ss.insert(ss.begin() + k + 1, s);
            ps.insert(ps.begin() + k + 1, *m.profile);
            refined = true;
            ++k;
        }
        if (!path.failure.empty()) break;
    }
    auto op = WeightedOperator::from_drift(g, n, drift);
    path.admissible = path.failure.empty();
    for (size_t k = 0; k < ps.size(); ++k) {
        path.max_residual = std::max(path.max_residual, op.residual(nl, ps[k].values));
        if (!ps[k].is_proportion(1e-9)) path.admissible = false;
        if (k + 1 < ps.size()) path.max_gap = std::max(path.max_gap, sup_distance(ps[k], ps[k + 1]));
    }
    if (path.admissible == false && path.failure.empty()) path.failure = "member leaves [0,1]";
    path.s = std::move(ss);
    path.profiles = std::move(ps);
    return path;
}

}  // namespace geneflow
