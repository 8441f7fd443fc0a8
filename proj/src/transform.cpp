#include "geneflow/transform.hpp"

#include <algorithm>
#include <cmath>

#include "geneflow/discrete.hpp"

namespace geneflow {

GeneFlowMap GeneFlowMap::build(const std::function<double(double)>& N_of_p, int nodes) {
    if (nodes < 3) throw Error("invalid-grid", "need at least 3 nodes");
    for (int k = 0; k <= 1000; ++k) {
        double v = N_of_p(k / 1000.0);
        if (!(v > 0.0) || !std::isfinite(v)) throw Error("invalid-N", "N must be positive on [0,1]");
    }
    GeneFlowMap m;
    m.N_ = N_of_p;
    m.x_.resize(nodes);
    m.q_.assign(nodes, 0.0);
    const double dx = 1.0 / (nodes - 1);
    auto N2 = [&](double p) { double v = N_of_p(p); return v * v; };
    for (int k = 0; k < nodes; ++k) m.x_[k] = k * dx;
    for (int k = 0; k + 1 < nodes; ++k) {
        double a = m.x_[k], b = m.x_[k + 1];
        m.q_[k + 1] = m.q_[k] + dx / 6.0 * (N2(a) + 4.0 * N2(0.5 * (a + b)) + N2(b));
    }
    m.c_ = m.q_.back();
    for (double& q : m.q_) q /= m.c_;
    m.q_.back() = 1.0;
    return m;
}

double GeneFlowMap::N_hat(double p) const { return N_(std::clamp(p, 0.0, 1.0)) / std::sqrt(c_); }

double GeneFlowMap::forward(double p) const {
    p = std::clamp(p, 0.0, 1.0);
    const int n = static_cast<int>(x_.size());
    const double dx = x_[1] - x_[0];
    int k = std::min(n - 2, static_cast<int>(p / dx));
    double H = dx, t = (p - x_[k]) / H;
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * q_[k] + (t3 - 2 * t2 + t) * H * dq(x_[k]) + (-2 * t3 + 3 * t2) * q_[k + 1] +
           (t3 - t2) * H * dq(x_[k + 1]);
}

double GeneFlowMap::inverse(double q) const {
    q = std::clamp(q, 0.0, 1.0);
    if (q == 0.0) return 0.0;
    if (q == 1.0) return 1.0;
    auto it = std::upper_bound(q_.begin(), q_.end(), q);
    size_t k = std::min<size_t>(q_.size() - 2, size_t(it - q_.begin()) - 1);
    double lo = x_[k], hi = x_[k + 1];
    double x = lo + (hi - lo) * (q - q_[k]) / (q_[k + 1] - q_[k]);
    // Newton, falling back to bisection when a step leaves the bracket
    for (int i = 0; i < 60; ++i) {
        double g = forward(x) - q;
        if (g == 0.0) break;
        (g > 0 ? hi : lo) = x;
        double nx = x - g / dq(x);
        if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
        if (std::abs(nx - x) < 1e-16) {
            x = nx;
            break;
        }
        x = nx;
    }
    return x;
}

TildeValue tilde_f(const GeneFlowMap& m, const BistableNonlinearity& nl, double q) {
    bool clamped = q < 0.0 || q > 1.0;
    double x = m.inverse(q);
    double Nh = m.N_hat(x);
    return {nl.f(x) * Nh * Nh, clamped};
}

BistableNonlinearity tilde_nonlinearity(const GeneFlowMap& m, const BistableNonlinearity& nl, int samples) {
    std::vector<double> q(samples), f(samples);
    for (int k = 0; k < samples; ++k) {
        q[k] = double(k) / (samples - 1);
        f[k] = tilde_f(m, nl, q[k]).value;
    }
    f.front() = 0.0;
    f.back() = 0.0;
    return BistableNonlinearity::tabulated(q, f, m.forward(nl.theta()));
}

namespace {

// one CN/Heun step on the interior with pinned boundary values
struct CrankNicolson {
    int n;
    double r;  // dt / h^2
    TridiagFactor fac;
    CrankNicolson(int n_, double dt, double h) : n(n_), r(dt / (h * h)) {
        const int m = n - 2;
        Tridiag T(m);
        for (int k = 0; k < m; ++k) {
            T.di[k] = 1.0 + r;
            if (k > 0) T.lo[k] = -0.5 * r;
            if (k + 1 < m) T.up[k] = -0.5 * r;
        }
        fac = TridiagFactor(T);
    }
    // (I - dt/2 L) out = (I + dt/2 L) p + dt * g
    std::vector<double> solve(const std::vector<double>& p, const std::vector<double>& g, double dt) const {
        const int m = n - 2;
        std::vector<double> rhs(m);
        for (int k = 0; k < m; ++k) {
            int i = k + 1;
            rhs[k] = p[i] + 0.5 * r * (p[i - 1] - 2 * p[i] + p[i + 1]) + dt * g[i];
        }
        rhs.front() += 0.5 * r * p.front();
        rhs.back() += 0.5 * r * p.back();
        fac.solve(rhs);
        std::vector<double> out(p);
        std::copy(rhs.begin(), rhs.end(), out.begin() + 1);
        return out;
    }
};

template <class G>
void heun_step(const CrankNicolson& cn, std::vector<double>& p, double dt, G explicit_part) {
    auto g0 = explicit_part(p);
    auto ps = cn.solve(p, g0, dt);
    auto g1 = explicit_part(ps);
    for (size_t i = 0; i < g0.size(); ++i) g0[i] = 0.5 * (g0[i] + g1[i]);
    p = cn.solve(p, g0, dt);
}

}  // namespace

EquivalenceResult equivalence_check(const BistableNonlinearity& nl, const GeneFlowMap& m, const DomainGeometry& g,
                                    const std::function<double(double)>& p0, double u_left, double u_right, double T,
                                    double h, double dt) {
    if (!g.is_interval()) throw Error("invalid-geometry", "equivalence check runs on intervals");
    if (!(u_left >= 0 && u_left <= 1 && u_right >= 0 && u_right <= 1))
        throw Error("invalid-control", "boundary values must lie in [0,1]");
    const int n = static_cast<int>(std::lround(g.width() / h)) + 1;
    h = g.width() / (n - 1);
    const int steps = static_cast<int>(std::lround(T / dt));
    CrankNicolson cn(n, dt, h);

    std::vector<double> p(n), q(n);
    for (int i = 0; i < n; ++i) {
        p[i] = p0(g.left() + i * h);
        q[i] = m.forward(p[i]);
    }
    p.front() = u_left;
    p.back() = u_right;
    q.front() = m.forward(u_left);
    q.back() = m.forward(u_right);

    const double e = 1e-6;
    auto NpN = [&](double x) {
        double a = std::clamp(x - e, 0.0, 1.0), b = std::clamp(x + e, 0.0, 1.0);
        return (m.N()(b) - m.N()(a)) / (b - a) / m.N()(std::clamp(x, 0.0, 1.0));
    };
    auto quasi = [&](const std::vector<double>& v) {
        std::vector<double> out(n, 0.0);
        for (int i = 1; i + 1 < n; ++i) {
            double px = (v[i + 1] - v[i - 1]) / (2 * h);
            out[i] = 2.0 * NpN(v[i]) * px * px + nl.f(v[i]);
        }
        return out;
    };
    auto heat = [&](const std::vector<double>& v) {
        std::vector<double> out(n, 0.0);
        for (int i = 1; i + 1 < n; ++i) out[i] = tilde_f(m, nl, v[i]).value;
        return out;
    };

    EquivalenceResult r;
    r.h = h;
    r.dt = dt;
    r.steps = steps;
    auto measure = [&] {
        for (int i = 0; i < n; ++i) {
            if (!std::isfinite(p[i]) || p[i] < -0.5 || p[i] > 1.5)
                throw Error("gf-stiff", "quasilinear step unstable; halve dt");
            r.discrepancy = std::max(r.discrepancy, std::abs(m.forward(p[i]) - q[i]));
        }
    };
    measure();
    for (int k = 0; k < steps; ++k) {
        heun_step(cn, p, dt, quasi);
        heun_step(cn, q, dt, heat);
        measure();
    }
    return r;
}

RefinementStudy equivalence_refinement(const BistableNonlinearity& nl, const GeneFlowMap& m, const DomainGeometry& g,
                                       const std::function<double(double)>& p0, double u_left, double u_right,
                                       double T, const std::vector<double>& hs) {
    RefinementStudy s;
    for (double h : hs) {
        s.h.push_back(h);
        s.discrepancy.push_back(equivalence_check(nl, m, g, p0, u_left, u_right, T, h, h).discrepancy);
    }
    for (size_t k = 0; k + 1 < s.discrepancy.size(); ++k) s.factor.push_back(s.discrepancy[k] / s.discrepancy[k + 1]);
    return s;
}

}  // namespace geneflow
