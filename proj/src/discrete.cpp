#include "geneflow/discrete.hpp"

#include <algorithm>
#include <cmath>

namespace geneflow {

std::vector<double> solve_tridiagonal(const Tridiag& T, std::vector<double> rhs) {
    TridiagFactor F(T);
    F.solve(rhs);
    return rhs;
}

TridiagFactor::TridiagFactor(const Tridiag& T) : lo_(T.lo), cp_(T.size(), 0.0), inv_(T.size(), 0.0) {
    const size_t m = T.size();
    double prev_cp = 0.0;
    for (size_t i = 0; i < m; ++i) {
        double piv = T.di[i] - (i ? T.lo[i] * prev_cp : 0.0);
        if (!(std::abs(piv) > 1e-300) || !std::isfinite(piv))
            throw Error("solver-failure", "zero pivot in tridiagonal solve at row " + std::to_string(i));
        inv_[i] = 1.0 / piv;
        cp_[i] = T.up[i] * inv_[i];
        prev_cp = cp_[i];
    }
}

void TridiagFactor::solve(std::vector<double>& x) const {
    const size_t m = inv_.size();
    for (size_t i = 0; i < m; ++i) x[i] = (x[i] - (i ? lo_[i] * x[i - 1] : 0.0)) * inv_[i];
    for (size_t i = m - 1; i-- > 0;) x[i] -= cp_[i] * x[i + 1];
}

WeightedOperator::WeightedOperator(const DomainGeometry& g, int n) : g_(g), n_(n) {
    if (n < 3) throw Error("invalid-grid", "need at least 3 nodes");
    h_ = g.width() / (n - 1);
    lw_.assign(n, 0.0);
    lwh_.assign(n - 1, 0.0);
}

WeightedOperator::WeightedOperator(const DomainGeometry& g, int n, const std::function<double(double)>& log_weight)
    : WeightedOperator(g, n) {
    for (int i = 0; i < n; ++i) lw_[i] = log_weight(x(i));
    for (int i = 0; i + 1 < n; ++i) lwh_[i] = log_weight(x(i) + 0.5 * h_);
    build();
}

WeightedOperator WeightedOperator::from_drift(const DomainGeometry& g, int n, const DriftField& drift) {
    if (drift.kind() == DriftFamily::homogeneous) return homogeneous(g, n);
    return WeightedOperator(g, n, [&](double x) { return drift.log_weight(x); });
}

WeightedOperator WeightedOperator::homogeneous(const DomainGeometry& g, int n) {
    WeightedOperator op(g, n);
    op.build();
    return op;
}

WeightedOperator WeightedOperator::from_weights(const DomainGeometry& g, const std::vector<double>& w) {
    WeightedOperator op(g, static_cast<int>(w.size()));
    for (size_t i = 0; i < w.size(); ++i) {
        if (!(w[i] > 0.0) || !std::isfinite(w[i])) throw Error("invalid-weight", "weight must be positive");
        op.lw_[i] = std::log(w[i]);
    }
    for (size_t i = 0; i + 1 < w.size(); ++i) op.lwh_[i] = 0.5 * (op.lw_[i] + op.lw_[i + 1]);
    op.build();
    return op;
}

void WeightedOperator::build() {
    const int n = n_;
    const int d = g_.dim();
    vol_.assign(n, h_);
    sh_.assign(n - 1, 1.0);
    if (!g_.is_interval()) {
        for (int i = 0; i < n; ++i) {
            double r = x(i);
            double a = std::max(0.0, r - 0.5 * h_), b = std::min(g_.inradius(), r + 0.5 * h_);
            if (i == n - 1) b = r + 0.5 * h_;
            vol_[i] = (std::pow(b, d) - std::pow(a, d)) / d;
        }
        for (int i = 0; i + 1 < n; ++i) sh_[i] = std::pow(x(i) + 0.5 * h_, d - 1);
    }
    lo_.assign(n, 0.0);
    up_.assign(n, 0.0);
    for (int i = first(); i <= last(); ++i) {
        double den = h_ * vol_[i];
        if (i > 0) lo_[i] = sh_[i - 1] * std::exp(lwh_[i - 1] - lw_[i]) / den;
        up_[i] = sh_[i] * std::exp(lwh_[i] - lw_[i]) / den;
    }
}

std::vector<double> WeightedOperator::apply(const std::vector<double>& p) const {
    std::vector<double> out(n_, 0.0);
    for (int i = first(); i <= last(); ++i) {
        double s = up_[i] * (p[i + 1] - p[i]);
        if (i > 0) s += lo_[i] * (p[i - 1] - p[i]);
        out[i] = s;
    }
    return out;
}

double WeightedOperator::residual(const BistableNonlinearity& nl, const std::vector<double>& p,
                                  Extension ext) const {
    auto Ap = apply(p);
    double m = 0.0;
    for (int i = first(); i <= last(); ++i) m = std::max(m, std::abs(Ap[i] + nl.f(p[i], ext)));
    return m;
}

double WeightedOperator::log_weight_sup() const {
    double m = 0.0;
    for (double v : lw_) m = std::max(m, std::abs(v));
    return m;
}

ImplicitSolver::ImplicitSolver(const WeightedOperator& op, double dt) : op_(op), dt_(dt) {
    const int a = op.first(), b = op.last(), m = op.unknowns();
    Tridiag T(m);
    for (int i = a; i <= b; ++i) {
        int k = i - a;
        double l = i > 0 ? op.lo()[i] : 0.0, u = op.up()[i];
        T.di[k] = 1.0 + dt * (l + u);
        if (k > 0) T.lo[k] = -dt * l;
        if (k + 1 < m) T.up[k] = -dt * u;
    }
    fac_ = TridiagFactor(T);
}

void ImplicitSolver::solve(std::vector<double>& rhs, double left, double right) const {
    const auto& op = op_;
    const int a = op.first(), b = op.last(), n = op.n();
    std::vector<double> x(rhs.begin() + a, rhs.begin() + b + 1);
    if (a == 1) x.front() += dt_ * op.lo()[1] * left;
    x.back() += dt_ * op.up()[b] * right;
    fac_.solve(x);
    std::copy(x.begin(), x.end(), rhs.begin() + a);
    if (a == 1) rhs[0] = left;
    rhs[n - 1] = right;
}

NewtonResult newton_steady(const WeightedOperator& op, const BistableNonlinearity& nl, std::vector<double> p,
                           Extension ext, int max_iter, double tol) {
    const int a = op.first(), b = op.last(), m = op.unknowns();
    const auto& lo = op.lo();
    const auto& up = op.up();
    auto resid_vec = [&](const std::vector<double>& q, std::vector<double>& G) {
        double worst = 0.0;
        for (int i = a; i <= b; ++i) {
            double s = up[i] * (q[i + 1] - q[i]) + (i > 0 ? lo[i] * (q[i - 1] - q[i]) : 0.0) + nl.f(q[i], ext);
            G[i - a] = s;
            worst = std::max(worst, std::abs(s));
        }
        return std::isfinite(worst) ? worst : 1e300;
    };
    std::vector<double> G(m);
    double r = resid_vec(p, G);
    int it = 0;
    for (; it < max_iter && r > tol; ++it) {
        Tridiag J(m);
        for (int i = a; i <= b; ++i) {
            int k = i - a;
            J.di[k] = -up[i] - (i > 0 ? lo[i] : 0.0) + nl.fprime(p[i], ext);
            if (k > 0) J.lo[k] = lo[i];
            if (k + 1 < m) J.up[k] = up[i];
        }
        std::vector<double> delta;
        try {
            std::vector<double> rhs(m);
            for (int k = 0; k < m; ++k) rhs[k] = -G[k];
            delta = solve_tridiagonal(J, rhs);
        } catch (const Error&) {
            break;
        }
        double lam = 1.0, rn = r;
        std::vector<double> trial = p, Gt(m);
        while (lam > 1e-4) {
            for (int i = a; i <= b; ++i) trial[i] = p[i] + lam * delta[i - a];
            rn = resid_vec(trial, Gt);
            if (rn < r) break;
            lam *= 0.5;
        }
        if (!(rn < r)) break;
        double step = 0.0;
        for (double dv : delta) step = std::max(step, std::abs(dv));
        p.swap(trial);
        G.swap(Gt);
        r = rn;
        if (lam * step < 1e-15) break;
    }
    return {std::move(p), r, it, r <= tol};
}

}  // namespace geneflow
