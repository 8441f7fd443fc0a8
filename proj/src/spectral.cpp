#include "geneflow/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace geneflow {

namespace {

double lw_shift(const WeightedOperator& op) {
    const auto& lw = op.log_weight();
    const auto& lwh = op.log_weight_half();
    return std::max(*std::max_element(lw.begin(), lw.end()), *std::max_element(lwh.begin(), lwh.end()));
}

double mass_norm2(const WeightedOperator& op, const std::vector<double>& u, double shift) {
    double m = 0.0;
    for (int i = 0; i < op.n(); ++i)
        if (u[i] != 0.0) m += op.volume()[i] * std::exp(op.log_weight()[i] - shift) * u[i] * u[i];
    return m;
}

}  // namespace

double rayleigh_quotient(const WeightedOperator& op, const std::vector<double>& u) {
    const double s = lw_shift(op);
    double k = 0.0;
    for (int i = 0; i + 1 < op.n(); ++i) {
        double du = u[i + 1] - u[i];
        k += op.surface_half()[i] * std::exp(op.log_weight_half()[i] - s) * du * du / op.h();
    }
    return k / mass_norm2(op, u, s);
}

EigenResult lambda1_of(const WeightedOperator& op) {
    const int a = op.first(), b = op.last(), m = op.unknowns(), n = op.n();
    Tridiag T(m);
    for (int i = a; i <= b; ++i) {
        int k = i - a;
        double l = i > 0 ? op.lo()[i] : 0.0, u = op.up()[i];
        T.di[k] = l + u;
        if (k > 0) T.lo[k] = -l;
        if (k + 1 < m) T.up[k] = -u;
    }
    TridiagFactor fac(T);
    const double shift = lw_shift(op);

    std::vector<double> u(n, 0.0), x(m, 1.0);
    double lam = 0.0;
    int it = 0;
    for (; it < 10000; ++it) {
        fac.solve(x);
        std::fill(u.begin(), u.end(), 0.0);
        std::copy(x.begin(), x.end(), u.begin() + a);
        double nrm = std::sqrt(mass_norm2(op, u, shift));
        for (double& v : x) v /= nrm;
        for (double& v : u) v /= nrm;
        double next = rayleigh_quotient(op, u);
        // the quotient settles long before the vector does; also wait for the vector
        if (it > 2 && std::abs(next - lam) < 1e-12 * std::abs(next)) {
            auto Au = op.apply(u);
            double res = 0.0, um = 0.0;
            for (int i = a; i <= b; ++i) {
                res = std::max(res, std::abs(Au[i] + next * u[i]));
                um = std::max(um, std::abs(u[i]));
            }
            if (res <= 1e-10 * next * um || std::abs(next - lam) == 0.0) {
                lam = next;
                break;
            }
        }
        lam = next;
    }
    if (it >= 10000) throw Error("eigen-stall", "inverse iteration did not converge");

    EigenResult r;
    r.lambda = lam;
    r.iterations = it + 1;
    double umax = *std::max_element(u.begin(), u.end());
    for (double& v : u) v /= umax;
    auto Au = op.apply(u);
    double res = 0.0;
    for (int i = a; i <= b; ++i) res = std::max(res, std::abs(-Au[i] - lam * u[i]));
    r.residual = res / lam;
    r.eigenprofile = GridProfile(op.geometry(), u);
    return r;
}

EigenResult dirichlet_lambda1(const DomainGeometry& g, int n) {
    if (n < 32) throw Error("invalid-grid", "need n >= 32");
    return lambda1_of(WeightedOperator::homogeneous(g, n));
}

EigenResult weighted_lambda1(const DomainGeometry& g, const std::function<double(double)>& log_weight, int n) {
    if (n < 32) throw Error("invalid-grid", "need n >= 32");
    return lambda1_of(WeightedOperator(g, n, log_weight));
}

EigenResult weighted_lambda1(const GridProfile& w) {
    if (w.n() < 32) throw Error("invalid-grid", "need n >= 32");
    return lambda1_of(WeightedOperator::from_weights(w.geometry, w.values));
}

EigenResult drift_lambda1(const DriftField& drift, const DomainGeometry& g, int n, WeightKind kind) {
    if (!drift.is_spatial()) throw Error("invalid-weight", "weight needs a spatial density");
    if (kind == WeightKind::N_sigma) return weighted_lambda1(g, [&](double x) { return drift.log_weight(x); }, n);
    return weighted_lambda1(g, [&](double x) { return 2.0 * drift.log_density(x); }, n);
}

Certificate uniqueness_certificate(const BistableNonlinearity& nl, const DriftField& drift, const DomainGeometry& g,
                                   CertificateKind kind, int n) {
    Certificate c;
    auto lb = lipschitz_and_sup_fprime(nl);
    c.lipschitz = lb.lipschitz;
    c.sup_fprime = lb.sup_fprime;
    if (kind == CertificateKind::zero_bc) {
        auto op = WeightedOperator::from_drift(g, n, drift);
        const auto& lw = op.log_weight();
        auto [mn, mx] = std::minmax_element(lw.begin(), lw.end());
        c.log_weight_oscillation = *mx - *mn;
        c.lhs = dirichlet_lambda1(g, n).lambda;
        // ||f'||_inf: the first field of the bounds (sup |f'|), not the signed max
        c.rhs = c.lipschitz * std::exp(c.log_weight_oscillation);
    } else {
        c.lhs = drift.kind() == DriftFamily::homogeneous ? dirichlet_lambda1(g, n).lambda
                                                         : drift_lambda1(drift, g, n).lambda;
        c.rhs = c.lipschitz;
    }
    c.holds = c.lhs > c.rhs;
    return c;
}

WholeSpaceLambda lambda1_whole_space(const DriftField& drift, int d, WeightKind kind, double R0, double h, double tol,
                                     double R_max) {
    WholeSpaceLambda out;
    double R = R0, prev = 0.0;
    for (int k = 0;; ++k) {
        auto g = d == 1 ? DomainGeometry::interval(R) : DomainGeometry::ball(R, d);
        int n = static_cast<int>(std::lround(g.width() / h)) + 1;
        double lam = drift_lambda1(drift, g, std::max(n, 32), kind).lambda;
        out.rounds = k + 1;
        out.lambda = lam;
        out.R = R;
        if (k > 0 && std::abs(lam - prev) < tol * std::abs(lam)) {
            out.converged = true;
            return out;
        }
        prev = lam;
        if (R * 1.5 > R_max) return out;
        R *= 1.5;
    }
}

ConvergenceFit dirichlet_convergence(const DomainGeometry& g, const std::vector<int>& ns, std::optional<double> exact) {
    ConvergenceFit fit;
    fit.n = ns;
    for (int n : ns) fit.lambda.push_back(dirichlet_lambda1(g, n).lambda);
    std::vector<double> lx, ly;
    for (size_t k = 0; k < ns.size(); ++k) {
        double e;
        if (exact) {
            e = std::abs(fit.lambda[k] - *exact);
        } else {
            if (k + 1 == ns.size()) break;
            e = std::abs(fit.lambda[k] - fit.lambda[k + 1]);
        }
        fit.error.push_back(e);
        if (e > 0) {
            lx.push_back(std::log(double(ns[k])));
            ly.push_back(std::log(e));
        }
    }
    if (lx.size() >= 2) {
        double mx = 0, my = 0;
        for (size_t k = 0; k < lx.size(); ++k) mx += lx[k], my += ly[k];
        mx /= lx.size();
        my /= ly.size();
        double sxy = 0, sxx = 0;
        for (size_t k = 0; k < lx.size(); ++k) {
            sxy += (lx[k] - mx) * (ly[k] - my);
            sxx += (lx[k] - mx) * (lx[k] - mx);
        }
        fit.slope = -sxy / sxx;
    }
    return fit;
}

}  // namespace geneflow
