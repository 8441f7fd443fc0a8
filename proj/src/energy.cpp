#include "geneflow/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace geneflow {

double phase_energy(const BistableNonlinearity& nl, double p, double v) { return 0.5 * v * v + nl.F(p); }

EnergyReport energy_on(const BistableNonlinearity& nl, const WeightedOperator& op, const std::vector<double>& p,
                       bool normalized) {
    const auto& lw = op.log_weight();
    const auto& lwh = op.log_weight_half();
    const auto& vol = op.volume();
    const auto& sh = op.surface_half();
    double shift = 0.0;
    if (normalized) {
        shift = *std::max_element(lw.begin(), lw.end());
        shift = std::max(shift, *std::max_element(lwh.begin(), lwh.end()));
    }
    const double h = op.h();
    double grad = 0.0, pot = 0.0;
    for (int i = 0; i + 1 < op.n(); ++i) {
        double dp = p[i + 1] - p[i];
        if (dp != 0.0) grad += sh[i] * std::exp(lwh[i] - shift) * dp * dp / h;
    }
    grad *= 0.5;
    for (int i = 0; i < op.n(); ++i) {
        double Fp = nl.F(p[i], Extension::zero);
        if (Fp != 0.0) pot += vol[i] * std::exp(lw[i] - shift) * Fp;
    }
    if (!std::isfinite(grad) || !std::isfinite(pot)) throw Error("weight-overflow", "energy weights overflow");
    EnergyReport r;
    r.gradient_part = grad;
    r.potential_part = pot;
    r.value = grad - pot;
    return r;
}

EnergyReport energy_sigma(const BistableNonlinearity& nl, const DriftField& drift, const GridProfile& p) {
    if (std::abs(p.values.front()) > 1e-12 || std::abs(p.values.back()) > 1e-12)
        throw Error("bc-violation", "energy needs zero boundary values");
    auto op = WeightedOperator::from_drift(p.geometry, p.n(), drift);
    auto r = energy_on(nl, op, p.values, false);
    r.sigma = drift.sigma();
    return r;
}

GridProfile plateau_ramp_eta(double delta, const DomainGeometry& g, int n) {
    if (!(delta > 0.0 && delta < g.inradius() / 2.0)) throw Error("bad-delta", "need 0 < delta < R/2");
    return GridProfile::sample(g, n, [&](double x) {
        double r = g.radius_of(x);
        if (r <= delta) return 1.0;
        if (r >= 2 * delta) return 0.0;
        double t = (r - delta) / delta;
        return 1.0 - t * t * (3.0 - 2.0 * t);
    });
}

GridProfile ramp_v_delta(double delta, double rho, const DomainGeometry& g, int n) {
    if (!(delta > 0.0 && delta < rho)) throw Error("bad-delta", "need 0 < delta < rho");
    if (rho > g.inradius() * (1 + 1e-12)) throw Error("bad-delta", "rho exceeds the inradius");
    const double inner = rho - delta;
    const double den = rho * rho - inner * inner;
    return GridProfile::sample(g, n, [&](double x) {
        double r = g.radius_of(x);
        if (r <= inner) return 1.0;
        if (r >= rho) return 0.0;
        return (rho * rho - r * r) / den;
    });
}

SigmaThreshold negative_energy_sigma_threshold(const BistableNonlinearity& nl, const DriftField& drift,
                                               const DomainGeometry& g, double delta, int n, double sigma_lo,
                                               double sigma_hi) {
    auto eta = plateau_ramp_eta(delta, g, n);
    SigmaThreshold out;
    auto sign_at = [&](double s) {
        ++out.evaluations;
        auto op = WeightedOperator::from_drift(g, n, drift.with_sigma(s));
        return energy_on(nl, op, eta.values, true).value;
    };
    double lo = sigma_lo, hi = sigma_hi;
    if (sign_at(hi) < 0.0) {
        out.status = SigmaThreshold::Status::negative_everywhere;
        out.sigma_star = 0.0;
        return out;
    }
    if (sign_at(lo) >= 0.0) {
        out.status = SigmaThreshold::Status::no_sign_change;
        out.sigma_star = std::numeric_limits<double>::infinity();
        return out;
    }
    while (hi / lo > 1.0005) {
        double mid = std::sqrt(lo * hi);
        (sign_at(mid) < 0.0 ? lo : hi) = mid;
    }
    out.sigma_star = std::sqrt(lo * hi);
    return out;
}

double laplace_constant(double c0, int d) { return 0.5 * std::tgamma(d / 2.0) * std::pow(c0, -d / 2.0); }

std::vector<double> laplace_ratio_check(double c0, int d, const std::function<double(double)>& phi,
                                        const std::vector<double>& eps_list, double r1) {
    double phi0 = phi(0.0);
    if (phi0 == 0.0) throw Error("degenerate-phi", "phi(0) must be nonzero");
    std::vector<double> out;
    for (double eps : eps_list) {
        // resolve the sqrt(eps/c0) boundary layer with many panels
        double scale = std::sqrt(eps / c0);
        int m = static_cast<int>(std::max(2000.0, std::ceil(400.0 * r1 / scale)));
        m = std::min(m, 4000000);
        if (m % 2) ++m;
        double h = r1 / m, s = 0.0;
        for (int k = 0; k <= m; ++k) {
            double t = k * h;
            double g = std::pow(t, d - 1) * phi(t) * std::exp(-c0 * t * t / eps);
            s += (k == 0 || k == m ? 1.0 : (k % 2 ? 4.0 : 2.0)) * g;
        }
        double integral = s * h / 3.0;
        out.push_back(integral / (phi0 * std::pow(eps, d / 2.0)));
    }
    return out;
}

MinimizerResult minimize_energy(const BistableNonlinearity& nl, const DriftField& drift, const GridProfile& initial,
                                const MinimizerOptions& opt) {
    auto op = WeightedOperator::from_drift(initial.geometry, initial.n(), drift);
    const double tau = 1.0 / lipschitz_and_sup_fprime(nl).lipschitz;
    ImplicitSolver solver(op, tau);
    const double left = initial.values.front(), right = initial.values.back();

    MinimizerResult res;
    std::vector<double> p = initial.values;
    for (double& v : p) v = std::clamp(v, 0.0, 1.0);
    res.energy_history.push_back(energy_on(nl, op, p, true).value);
    std::vector<double> q(p.size());
    int it = 0;
    for (; it < opt.max_iter; ++it) {
        for (size_t i = 0; i < p.size(); ++i) q[i] = p[i] + tau * nl.f(p[i], Extension::zero);
        solver.solve(q, left, right);
        double change = 0.0;
        for (size_t i = 0; i < p.size(); ++i) {
            q[i] = std::clamp(q[i], 0.0, 1.0);
            change = std::max(change, std::abs(q[i] - p[i]));
        }
        p.swap(q);
        res.energy_history.push_back(energy_on(nl, op, p, true).value);
        if (change < opt.tol) break;
    }
    res.iterations = it;

    if (opt.polish) {
        auto nr = newton_steady(op, nl, p, Extension::cubic);
        bool inside = std::all_of(nr.values.begin(), nr.values.end(),
                                  [](double v) { return v >= -1e-12 && v <= 1.0 + 1e-12; });
        double e_old = res.energy_history.back();
        if (inside && nr.residual < op.residual(nl, p)) {
            for (double& v : nr.values) v = std::clamp(v, 0.0, 1.0);
            double e_new = energy_on(nl, op, nr.values, true).value;
            if (e_new <= e_old + 1e-12 * std::max(1.0, std::abs(e_old))) {
                p = nr.values;
                res.polished = true;
                res.energy_history.push_back(e_new);
            }
        }
    }
    res.profile = GridProfile(initial.geometry, p);
    res.residual = op.residual(nl, p);
    try {
        res.energy = energy_on(nl, op, p, false).value;
    } catch (const Error&) {
        res.energy = std::numeric_limits<double>::quiet_NaN();
    }
    return res;
}

}  // namespace geneflow
