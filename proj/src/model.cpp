#include "geneflow/model.hpp"

#include <algorithm>
#include <boost/math/special_functions/fpclassify.hpp>  // pchip.hpp uses unqualified isnan
#include <boost/math/interpolators/pchip.hpp>
#include <cmath>

namespace geneflow {

Error::Error(std::string code, const std::string& detail)
    : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

namespace {

void check_finite(double p) {
    if (!std::isfinite(p)) throw Error("invalid-scalar", "non-finite argument");
}

double cubic_F(double th, double p) {
    double p2 = p * p;
    return -p2 * p2 / 4.0 + (1.0 + th) * p2 * p / 3.0 - th * p2 / 2.0;
}

}  // namespace

struct BistableNonlinearity::Table {
    std::vector<double> p;
    std::vector<double> cumF;  // F at the sample nodes
    boost::math::interpolators::pchip<std::vector<double>> spline;

    Table(std::vector<double> ps, std::vector<double> fs)
        : p(ps), spline(std::move(ps), std::move(fs)) {
        cumF.assign(p.size(), 0.0);
        for (size_t k = 1; k < p.size(); ++k) cumF[k] = cumF[k - 1] + simpson(p[k - 1], p[k]);
    }
    // Simpson is exact on each cubic piece
    double simpson(double a, double b) const {
        return (b - a) / 6.0 * (spline(a) + 4.0 * spline(0.5 * (a + b)) + spline(b));
    }
    double F(double x) const {
        auto it = std::upper_bound(p.begin(), p.end(), x);
        size_t k = std::max<size_t>(1, it - p.begin()) - 1;
        return cumF[k] + simpson(p[k], x);
    }
};

BistableNonlinearity BistableNonlinearity::cubic(double theta) {
    if (!(theta > 0.0 && theta < 1.0)) throw Error("invalid-scalar", "theta must lie in (0,1)");
    BistableNonlinearity nl;
    nl.theta_ = theta;
    return nl;
}

BistableNonlinearity BistableNonlinearity::tabulated(std::vector<double> p, std::vector<double> f, double theta) {
    if (p.size() != f.size() || p.size() < 4) throw Error("invalid-table", "need >= 4 matching samples");
    if (std::abs(p.front()) > 1e-14 || std::abs(p.back() - 1.0) > 1e-14)
        throw Error("invalid-table", "samples must span [0,1]");
    for (size_t k = 1; k < p.size(); ++k)
        if (!(p[k] > p[k - 1])) throw Error("invalid-table", "abscissae not increasing");
    if (!(theta > 0.0 && theta < 1.0)) throw Error("invalid-scalar", "theta must lie in (0,1)");
    BistableNonlinearity nl;
    nl.theta_ = theta;
    nl.table_ = std::make_shared<const Table>(std::move(p), std::move(f));
    return nl;
}

double BistableNonlinearity::f(double p, Extension ext) const {
    check_finite(p);
    if (table_ || ext == Extension::zero) {
        if (p <= 0.0 || p >= 1.0) return 0.0;
    }
    if (table_) return table_->spline(p);
    return p * (p - theta_) * (1.0 - p);
}

double BistableNonlinearity::fprime(double p, Extension ext) const {
    check_finite(p);
    if (table_ || ext == Extension::zero) {
        if (p < 0.0 || p > 1.0) return 0.0;
    }
    if (table_) return table_->spline.prime(p);
    return -3.0 * p * p + 2.0 * (1.0 + theta_) * p - theta_;
}

double BistableNonlinearity::F(double p, Extension ext) const {
    check_finite(p);
    if (table_ || ext == Extension::zero) {
        if (p <= 0.0) return 0.0;
        if (p >= 1.0) return table_ ? table_->cumF.back() : cubic_F(theta_, 1.0);
    }
    if (table_) return table_->F(p);
    return cubic_F(theta_, p);
}

double eval_f(const BistableNonlinearity& nl, double p) { return nl.f(p); }
double eval_F(const BistableNonlinearity& nl, double p) { return nl.F(p); }

LipschitzBounds lipschitz_and_sup_fprime(const BistableNonlinearity& nl) {
    const int n = 10000;
    double M = 0.0, sup = -1e300;
    auto take = [&](double p) {
        double d = nl.fprime(p);
        M = std::max(M, std::abs(d));
        sup = std::max(sup, d);
    };
    for (int i = 0; i <= n; ++i) take(double(i) / n);
    if (nl.is_cubic()) take((1.0 + nl.theta()) / 3.0);
    return {M, sup};
}

BistableCheck validate_bistable(const std::function<double(double)>& f, double theta, int samples,
                                double root_tol) {
    BistableCheck c;
    c.roots = std::abs(f(0.0)) <= root_tol && std::abs(f(theta)) <= root_tol && std::abs(f(1.0)) <= root_tol;

    c.signs = true;
    for (int i = 1; i < samples; ++i) {
        double p = double(i) / samples;
        if (std::abs(p - theta) < 1e-12) continue;
        double v = f(p);
        if ((p < theta && !(v < 0.0)) || (p > theta && !(v > 0.0))) {
            c.signs = false;
            break;
        }
    }

    const double e = 1e-6;
    double d0 = (f(e) - f(0.0)) / e;
    double d1 = (f(1.0) - f(1.0 - e)) / e;
    double dt = (f(theta + e) - f(theta - e)) / (2 * e);
    c.derivatives = d0 < 0.0 && d1 < 0.0 && dt > 0.0;

    int m = samples % 2 ? samples + 1 : samples;
    double h = 1.0 / m, s = f(0.0) + f(1.0);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
    c.integral = s * h / 3.0;
    c.positive_integral = c.integral > 0.0;
    return c;
}

std::string to_string(DriftFamily fam) {
    switch (fam) {
        case DriftFamily::homogeneous: return "homogeneous";
        case DriftFamily::gauss_out: return "gauss_out";
        case DriftFamily::gauss_in: return "gauss_in";
        case DriftFamily::abs_exp: return "abs_exp";
        case DriftFamily::sinusoidal: return "sinusoidal";
        case DriftFamily::tilt: return "tilt";
        case DriftFamily::sampled: return "sampled";
        case DriftFamily::infection: return "infection";
    }
    return "?";
}

DriftFamily drift_family_from_string(const std::string& s) {
    for (auto f : {DriftFamily::homogeneous, DriftFamily::gauss_out, DriftFamily::gauss_in, DriftFamily::abs_exp,
                   DriftFamily::sinusoidal, DriftFamily::tilt, DriftFamily::sampled, DriftFamily::infection})
        if (to_string(f) == s) return f;
    std::string t = s;
    std::replace(t.begin(), t.end(), '-', '_');
    if (t != s) return drift_family_from_string(t);
    throw Error("invalid-drift", "unknown family '" + s + "'");
}

DriftField DriftField::homogeneous() { return DriftField(); }

DriftField DriftField::family(DriftFamily fam, double sigma, double rate) {
    if (fam == DriftFamily::sampled || fam == DriftFamily::infection)
        throw Error("invalid-drift", "use the dedicated constructor");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error("invalid-drift", "sigma must be positive");
    DriftField d;
    d.fam_ = fam;
    d.sigma_ = sigma;
    d.rate_ = rate;
    return d;
}

DriftField DriftField::sampled(std::vector<double> x, std::vector<double> b, double sigma) {
    if (x.size() != b.size() || x.size() < 2) throw Error("invalid-drift", "sample size mismatch");
    if (!(sigma > 0.0)) throw Error("invalid-drift", "sigma must be positive");
    std::vector<double> ln(x.size(), 0.0);
    for (size_t k = 1; k < x.size(); ++k) {
        if (!(x[k] > x[k - 1])) throw Error("invalid-drift", "abscissae not increasing");
        ln[k] = ln[k - 1] + 0.5 * (b[k] + b[k - 1]) * (x[k] - x[k - 1]);
    }
    DriftField d;
    d.fam_ = DriftFamily::sampled;
    d.sigma_ = sigma;
    d.xs_ = std::make_shared<const std::vector<double>>(std::move(x));
    d.bs_ = std::make_shared<const std::vector<double>>(std::move(b));
    d.lns_ = std::make_shared<const std::vector<double>>(std::move(ln));
    return d;
}

DriftField DriftField::infection(std::function<double(double)> N_of_p) {
    DriftField d;
    d.fam_ = DriftFamily::infection;
    d.np_ = std::move(N_of_p);
    for (int i = 0; i <= 1000; ++i) {
        double v = d.np_(i / 1000.0);
        if (!(v > 0.0) || !std::isfinite(v)) throw Error("invalid-N", "N(p) must be positive on [0,1]");
    }
    return d;
}

DriftField DriftField::with_sigma(double s) const {
    if (!(s > 0.0)) throw Error("invalid-drift", "sigma must be positive");
    DriftField d = *this;
    d.sigma_ = s;
    return d;
}

double DriftField::log_density(double x) const {
    switch (fam_) {
        case DriftFamily::homogeneous: return 0.0;
        case DriftFamily::gauss_out: return -rate_ * x * x / 2.0;
        case DriftFamily::gauss_in: return rate_ * x * x / 2.0;
        case DriftFamily::abs_exp: return rate_ * std::abs(x);
        case DriftFamily::sinusoidal: return rate_ * (1.0 - std::cos(x));
        case DriftFamily::tilt: return rate_ * x;
        case DriftFamily::sampled: {
            const auto& xs = *xs_;
            const auto& bs = *bs_;
            const auto& ln = *lns_;
            if (x <= xs.front()) return ln.front() + bs.front() * (x - xs.front());
            if (x >= xs.back()) return ln.back() + bs.back() * (x - xs.back());
            size_t k = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin() - 1;
            double bx = log_derivative(x);
            return ln[k] + 0.5 * (bs[k] + bx) * (x - xs[k]);
        }
        case DriftFamily::infection: break;
    }
    throw Error("assumption-inapplicable", "infection drift has no spatial profile");
}

double DriftField::log_derivative(double x) const {
    switch (fam_) {
        case DriftFamily::homogeneous: return 0.0;
        case DriftFamily::gauss_out: return -rate_ * x;
        case DriftFamily::gauss_in: return rate_ * x;
        case DriftFamily::abs_exp: return x > 0 ? rate_ : (x < 0 ? -rate_ : 0.0);
        case DriftFamily::sinusoidal: return rate_ * std::sin(x);
        case DriftFamily::tilt: return rate_;
        case DriftFamily::sampled: {
            const auto& xs = *xs_;
            const auto& bs = *bs_;
            if (x <= xs.front()) return bs.front();
            if (x >= xs.back()) return bs.back();
            size_t k = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin() - 1;
            double t = (x - xs[k]) / (xs[k + 1] - xs[k]);
            return (1 - t) * bs[k] + t * bs[k + 1];
        }
        case DriftFamily::infection: break;
    }
    throw Error("assumption-inapplicable", "infection drift has no spatial profile");
}

bool DriftField::is_even() const {
    switch (fam_) {
        case DriftFamily::tilt:
        case DriftFamily::infection: return false;
        case DriftFamily::sampled: {
            const auto& xs = *xs_;
            for (size_t k = 0; k < xs.size(); ++k) {
                double x = xs[k];
                if (std::abs(log_derivative(x) + log_derivative(-x)) > 1e-12) return false;
            }
            return std::abs(xs.front() + xs.back()) < 1e-12;
        }
        default: return true;
    }
}

double DriftField::N_of_p(double p) const {
    if (fam_ != DriftFamily::infection) throw Error("assumption-inapplicable", "not an infection drift");
    return np_(p);
}

DomainGeometry DomainGeometry::interval(double L) {
    if (!(L > 0.0) || !std::isfinite(L)) throw Error("invalid-geometry", "L must be positive");
    DomainGeometry g;
    g.interval_ = true;
    g.size_ = L;
    g.d_ = 1;
    return g;
}

DomainGeometry DomainGeometry::ball(double R, int d) {
    if (!(R > 0.0) || !std::isfinite(R)) throw Error("invalid-geometry", "R must be positive");
    if (d < 1) throw Error("invalid-geometry", "d must be >= 1");
    DomainGeometry g;
    g.interval_ = false;
    g.size_ = R;
    g.d_ = d;
    return g;
}

GridProfile::GridProfile(DomainGeometry g, std::vector<double> v) : geometry(g), values(std::move(v)) {
    if (values.size() < 3) throw Error("invalid-grid", "need at least 3 nodes");
    for (double x : values)
        if (!std::isfinite(x)) throw Error("invalid-grid", "non-finite value");
}

GridProfile::GridProfile(DomainGeometry g, int n, double c) : geometry(g), values(std::max(n, 0), c) {
    if (n < 3) throw Error("invalid-grid", "need at least 3 nodes");
}

double GridProfile::max() const { return *std::max_element(values.begin(), values.end()); }
double GridProfile::min() const { return *std::min_element(values.begin(), values.end()); }

bool GridProfile::is_proportion(double tol) const { return min() >= -tol && max() <= 1.0 + tol; }

double GridProfile::at(double xq) const {
    double s = (xq - geometry.left()) / h();
    if (s <= 0) return values.front();
    if (s >= n() - 1) return values.back();
    int k = static_cast<int>(s);
    double t = s - k;
    return (1 - t) * values[k] + t * values[k + 1];
}

double sup_distance(const GridProfile& a, const GridProfile& b) {
    if (a.n() != b.n()) throw Error("invalid-grid", "grid mismatch");
    double m = 0.0;
    for (int i = 0; i < a.n(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

double sup_distance(const GridProfile& a, double c) {
    double m = 0.0;
    for (double v : a.values) m = std::max(m, std::abs(v - c));
    return m;
}

AssumptionVerdict validate_assumption(const DriftField& drift, Assumption which, const AssumptionParams& prm) {
    if (!drift.is_spatial()) throw Error("assumption-inapplicable", "drift must be radial or spatial-log");
    if (which == Assumption::T2 && !(prm.c0 >= prm.c1 && prm.c1 > 0.0))
        throw Error("invalid-params", "T2 needs c0 >= c1 > 0");
    double margin = 1e300;
    double ln0 = drift.log_density(0.0);
    for (int k = 1; k < prm.nodes; ++k) {
        double r = prm.R * k / (prm.nodes - 1);
        double b = drift.log_derivative(r);
        double slack = 0.0;
        switch (which) {
            case Assumption::T1: slack = -prm.C * r - b; break;
            case Assumption::T2: {
                double ln = drift.log_density(r) - ln0;
                slack = std::min(ln + prm.c0 * r * r / 2.0, -prm.c1 * r * r / 2.0 - ln);
                break;
            }
            case Assumption::A1: slack = b + (prm.d - 1) / (2.0 * r); break;
        }
        margin = std::min(margin, slack);
    }
    return {margin >= -1e-12, margin};
}

}  // namespace geneflow
