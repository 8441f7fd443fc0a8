#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace geneflow {

// every failure carries a short machine code ("invalid-scalar", "dt-too-large", ...)
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail);
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// how f is continued outside [0,1]
enum class Extension { cubic, zero };

class BistableNonlinearity {
public:
    static BistableNonlinearity cubic(double theta);
    // samples of f on [0,1]; p must start at 0, end at 1, be strictly increasing
    static BistableNonlinearity tabulated(std::vector<double> p, std::vector<double> f, double theta);

    double theta() const { return theta_; }
    bool is_cubic() const { return !table_; }

    double f(double p, Extension ext = Extension::cubic) const;
    double fprime(double p, Extension ext = Extension::cubic) const;
    double F(double p, Extension ext = Extension::cubic) const;

private:
    struct Table;
    double theta_ = 0.0;
    std::shared_ptr<const Table> table_;
};

double eval_f(const BistableNonlinearity& nl, double p);
double eval_F(const BistableNonlinearity& nl, double p);

struct LipschitzBounds {
    double lipschitz;   // M = sup |f'| on [0,1]
    double sup_fprime;  // signed max of f' on [0,1]
};
LipschitzBounds lipschitz_and_sup_fprime(const BistableNonlinearity& nl);

struct BistableCheck {
    bool roots = false;
    bool signs = false;
    bool derivatives = false;
    bool positive_integral = false;
    double integral = 0.0;
    bool structure() const { return roots && signs && derivatives; }
    bool ok() const { return structure() && positive_integral; }
};
// numerical check of the bistable conditions for an arbitrary f on [0,1]
BistableCheck validate_bistable(const std::function<double(double)>& f, double theta,
                                int samples = 10000, double root_tol = 1e-10);

enum class DriftFamily { homogeneous, gauss_out, gauss_in, abs_exp, sinusoidal, tilt, sampled, infection };

std::string to_string(DriftFamily fam);
DriftFamily drift_family_from_string(const std::string& s);

// ln N and its derivative, scaled so that the PDE coefficient is (2/sigma) d/dx ln N
class DriftField {
public:
    DriftField() = default;
    static DriftField homogeneous();
    // rate: gauss families use ln N = -/+ rate*x^2/2, others scale ln N by rate
    static DriftField family(DriftFamily fam, double sigma, double rate = 1.0);
    // b = d/dx ln N sampled on an increasing grid, linear in between, ln N(x0)=0
    static DriftField sampled(std::vector<double> x, std::vector<double> b, double sigma);
    // infection-dependent density N(p) on [0,1]; spatial queries throw
    static DriftField infection(std::function<double(double)> N_of_p);

    DriftFamily kind() const { return fam_; }
    double sigma() const { return sigma_; }
    double rate() const { return rate_; }
    DriftField with_sigma(double s) const;

    double log_density(double x) const;      // ln N(x)
    double log_derivative(double x) const;   // d/dx ln N
    double coefficient(double x) const { return 2.0 / sigma_ * log_derivative(x); }
    double log_weight(double x) const { return 2.0 / sigma_ * log_density(x); }  // ln N^{2/sigma}
    bool is_even() const;
    bool is_spatial() const { return fam_ != DriftFamily::infection; }
    double N_of_p(double p) const;

private:
    DriftFamily fam_ = DriftFamily::homogeneous;
    double sigma_ = 1.0;
    double rate_ = 1.0;
    std::shared_ptr<const std::vector<double>> xs_, bs_, lns_;
    std::function<double(double)> np_;
};

class DomainGeometry {
public:
    static DomainGeometry interval(double L);
    static DomainGeometry ball(double R, int d);

    bool is_interval() const { return interval_; }
    double inradius() const { return size_; }
    int dim() const { return d_; }
    double width() const { return interval_ ? 2.0 * size_ : size_; }
    double left() const { return interval_ ? -size_ : 0.0; }
    // distance from the centre of the node coordinate
    double radius_of(double x) const { return interval_ ? std::abs(x) : x; }

private:
    bool interval_ = true;
    double size_ = 1.0;
    int d_ = 1;
};

struct GridProfile {
    DomainGeometry geometry = DomainGeometry::interval(1.0);
    std::vector<double> values;

    GridProfile() = default;
    GridProfile(DomainGeometry g, std::vector<double> v);
    GridProfile(DomainGeometry g, int n, double c);
    template <class Fn>
    static GridProfile sample(DomainGeometry g, int n, Fn fn) {
        GridProfile gp(g, n, 0.0);
        for (int i = 0; i < n; ++i) gp.values[i] = fn(gp.x(i));
        return gp;
    }

    int n() const { return static_cast<int>(values.size()); }
    double h() const { return geometry.width() / (n() - 1); }
    double x(int i) const { return geometry.left() + i * h(); }
    double max() const;
    double min() const;
    bool is_proportion(double tol = 1e-9) const;
    // linear interpolation in x
    double at(double x) const;
};

double sup_distance(const GridProfile& a, const GridProfile& b);
double sup_distance(const GridProfile& a, double c);

enum class Assumption { T1, T2, A1 };

struct AssumptionParams {
    double C = 1.0;    // T1
    double c0 = 1.0;   // T2 lower envelope
    double c1 = 1.0;   // T2 upper envelope
    int d = 1;         // A1
    double R = 2.0;
    int nodes = 2001;
};

struct AssumptionVerdict {
    bool holds;
    double margin;
};

// inequalities are checked on ln N as given by the family (no sigma scaling)
AssumptionVerdict validate_assumption(const DriftField& drift, Assumption which, const AssumptionParams& params);

}  // namespace geneflow
