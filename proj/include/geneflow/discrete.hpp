#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "geneflow/model.hpp"

namespace geneflow {

// row i: lo[i]*x[i-1] + di[i]*x[i] + up[i]*x[i+1]
struct Tridiag {
    std::vector<double> lo, di, up;
    explicit Tridiag(size_t m = 0) : lo(m, 0.0), di(m, 0.0), up(m, 0.0) {}
    size_t size() const { return di.size(); }
};

// Thomas algorithm, no pivoting; throws "solver-failure" on a vanishing pivot
std::vector<double> solve_tridiagonal(const Tridiag& T, std::vector<double> rhs);

// factor once, solve many times
class TridiagFactor {
public:
    TridiagFactor() = default;
    explicit TridiagFactor(const Tridiag& T);
    void solve(std::vector<double>& x) const;  // in place
    size_t size() const { return inv_.size(); }

private:
    std::vector<double> lo_, cp_, inv_;
};

// Discrete form of  (1/(w r^{d-1})) (w r^{d-1} p')'  on a uniform grid.
// (A p)_i = lo[i] (p_{i-1} - p_i) + up[i] (p_{i+1} - p_i)  on unknown rows.
// Interval: unknowns 1..n-2.  Ball: unknowns 0..n-2 (zero flux at the centre).
class WeightedOperator {
public:
    WeightedOperator(const DomainGeometry& g, int n, const std::function<double(double)>& log_weight);
    static WeightedOperator from_drift(const DomainGeometry& g, int n, const DriftField& drift);
    static WeightedOperator homogeneous(const DomainGeometry& g, int n);
    // node weights given; half-node weights by geometric mean
    static WeightedOperator from_weights(const DomainGeometry& g, const std::vector<double>& w);

    const DomainGeometry& geometry() const { return g_; }
    int n() const { return n_; }
    double h() const { return h_; }
    double x(int i) const { return g_.left() + i * h_; }
    int first() const { return g_.is_interval() ? 1 : 0; }
    int last() const { return n_ - 2; }
    int unknowns() const { return last() - first() + 1; }

    const std::vector<double>& lo() const { return lo_; }
    const std::vector<double>& up() const { return up_; }
    const std::vector<double>& log_weight() const { return lw_; }
    const std::vector<double>& log_weight_half() const { return lwh_; }
    const std::vector<double>& volume() const { return vol_; }
    const std::vector<double>& surface_half() const { return sh_; }

    std::vector<double> apply(const std::vector<double>& p) const;
    // max over unknown rows of |A p + f(p)|
    double residual(const BistableNonlinearity& nl, const std::vector<double>& p,
                    Extension ext = Extension::cubic) const;
    // largest |lw| on the grid (the oscillation bound used by the certificates)
    double log_weight_sup() const;

private:
    WeightedOperator(const DomainGeometry& g, int n);
    void build();

    DomainGeometry g_;
    int n_;
    double h_;
    std::vector<double> lw_, lwh_, vol_, sh_, lo_, up_;
};

// (I - dt A) q = rhs on the unknown rows, Dirichlet nodes pinned
class ImplicitSolver {
public:
    ImplicitSolver(const WeightedOperator& op, double dt);
    // rhs holds the full node vector; on return it holds q (boundary nodes = left/right)
    void solve(std::vector<double>& rhs, double left, double right) const;
    double dt() const { return dt_; }

private:
    WeightedOperator op_;
    double dt_;
    TridiagFactor fac_;
};

struct NewtonResult {
    std::vector<double> values;
    double residual;
    int iterations;
    bool converged;
};

// damped Newton on A p + f(p) = 0 with boundary values taken from `guess`
NewtonResult newton_steady(const WeightedOperator& op, const BistableNonlinearity& nl,
                           std::vector<double> guess, Extension ext = Extension::cubic, int max_iter = 60,
                           double tol = 1e-11);

}  // namespace geneflow
