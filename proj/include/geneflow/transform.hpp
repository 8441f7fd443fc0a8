#pragma once

#include <functional>
#include <vector>

#include "geneflow/model.hpp"

namespace geneflow {

// q = NN(p) = int_0^p N^2 / int_0^1 N^2
class GeneFlowMap {
public:
    static GeneFlowMap build(const std::function<double(double)>& N_of_p, int nodes = 2001);

    double scale() const { return c_; }  // int_0^1 N^2 before normalisation
    double N_hat(double p) const;        // N / sqrt(c)
    double forward(double p) const;      // NN(p), p clamped to [0,1]
    double inverse(double q) const;      // NN^{-1}(q), q clamped to [0,1]
    const std::vector<double>& nodes() const { return x_; }
    const std::vector<double>& table() const { return q_; }
    const std::function<double(double)>& N() const { return N_; }

private:
    double dq(double p) const { return N_hat(p) * N_hat(p); }
    std::function<double(double)> N_;
    double c_ = 1.0;
    std::vector<double> x_, q_;
};

struct TildeValue {
    double value;
    bool clamped;  // q was outside [0,1]
};

// f(NN^{-1} q) N_hat^2(NN^{-1} q)
TildeValue tilde_f(const GeneFlowMap& m, const BistableNonlinearity& nl, double q);
// tabulated copy with Allee root NN(theta)
BistableNonlinearity tilde_nonlinearity(const GeneFlowMap& m, const BistableNonlinearity& nl, int samples = 4001);

struct EquivalenceResult {
    double discrepancy = 0.0;  // sup over steps and nodes of |NN(p) - q|
    double h = 0.0, dt = 0.0;
    int steps = 0;
};

// p_t = p_xx + 2 (N'/N)(p) p_x^2 + f(p)  against  q_t = q_xx + f~(q), both with
// Crank-Nicolson diffusion and Heun reaction, Dirichlet data u (and NN(u)). Interval only.
EquivalenceResult equivalence_check(const BistableNonlinearity& nl, const GeneFlowMap& m, const DomainGeometry& g,
                                    const std::function<double(double)>& p0, double u_left, double u_right, double T,
                                    double h, double dt);

struct RefinementStudy {
    std::vector<double> h;  // dt = h on every level
    std::vector<double> discrepancy;
    std::vector<double> factor;  // discrepancy[k] / discrepancy[k+1]
};

RefinementStudy equivalence_refinement(const BistableNonlinearity& nl, const GeneFlowMap& m, const DomainGeometry& g,
                                       const std::function<double(double)>& p0, double u_left, double u_right,
                                       double T, const std::vector<double>& hs);

}  // namespace geneflow
