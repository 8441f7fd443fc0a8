#pragma once

#include <functional>
#include <vector>

#include "geneflow/discrete.hpp"
#include "geneflow/model.hpp"

namespace geneflow {

double phase_energy(const BistableNonlinearity& nl, double p, double v);

struct EnergyReport {
    double value = 0.0;
    double gradient_part = 0.0;
    double potential_part = 0.0;
    double sigma = 0.0;
};

// weight N^{2/sigma} taken from the drift; F extended by zero; p must vanish on the boundary
EnergyReport energy_sigma(const BistableNonlinearity& nl, const DriftField& drift, const GridProfile& p);
// same quadrature on a prebuilt operator; normalized=true divides all weights by their max
EnergyReport energy_on(const BistableNonlinearity& nl, const WeightedOperator& op, const std::vector<double>& p,
                       bool normalized = false);

// 1 on [0,delta], smoothstep down to 0 on [delta, 2 delta]
GridProfile plateau_ramp_eta(double delta, const DomainGeometry& g, int n);
// 1 inside rho-delta, (rho^2-r^2)/(rho^2-(rho-delta)^2) on the ring, 0 beyond rho
GridProfile ramp_v_delta(double delta, double rho, const DomainGeometry& g, int n);

struct SigmaThreshold {
    enum class Status { found, negative_everywhere, no_sign_change };
    double sigma_star = 0.0;
    Status status = Status::found;
    int evaluations = 0;
};

// drift: the base density family; its sigma is overwritten while probing
SigmaThreshold negative_energy_sigma_threshold(const BistableNonlinearity& nl, const DriftField& drift,
                                               const DomainGeometry& g, double delta, int n = 2001,
                                               double sigma_lo = 1e-6, double sigma_hi = 1e6);

double laplace_constant(double c0, int d);
std::vector<double> laplace_ratio_check(double c0, int d, const std::function<double(double)>& phi,
                                        const std::vector<double>& eps_list, double r1 = 1.0);

struct MinimizerOptions {
    int max_iter = 10000;
    double tol = 1e-12;
    bool polish = true;
};

struct MinimizerResult {
    GridProfile profile;
    std::vector<double> energy_history;  // normalized-weight energies, one per iteration
    int iterations = 0;
    double energy = 0.0;   // actual weights
    double residual = 0.0;
    bool polished = false;
};

// projected gradient descent on E_{N,sigma} in the weighted L2 metric, values clipped to [0,1]
MinimizerResult minimize_energy(const BistableNonlinearity& nl, const DriftField& drift, const GridProfile& initial,
                                const MinimizerOptions& opt = {});

}  // namespace geneflow
