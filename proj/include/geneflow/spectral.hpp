#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "geneflow/discrete.hpp"
#include "geneflow/model.hpp"

namespace geneflow {

struct EigenResult {
    double lambda = 0.0;
    GridProfile eigenprofile;  // max = 1, zero on Dirichlet nodes
    int iterations = 0;
    double residual = 0.0;     // |(-A - lambda) u|_inf / (lambda |u|_inf)
};

// smallest eigenvalue of -A for an assembled operator (inverse iteration)
EigenResult lambda1_of(const WeightedOperator& op);

// sum W_{i+1/2} (u_{i+1}-u_i)^2 / h  over  sum V_i w_i u_i^2
double rayleigh_quotient(const WeightedOperator& op, const std::vector<double>& u);

EigenResult dirichlet_lambda1(const DomainGeometry& g, int n);
EigenResult weighted_lambda1(const DomainGeometry& g, const std::function<double(double)>& log_weight, int n);
// node weights; "invalid-weight" unless all positive
EigenResult weighted_lambda1(const GridProfile& w);

enum class WeightKind { N_squared, N_sigma };
// weight N^2 or N^{2/sigma} of a spatial drift
EigenResult drift_lambda1(const DriftField& drift, const DomainGeometry& g, int n,
                          WeightKind kind = WeightKind::N_sigma);

enum class CertificateKind { zero_bc, general };

struct Certificate {
    bool holds = false;
    double lhs = 0.0, rhs = 0.0;
    double lipschitz = 0.0, sup_fprime = 0.0;
    double log_weight_oscillation = 0.0;
};

// zero_bc: lambda_1^D(Omega) > sup|f'| * exp(max lw - min lw)   (conservative)
// general: weighted lambda(N^{2/sigma}) > M
Certificate uniqueness_certificate(const BistableNonlinearity& nl, const DriftField& drift, const DomainGeometry& g,
                                   CertificateKind kind, int n = 1001);

struct WholeSpaceLambda {
    double lambda = 0.0;
    double R = 0.0;
    int rounds = 0;
    bool converged = false;
};

// lambda on growing balls/intervals (same h) until the relative change is below tol
WholeSpaceLambda lambda1_whole_space(const DriftField& drift, int d, WeightKind kind = WeightKind::N_sigma,
                                     double R0 = 2.0, double h = 0.01, double tol = 1e-3, double R_max = 64.0);

struct ConvergenceFit {
    std::vector<int> n;
    std::vector<double> lambda;
    std::vector<double> error;  // vs exact, or successive differences when no exact value
    double slope = 0.0;         // -d log(error) / d log(n)
};

ConvergenceFit dirichlet_convergence(const DomainGeometry& g, const std::vector<int>& ns,
                                     std::optional<double> exact = std::nullopt);

}  // namespace geneflow
