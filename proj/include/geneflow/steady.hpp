#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geneflow/discrete.hpp"
#include "geneflow/model.hpp"

namespace geneflow {

struct RadialSample {
    double r, p, v, a;  // a = p'' from the ODE, kept for dense output
};

enum class ShotExit { reached_rmax, left_band, velocity_blowup };

// p'' = -f(p) - ((d-1)/r + b_eff(r)) p',  p(0)=alpha, p'(0)=0
struct RadialTrajectory {
    double sigma = 0.0;
    double alpha = 0.0;
    double theta = 0.0;
    int d = 1;
    std::vector<RadialSample> samples;
    std::optional<double> r_theta, r_half_theta, r_one, r_zero;
    bool increasing_to_one = false;   // p' > 0 on (0, r_one]
    bool decreasing_to_zero = false;  // p' < 0 on (0, r_zero]
    bool blow_up = false;
    ShotExit exit = ShotExit::reached_rmax;

    double r_end() const { return samples.back().r; }
    // cubic Hermite dense output, clamped to the integrated range
    double p_at(double r) const;
    double v_at(double r) const;
};

// h_max <= 0 picks min(1e-3 r_max, sigma/10)
RadialTrajectory shoot_radial(const BistableNonlinearity& nl, const DriftField& drift, double alpha, int d,
                              double r_max, double h_max = 0.0);

struct Barrier {
    GridProfile profile;
    double boundary_value = 0.0;
    double residual = 0.0;
    double min = 0.0, max = 0.0;
    double alpha = 0.0;          // centre value of the shooting solution
    double b_eff_boundary = 0.0; // drift coefficient at the boundary, for diagnostics
    std::string source;          // "shooting" or "energy"
    std::optional<RadialTrajectory> trajectory;
};

struct BarrierOptions {
    int n = 4001;             // grid nodes of the returned profile
    bool cross_check = true;  // barrier to 0: also run the energy minimiser
};

// geometry decides interval (-R,R) or ball B_R in dimension d
std::optional<Barrier> find_barrier_one(const BistableNonlinearity& nl, const DriftField& drift,
                                        const DomainGeometry& g, const BarrierOptions& opt = {});
std::optional<Barrier> find_barrier_zero(const BistableNonlinearity& nl, const DriftField& drift,
                                         const DomainGeometry& g, const BarrierOptions& opt = {});

// residual on an m-node grid of the shooting trajectory (or a C2 spline of the profile)
double barrier_fine_check(const Barrier& b, const BistableNonlinearity& nl, const DriftField& drift, int m);

// +inf when no probe works
double critical_radius_R_star(const BistableNonlinearity& nl, const DriftField& drift, int d,
                              const std::vector<double>& R_probes, int n = 801);

struct WeightedIVP {
    GridProfile profile;  // on the ball [0,R] (radial coordinate)
    bool escaped = false; // left [-0.5, 1.5]; values past the escape are frozen
    double picard_radius = 0.0;
};

// -(1/r^{d-1}) (r^{d-1} w p')' = f(p) w,  w = N^{2/sigma},  p(0) = s theta, p'(0) = 0
WeightedIVP solve_radial_weighted(const BistableNonlinearity& nl, const DriftField& drift, double s, int d, double R,
                                  double h);

struct SteadyPath {
    std::vector<GridProfile> profiles;
    std::vector<double> s;
    double delta = 0.0;
    bool admissible = false;
    double max_residual = 0.0;
    double max_gap = 0.0;
    std::string failure;  // empty on success
};

// p_s from s=0 (zero state) to s=1 (theta), refined until consecutive sup gaps <= delta
SteadyPath build_steady_path(const BistableNonlinearity& nl, const DriftField& drift, const DomainGeometry& g, int K,
                             double delta, int n);

}  // namespace geneflow
