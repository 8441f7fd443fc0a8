#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "geneflow/spectral.hpp"
#include "geneflow/steady.hpp"

using namespace geneflow;
using doctest::Approx;

TEST_CASE("closed-form Dirichlet eigenvalues") {
    CHECK(dirichlet_lambda1(DomainGeometry::interval(2.5), 512).lambda == Approx(M_PI * M_PI / 25).epsilon(1e-4));
    CHECK(dirichlet_lambda1(DomainGeometry::interval(1.0), 512).lambda == Approx(M_PI * M_PI / 4).epsilon(1e-4));
    CHECK(dirichlet_lambda1(DomainGeometry::ball(M_PI, 3), 512).lambda == Approx(1.0).epsilon(1e-4));
    CHECK_THROWS_AS(dirichlet_lambda1(DomainGeometry::interval(1.0), 16), Error);
}

TEST_CASE("second-order convergence") {
    auto fit = dirichlet_convergence(DomainGeometry::interval(1.0), {64, 128, 256, 512}, M_PI * M_PI / 4);
    CHECK(fit.slope == Approx(2.0).epsilon(0.05));
    auto blind = dirichlet_convergence(DomainGeometry::interval(1.0), {64, 128, 256, 512});
    CHECK(blind.slope == Approx(2.0).epsilon(0.05));
}

TEST_CASE("inverse iteration agrees with a dense generalized eigensolver") {
    // K u = lambda M u, assembled here from w directly
    auto g = DomainGeometry::interval(1.5);
    const int n = 121;
    auto lw = [](double x) { return std::sin(2 * x) + 0.5 * x * x; };
    const double h = g.width() / (n - 1);
    const int m = n - 2;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m, m), M = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < n - 1; ++i) {
        double wh = std::exp(lw(g.left() + (i + 0.5) * h)) / h;
        int a = i - 1, b = i;  // unknown indices of nodes i, i+1
        if (a >= 0) K(a, a) += wh;
        if (b < m) K(b, b) += wh;
        if (a >= 0 && b < m) K(a, b) = K(b, a) = -wh;
    }
    for (int i = 1; i < n - 1; ++i) M(i - 1, i - 1) = h * std::exp(lw(g.left() + i * h));
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M);
    double ref = es.eigenvalues()[0];
    auto r = weighted_lambda1(g, lw, n);
    CHECK(r.lambda == Approx(ref).epsilon(1e-10));
    CHECK(r.residual < 1e-7);
}

TEST_CASE("weight reductions") {
    auto g = DomainGeometry::interval(2.0);
    double plain = dirichlet_lambda1(g, 200).lambda;
    CHECK(weighted_lambda1(g, [](double) { return 0.0; }, 200).lambda == Approx(plain).epsilon(1e-9));
    auto w0 = GridProfile::sample(g, 200, [](double x) { return std::exp(x); });
    auto w1 = w0;
    for (double& v : w1.values) v *= 37.0;
    CHECK(weighted_lambda1(w1).lambda == Approx(weighted_lambda1(w0).lambda).epsilon(1e-10));
    w1.values[5] = 0.0;
    CHECK_THROWS_AS(weighted_lambda1(w1), Error);
}

TEST_CASE("gauss-in weight: exact eigenpair and 1/sigma scaling") {
    // weight e^{x^2/sigma}: u = e^{-x^2/sigma} gives lambda = 2/sigma on the line
    auto g = DomainGeometry::interval(6.0);
    for (double s : {1.0, 0.5, 0.25}) {
        auto r = drift_lambda1(DriftField::family(DriftFamily::gauss_in, s), g, 1024);
        CHECK(r.lambda == Approx(2.0 / s).epsilon(1e-3));
    }
    auto whole = lambda1_whole_space(DriftField::family(DriftFamily::gauss_in, 1.0), 1);
    CHECK(whole.converged);
    CHECK(whole.lambda == Approx(2.0).epsilon(2e-3));
    // L=12 gives the same numbers: truncation does not matter
    auto far = drift_lambda1(DriftField::family(DriftFamily::gauss_in, 0.5), DomainGeometry::interval(12.0), 2048);
    CHECK(far.lambda == Approx(4.0).epsilon(1e-3));
}

TEST_CASE("domain monotonicity and a Hayman-type bracket") {
    double prev = 1e300;
    double cmin = 1e300, cmax = 0;
    for (double rho : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        double l = dirichlet_lambda1(DomainGeometry::interval(rho), 256).lambda;
        CHECK(l < prev);
        prev = l;
        cmin = std::min(cmin, l * rho * rho);
        cmax = std::max(cmax, l * rho * rho);
    }
    // lambda rho^2 is the same constant pi^2/4 for every interval
    CHECK(cmax / cmin < 1.001);
    CHECK(cmin == Approx(M_PI * M_PI / 4).epsilon(1e-3));
}

TEST_CASE("certificate examples") {
    auto nl = BistableNonlinearity::cubic(0.33);
    auto hom = DriftField::homogeneous();
    auto c1 = uniqueness_certificate(nl, hom, DomainGeometry::interval(1.0), CertificateKind::zero_bc);
    CHECK(c1.holds);
    CHECK(c1.lhs == Approx(2.4674).epsilon(1e-3));
    CHECK(c1.rhs == Approx(0.67).epsilon(1e-9));
    CHECK_FALSE(uniqueness_certificate(nl, hom, DomainGeometry::interval(2.5), CertificateKind::zero_bc).holds);
    // strong inward drift: lambda_sigma grows like 1/sigma
    auto in = DriftField::family(DriftFamily::gauss_in, 0.05);
    CHECK(uniqueness_certificate(nl, in, DomainGeometry::interval(4.0), CertificateKind::general).holds);
}

TEST_CASE("certificate soundness over a sweep") {
    auto nl = BistableNonlinearity::cubic(0.33);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0, 1);
    int held = 0;
    for (int k = 0; k < 20; ++k) {
        double L = 0.3 + 6 * U(rng);
        auto fam = k % 3 == 0 ? DriftFamily::gauss_out : k % 3 == 1 ? DriftFamily::gauss_in : DriftFamily::sinusoidal;
        auto drift = k < 5 ? DriftField::homogeneous() : DriftField::family(fam, 0.5 + 20 * U(rng));
        auto g = DomainGeometry::interval(L);
        auto c = uniqueness_certificate(nl, drift, g, CertificateKind::zero_bc, 501);
        if (c.holds) {
            ++held;
            CHECK_FALSE(find_barrier_zero(nl, drift, g).has_value());
        }
    }
    CHECK(held >= 3);
}
