#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "geneflow/discrete.hpp"

using namespace geneflow;
using doctest::Approx;

TEST_CASE("Thomas solve matches a dense LU") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1, 1);
    const int m = 30;
    Tridiag T(m);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd b(m);
    std::vector<double> rhs(m);
    for (int i = 0; i < m; ++i) {
        T.di[i] = 4 + U(rng);
        A(i, i) = T.di[i];
        if (i) A(i, i - 1) = T.lo[i] = U(rng);
        if (i + 1 < m) A(i, i + 1) = T.up[i] = U(rng);
        b[i] = rhs[i] = U(rng);
    }
    Eigen::VectorXd x = A.lu().solve(b);
    auto y = solve_tridiagonal(T, rhs);
    for (int i = 0; i < m; ++i) CHECK(y[i] == Approx(x[i]).epsilon(1e-12));
    Tridiag Z(2);
    CHECK_THROWS_AS(solve_tridiagonal(Z, {1, 1}), Error);
}

TEST_CASE("homogeneous operator is exact on quadratics") {
    auto g = DomainGeometry::interval(1.0);
    auto op = WeightedOperator::homogeneous(g, 41);
    std::vector<double> p(41);
    for (int i = 0; i < 41; ++i) p[i] = op.x(i) * op.x(i);
    auto Ap = op.apply(p);
    for (int i = 1; i < 40; ++i) CHECK(Ap[i] == Approx(2.0).epsilon(1e-10));
    // ball d=3: Laplacian of r^2 is 2d, including the centre row
    auto b = WeightedOperator::homogeneous(DomainGeometry::ball(1.0, 3), 41);
    for (int i = 0; i < 41; ++i) p[i] = b.x(i) * b.x(i);
    Ap = b.apply(p);
    for (int i = 1; i < 40; ++i) CHECK(Ap[i] == Approx(6.0).epsilon(1e-9));
}

TEST_CASE("weighted operator: second order against the drift form") {
    // (1/w)(w p')' = p'' + (ln w)' p'
    auto g = DomainGeometry::interval(1.0);
    auto lw = [](double x) { return 0.8 * x * x + 0.3 * x; };
    auto exact = [](double x) { return -std::sin(x) + (1.6 * x + 0.3) * std::cos(x); };
    double prev = 0;
    for (int n : {101, 201, 401}) {
        WeightedOperator op(g, n, lw);
        std::vector<double> p(n);
        for (int i = 0; i < n; ++i) p[i] = std::sin(op.x(i));
        auto Ap = op.apply(p);
        double err = 0;
        for (int i = 1; i < n - 1; ++i) err = std::max(err, std::abs(Ap[i] - exact(op.x(i))));
        if (prev > 0) CHECK(prev / err == Approx(4.0).epsilon(0.05));
        prev = err;
    }
}

TEST_CASE("M-matrix structure and weighted symmetry") {
    auto g = DomainGeometry::interval(2.0);
    WeightedOperator op(g, 51, [](double x) { return 5 * x * x; });
    for (int i = 1; i < 50; ++i) {
        CHECK(op.lo()[i] > 0);
        CHECK(op.up()[i] > 0);
    }
    // <Au, v>_w = <u, Av>_w with mass V_i w_i
    std::vector<double> u(51), v(51);
    for (int i = 0; i < 51; ++i) {
        double x = op.x(i);
        u[i] = (4 - x * x) * std::cos(x);
        v[i] = (4 - x * x) * (1 + x);
    }
    auto Au = op.apply(u), Av = op.apply(v);
    double a = 0, b = 0;
    for (int i = 1; i < 50; ++i) {
        double m = op.volume()[i] * std::exp(op.log_weight()[i]);
        a += m * Au[i] * v[i];
        b += m * u[i] * Av[i];
    }
    CHECK(a == Approx(b).epsilon(1e-12));
}

TEST_CASE("implicit solve keeps constants and Dirichlet data") {
    auto g = DomainGeometry::interval(1.0);
    WeightedOperator op(g, 31, [](double x) { return -x * x; });
    ImplicitSolver s(op, 0.1);
    std::vector<double> q(31, 0.4);
    s.solve(q, 0.4, 0.4);
    for (double v : q) CHECK(v == Approx(0.4).epsilon(1e-13));
    std::vector<double> r(31, 0.0);
    s.solve(r, 1.0, 0.0);
    CHECK(r.front() == 1.0);
    CHECK(r.back() == 0.0);
    for (double v : r) CHECK(v >= 0.0);
}

TEST_CASE("Newton finds the constant roots and a nontrivial state") {
    auto nl = BistableNonlinearity::cubic(0.33);
    auto op = WeightedOperator::homogeneous(DomainGeometry::interval(1.0), 51);
    auto r = newton_steady(op, nl, std::vector<double>(51, 0.95));
    // boundary 0.95 is not a root; Newton must still drive the interior residual down
    CHECK(r.converged);
    CHECK(op.residual(nl, r.values) < 1e-10);
    auto z = newton_steady(op, nl, std::vector<double>(51, 1.0));
    CHECK(z.iterations == 0);
}
