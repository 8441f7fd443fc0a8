#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "geneflow/transform.hpp"

using namespace geneflow;
using doctest::Approx;

namespace {
const auto nl = BistableNonlinearity::cubic(0.33);
}

TEST_CASE("closed form for N = 1 + p") {
    auto m = GeneFlowMap::build([](double p) { return 1 + p; });
    CHECK(m.scale() == Approx(7.0 / 3).epsilon(1e-12));
    CHECK(std::abs(m.forward(0.33) - (std::pow(1.33, 3) - 1) / 7) < 1e-10);
    for (double p : {0.0, 0.1, 0.5, 0.9, 1.0}) {
        CHECK(m.forward(p) == Approx((std::pow(1 + p, 3) - 1) / 7).epsilon(1e-10));
        CHECK(m.inverse(m.forward(p)) == Approx(p).epsilon(1e-11));
    }
}

TEST_CASE("the map ignores a constant factor in N") {
    auto a = GeneFlowMap::build([](double p) { return std::exp(0.7 * p); });
    auto b = GeneFlowMap::build([](double p) { return 13.0 * std::exp(0.7 * p); });
    for (double p : {0.2, 0.5, 0.8}) {
        CHECK(a.forward(p) == Approx(b.forward(p)).epsilon(1e-13));
        CHECK(tilde_f(a, nl, a.forward(p)).value == Approx(tilde_f(b, nl, b.forward(p)).value).epsilon(1e-12));
    }
}

TEST_CASE("tilde f stays bistable for random mild N") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(-0.2, 0.2);
    for (int k = 0; k < 20; ++k) {
        double a = U(rng), b = U(rng), c = U(rng);
        auto m = GeneFlowMap::build(
            [=](double p) { return std::exp(a * p + b * std::sin(3 * p) + c * p * p); });
        double qt = m.forward(0.33);
        auto ft = [&](double q) { return tilde_f(m, nl, q).value; };
        CHECK(std::abs(ft(qt)) < 1e-12);
        auto chk = validate_bistable(ft, qt, 4000, 1e-12);
        CHECK(chk.structure());
        CHECK(chk.positive_integral);
    }
}

TEST_CASE("tabulated tilde nonlinearity") {
    auto m = GeneFlowMap::build([](double p) { return 1 + p; });
    auto t = tilde_nonlinearity(m, nl);
    CHECK(t.theta() == Approx(m.forward(0.33)));
    CHECK(t.f(0.5) == Approx(tilde_f(m, nl, 0.5).value).epsilon(1e-6));
    CHECK(tilde_f(m, nl, 1.3).clamped);
}

TEST_CASE("quasilinear and transformed flows agree") {
    auto m = GeneFlowMap::build([](double p) { return 1 + p; });
    auto r = equivalence_check(nl, m, DomainGeometry::interval(1.0),
                               [](double x) { return 0.5 * (1 + std::cos(M_PI * x)) * 0.33; }, 0.0, 0.0, 2.0, 0.01,
                               0.01);
    CHECK(r.discrepancy < 1e-4);
    CHECK(r.steps == 200);
    CHECK_THROWS_AS(equivalence_check(nl, m, DomainGeometry::ball(1, 2), [](double) { return 0.0; }, 0, 0, 1, 0.1,
                                      0.1),
                    Error);
}
