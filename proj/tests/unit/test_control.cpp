#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "geneflow/control.hpp"

using namespace geneflow;
using doctest::Approx;

TEST_CASE("staircase to theta on the unit interval") {
    Scenario sc;
    sc.geometry = DomainGeometry::interval(1.0);
    sc.record_every = 0.5;
    for (double a : {0.0, 1.0, 0.6}) {
        auto r = staircase_to_theta(sc, GridProfile(sc.geometry, sc.n, a));
        CHECK(r.success);
        CHECK(r.terminal_error <= sc.delta1);
        CHECK(r.u_min >= 0.0);
        CHECK(r.u_max <= 1.0);
        for (const auto& c : r.controls) {
            CHECK(c.left >= 0.0);
            CHECK(c.right <= 1.0);
        }
    }
    // already near theta
    auto r = staircase_to_theta(sc, GridProfile(sc.geometry, sc.n, 0.34));
    CHECK(r.success);
    CHECK(r.legs.empty());
}

TEST_CASE("staircase reports the barrier to 0") {
    Scenario sc;
    sc.drift = DriftField::family(DriftFamily::gauss_out, 0.5);
    sc.geometry = DomainGeometry::interval(2.5);
    sc.T_max = 100;
    auto r = staircase_to_theta(sc, GridProfile(sc.geometry, sc.n, 1.0));
    CHECK_FALSE(r.success);
    CHECK(r.reason == "barrier-to-0");
}

TEST_CASE("blocked verdicts carry an ordered witness") {
    Scenario sc;
    sc.drift = DriftField::family(DriftFamily::gauss_out, 0.5);
    sc.geometry = DomainGeometry::interval(2.5);
    auto rep = controllability_report(sc);
    REQUIRE(rep.verdicts.size() == 6);
    CHECK_FALSE(rep.all_converged());
    int blocked = 0;
    for (const auto& v : rep.verdicts) {
        if (v.status != "blocked") continue;
        ++blocked;
        REQUIRE(v.witness.has_value());
        CHECK(v.witness_orders);
    }
    CHECK(blocked >= 2);
}

TEST_CASE("unblocking: strong inward drift converges everywhere") {
    Scenario sc;
    sc.drift = DriftField::family(DriftFamily::gauss_in, 0.25);
    sc.geometry = DomainGeometry::interval(3.0);
    auto rep = controllability_report(sc);
    CHECK(rep.all_converged());
}

TEST_CASE("minimal time and the scan") {
    Scenario sc;
    sc.geometry = DomainGeometry::interval(1.0);
    sc.n = 101;
    std::vector<double> grid;
    for (double t = 0.5; t <= 20; t += 0.5) grid.push_back(t);
    auto m = minimal_time_to_theta(sc, grid);
    CHECK(std::isfinite(m.T_min));
    CHECK(m.monotone);
    // one horizon step below is infeasible
    auto below = staircase_to_theta(sc, GridProfile(sc.geometry, sc.n, 0.0), sc.T1, m.T_min - 0.5);
    CHECK_FALSE(below.success);
    CHECK(minimal_time_to_theta(sc, {0.01}).T_min == std::numeric_limits<double>::infinity());

    Scenario b;
    b.geometry = DomainGeometry::interval(2.5);
    b.n = 101;
    b.drift = DriftField::family(DriftFamily::gauss_in, 1.0, 2.0);
    auto one = mintime_scan(DriftFamily::gauss_in, {4.0, 1.0}, b, grid, 1);
    auto par = mintime_scan(DriftFamily::gauss_in, {4.0, 1.0}, b, grid, 4);
    REQUIRE(one.size() == 2);
    for (size_t k = 0; k < 2; ++k) CHECK(one[k].result.T_min == par[k].result.T_min);
    CHECK(one[1].result.T_min <= one[0].result.T_min);
}
