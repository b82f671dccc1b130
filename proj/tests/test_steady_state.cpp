#include "chiral/errors.hpp"
#include "chiral/steady_state.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace chiral;
using testing_support::make;

TEST_CASE("single atom steady state") {
    ChainConfig c = make(1, 1.0, 0.0);
    c.rabi = 0.01;
    const SteadyState s = solve_steady(c);
    CHECK(std::abs(s.sigma(0) - cplx(0.0, -0.02)) < 1e-16);
    CHECK(s.normalized(0) == 1.0);
    CHECK(s.residual < 1e-15);
}

TEST_CASE("edge population formula") {
    for (int n : {3, 10, 51, 101, 400}) {
        CHECK(edge_population_analytic(n, kPi / 3) == doctest::Approx(1.0 / n).epsilon(1e-13));
    }
    CHECK(edge_population_analytic(3, kPi / 2) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(edge_population_analytic(101, kPi) == doctest::Approx(4.0 / (8.0 + 99.0 * 16.0)).epsilon(1e-14));
    CHECK(std::abs(edge_population_analytic(101, kPi) * 4 * 101 - 1.0) < 0.02);
    CHECK_THROWS_AS(edge_population_analytic(10, 0.0), CriticalPointError);
    CHECK_THROWS_AS(edge_population_analytic(10, 2 * kPi), CriticalPointError);
    CHECK_THROWS_AS(edge_population_analytic(2, 1.0), DomainError);
}

TEST_CASE("analytic edge population matches the solver at D = 0 for all xi") {
    for (int n : {3, 8, 33}) {
        for (double xi = 0.05; xi < 2 * kPi; xi += 0.41) {
            const SteadyState s = solve_steady(make(n, xi, 0.0));
            CHECK(s.normalized(0) == doctest::Approx(edge_population_analytic(n, xi)).epsilon(1e-9));
            CHECK(s.normalized(n - 1) == doctest::Approx(s.normalized(0)).epsilon(1e-9));
        }
    }
}

TEST_CASE("condition estimate") {
    CHECK(condition_check(build_coupling_matrix(make(1, 0.0, 0.0))) == doctest::Approx(1.0));
    CHECK(condition_check(build_coupling_matrix(make(10, 0.0, 0.0))) >= 1e12);
    const double tri = condition_check(build_coupling_matrix(make(10, kPi / 2, 1.0)));
    CHECK(std::isfinite(tri));
    CHECK(tri < 1e12);
    const CouplingMatrix m = build_coupling_matrix(make(20, 0.9, 0.3));
    CHECK(condition_check(m) == condition_check(m));
}

TEST_CASE("solver errors") {
    try {
        solve_steady(make(10, 0.0, 0.0));
        FAIL("expected CriticalPointError");
    } catch (const CriticalPointError& e) {
        CHECK(e.condition_estimate() >= 1e12);
    }
    CHECK_THROWS_AS(solve_steady(make(10, kPi, 0.0)), CriticalPointError);
    ChainConfig c = make(4, 1.0, 0.2);
    c.rabi = 0.0;
    CHECK_THROWS_AS(solve_steady(c), DomainError);
    // a lower threshold refuses a point the default accepts
    CHECK_NOTHROW(solve_steady(make(30, 0.05, 0.0)));
    CHECK_THROWS_AS(solve_steady(make(30, 0.05, 0.0), 10.0), CriticalPointError);
}

TEST_CASE("steady-state invariants for random configs") {
    std::mt19937_64 rng(21);
    int checked = 0;
    while (checked < 60) {
        const ChainConfig c = testing_support::random_config(rng, 1, 30);
        if (condition_check(build_coupling_matrix(c)) > 1e9) continue;
        const SteadyState s = solve_steady(c);
        CHECK(std::abs(s.normalized.sum() - 1.0) < 1e-12);
        CHECK(s.residual <= 1e-10);
        CHECK((s.populations - s.sigma.cwiseAbs2()).norm() == 0.0);

        ChainConfig scaled = c;
        scaled.rabi = 3.0 * c.rabi;
        const SteadyState t = solve_steady(scaled);
        CHECK((t.sigma - 3.0 * s.sigma).norm() <= 1e-12 * t.sigma.norm());
        CHECK((t.normalized - s.normalized).cwiseAbs().maxCoeff() < 1e-12);
        ++checked;
    }
}

TEST_CASE("mirror symmetry of the normalized populations") {
    for (double d : {0.1, 0.45, 0.9}) {
        for (double xi : {0.3, 1.2, 2.5}) {
            const RVector a = solve_steady(make(17, xi, d)).normalized;
            const RVector b = solve_steady(make(17, xi, -d)).normalized;
            CHECK((a - b.reverse()).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}
