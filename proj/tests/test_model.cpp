#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ruinlab/errors.hpp"
#include "ruinlab/model.hpp"
#include "ruinlab/rng.hpp"

using namespace ruinlab;

namespace {

ModelParams params(double a, double sigma, double c, double lambda,
                   ClaimDistribution claim = ClaimDistribution::uniform(1.0)) {
    return {a, sigma, c, lambda, std::move(claim)};
}

// centered finite difference, step scaled to x
void check_derivatives(const TestFunction& f, double x) {
    const double h = 1e-5 * x;
    const double d1_fd = (f.value(x + h) - f.value(x - h)) / (2.0 * h);
    const double d2_fd = (f.value(x + h) - 2.0 * f.value(x) + f.value(x - h)) / (h * h);
    CHECK(f.d1(x) == doctest::Approx(d1_fd).epsilon(1e-6));
    CHECK(f.d2(x) == doctest::Approx(d2_fd).epsilon(1e-4));
}

} // namespace

TEST_CASE("rho and the net profit condition") {
    CHECK(rho(params(0.15, std::sqrt(0.1), 2.0, 1.0)) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(rho(params(0.1, 0.5, 1.0, 1.0)) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(rho(params(0.5, 1.0, 1.0, 1.0)) == 1.0);

    // rho is invariant under (a, sigma^2) -> (k a, k sigma^2)
    const RngStream s(321, 0);
    for (uint64_t i = 0; i < 50; ++i) {
        const double a = 0.05 + s.uniform(Sub::Brownian, 2 * i);
        const double sigma = 0.2 + s.uniform(Sub::Brownian, 2 * i + 1);
        const double k = 0.25 + 4.0 * s.uniform(Sub::JumpTimes, i);
        const double r0 = rho(params(a, sigma, 1.0, 0.0));
        const double r1 = rho(params(k * a, std::sqrt(k) * sigma, 1.0, 0.0));
        CHECK(r1 == doctest::Approx(r0).epsilon(1e-12));
    }

    // Uniform(0,1) claims at rate 1: mean load 0.5
    CHECK(net_profit_condition(params(0.1, 1.0, 2.0, 1.0)));
    CHECK_FALSE(net_profit_condition(params(0.1, 1.0, 0.4, 1.0)));
    CHECK_FALSE(net_profit_condition(params(0.1, 1.0, 0.5, 1.0))); // strict
    CHECK(net_profit_condition(params(0.1, 1.0, 0.1, 0.0)));       // no claims: any c > 0 works
    CHECK_FALSE(net_profit_condition(params(0.1, 1.0, 0.0, 0.0)));
}

TEST_CASE("model parameter validation") {
    CHECK_THROWS_AS(params(0.0, 1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(params(-0.1, 1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(params(0.1, 0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(params(0.1, 1.0, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(params(0.1, 1.0, 1.0, -1.0), std::invalid_argument);
    CHECK_NOTHROW(params(0.1, 1.0, 0.0, 0.0));
}

TEST_CASE("default growth exponent splits the admissible interval") {
    CHECK(default_alpha(params(0.1, 0.5, 1.0, 1.0)) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(default_alpha(params(0.25, 1.0, 1.0, 1.0)) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK_THROWS_AS(default_alpha(params(0.5, 1.0, 1.0, 1.0)), RegimeError);  // rho = 1
    CHECK_THROWS_AS(default_alpha(params(0.15, 0.5, 1.0, 1.0)), RegimeError); // rho > 1
}

TEST_CASE("power decay test function") {
    const auto f = TestFunction::power_decay(3.0);
    CHECK(f.kind() == TestFunction::Kind::PowerDecay);
    CHECK(f.exponent() == -2.0);
    CHECK(f.domain_lo() == 0.0);
    CHECK(f.value(2.0) == doctest::Approx(0.25).epsilon(1e-15));
    for (double x : {0.5, 1.0, 3.0, 10.0, 250.0}) check_derivatives(f, x);
    CHECK_THROWS_AS(f.value(0.0), DomainError);
    CHECK_THROWS_AS(f.d1(-1.0), DomainError);
    CHECK_THROWS_AS(TestFunction::power_decay(1.0), RegimeError);
    CHECK_THROWS_AS(TestFunction::power_decay(0.8), RegimeError);
}

TEST_CASE("power growth test function") {
    const auto f = TestFunction::power_growth(0.25, 0.5);
    CHECK(f.exponent() == 0.25);
    CHECK(f.value(16.0) == doctest::Approx(2.0).epsilon(1e-15));
    for (double x : {0.5, 1.0, 3.0, 10.0, 250.0}) check_derivatives(f, x);
    CHECK_THROWS_AS(f.value(0.0), DomainError);
    CHECK_THROWS_AS(TestFunction::power_growth(0.5, 0.5), RegimeError);  // alpha = 1 - rho
    CHECK_THROWS_AS(TestFunction::power_growth(0.0, 0.5), RegimeError);
    CHECK_THROWS_AS(TestFunction::power_growth(-0.1, 0.5), RegimeError);
    CHECK_THROWS_AS(TestFunction::power_growth(0.25, 1.2), RegimeError); // wrong regime
}

TEST_CASE("log log test function") {
    const auto f = TestFunction::loglog();
    CHECK(f.domain_lo() == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK(f.value(std::exp(std::exp(1.0))) == doctest::Approx(1.0).epsilon(1e-12));
    for (double x : {3.0, 5.0, 10.0, 250.0}) check_derivatives(f, x);
    CHECK_THROWS_AS(f.value(std::exp(1.0)), DomainError); // boundary excluded
    CHECK_THROWS_AS(f.value(1.0), DomainError);
}

TEST_CASE("threshold for the power growth regime") {
    // rho = 0.5, alpha = 0.25: pivot 2c/(sigma^2 * 0.25) = 8 dominates M = 1
    const auto p = params(0.25, 1.0, 1.0, 1.0);
    CHECK(threshold_lemma_A(p, 0.25) == doctest::Approx(8.0).epsilon(1e-14));

    // with c = 0 the pivot vanishes and the claim bound rules
    const auto p0 = params(0.25, 1.0, 0.0, 1.0, ClaimDistribution::uniform(10.0));
    CHECK(threshold_lemma_A(p0, 0.25) == 10.0);

    CHECK_THROWS_AS(threshold_lemma_A(params(0.5, 1.0, 1.0, 1.0), 0.25), RegimeError);
    CHECK_THROWS_AS(threshold_lemma_A(p, 0.5), RegimeError);
    CHECK_THROWS_AS(threshold_lemma_A(p, 0.0), RegimeError);
    CHECK_THROWS_AS(
        threshold_lemma_A(params(0.25, 1.0, 1.0, 1.0, ClaimDistribution::exponential(1.0)),
                          0.25),
        DomainError);
}

TEST_CASE("largest root of sigma^2 x = 2c ln x") {
    // sigma=1, c=2: x = 4 ln x has its largest root near 8.61
    const auto p = params(0.5, 1.0, 2.0, 1.0);
    const auto root = solve_u_tilde(p);
    REQUIRE(root.has_value());
    CHECK(*root > 4.0); // beyond the minimum of g, i.e. the largest root
    CHECK(*root == doctest::Approx(8.6131694564414).epsilon(1e-9));
    CHECK(std::abs(*root - 4.0 * std::log(*root)) < 1e-8);
    // past the root the line stays above the log for good
    for (double k : {1.01, 2.0, 10.0})
        CHECK(*root * k >= 4.0 * std::log(*root * k));

    // sigma=1, c=1: g's minimum is 2 - 2 ln 2 > 0, no root
    CHECK_FALSE(solve_u_tilde(params(0.5, 1.0, 1.0, 1.0)).has_value());
    // c = 0 degenerates to g = sigma^2 x > 0
    CHECK_FALSE(solve_u_tilde(params(0.5, 1.0, 0.0, 1.0)).has_value());
    // tangency: 2c/sigma^2 = e exactly -> double root at e
    const auto tang = solve_u_tilde(params(0.5, 1.0, std::exp(1.0) / 2.0, 1.0));
    REQUIRE(tang.has_value());
    CHECK(*tang == std::exp(1.0));
}

TEST_CASE("threshold for the log log regime") {
    // criterion-style parameters: root 8.613 dominates M + 3 = 4
    const auto p = params(0.5, 1.0, 2.0, 1.0);
    CHECK(threshold_lemma_B(p) == doctest::Approx(8.6131694564414).epsilon(1e-9));

    // no root: M + 3 rules
    const auto p13 = params(0.5, 1.0, 1.0, 1.0, ClaimDistribution::uniform(10.0));
    CHECK(threshold_lemma_B(p13) == 13.0);
    const auto p4 = params(2.0, 2.0, 0.1, 1.0); // rho = 1, t = 0.05
    CHECK(threshold_lemma_B(p4) == 4.0);

    CHECK_THROWS_AS(threshold_lemma_B(params(0.25, 1.0, 1.0, 1.0)), RegimeError);
    CHECK_THROWS_AS(
        threshold_lemma_B(params(0.5, 1.0, 2.0, 1.0, ClaimDistribution::exponential(1.0))),
        DomainError);
}

TEST_CASE("descent ladder") {
    const auto rep = descent_sequence(8.0, 1.0);
    CHECK(rep.u_star == 8.0);
    CHECK(rep.n_iterations == 16);
    REQUIRE(rep.descent_levels.size() == 16);
    CHECK(rep.descent_levels.front() == 7.5);
    CHECK(rep.descent_levels.back() == 0.0);
    for (std::size_t j = 0; j + 1 < rep.descent_levels.size(); ++j) {
        CHECK(rep.descent_levels[j] > rep.descent_levels[j + 1]);
        if (rep.descent_levels[j + 1] > 0.0)
            CHECK(rep.descent_levels[j] - rep.descent_levels[j + 1] == 0.5); // exact M/2 steps
    }

    // non-divisible case: the tail clamps to exactly zero
    const auto odd = descent_sequence(8.613, 1.0);
    CHECK(odd.n_iterations == 18);
    CHECK(odd.descent_levels.back() == 0.0);
    CHECK(odd.descent_levels[16] > 0.0);

    CHECK_THROWS_AS(descent_sequence(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(descent_sequence(8.0, 0.0), std::invalid_argument);
}
