#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bpsrh/lambda_kernel.hpp"

using namespace bpsrh;

TEST_CASE("s_factor") {
    CHECK(s_factor(Complex{0, 0}, Complex{0, 0}) == Complex{0.0, 0.0});
    CHECK(std::abs(s_factor(Complex{0.0, pi}, Complex{0, 0}) - 2.0) < 1e-15);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> box(-2.0, 2.0);
    for (int i = 0; i < 20; ++i) {
        const Complex x{box(rng), box(rng)}, y{box(rng), box(rng)};
        CHECK(s_factor(x, y) == s_factor(y, x));
    }
}

TEST_CASE("log_lambda direct values") {
    // x = 0, y = 1: Gamma(1) e / (1 * sqrt(2pi)) -> log = 1 - log sqrt(2pi)
    const Complex got = log_lambda(Complex{0, 0}, Complex{1, 0});
    CHECK(std::abs(got - (1.0 - std::log(sqrt_two_pi))) < 1e-14);
    // Lambda_1 coincides with Lambda_0 (the one-variable modified Gamma)
    for (const Complex y : {Complex{2.0, 0.5}, Complex{0.3, 1.0}, Complex{-1.0, 3.0}}) {
        CHECK(std::abs(log_lambda(Complex{1, 0}, y) - log_lambda(Complex{0, 0}, y)) < 1e-13);
    }
}

TEST_CASE("lambda pole reporting") {
    CHECK_THROWS_AS(lambda(Complex{0.5, 0.0}, Complex{-0.5, 0.0}), PoleError);
    try {
        lambda(Complex{0.25, 0.0}, Complex{-2.25, 0.0});
        FAIL("expected PoleError");
    } catch (const PoleError& e) {
        CHECK(e.index == 2);
    }
    CHECK_THROWS_AS(lambda(Complex{1.0, 0.0}, Complex{0.0, 0.0}), ZeroArgument);
}

TEST_CASE("lambda recurrence Lambda_{1+x} = (1 + x/y) Lambda_x") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> box(-3.0, 3.0), mag(0.5, 20.0),
        ang(-pi + 0.2, pi - 0.2);
    int n = 0;
    while (n < 200) {
        const Complex x{box(rng), box(rng)};
        const Complex y = mag(rng) * std::exp(iu * ang(rng));
        const Complex u = x + y;
        if (std::abs(u - std::rint(u.real())) < 0.1) continue;
        if (std::abs(u + 1.0 - std::rint(u.real() + 1.0)) < 0.1) continue;
        const Complex lhs = lambda(1.0 + x, y);
        const Complex rhs = (1.0 + x / y) * lambda(x, y);
        CHECK(std::abs(lhs / rhs - 1.0) < 1e-11);
        ++n;
    }
}

TEST_CASE("lambda relation between x and 1+x via the stated example") {
    // Lemma-style cross-check evaluated both ways at x = 0.3i, y = 2
    const Complex x{0.0, 0.3};
    const Complex y{2.0, 0.0};
    const Complex lhs = lambda(1.0 + x, y);
    const Complex rhs = (1.0 + x / y) * lambda(x, y);
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs));
}

TEST_CASE("lambda reflection battery") {
    SECTION("domain errors") {
        CHECK_THROWS_AS(lambda_reflection_check(Complex{0.5, 0.0}, Complex{1.0, 1.0}),
                        DomainError);
        CHECK_THROWS_AS(lambda_reflection_check(Complex{0.5, 0.5}, Complex{1.0, 0.0}),
                        DomainError);
    }
    SECTION("spec spot checks") {
        CHECK(lambda_reflection_check(Complex{0.5, 0.5}, Complex{1.0, 1.0}) < 1e-10);
        CHECK(lambda_reflection_check(Complex{0.5, 0.5}, Complex{1.0, -1.0}) < 1e-10);
    }
    SECTION("grid, both signs of Im y") {
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            const Complex x{-1.0 + 0.4 * i, 0.2 + 0.17 * i};
            for (int j = 0; j < 5; ++j) {
                const double m = 0.5 + (20.0 - 0.5) * j / 4.0;
                for (double sg : {1.0, -1.0}) {
                    const Complex y = m * std::exp(iu * sg * (0.3 + 0.25 * j));
                    worst = std::max(worst, lambda_reflection_check(x, y));
                }
            }
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("lambda tends to 1 at infinity") {
    // leading deviation is B_2(x)/(2y); keep |B_2(x)| of order one
    for (const double phi : {pi / 4.0, -pi / 4.0, pi / 2.0 - 0.1, -pi / 2.0 + 0.1}) {
        const Complex y = 1e3 * std::exp(iu * phi);
        for (const Complex x : {Complex{0, 0}, Complex{0.5, 0.5}, Complex{0.3, -0.4}}) {
            CHECK(std::abs(lambda(x, y) - 1.0) < 1e-3);
        }
    }
    // for larger x the deviation still dies off as 1/|y|
    CHECK(std::abs(lambda(Complex{-1.0, 2.0}, 1e5 * std::exp(iu * pi / 4.0)) - 1.0) < 1e-4);
}

TEST_CASE("lambda inverse has algebraic behaviour at the origin") {
    // bounded log-log slope along a generic ray avoiding the pole clusters
    const Complex x{0.3, 0.2};
    double prev_slope = 0.0;
    for (int k = 2; k <= 5; ++k) {
        const Complex y = std::pow(10.0, -k) * std::exp(iu * 2.2);
        const double slope = std::log(std::abs(1.0 / lambda(x, y))) / std::log(std::abs(y));
        CHECK(std::abs(slope) < 2.0);
        prev_slope = slope;
    }
    (void)prev_slope;
}

TEST_CASE("asymptotic expansion") {
    SECTION("leading term at x = 0 is y^{-1}/12") {
        const Complex y{37.0, 11.0};
        const Complex got = asymptotic_log_lambda(Complex{0, 0}, y, 1);
        CHECK(std::abs(got - 1.0 / (12.0 * y)) < 1e-15);
    }
    SECTION("x = 1 equals x = 0 term by term") {
        const Complex y{25.0, 10.0};
        for (int n = 1; n <= 4; ++n)
            CHECK(std::abs(asymptotic_log_lambda(Complex{1, 0}, y, n) -
                           asymptotic_log_lambda(Complex{0, 0}, y, n)) < 1e-16);
    }
    SECTION("terms decay as y grows") {
        const Complex x{0.3, 0.2};
        CHECK(std::abs(asymptotic_log_lambda(x, 1e8 * std::exp(iu * 0.3), 4)) < 1e-8);
    }
    SECTION("error halving ratio matches the truncation order") {
        // x large enough that B_{N+2}(x) = O(1): the N = 4 signal at |y| = 100
        // must stay above the cancellation noise of log_lambda itself
        const Complex x{2.0, 0.5};
        for (int n = 1; n <= 4; ++n) {
            const Complex y50 = 50.0 * std::exp(iu * pi / 4.0);
            const Complex y100 = 100.0 * std::exp(iu * pi / 4.0);
            const double e50 = std::abs(log_lambda(x, y50) - asymptotic_log_lambda(x, y50, n));
            const double e100 =
                std::abs(log_lambda(x, y100) - asymptotic_log_lambda(x, y100, n));
            const double ratio = e100 / e50;
            const double want = std::pow(2.0, -(n + 1));
            CHECK(ratio > want / 2.0);
            CHECK(ratio < want * 2.0);
        }
    }
    SECTION("N >= 1 required") {
        CHECK_THROWS_AS(asymptotic_log_lambda(Complex{0, 0}, Complex{10, 0}, 0), DomainError);
    }
}
