#include "hplab/error.hpp"
#include "hplab/specfun.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace hplab::specfun;

TEST_CASE("mittag_leffler: simple values")
{
    CHECK(mittag_leffler(0.7, 0.0) == 1.0);
    CHECK(mittag_leffler(1.0, -1.0) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
    const double oracle = std::exp(1.0) * oracle::erfc_quadrature(1.0);
    CHECK(std::abs(mittag_leffler(0.5, -1.0) - oracle) <= 1e-10);
}

TEST_CASE("mittag_leffler: beta = 1 is the exponential")
{
    for (int k = 0; k < 100; ++k) {
        const double z = oracle::uniform(-30.0, 5.0);
        CHECK(std::abs(mittag_leffler(1.0, z) - std::exp(z)) <= 1e-12 * std::max(1.0, std::exp(z)));
    }
}

TEST_CASE("mittag_leffler: half order against e^{x^2} erfc(x)")
{
    for (double x : {0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0}) {
        const double expected = std::exp(x * x) * std::erfc(x);
        CHECK(std::abs(mittag_leffler(0.5, -x) - expected) <= 1e-12);
    }
}

TEST_CASE("mittag_leffler: large arguments")
{
    // e^{x^2} erfc(x) loses accuracy in double for large x, so compare with its asymptotic series
    const double pi = std::acos(-1.0);
    for (double x : {20.0, 35.0, 50.0}) {
        // sum_k (-1)^k (2k-1)!! / (2 x^2)^k
        double term = 1.0, sum = 1.0;
        for (int k = 1; k <= 10; ++k) {
            term *= -(2.0 * k - 1) / (2 * x * x);
            sum += term;
        }
        const double expected = sum / (x * std::sqrt(pi));
        CHECK(std::abs(mittag_leffler(0.5, -x) - expected) <= 1e-12);
    }
}

TEST_CASE("mittag_leffler: regimes agree at the seams")
{
    for (double beta : {0.3, 0.5, 0.75, 0.9}) {
        CHECK(std::abs(detail::ml_series(beta, -1.0) - detail::ml_integral(beta, 1.0)) <= 1e-11);
        const double a = detail::ml_asymptotic(beta, 40.0);
        if (!std::isnan(a)) CHECK(std::abs(a - detail::ml_integral(beta, 40.0)) <= 1e-11);
    }
}

TEST_CASE("mittag_leffler: complete monotonicity on the profile")
{
    for (double beta : {0.2, 0.5, 0.8, 1.0}) {
        double prev = 1.0;
        for (int k = 1; k <= 200; ++k) {
            const double t = 0.05 * k;
            const double v = mittag_leffler(beta, -std::pow(t, beta));
            CHECK(v > 0.0);
            CHECK(v <= prev);
            prev = v;
        }
    }
}

TEST_CASE("mittag_leffler: positive arguments")
{
    CHECK(mittag_leffler(1.0, 3.0) == doctest::Approx(std::exp(3.0)).epsilon(1e-14));
    // E_{1/2}(x) = e^{x^2} erfc(-x)
    CHECK(mittag_leffler(0.5, 1.5) == doctest::Approx(std::exp(2.25) * std::erfc(-1.5)).epsilon(1e-13));
}

TEST_CASE("mittag_leffler: argument checks")
{
    CHECK_THROWS_AS(mittag_leffler(0.0, -1.0), hplab::DomainError);
    CHECK_THROWS_AS(mittag_leffler(1.2, -1.0), hplab::DomainError);
    CHECK_THROWS_AS(mittag_leffler(0.5, NAN), hplab::DomainError);
    CHECK_THROWS_AS(mittag_leffler(0.5, -INFINITY), hplab::DomainError);
}

TEST_CASE("mittag_leffler_profile_derivative matches finite differences")
{
    for (double beta : {0.4, 0.7}) {
        for (double t : {0.3, 1.0, 2.5}) {
            const double fd = oracle::central_difference(
                [&](double s) { return mittag_leffler(beta, -std::pow(s, beta)); }, t, 1e-5);
            CHECK(oracle::close(mittag_leffler_profile_derivative(beta, t), fd, 1e-8, 1e-6));
        }
    }
}

TEST_CASE("c0: values and identities")
{
    CHECK(c0(0.0) == 1.0);
    double s = 0.0, f = 1.0;
    for (int k = 0; k < 30; ++k) {
        if (k > 0) f *= k;
        s += 1.0 / (f * f);
    }
    CHECK(std::abs(c0(1.0) - s) <= 1e-15 * s);
    for (double t : {0.1, 1.0, 4.0, 25.0}) {
        const double ref = oracle::bessel_i0_series(2.0 * std::sqrt(t));
        CHECK(std::abs(c0(t) - ref) <= 1e-12 * ref);
    }
    CHECK_THROWS_AS(c0(-0.5), hplab::DomainError);
}

TEST_CASE("c0: monotone, bounded below by one, converged partial sums")
{
    double prev = 0.0;
    for (int k = 0; k <= 100; ++k) {
        const double t = k;
        const double v = c0(t);
        CHECK(v >= 1.0);
        CHECK(v > prev);
        prev = v;
        const double a = c0_partial(t, 200), b = c0_partial(t, 400);
        CHECK(std::abs(a - b) <= 1e-14 * b);
    }
}

TEST_CASE("bessel_clifford derivative chain")
{
    for (double x : {0.5, 2.0, 7.0}) {
        const double fd = oracle::central_difference([](double s) { return bessel_clifford(0, s); }, x);
        CHECK(oracle::close(bessel_clifford(1, x), fd, 1e-8, 1e-7));
    }
    // reflected profile satisfies (t f')' = f(t) with f(t) = C0(-t) eigenvalue -1
    for (double t : {0.5, 1.5, 3.0}) {
        const auto g = [](double s) { return s * oracle::central_difference(c0_reflected, s, 1e-4); };
        const double lag = oracle::central_difference(g, t, 1e-3);
        CHECK(std::abs(lag + c0_reflected(t)) <= 1e-5);
    }
}

TEST_CASE("hyperbolic log helpers")
{
    CHECK(std::abs(log_sinh(std::asinh(1.0))) <= 1e-15);
    CHECK(log_tanh_half(1.0) == doctest::Approx(std::log(std::tanh(0.5))).epsilon(1e-14));
    const double v = log_tanh_half(40.0);
    CHECK(v < 0.0);
    CHECK(v == doctest::Approx(-2.0 * std::exp(-40.0)).epsilon(1e-12));
    CHECK(std::isfinite(log_sinh(800.0)));
    CHECK(log_sinh(800.0) == doctest::Approx(800.0 - std::log(2.0)).epsilon(1e-15));
    for (int k = 0; k < 200; ++k) {
        const double eta = oracle::uniform(1e-3, 30.0);
        const double c = std::cosh(eta / 2);
        CHECK(std::abs(log_sinh(eta) - log_tanh_half(eta) - std::log(2 * c * c)) <= 1e-12 * std::max(1.0, eta));
    }
    CHECK_THROWS_AS(log_sinh(0.0), hplab::DomainError);
    CHECK_THROWS_AS(log_tanh_half(-1.0), hplab::DomainError);
}
