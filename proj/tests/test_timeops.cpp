#include "hplab/error.hpp"
#include "hplab/specfun.hpp"
#include "hplab/timeops.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace hplab;

namespace {

double at_t(const Expr& e, double t) { return evaluate_real(e, {1.0, t, EvalMode::Real}); }

}  // namespace

TEST_CASE("apply_symbolic: classical eigenfunction")
{
    const Expr f = ex::exp(ex::neg(ex::t()));
    const Expr g = apply_symbolic(TimeOperator::classical(), f);
    for (int k = 0; k <= 100; ++k) {
        const double t = 0.05 * k;
        CHECK(std::abs(at_t(g, t) + at_t(f, t)) <= 1e-12);
    }
}

TEST_CASE("apply_symbolic: Caputo table")
{
    const auto op = TimeOperator::caputo(0.5);
    Complex v;
    CHECK((is_constant(simplify(apply_symbolic(op, ex::constant(3.0))), &v) && v == Complex(0.0)));

    const Expr t2 = ex::pow(ex::t(), 2.0);
    const Expr d = apply_symbolic(op, t2);
    for (double t : {0.3, 1.0, 2.0}) {
        CHECK(at_t(d, t) == doctest::Approx(2.0 / std::tgamma(2.5) * std::pow(t, 1.5)).epsilon(1e-13));
    }

    for (double beta : {0.3, 0.5, 0.9}) {
        const Expr f = ex::mittag(beta, ex::neg(ex::pow(ex::t(), beta)));
        const Expr g = apply_symbolic(TimeOperator::caputo(beta), f);
        for (int k = 0; k <= 100; ++k) {
            const double t = 0.05 * k;
            CHECK(std::abs(at_t(g, t) + at_t(f, t)) <= 1e-9);
        }
    }

    CHECK_THROWS_AS(apply_symbolic(op, ex::exp(ex::t())), UnsupportedCaputoForm);
    CHECK_THROWS_AS(apply_symbolic(op, ex::sinh(ex::t())), UnsupportedCaputoForm);
    // beta = 1 is the classical derivative
    const Expr e1 = apply_symbolic(TimeOperator::caputo(1.0), ex::exp(ex::neg(ex::t())));
    CHECK(at_t(e1, 0.7) == doctest::Approx(-std::exp(-0.7)).epsilon(1e-14));
    CHECK_THROWS_AS(TimeOperator::caputo(0.0), DomainError);
    CHECK_THROWS_AS(TimeOperator::caputo(1.5), DomainError);
}

TEST_CASE("apply_symbolic: Caputo table against the integral definition")
{
    for (double beta : {0.3, 0.5, 0.8}) {
        for (double t : {0.2, 1.0, 2.0}) {
            const double q = caputo_quadrature([&](double s) { return 3.0 * s * s; }, beta, t);
            const double exact = 6.0 / std::tgamma(4.0 - beta) * std::pow(t, 3.0 - beta);
            CHECK(q == doctest::Approx(exact).epsilon(1e-9));
        }
    }
}

TEST_CASE("apply_symbolic: Laguerre eigenfunctions")
{
    const auto op = TimeOperator::laguerre();
    const Expr plus = ex::clifford(0, ex::t());
    const Expr minus = ex::clifford(0, ex::neg(ex::t()));
    const Expr gp = apply_symbolic(op, plus), gm = apply_symbolic(op, minus);
    for (int k = 0; k <= 100; ++k) {
        const double t = 0.05 * k;
        CHECK(std::abs(at_t(gp, t) - at_t(plus, t)) <= 1e-10 * std::max(1.0, at_t(plus, t)));
        CHECK(std::abs(at_t(gm, t) + at_t(minus, t)) <= 1e-10);
    }
    // term-wise series derivative of C0: t d/dt (t d/dt t^k) / t = k^2 t^{k-1}
    for (double t : {0.5, 2.0, 5.0}) {
        long double s = 0, f = 1;
        for (int k = 1; k < 60; ++k) {
            f *= k;
            s += static_cast<long double>(k) * k * std::pow(static_cast<long double>(t), k - 1) / (f * f);
        }
        CHECK(std::abs(static_cast<double>(s) - specfun::c0(t)) <= 1e-10 * specfun::c0(t));
    }
}

TEST_CASE("apply_symbolic: shifted classical")
{
    const Complex lambda(0.0, 2.0);
    const Expr f = ex::exp(ex::constant(lambda) * ex::t());
    const Expr g = apply_symbolic(TimeOperator::shifted(lambda), f);
    for (double t : {0.0, 0.4, 3.0}) CHECK(std::abs(evaluate_complex(g, {1.0, t})) <= 1e-13);
}

TEST_CASE("L1 weights")
{
    const auto w = caputo_l1_weights(0.5, 3);
    REQUIRE(w.size() == 3);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == doctest::Approx(std::sqrt(2.0) - 1).epsilon(1e-15));
    CHECK(w[2] == doctest::Approx(std::sqrt(3.0) - std::sqrt(2.0)).epsilon(1e-15));
    for (double beta : {0.1, 0.5, 0.9}) {
        const std::size_t n = 500;
        const auto b = caputo_l1_weights(beta, n);
        for (std::size_t j = 1; j < n; ++j) {
            CHECK(b[j] > 0.0);
            CHECK(b[j] < b[j - 1]);
        }
        const double sum = std::accumulate(b.begin(), b.end(), 0.0);
        CHECK(std::abs(sum - std::pow(double(n), 1 - beta)) <= 1e-13 * std::pow(double(n), 1 - beta));
    }
    const auto one = caputo_l1_weights(1.0, 4);
    CHECK(one == std::vector<double>{1.0, 0.0, 0.0, 0.0});
}

TEST_CASE("discrete Caputo")
{
    SUBCASE("constant history")
    {
        CaputoHistory h(0.1, 0.5);
        for (int k = 0; k < 5; ++k) h.push({2.0, -1.0});
        for (double v : caputo_apply_discrete(h)) CHECK(v == 0.0);
    }
    SUBCASE("linear profile, one step")
    {
        const double dt = 0.01, beta = 0.4;
        CaputoHistory h(dt, beta);
        h.push({0.0});
        h.push({dt});
        CHECK(caputo_apply_discrete(h)[0] == doctest::Approx(std::pow(dt, 1 - beta) / std::tgamma(2 - beta)).epsilon(1e-13));
    }
    SUBCASE("t^2 converges at order near 2 - beta")
    {
        const double beta = 0.5;
        const double exact = 2.0 / std::tgamma(3 - beta);
        std::vector<double> errs;
        for (int n : {32, 64, 128, 256}) {
            CaputoHistory h(1.0 / n, beta);
            for (int k = 0; k <= n; ++k) h.push({std::pow(double(k) / n, 2)});
            errs.push_back(std::abs(caputo_apply_discrete(h)[0] - exact));
        }
        CHECK(errs[0] < 2e-2);
        for (std::size_t k = 1; k < errs.size(); ++k) CHECK(std::log2(errs[k - 1] / errs[k]) >= 2 - beta - 0.2);
    }
    SUBCASE("memory term is the tail of the discrete sum")
    {
        CaputoHistory h(0.1, 0.3);
        for (int k = 0; k <= 6; ++k) h.push({std::sin(0.3 * k)});
        const double full = caputo_apply_discrete(h)[0] / h.scale();
        CaputoHistory g(0.1, 0.3);
        for (int k = 0; k <= 5; ++k) g.push({std::sin(0.3 * k)});
        const double mem = g.memory_term()[0];
        CHECK(full == doctest::Approx(std::sin(1.8) - std::sin(1.5) + mem).epsilon(1e-14));
    }
    CHECK_THROWS_AS(caputo_apply_discrete(CaputoHistory(0.1, 0.5)), DomainError);
}

TEST_CASE("Laguerre stepping")
{
    SUBCASE("eigenfunction start tracks C0")
    {
        const LaguerreRhs rhs = [](double, std::span<const double> u, std::span<double> out) { out[0] = u[0]; };
        const double dt = 1e-4;
        LaguerreState s = laguerre_start({1.0}, rhs, dt);
        while (s.t < 1.0 - 0.5 * dt) laguerre_step(s, rhs, dt);
        CHECK(std::abs(s.u[0] - specfun::c0(1.0)) <= 1e-4);
    }
    SUBCASE("zero right-hand side keeps u constant")
    {
        const LaguerreRhs rhs = [](double, std::span<const double>, std::span<double> out) { out[0] = 0.0; };
        LaguerreState s = laguerre_start({3.5}, rhs, 1e-3);
        for (int k = 0; k < 500; ++k) laguerre_step(s, rhs, 1e-3);
        CHECK(s.u[0] == 3.5);
    }
    SUBCASE("unit right-hand side gives u = t")
    {
        const LaguerreRhs rhs = [](double, std::span<const double>, std::span<double> out) { out[0] = 1.0; };
        LaguerreState s = laguerre_start({0.0}, rhs, 1e-3);
        for (int k = 0; k < 999; ++k) laguerre_step(s, rhs, 1e-3);
        CHECK(s.u[0] == doctest::Approx(s.t).epsilon(1e-10));
    }
    SUBCASE("overflow guard")
    {
        const LaguerreRhs rhs = [](double, std::span<const double> u, std::span<double> out) { out[0] = u[0] * u[0] * 1e80; };
        LaguerreState s = laguerre_start({1e40}, rhs, 1e-2);
        CHECK_THROWS_AS(for (int k = 0; k < 100; ++k) laguerre_step(s, rhs, 1e-2), SolverError);
    }
}
