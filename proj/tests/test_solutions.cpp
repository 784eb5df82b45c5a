#include "hplab/error.hpp"
#include "hplab/solutions.hpp"
#include "hplab/specfun.hpp"
#include "hplab/verify.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace hplab;

namespace {

double u_at(const SolutionFamily& f, double eta, double t)
{
    return evaluate(f.solution(), {eta, t, f.mode}).real();
}

}  // namespace

TEST_CASE("theorem21 classical member")
{
    const auto f = family_theorem21(TimeOperator::classical(), 2, -1, 0);
    CHECK(f.validity.eta.lo == 0.0);
    CHECK(std::isinf(f.validity.eta.hi));
    for (double eta : {0.2, 1.0, 3.0}) {
        for (double t : {0.0, 0.5, 2.0}) {
            CHECK(u_at(f, eta, t) == doctest::Approx(std::exp(-t) * std::sqrt(-std::log(std::tanh(eta / 2)))).epsilon(1e-14));
        }
    }
    CHECK(residual(f).max_abs_residual <= 1e-10);
}

TEST_CASE("theorem21 Caputo member")
{
    const auto f = family_theorem21(TimeOperator::caputo(0.5), 3, -1, 0);
    const double eta = 0.8, t = 1.3;
    const double expected = specfun::mittag_leffler(0.5, -std::sqrt(t)) * std::cbrt(-std::log(std::tanh(eta / 2)));
    CHECK(u_at(f, eta, t) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(residual(f).max_abs_residual <= 1e-10);
}

TEST_CASE("theorem21 constant-in-eta member")
{
    const auto f = family_theorem21(TimeOperator::classical(), 2, 0, 1);
    CHECK(u_at(f, 0.3, 0.7) == doctest::Approx(std::exp(-0.7)).epsilon(1e-15));
    CHECK(u_at(f, 5.0, 0.7) == doctest::Approx(std::exp(-0.7)).epsilon(1e-15));
    CHECK(residual(f).max_abs_residual <= 1e-12);
}

TEST_CASE("theorem21 empty validity")
{
    CHECK_THROWS_AS(family_theorem21(TimeOperator::classical(), 2, 1, 0), EmptyValidityRegion);
    CHECK_THROWS_AS(family_theorem21(TimeOperator::classical(), 2, 2, -0.5), EmptyValidityRegion);
    CHECK_THROWS_AS(family_theorem21(TimeOperator::classical(), 2, 0, -1), EmptyValidityRegion);
    CHECK_THROWS_AS(family_theorem21(TimeOperator::classical(), 1.0, -1, 0), DomainError);
}

TEST_CASE("Laguerre members: reflected is admitted, literal is not")
{
    const auto r = family_theorem21(TimeOperator::laguerre(), 2, -1, 0.1, LaguerreProfile::Reflected);
    const auto l = family_theorem21(TimeOperator::laguerre(), 2, -1, 0.1, LaguerreProfile::Literal);
    CHECK(r.admitted);
    CHECK_FALSE(l.admitted);
    CHECK_FALSE(l.note.empty());
    CHECK(residual(r).max_abs_residual <= 1e-9);
    CHECK(residual(l).max_abs_residual > 1.0);
}

TEST_CASE("periodic member is complex and periodic in t")
{
    const auto f = family_periodic(2, -1, 0.1, 2, 1);
    CHECK(f.mode == EvalMode::Complex);
    CHECK(f.equation.spatial_src == "lap(u^n)");
    const double pi = std::acos(-1.0);
    const Complex a = evaluate(f.solution(), {1.0, 0.3, EvalMode::Complex});
    const Complex b = evaluate(f.solution(), {1.0, 0.3 + pi, EvalMode::Complex});
    CHECK(std::abs(a - b) <= 1e-13);
    CHECK(residual(f).max_abs_residual <= 1e-10);
    CHECK_THROWS_AS(family_periodic(2, -1, 0.1, 2, 0), DomainError);
}

TEST_CASE("theorem22 blow-up members")
{
    const auto f = family_blowup(1, 1, 0);
    const double eta = 1.5, t = 0.4;
    CHECK(u_at(f, eta, t) == doctest::Approx((std::log(std::sinh(eta)) + std::log(std::tanh(eta / 2))) / (1 - t)).epsilon(1e-14));
    CHECK(f.validity.t.hi == 1.0);

    const auto g = family_blowup(2, 0, 0);
    CHECK(u_at(g, 0.9, 1.0) == doctest::Approx(std::log(std::sinh(0.9))).epsilon(1e-14));
    CHECK(residual(g).max_abs_residual <= 1e-11);

    // amplitude doubles when the distance to t0 halves
    const auto h = family_blowup(1, 1, 0);
    for (double t : {0.9, 0.95, 0.99}) {
        const double tc = 1 - (1 - t) / 2;
        double a = 0, b = 0;
        for (double eta : {0.5, 1.0, 2.0, 4.0}) {
            a = std::max(a, std::abs(u_at(h, eta, t)));
            b = std::max(b, std::abs(u_at(h, eta, tc)));
        }
        CHECK(b / a == doctest::Approx(2.0).epsilon(0.01));
    }
}

TEST_CASE("theorem22 static and checked members")
{
    const Expr zero = ex::constant(0.0);
    const auto s = family_theorem22(TimeOperator::classical(), zero, ex::constant(2.0), ex::constant(-1.0), {0.0, 10.0});
    CHECK(residual(s).max_abs_residual == 0.0);
    CHECK_THROWS_AS(family_theorem22(TimeOperator::classical(), ex::constant(1.0), zero, zero, {0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(family_theorem22(TimeOperator::classical(), zero, zero, zero, {1.0, 1.0}), EmptyValidityRegion);
    const auto lg = family_theorem22_laguerre(0.5, 0.25);
    CHECK(lg.validity.t.lo == 0.0);
    CHECK_FALSE(lg.validity.t_includes_lo);
    CHECK(residual(lg).max_abs_residual <= 1e-9);
}

TEST_CASE("positivity interval")
{
    auto iv = positivity_interval(-1, 0);
    CHECK(iv.lo == 0.0);
    CHECK(std::isinf(iv.hi));
    CHECK(positivity_interval(1, 0).empty());
    iv = positivity_interval(1, 1);
    const double root = oracle::bisection([](double e) { return std::log(std::tanh(e / 2)) + 1; }, 0.01, 10);
    CHECK(iv.lo == doctest::Approx(root).epsilon(1e-12));
    CHECK(iv.lo == doctest::Approx(2 * std::atanh(std::exp(-1.0))).epsilon(1e-14));
    CHECK(std::isinf(iv.hi));
    iv = positivity_interval(-1, -0.5);
    const double root2 = oracle::bisection([](double e) { return -std::log(std::tanh(e / 2)) - 0.5; }, 0.01, 10);
    CHECK(iv.lo == 0.0);
    CHECK(iv.hi == doctest::Approx(root2).epsilon(1e-12));
    CHECK(positivity_interval(0, 1).lo == 0.0);
    CHECK(positivity_interval(0, -1).empty());
}

TEST_CASE("monotone decay of classical and Caputo members")
{
    for (const auto& f : {family_theorem21(TimeOperator::classical(), 2, -1, 0.1),
                          family_theorem21(TimeOperator::caputo(0.5), 3, -1, 1)}) {
        for (double eta : {0.1, 1.0, 5.0}) {
            double prev = INFINITY;
            for (int k = 0; k <= 50; ++k) {
                const double v = u_at(f, eta, 0.1 * k);
                CHECK(v <= prev);
                prev = v;
            }
        }
    }
}

TEST_CASE("catalog")
{
    const auto cat = default_catalog();
    CHECK(cat.size() == 6);
    for (const auto& f : cat) {
        CHECK(f.admitted);
        CHECK_FALSE(f.spatial_src().empty());
        CHECK_FALSE(f.temporal_src().empty());
    }
    CHECK(family_names().size() == 7);
    CHECK_THROWS_AS(make_family("nope", {}), DomainError);
    const auto f = make_family("theorem21-classical", {{"n", 3}, {"c2", 0.5}});
    CHECK(f.params.at("n") == 3);
    CHECK(f.params.at("c2") == 0.5);
    CHECK(f.params.at("c1") == -1);
}
