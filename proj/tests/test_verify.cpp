#include "hplab/error.hpp"
#include "hplab/verify.hpp"

#include <doctest.h>

#include <cmath>

using namespace hplab;

TEST_CASE("residual: report shape")
{
    const auto f = make_family("theorem21-classical", {});
    const auto r = residual(f);
    CHECK(r.family == "theorem21-classical");
    CHECK(r.eta.size() == 40);
    CHECK(r.t.size() == 40);
    CHECK(r.eta.front() >= 0.05);
    CHECK(r.max_abs_residual >= r.mean_abs_residual);
    CHECK(r.mean_abs_residual >= 0.0);
    CHECK(r.evaluated + r.skipped == 1600);
    for (std::size_t k = 1; k < r.eta.size(); ++k) CHECK(r.eta[k] > r.eta[k - 1]);
}

TEST_CASE("residual: blow-up sample keeps away from t0")
{
    const auto f = make_family("theorem22-blowup", {});
    const auto r = residual(f);
    CHECK(r.t.back() <= 1.0 - 1e-3 + 1e-15);
    CHECK(r.max_abs_residual <= kResidualGate);
    ResidualOptions o;
    o.t_max = 0.9;
    CHECK(residual(f, o).t.back() <= 0.9);
}

TEST_CASE("residual: every admitted family passes the gate")
{
    for (const auto& f : default_catalog()) {
        INFO(f.name);
        CHECK(residual(f).max_abs_residual <= kResidualGate);
    }
    CHECK(verified_catalog().size() == 6);
}

TEST_CASE("negative controls")
{
    for (const auto& f : default_catalog()) {
        const double base = residual(f).max_abs_residual;
        const auto controls = negative_controls(f);
        CHECK(controls.size() >= 2);
        for (const auto& c : controls) {
            INFO(f.name << " / " << c.label);
            const double r = residual(c.family).max_abs_residual;
            CHECK(r > 1e-6);
            CHECK(r >= 1e3 * base);
        }
    }
}

TEST_CASE("perturbing the constant in the temporal part only is detected")
{
    // u = e^{-t} (c1 ln tanh + c2)^{1/2} with the c2 inside the time factor moved: e^{-t} + 0.1
    auto f = make_family("theorem21-classical", {});
    f.terms[0].temporal = ex::exp(ex::neg(ex::t())) + ex::constant(0.1);
    CHECK(residual(f).max_abs_residual > 1e-2);
}

TEST_CASE("fit_order")
{
    const std::vector<double> e = {1e-2, 2.5e-3, 6.25e-4};
    const auto f = fit_order_halving(e);
    CHECK(f.global == doctest::Approx(2.0).epsilon(1e-12));
    for (double p : f.pairwise) CHECK(p == doctest::Approx(2.0).epsilon(1e-12));
    const std::vector<double> g = {1e-3, 5e-4, 2.5e-4};
    CHECK(fit_order_halving(g).global == doctest::Approx(1.0).epsilon(1e-12));

    for (double p : {0.5, 1.0, 1.5, 2.0}) {
        std::vector<double> h, err;
        for (int k = 0; k < 5; ++k) {
            h.push_back(0.3 / std::pow(1.7, k));
            err.push_back(4.2 * std::pow(h.back(), p));
        }
        CHECK(std::abs(fit_order(h, err).global - p) <= 1e-10);
    }
    const std::vector<double> bad = {1e-2, 0.0, 1e-4};
    CHECK_THROWS_AS(fit_order_halving(bad), DomainError);
    const std::vector<double> two = {1e-2, 1e-3};
    CHECK_THROWS_AS(fit_order_halving(two), DomainError);
}

TEST_CASE("Caputo table spot check against quadrature")
{
    const std::vector<double> times = {0.1, 0.25, 0.5, 1.0, 1.5};
    const auto s = caputo_table_spot_check(0.5, times);
    CHECK(s.t.size() == 5);
    CHECK(s.max_abs_diff <= 1e-6);
}
