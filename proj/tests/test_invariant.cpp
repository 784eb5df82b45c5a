#include "hplab/error.hpp"
#include "hplab/invariant.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace hplab;

namespace {

const std::vector<std::string> kW3 = {"ln(sinh(eta))", "ln(tanh(eta/2))", "1"};

}  // namespace

TEST_CASE("W3 is invariant under u lap(u)")
{
    const auto sub = SubspaceSpec::from_sources(kW3);
    CHECK(sub.sample_points.size() == 24);
    const auto v = check_invariance(parse_operator("u*lap(u)"), sub);
    CHECK(v.invariant);
    CHECK(v.label() == "invariant to tolerance");
    CHECK(v.worst_relative_residual < 1e-8);
    CHECK(v.residuals.size() == 20);
    CHECK(v.min_singular_value > 1e-8);
}

TEST_CASE("constants are invariant under lap")
{
    const auto v = check_invariance(parse_operator("lap(u)"), SubspaceSpec::from_sources({"1"}));
    CHECK(v.invariant);
    CHECK(v.worst_relative_residual == 0.0);
}

TEST_CASE("cubic reaction leaves W3")
{
    const auto op = parse_operator("lap(u)+u^3");
    const auto v = check_invariance(op, SubspaceSpec::from_sources(kW3));
    CHECK_FALSE(v.invariant);
    CHECK(v.label() == "not invariant");
    CHECK(v.worst_relative_residual >= 1e-2);
    const auto tight = check_invariance(op, SubspaceSpec::from_sources(kW3, 60));
    CHECK_FALSE(tight.invariant);
}

TEST_CASE("induced coefficient map")
{
    const auto sub = SubspaceSpec::from_sources(kW3);
    const auto op = parse_operator("u*lap(u)");
    auto a = induced_coefficient_map(op, sub, {1, 0, 0}).a;
    CHECK(a[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(a[1]) <= 1e-10);
    CHECK(std::abs(a[2]) <= 1e-10);
    a = induced_coefficient_map(op, sub, {2, 3, 5}).a;
    CHECK(a[0] == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(a[1] == doctest::Approx(6.0).epsilon(1e-10));
    CHECK(a[2] == doctest::Approx(10.0).epsilon(1e-10));
    a = induced_coefficient_map(op, sub, {0, 1.5, -2}).a;
    for (double x : a) CHECK(std::abs(x) <= 1e-12);
    for (int k = 0; k < 100; ++k) {
        const double c1 = oracle::uniform(-2, 2), c2 = oracle::uniform(-2, 2), c3 = oracle::uniform(-2, 2);
        const auto m = induced_coefficient_map(op, sub, {c1, c2, c3}).a;
        const double expect[3] = {c1 * c1, c1 * c2, c1 * c3};
        const double scale = std::max({std::abs(expect[0]), std::abs(expect[1]), std::abs(expect[2]), 1e-300});
        for (int j = 0; j < 3; ++j) CHECK(std::abs(m[j] - expect[j]) <= 1e-8 * scale);
    }
    CHECK_THROWS_AS(induced_coefficient_map(parse_operator("lap(u)+u^3"), sub, {1, 1, 1}), Error);
}

TEST_CASE("verdict invariant under basis rescaling and refinement")
{
    const auto op = parse_operator("u*lap(u)");
    const auto base = check_invariance(op, SubspaceSpec::from_sources(kW3));
    const auto scaled = check_invariance(op, SubspaceSpec::from_sources({"3*ln(sinh(eta))", "-0.25*ln(tanh(eta/2))", "7"}));
    CHECK(scaled.invariant == base.invariant);
    CHECK(std::abs(scaled.worst_relative_residual - base.worst_relative_residual) <= 1e-10);
    const auto refined = check_invariance(op, SubspaceSpec::from_sources(kW3, 48));
    CHECK(refined.invariant);

    const auto bad = check_invariance(parse_operator("lap(u)+u^3"), SubspaceSpec::from_sources(kW3));
    const auto bad_scaled = check_invariance(parse_operator("lap(u)+u^3"),
                                             SubspaceSpec::from_sources({"2*ln(sinh(eta))", "ln(tanh(eta/2))", "0.5"}));
    CHECK(bad_scaled.invariant == bad.invariant);
}

TEST_CASE("seeded trials are reproducible")
{
    const auto op = parse_operator("u*lap(u)");
    const auto a = check_invariance(op, SubspaceSpec::from_sources(kW3));
    const auto b = check_invariance(op, SubspaceSpec::from_sources(kW3));
    CHECK(a.residuals == b.residuals);
    CHECK(a.coefficients == b.coefficients);
}

TEST_CASE("ill-conditioned and malformed input")
{
    CHECK_THROWS_AS(check_invariance(parse_operator("lap(u)"), SubspaceSpec::from_sources({"eta", "2*eta"})),
                    IllConditionedBasis);
    CHECK_THROWS_AS(parse_operator("u*lap(u"), ParseError);
    CHECK_THROWS_AS(SubspaceSpec::from_sources({"1", "eta"}, 3), DomainError);
}
