#include "hplab/specfun.hpp"

#include "hplab/error.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace hplab::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

void check_beta(double beta)
{
    if (!(beta > 0.0 && beta <= 1.0))
        throw DomainError("Mittag-Leffler order beta must lie in (0, 1], got " + std::to_string(beta));
}

// |z| <= 1 keeps every term bounded by one, so the alternating series loses
// no digits to cancellation.
double ml_series(double beta, double z)
{
    double sum = 0.0;
    double zk = 1.0;
    for (int k = 0; k < 100000; ++k) {
        const double term = zk * reciprocal_gamma(beta * k + 1.0);
        sum += term;
        if (k > 4 && std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum)) &&
            std::abs(zk) <= 1.0)
            break;
        zk *= z;
    }
    return sum;
}

// Positive axis beyond the unit disk: all terms positive, computed in log
// space so large orders do not overflow Gamma.
double ml_series_positive(double beta, double z)
{
    const double lz = std::log(z);
    double sum = 0.0;
    double prev = 0.0;
    for (int k = 0; k < 10000000; ++k) {
        const double term = std::exp(k * lz - std::lgamma(beta * k + 1.0));
        sum += term;
        if (k > 4 && term < prev && term < 1e-17 * sum) break;
        prev = term;
    }
    return sum;
}

// E_beta(-x) = sin(beta pi)/(beta pi x) * int_0^inf exp(-s^{1/beta}) /
//              ((s/x)^2 + 2 (s/x) cos(beta pi) + 1) ds
// The rational factor peaks at s = x as beta -> 1, so the range is split there.
double ml_integral(double beta, double x)
{
    const double c = std::cos(beta * kPi);
    const double inv_beta = 1.0 / beta;
    auto f = [=](double s) {
        const double r = s / x;
        return std::exp(-std::pow(s, inv_beta)) / (r * r + 2.0 * r * c + 1.0);
    };
    boost::math::quadrature::tanh_sinh<double> finite(12);
    boost::math::quadrature::exp_sinh<double> tail(12);
    const double tol = 1e-15;
    const double head = finite.integrate(f, 0.0, x, tol);
    const double rest = tail.integrate(f, x, std::numeric_limits<double>::infinity(), tol);
    return std::sin(beta * kPi) / (beta * kPi * x) * (head + rest);
}

// Optimally truncated asymptotic series; returns NaN when its error estimate
// (first omitted term plus the exponentially small pole contribution) is not
// below 1e-15.
double ml_asymptotic(double beta, double x)
{
    const double lx = std::log(x);
    double sum = 0.0;
    double last = std::numeric_limits<double>::infinity();
    double omitted = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 400; ++k) {
        // 1/Gamma(1 - beta k) by reflection: Gamma(beta k) sin(pi beta k) / pi
        const double mag = std::exp(std::lgamma(beta * k) - k * lx) / kPi;
        const double term = ((k % 2) ? 1.0 : -1.0) * mag * std::sin(kPi * beta * k);
        if (mag > last) {
            omitted = mag;
            break;
        }
        sum += term;
        last = mag;
        if (mag < 1e-18) {
            omitted = mag;
            break;
        }
    }
    double pole = 0.0;
    if (beta > 2.0 / 3.0) {
        pole = std::exp(std::pow(x, 1.0 / beta) * std::cos(kPi / beta)) / beta;
    }
    if (omitted + pole > 1e-15) return std::numeric_limits<double>::quiet_NaN();
    return sum;
}

double clifford_sum(int order, double x, std::size_t max_terms, bool stop_early)
{
    // first term 1 / order!
    double term = 1.0;
    for (int j = 2; j <= order; ++j) term /= j;
    double sum = 0.0;
    double abs_sum = 0.0;
    for (std::size_t m = 0; m < max_terms; ++m) {
        sum += term;
        abs_sum += std::abs(term);
        const double next = term * x / (static_cast<double>(m + 1) * static_cast<double>(m + 1 + order));
        if (stop_early && m + 1 >= 5 && std::abs(next) < 1e-16 * abs_sum &&
            std::abs(next) <= std::abs(term))
            break;
        term = next;
    }
    return sum;
}

}  // namespace

namespace detail {
double ml_series(double beta, double z) { return specfun::ml_series(beta, z); }
double ml_integral(double beta, double x) { return specfun::ml_integral(beta, x); }
double ml_asymptotic(double beta, double x) { return specfun::ml_asymptotic(beta, x); }
}  // namespace detail

double reciprocal_gamma(double x)
{
    if (x <= 0.0 && x == std::floor(x)) return 0.0;
    if (x < 0.5) {
        // reflection keeps large negative arguments finite
        return std::tgamma(1.0 - x) * std::sin(kPi * x) / kPi;
    }
    if (x > 170.0) return std::exp(-std::lgamma(x));
    return 1.0 / std::tgamma(x);
}

double mittag_leffler(double beta, double z)
{
    check_beta(beta);
    if (!std::isfinite(z)) throw DomainError("Mittag-Leffler argument must be finite");
    if (beta == 1.0) return std::exp(z);
    if (std::abs(z) <= 1.0) return ml_series(beta, z);
    if (z > 0.0) return ml_series_positive(beta, z);

    const double x = -z;
    if (x >= 20.0) {
        const double a = ml_asymptotic(beta, x);
        if (!std::isnan(a)) return a;
    }
    return ml_integral(beta, x);
}

double mittag_leffler_profile_derivative(double beta, double t)
{
    check_beta(beta);
    if (!(t > 0.0)) throw DomainError("profile derivative requires t > 0");
    if (beta == 1.0) return -std::exp(-t);
    // sum_{k>=1} (-1)^k t^{beta k - 1} / Gamma(beta k)
    const double lt = std::log(t);
    double sum = 0.0;
    double abs_sum = 0.0;
    for (int k = 1; k < 100000; ++k) {
        const double mag = std::exp((beta * k - 1.0) * lt) * reciprocal_gamma(beta * k);
        const double term = (k % 2) ? -mag : mag;
        sum += term;
        abs_sum += std::abs(term);
        if (k > 4 && std::abs(term) < 1e-17 * abs_sum && beta * k > 1.0 + t) break;
    }
    return sum;
}

double bessel_clifford(int order, double x)
{
    if (order < 0) throw DomainError("Bessel-Clifford order must be nonnegative");
    if (!std::isfinite(x)) throw DomainError("Bessel-Clifford argument must be finite");
    return clifford_sum(order, x, 100000, true);
}

double c0(double t)
{
    if (!(t >= 0.0)) throw DomainError("c0 requires t >= 0, got " + std::to_string(t));
    return bessel_clifford(0, t);
}

double c0_partial(double t, std::size_t terms)
{
    if (!(t >= 0.0)) throw DomainError("c0 requires t >= 0, got " + std::to_string(t));
    return clifford_sum(0, t, terms, false);
}

double c0_reflected(double t)
{
    if (!(t >= 0.0)) throw DomainError("c0_reflected requires t >= 0, got " + std::to_string(t));
    return bessel_clifford(0, -t);
}

double log_tanh_half(double eta)
{
    if (!(eta > 0.0)) throw DomainError("log_tanh_half requires eta > 0");
    const double q = std::exp(-eta);
    return std::log1p(-q) - std::log1p(q);
}

double log_sinh(double eta)
{
    if (!(eta > 0.0)) throw DomainError("log_sinh requires eta > 0");
    return eta + std::log(-std::expm1(-2.0 * eta) / 2.0);
}

}  // namespace hplab::specfun
