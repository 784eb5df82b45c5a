#pragma once

#include <cstddef>

namespace hplab::specfun {

/// One-parameter Mittag-Leffler function E_beta(z) = sum_k z^k / Gamma(beta k + 1)
/// for real z. beta must lie in (0, 1]; E_1 is exp.
///
/// On the negative axis the evaluation switches between the power series
/// (|z| <= 1), the integral representation of the completely monotone
/// kernel, and the large-argument asymptotic expansion, so that the
/// absolute error stays below 1e-12 for |z| <= 50.
double mittag_leffler(double beta, double z);

/// d/dt E_beta(-t^beta) for t > 0, by term-wise differentiation of the
/// series. Intended for moderate t (t <= 4); used by the quadrature check
/// of the Caputo eigenfunction table.
double mittag_leffler_profile_derivative(double beta, double t);

/// 1 / Gamma(x), zero at the poles of Gamma.
double reciprocal_gamma(double x);

/// Bessel-Clifford function C_k(x) = sum_m x^m / (m! (m+k)!), any real x.
/// C_0(t) is the Laguerre-derivative eigenfunction; C_k' = C_{k+1}.
double bessel_clifford(int order, double x);

/// C_0(t) = sum_k t^k / (k!)^2 for t >= 0.
double c0(double t);

/// First `terms` partial sum of the C_0 series.
double c0_partial(double t, std::size_t terms);

/// C_0(-t) = sum_k (-t)^k / (k!)^2, the eigenvalue -1 eigenfunction of the
/// Laguerre derivative, for t >= 0.
double c0_reflected(double t);

/// ln(tanh(eta / 2)) for eta > 0, stable for large eta.
double log_tanh_half(double eta);

/// ln(sinh(eta)) for eta > 0, stable for large eta.
double log_sinh(double eta);

namespace detail {
// Individual evaluation regimes of mittag_leffler, exposed for seam tests.
double ml_series(double beta, double z);
double ml_integral(double beta, double x);      // E_beta(-x), x > 0
double ml_asymptotic(double beta, double x);    // NaN when not accurate
}  // namespace detail

}  // namespace hplab::specfun
