#pragma once

#include "hplab/expr.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace hplab {

/// The time operator O_t of an evolution equation O_t u = F[u].
struct TimeOperator {
    enum class Kind { Classical, Caputo, Laguerre, ShiftedClassical };

    Kind kind = Kind::Classical;
    double beta = 1.0;      // Caputo order, (0, 1]
    Complex lambda{};       // ShiftedClassical: d/dt - lambda

    static TimeOperator classical() { return {}; }
    static TimeOperator caputo(double beta);
    static TimeOperator laguerre() { return {Kind::Laguerre, 1.0, {}}; }
    static TimeOperator shifted(Complex lambda) { return {Kind::ShiftedClassical, 1.0, lambda}; }

    std::string name() const;
};

/// Symbolic action of `op` on a profile depending on t only. Caputo uses a
/// closed-form table (constants, t^k with k > 0, E_beta(c t^beta), and
/// t-free multiples and sums of these); anything else raises
/// UnsupportedCaputoForm. Caputo with beta = 1 is the classical derivative.
Expr apply_symbolic(const TimeOperator& op, const Expr& f);

/// Caputo derivative of order beta at time t from the integral definition,
/// (1/Gamma(1-beta)) int_0^t (t-s)^-beta f'(s) ds, by double-exponential
/// quadrature. `fprime` may have an integrable singularity at s = 0.
double caputo_quadrature(const std::function<double(double)>& fprime, double beta, double t);

// ---------------------------------------------------------------------------
// L1 discretisation

/// b_j = (j+1)^(1-beta) - j^(1-beta), j = 0..n-1. For beta = 1 this is the
/// backward-difference stencil (1, 0, 0, ...).
std::vector<double> caputo_l1_weights(double beta, std::size_t n);

/// Per-node history of a uniformly stepped quantity for the L1 scheme.
/// Single writer: the owner appends one state per completed step.
class CaputoHistory {
public:
    CaputoHistory(double dt, double beta);

    double dt() const noexcept { return dt_; }
    double beta() const noexcept { return beta_; }
    /// dt^-beta / Gamma(2 - beta)
    double scale() const noexcept { return scale_; }

    void push(std::vector<double> state);
    std::size_t size() const noexcept { return values_.size(); }
    /// Completed steps, i.e. size() - 1.
    std::size_t steps() const noexcept { return values_.empty() ? 0 : values_.size() - 1; }
    const std::vector<double>& at(std::size_t level) const { return values_.at(level); }
    const std::vector<double>& back() const { return values_.back(); }

    /// sum_{j=1}^{n-1} b_j (u^{n-j} - u^{n-j-1}) for the next level n = size().
    std::vector<double> memory_term() const;

    /// b_j with the cache extended as needed.
    double weight(std::size_t j) const;

private:
    double dt_;
    double beta_;
    double scale_;
    std::vector<std::vector<double>> values_;
    mutable std::vector<double> weights_;
};

/// dt^-beta/Gamma(2-beta) sum_{j=0}^{n-1} b_j (u^{n-j} - u^{n-j-1}) at the
/// latest level n. Requires at least two levels.
std::vector<double> caputo_apply_discrete(const CaputoHistory& history);

// ---------------------------------------------------------------------------
// Laguerre derivative  d/dt t d/dt u = rhs

struct LaguerreState {
    double t = 0.0;
    std::vector<double> u;
    std::vector<double> w;  // t du/dt
};

using LaguerreRhs = std::function<void(double t, std::span<const double> u, std::span<double> out)>;

/// Regularised start at t = dt: u = u0 + rhs(0) dt, w = rhs(0) dt.
LaguerreState laguerre_start(std::vector<double> u0, const LaguerreRhs& rhs, double dt);

/// One classical RK4 step of u' = w/t, w' = rhs(t, u). Throws SolverError
/// when |w/t| exceeds the overflow guard.
void laguerre_step(LaguerreState& state, const LaguerreRhs& rhs, double dt);

}  // namespace hplab
