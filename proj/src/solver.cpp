#include "hplab/solver.hpp"

#include "hplab/error.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

namespace hplab {

RadialGrid::RadialGrid(double eta_min, double eta_max, std::size_t nodes)
{
    if (!(eta_min > 0.0)) throw DomainError("RadialGrid requires eta_min > 0");
    if (!(eta_max > eta_min)) throw DomainError("RadialGrid requires eta_max > eta_min");
    if (nodes < 8) throw DomainError("RadialGrid requires at least 8 nodes");
    h_ = (eta_max - eta_min) / static_cast<double>(nodes - 1);
    eta_.resize(nodes);
    lower_.assign(nodes, 0.0);
    upper_.assign(nodes, 0.0);
    for (std::size_t i = 0; i < nodes; ++i) eta_[i] = eta_min + h_ * static_cast<double>(i);
    eta_.back() = eta_max;
    const double h2 = h_ * h_;
    for (std::size_t i = 1; i + 1 < nodes; ++i) {
        const double center = std::sinh(eta_[i]);
        lower_[i] = std::sinh(eta_[i] - 0.5 * h_) / (center * h2);
        upper_[i] = std::sinh(eta_[i] + 0.5 * h_) / (center * h2);
    }
}

namespace {

template <class S>
std::vector<S> laplacian_impl(const RadialGrid& g, std::span<const S> w)
{
    if (w.size() != g.size()) throw DomainError("discrete_laplacian: size mismatch");
    std::vector<S> out(w.size(), S(0.0));
    for (std::size_t i = 1; i + 1 < w.size(); ++i) {
        out[i] = g.upper(i) * (w[i + 1] - w[i]) - g.lower(i) * (w[i] - w[i - 1]);
    }
    return out;
}

}  // namespace

std::vector<double> discrete_laplacian(const RadialGrid& g, std::span<const double> w) { return laplacian_impl(g, w); }
std::vector<Complex> discrete_laplacian(const RadialGrid& g, std::span<const Complex> w) { return laplacian_impl(g, w); }

std::string to_string(Equation e)
{
    switch (e) {
    case Equation::PorousDecay: return "porous-decay";
    case Equation::Quasilinear: return "quasilinear";
    case Equation::PeriodicForced: return "periodic";
    }
    return "?";
}

std::string to_string(Scheme s)
{
    switch (s) {
    case Scheme::ExplicitRK4: return "rk4";
    case Scheme::ImplicitEuler: return "implicit-euler";
    case Scheme::FractionalL1: return "l1";
    }
    return "?";
}

EvolutionProblem EvolutionProblem::from_family(const SolutionFamily& fam, Equation eq, const RadialGrid& grid)
{
    EvolutionProblem p;
    p.equation = eq;
    p.time = fam.equation.time;
    p.exact = fam;
    p.grid = grid;
    if (auto it = fam.params.find("n"); it != fam.params.end()) p.n = it->second;
    const Interval& ev = fam.validity.eta;
    if (!(grid.eta_min() >= ev.lo && grid.eta_max() <= ev.hi) || !ev.contains(grid.eta_min()) ||
        !ev.contains(grid.eta_max())) {
        throw DomainError("grid extends outside the family's validity region in eta");
    }
    const std::string& src = fam.equation.spatial_src;
    switch (eq) {
    case Equation::PorousDecay:
        if (src != "lap(u^n) - u" ||
            (p.time.kind != TimeOperator::Kind::Classical && p.time.kind != TimeOperator::Kind::Caputo)) {
            throw DomainError("porous-decay runs need a classical or Caputo family of O_t u = lap(u^n) - u");
        }
        break;
    case Equation::Quasilinear:
        if (src != "u*lap(u)" || p.time.kind != TimeOperator::Kind::Classical) {
            throw DomainError("quasilinear runs need a classical family of u_t = u lap(u)");
        }
        break;
    case Equation::PeriodicForced:
        if (src != "lap(u^n)" || p.time.kind != TimeOperator::Kind::ShiftedClassical) {
            throw DomainError("periodic runs need the shifted-classical family of u_t - lambda u = lap(u^n)");
        }
        p.lambda = p.time.lambda;
        break;
    }
    return p;
}

namespace {

template <class S>
S int_or_real_power(S x, double n)
{
    if (n == std::floor(n) && std::abs(n) < 64) {
        long long k = static_cast<long long>(n);
        S r(1.0), b = x;
        const bool inv = k < 0;
        if (inv) k = -k;
        while (k) {
            if (k & 1) r *= b;
            b *= b;
            k >>= 1;
        }
        return inv ? S(1.0) / r : r;
    }
    return std::pow(x, n);
}

template <class S>
S from_complex(Complex c)
{
    if constexpr (std::is_same_v<S, double>) return c.real();
    else return c;
}

// Thomas algorithm; a: sub-diagonal, b: diagonal, c: super-diagonal.
template <class S>
void solve_tridiagonal(std::vector<S>& a, std::vector<S>& b, std::vector<S>& c, std::vector<S>& d)
{
    const std::size_t m = b.size();
    for (std::size_t i = 1; i < m; ++i) {
        const S w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    d[m - 1] /= b[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
}

template <class S>
class Engine {
public:
    Engine(const EvolutionProblem& p) : p_(p), g_(p.grid), exact_(p.exact.solution()) {}

    std::vector<S> exact_state(double t) const
    {
        std::vector<S> out(g_.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = exact_node(i, t);
        return out;
    }

    S exact_node(std::size_t i, double t) const
    {
        return from_complex<S>(evaluate(exact_, {g_.eta(i), t, p_.exact.mode}));
    }

    void set_boundary(std::vector<S>& u, double t) const
    {
        u.front() = exact_node(0, t);
        u.back() = exact_node(g_.size() - 1, t);
    }

    // power u^n with the positivity guard of the porous-decay equation
    S power(S u, std::size_t i, double t) const
    {
        if constexpr (std::is_same_v<S, double>) {
            if (u < 1e-14) throw SolverError("positivity loss in the base of u^n", static_cast<std::ptrdiff_t>(i), t);
        }
        return int_or_real_power(u, p_.n);
    }

    S power_derivative(S u) const { return p_.n * int_or_real_power(u, p_.n - 1.0); }

    // interior right-hand side N(u); u carries boundary values
    void rhs(const std::vector<S>& u, std::vector<S>& out, double t) const
    {
        const std::size_t m = u.size();
        out.assign(m, S(0.0));
        if (p_.equation == Equation::Quasilinear) {
            for (std::size_t i = 1; i + 1 < m; ++i) {
                const S lap = g_.upper(i) * (u[i + 1] - u[i]) - g_.lower(i) * (u[i] - u[i - 1]);
                out[i] = u[i] * lap;
            }
            return;
        }
        std::vector<S> v(m);
        for (std::size_t i = 0; i < m; ++i) v[i] = power(u[i], i, t);
        for (std::size_t i = 1; i + 1 < m; ++i) {
            const S lap = g_.upper(i) * (v[i + 1] - v[i]) - g_.lower(i) * (v[i] - v[i - 1]);
            out[i] = p_.equation == Equation::PorousDecay ? lap - u[i] : lap + from_complex<S>(p_.lambda) * u[i];
        }
    }

    double step_limit(const std::vector<S>& u) const
    {
        double d = 0.0;
        for (const S& x : u) {
            const double a = std::abs(x);
            d = std::max(d, p_.equation == Equation::Quasilinear ? a : p_.n * std::pow(a, p_.n - 1.0));
        }
        if (!(d > 0.0)) return std::numeric_limits<double>::infinity();
        return 0.2 * g_.h() * g_.h() / d;
    }

    void rk4(std::vector<S>& u, double t, double dt) const
    {
        const std::size_t m = u.size();
        std::vector<S> k1, k2, k3, k4, tmp(m);
        auto stage = [&](const std::vector<S>& k, double frac, double ts) {
            for (std::size_t i = 0; i < m; ++i) tmp[i] = u[i] + frac * dt * k[i];
            set_boundary(tmp, ts);
        };
        set_boundary(u, t);
        rhs(u, k1, t);
        stage(k1, 0.5, t + 0.5 * dt);
        rhs(tmp, k2, t + 0.5 * dt);
        stage(k2, 0.5, t + 0.5 * dt);
        rhs(tmp, k3, t + 0.5 * dt);
        stage(k3, 1.0, t + dt);
        rhs(tmp, k4, t + dt);
        for (std::size_t i = 1; i + 1 < m; ++i) u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        set_boundary(u, t + dt);
    }

    // Solves a (u - base) = N(u) at time t for the interior, boundaries
    // already set in u. Damped Newton with the exact tridiagonal Jacobian.
    void implicit_solve(std::vector<S>& u, const std::vector<S>& base, double a, double t) const
    {
        const std::size_t m = u.size();
        const std::size_t k = m - 2;
        std::vector<S> n_val, sub(k), dia(k), sup(k), rhs_vec(k), trial(u);

        auto residual = [&](const std::vector<S>& x, std::vector<S>& g) -> double {
            std::vector<S> nx;
            try {
                rhs(x, nx, t);
            } catch (const SolverError&) {
                return std::numeric_limits<double>::infinity();
            }
            double norm = 0.0;
            g.resize(k);
            for (std::size_t i = 1; i + 1 < m; ++i) {
                g[i - 1] = a * (x[i] - base[i]) - nx[i];
                norm = std::max(norm, std::abs(g[i - 1]));
            }
            return norm;
        };

        std::vector<S> g;
        double gnorm = residual(u, g);
        if (!std::isfinite(gnorm)) throw SolverError("positivity loss before Newton solve", -1, t);
        for (int iter = 0; iter < 50; ++iter) {
            jacobian(u, a, sub, dia, sup);
            for (std::size_t i = 0; i < k; ++i) rhs_vec[i] = -g[i];
            solve_tridiagonal(sub, dia, sup, rhs_vec);

            double step = 1.0;
            double trial_norm = 0.0;
            std::vector<S> trial_g;
            for (int halving = 0; halving < 30; ++halving) {
                for (std::size_t i = 1; i + 1 < m; ++i) trial[i] = u[i] + step * rhs_vec[i - 1];
                trial_norm = residual(trial, trial_g);
                if (trial_norm < gnorm || trial_norm == 0.0) break;
                step *= 0.5;
            }
            if (!std::isfinite(trial_norm)) throw SolverError("Newton step lost positivity", -1, t);

            double du = 0.0, umax = 0.0;
            for (std::size_t i = 1; i + 1 < m; ++i) {
                du = std::max(du, std::abs(trial[i] - u[i]));
                umax = std::max(umax, std::abs(trial[i]));
            }
            u = trial;
            g = trial_g;
            const bool stalled = trial_norm >= gnorm;
            gnorm = trial_norm;
            if (du <= 1e-12 * (1.0 + umax) || gnorm == 0.0) return;
            if (stalled && du <= 1e-10 * (1.0 + umax)) return;
        }
        std::ptrdiff_t worst = 0;
        double wv = -1.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (std::abs(g[i]) > wv) {
                wv = std::abs(g[i]);
                worst = static_cast<std::ptrdiff_t>(i + 1);
            }
        }
        throw SolverError("Newton iteration did not converge in 50 iterations", worst, t);
    }

private:
    void jacobian(const std::vector<S>& u, double a, std::vector<S>& sub, std::vector<S>& dia,
                  std::vector<S>& sup) const
    {
        const std::size_t m = u.size();
        for (std::size_t i = 1; i + 1 < m; ++i) {
            const std::size_t r = i - 1;
            const double lo = g_.lower(i), up = g_.upper(i), di = g_.diag(i);
            S d_lo, d_di, d_up;
            if (p_.equation == Equation::Quasilinear) {
                const S lap = up * (u[i + 1] - u[i]) - lo * (u[i] - u[i - 1]);
                d_lo = u[i] * lo;
                d_up = u[i] * up;
                d_di = lap + u[i] * di;
            } else {
                d_lo = lo * power_derivative(u[i - 1]);
                d_up = up * power_derivative(u[i + 1]);
                d_di = di * power_derivative(u[i]);
                d_di += p_.equation == Equation::PorousDecay ? S(-1.0) : from_complex<S>(p_.lambda);
            }
            sub[r] = -d_lo;
            sup[r] = -d_up;
            dia[r] = a - d_di;
        }
        // boundary columns are known data
        sub.front() = S(0.0);
        sup.back() = S(0.0);
    }

    const EvolutionProblem& p_;
    const RadialGrid& g_;
    Expr exact_;
};

template <class S>
Snapshot make_snapshot(const Engine<S>& eng, const RadialGrid& g, const std::vector<S>& u, double t)
{
    Snapshot s;
    s.t = t;
    const auto ex = eng.exact_state(t);
    double sq = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        s.u.push_back(Complex(u[i]));
        s.exact.push_back(Complex(ex[i]));
        const double e = std::abs(u[i] - ex[i]);
        s.err_linf = std::max(s.err_linf, e);
        sq += e * e;
    }
    s.err_l2 = std::sqrt(g.h() * sq);
    return s;
}

template <class S>
RunResult run_impl(const EvolutionProblem& p, const RunSpec& spec)
{
    Engine<S> eng(p);
    const RadialGrid& g = p.grid;
    RunResult res;

    const std::size_t steps = spec.t_end == 0.0
                                  ? 0
                                  : static_cast<std::size_t>(std::max(1.0, std::ceil(spec.t_end / spec.dt - 1e-9)));
    const double dt = steps ? spec.t_end / static_cast<double>(steps) : 0.0;
    res.steps = steps;
    res.dt = dt;

    std::vector<std::size_t> snap_steps;
    for (double ts : spec.snapshot_times) {
        if (ts < 0.0 || ts > spec.t_end) throw DomainError("snapshot time outside [0, t_end]");
        snap_steps.push_back(steps ? static_cast<std::size_t>(std::llround(ts / dt)) : 0);
    }
    snap_steps.push_back(steps);
    std::sort(snap_steps.begin(), snap_steps.end());
    snap_steps.erase(std::unique(snap_steps.begin(), snap_steps.end()), snap_steps.end());

    std::vector<S> u = eng.exact_state(0.0);
    const bool porous_real = p.equation == Equation::PorousDecay && std::is_same_v<S, double>;
    double bound = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        bound = std::max(bound, std::abs(u[i]));
        if constexpr (std::is_same_v<S, double>) {
            if (p.equation == Equation::PorousDecay && !(u[i] > 0.0)) {
                throw SolverError("initial data must be positive", static_cast<std::ptrdiff_t>(i), 0.0);
            }
        }
    }

    std::unique_ptr<CaputoHistory> history;
    if (spec.scheme == Scheme::FractionalL1) {
        if constexpr (std::is_same_v<S, double>) {
            history = std::make_unique<CaputoHistory>(dt > 0.0 ? dt : 1.0, p.time.beta);
            history->push(u);
        }
    }

    auto snapshot_if_due = [&](std::size_t k) {
        if (std::binary_search(snap_steps.begin(), snap_steps.end(), k)) {
            res.snapshots.push_back(make_snapshot(eng, g, u, steps ? dt * static_cast<double>(k) : 0.0));
        }
    };
    snapshot_if_due(0);

    const auto start = std::chrono::steady_clock::now();
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = dt * static_cast<double>(k);
        const double t_next = dt * static_cast<double>(k + 1);
        switch (spec.scheme) {
        case Scheme::ExplicitRK4: {
            double done = 0.0;
            while (done < dt) {
                const double limit = eng.step_limit(u);
                const double remaining = dt - done;
                const std::size_t sub = static_cast<std::size_t>(std::ceil(remaining / limit - 1e-12));
                const double h = sub <= 1 ? remaining : remaining / static_cast<double>(sub);
                eng.rk4(u, t + done, h);
                ++res.substeps;
                done = sub <= 1 ? dt : done + h;
            }
            break;
        }
        case Scheme::ImplicitEuler: {
            const std::vector<S> base = u;
            eng.set_boundary(u, t_next);
            eng.implicit_solve(u, base, 1.0 / dt, t_next);
            break;
        }
        case Scheme::FractionalL1:
            if constexpr (std::is_same_v<S, double>) {
                const std::vector<double> memory = history->memory_term();
                std::vector<double> base = u;
                for (std::size_t i = 0; i < base.size(); ++i) base[i] -= memory[i];
                eng.set_boundary(u, t_next);
                eng.implicit_solve(u, base, history->scale(), t_next);
                history->push(u);
            }
            break;
        }
        if constexpr (std::is_same_v<S, double>) {
            if (porous_real && spec.check_maximum_principle) {
                const double tol = 1e-9 * bound;
                for (std::size_t i = 0; i < u.size(); ++i) {
                    if (u[i] < -tol || u[i] > bound + tol) {
                        throw SolverError("discrete maximum principle violated", static_cast<std::ptrdiff_t>(i), t_next);
                    }
                }
            }
        }
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (!std::isfinite(std::abs(u[i]))) throw SolverError("non-finite value", static_cast<std::ptrdiff_t>(i), t_next);
        }
        snapshot_if_due(k + 1);
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    res.seconds_per_step = steps ? elapsed / static_cast<double>(steps) : 0.0;

    const Snapshot& last = res.snapshots.back();
    res.err_linf = last.err_linf;
    res.err_l2 = last.err_l2;
    double emax = 0.0;
    for (const auto& e : last.exact) emax = std::max(emax, std::abs(e));
    res.rel_err_linf = emax > 0.0 ? last.err_linf / emax : last.err_linf;
    return res;
}

}  // namespace

double explicit_step_limit(const EvolutionProblem& problem, std::span<const Complex> u)
{
    Engine<Complex> eng(problem);
    return eng.step_limit(std::vector<Complex>(u.begin(), u.end()));
}

RunResult run(const EvolutionProblem& p, const RunSpec& spec)
{
    if (!(spec.dt > 0.0)) throw DomainError("dt must be positive");
    if (!(spec.t_end >= 0.0)) throw DomainError("t_end must be nonnegative");
    if (p.grid.size() < 8) throw DomainError("grid too small");
    if (p.time.kind == TimeOperator::Kind::Laguerre) {
        throw DomainError("Laguerre-operator equations are verified by residual only, not solved");
    }
    const Interval& tv = p.exact.validity.t;
    if (spec.t_end >= tv.hi) throw DomainError("t-end beyond blow-up time");
    const bool caputo = p.time.kind == TimeOperator::Kind::Caputo && p.time.beta < 1.0;
    if (spec.scheme == Scheme::FractionalL1) {
        if (p.time.kind != TimeOperator::Kind::Caputo) throw DomainError("the L1 scheme needs a Caputo time operator");
        if (p.equation != Equation::PorousDecay) throw DomainError("the L1 scheme applies to the porous-decay equation");
    } else if (caputo) {
        throw DomainError("Caputo problems with beta < 1 need the L1 scheme");
    }
    if (p.equation == Equation::PeriodicForced) return run_impl<Complex>(p, spec);
    return run_impl<double>(p, spec);
}

unsigned worker_threads(unsigned requested)
{
    unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HPLAB_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return std::max(1u, n);
}

namespace {

template <class Job>
std::vector<RunResult> run_parallel(std::size_t count, unsigned threads, Job job)
{
    std::vector<RunResult> results(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                results[i] = job(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n = std::min<unsigned>(worker_threads(threads), static_cast<unsigned>(std::max<std::size_t>(count, 1)));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

}  // namespace

SweepResult spatial_sweep(const SolutionFamily& fam, Equation eq, const std::vector<std::size_t>& nodes,
                          const RunSpec& spec, double eta_min, double eta_max, unsigned threads)
{
    SweepResult out;
    out.runs = run_parallel(nodes.size(), threads, [&](std::size_t i) {
        const auto p = EvolutionProblem::from_family(fam, eq, RadialGrid(eta_min, eta_max, nodes[i]));
        return run(p, spec);
    });
    std::vector<double> res, h, linf, l2;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        res.push_back(static_cast<double>(nodes[i]));
        h.push_back((eta_max - eta_min) / static_cast<double>(nodes[i] - 1));
        linf.push_back(out.runs[i].err_linf);
        l2.push_back(out.runs[i].err_l2);
    }
    out.report = make_convergence_report(res, h, linf, l2);
    return out;
}

SweepResult temporal_sweep(const SolutionFamily& fam, Equation eq, const RadialGrid& grid,
                           const std::vector<std::size_t>& steps, RunSpec spec, unsigned threads)
{
    SweepResult out;
    const auto p = EvolutionProblem::from_family(fam, eq, grid);
    out.runs = run_parallel(steps.size(), threads, [&](std::size_t i) {
        RunSpec s = spec;
        s.dt = spec.t_end / static_cast<double>(steps[i]);
        return run(p, s);
    });
    std::vector<double> res, h, linf, l2;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        res.push_back(static_cast<double>(steps[i]));
        h.push_back(spec.t_end / static_cast<double>(steps[i]));
        linf.push_back(out.runs[i].err_linf);
        l2.push_back(out.runs[i].err_l2);
    }
    out.report = make_convergence_report(res, h, linf, l2);
    return out;
}

}  // namespace hplab
