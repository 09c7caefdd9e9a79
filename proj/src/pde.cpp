#include "slob/pde.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "slob/equilibrium.hpp"
#include "slob/intensity.hpp"

namespace slob {

int SolveResult::slice_index(double t) const {
    const int s = static_cast<int>(std::lround(t / store_dt));
    return std::clamp(s, 0, n_slices() - 1);
}

StateRates SolveResult::rates_at(int slice, InventoryPair q) const {
    return regime_rates(params, regime, lattice, slices[slice][0], slices[slice][1], q,
                        slice_time(slice));
}

QuoteMatrix SolveResult::quotes_at(int slice, InventoryPair q) const {
    const StateRates z = rates_at(slice, q);
    return delta_fixed_point(params, z.z0, z.z1, q);
}

namespace {

double active_intensity_sum(const ModelParams& p, const QuoteMatrix& quotes, InventoryPair q) {
    double s = 0.0;
    for (Side k : both_sides)
        for (int i = 0; i < 2; ++i) {
            if (side_blocked(p, k, q[i])) continue;
            for (int j = 0; j < 2; ++j) s += intensity(p, j, quotes.at(k, i));
        }
    return s;
}

struct StepIssue {
    bool bad = false;
    std::string what;
    InventoryPair q;
};

// Per-state backward Euler update; returns the state's active-intensity sum.
double step_state(const ModelParams& p, Regime regime, const Lattice& lat,
                  const std::array<Grid, 2>& in, std::array<Grid, 2>& out, double t,
                  double dt, int idx) {
    const InventoryPair q = lat.state(idx);
    const StateRates z = regime_rates(p, regime, lat, in[0], in[1], q, t);
    const QuoteMatrix quotes = delta_fixed_point(p, z.z0, z.z1, q);

    double src[2];
    switch (regime) {
        case Regime::none: {
            for (int m = 0; m < 2; ++m) {
                const double risk = p.gamma[m] * p.sigma * p.sigma / 2.0 * q[m] * q[m];
                src[m] = hamiltonian_h(p, m, quotes, m == 0 ? z.z0 : z.z1, q) - risk;
            }
            break;
        }
        case Regime::one: {
            const double y = in[0][idx];
            double g_sum = y * g_price(p, 0, z.z0.zS, q.q0);
            for (Side k : both_sides) {
                const double y_own = side_blocked(p, k, q.q0)
                                         ? y
                                         : in[0][lat.index(Lattice::jump(q, k, 0))];
                const double y_cross = side_blocked(p, k, q.q1)
                                           ? y
                                           : in[0][lat.index(Lattice::jump(q, k, 1))];
                g_sum += g_side(p, 0, k, z.z0.at(k, 0, 0),
                                {z.z0.at(k, 1, 0), z.z0.at(k, 1, 1)}, z.z1.at(k, 1, 0), q, y,
                                y_own, y_cross);
            }
            src[0] = g_sum;
            const double risk1 = p.gamma[1] * p.sigma * p.sigma / 2.0 * q.q1 * q.q1;
            src[1] = hamiltonian_h(p, 1, quotes, z.z1, q) - risk1;
            break;
        }
        case Regime::both: {
            for (int m = 0; m < 2; ++m) {
                const Grid& vm = in[m];
                const RateVector& zm = m == 0 ? z.z0 : z.z1;
                const RateVector& zo = m == 0 ? z.z1 : z.z0;
                const double y = vm[idx];
                double g_sum = y * g_price(p, m, zm.zS, q[m]);
                for (Side k : both_sides) {
                    const double y_own = side_blocked(p, k, q[m])
                                             ? y
                                             : vm[lat.index(Lattice::jump(q, k, m))];
                    const double y_cross = side_blocked(p, k, q[1 - m])
                                               ? y
                                               : vm[lat.index(Lattice::jump(q, k, 1 - m))];
                    g_sum += g_side(p, m, k, zm.at(k, m, 0),
                                    {zm.at(k, 1 - m, 0), zm.at(k, 1 - m, 1)},
                                    zo.at(k, 1 - m, 0), q, y, y_own, y_cross);
                }
                src[m] = g_sum;
            }
            break;
        }
    }

    for (int m = 0; m < 2; ++m) {
        const double v = in[m][idx] + dt * src[m];
        if (!std::isfinite(v))
            throw SolveError("backward Euler step produced a non-finite value", t, q);
        // Sign invariant of the exchange value grids.
        const bool is_exchange = (regime == Regime::both) || (regime == Regime::one && m == 0);
        if (is_exchange && !(v < 0.0))
            throw SolveError("exchange value grid lost strict negativity", t, q);
        out[m][idx] = v;
    }
    return active_intensity_sum(p, quotes, q);
}

} // namespace

double step_regime(const ModelParams& p, Regime regime, const Lattice& lat,
                   const std::array<Grid, 2>& in, std::array<Grid, 2>& out, double t,
                   double dt, bool parallel) {
    const int n = lat.size();
    double max_lambda = 0.0;
    StepIssue issue;
    std::mutex issue_mu;

#pragma omp parallel for schedule(static) reduction(max : max_lambda) if (parallel)
    for (int idx = 0; idx < n; ++idx) {
        try {
            max_lambda = std::max(max_lambda, step_state(p, regime, lat, in, out, t, dt, idx));
        } catch (const SolveError& e) {
            std::lock_guard<std::mutex> lock(issue_mu);
            if (!issue.bad) {
                issue.bad = true;
                issue.what = e.what();
                issue.q = e.q;
            }
        }
    }
    if (issue.bad) throw SolveError(issue.what, t, issue.q);
    return max_lambda;
}

SolveResult solve_regime(const ModelParams& p, Regime regime, const SolveOptions& opt) {
    p.validate();
    double dt_req = opt.dt;
    for (int attempt = 0;; ++attempt) {
        try {
            SolveResult res;
            res.regime = regime;
            res.params = p;
            res.lattice = Lattice(p.q_bar);
            const int every = std::max(1, opt.store_every);
            long steps = std::lround(std::ceil(p.T / dt_req - 1e-12));
            steps = ((steps + every - 1) / every) * every;
            res.dt = p.T / static_cast<double>(steps);
            res.store_dt = res.dt * every;
            res.dt_halvings = attempt;
            const int n_stored = static_cast<int>(steps / every) + 1;
            res.slices.assign(n_stored, {});

            const int n = res.lattice.size();
            std::array<Grid, 2> cur, next;
            const double term0 = (regime == Regime::none) ? 0.0 : -1.0;
            const double term1 = (regime == Regime::both) ? -1.0 : 0.0;
            cur[0].assign(n, term0);
            cur[1].assign(n, term1);
            next[0].assign(n, 0.0);
            next[1].assign(n, 0.0);
            res.slices[n_stored - 1] = cur;

            for (long b = 1; b <= steps; ++b) {
                const double t = p.T - (b - 1) * res.dt;
                const double max_lambda =
                    step_regime(p, regime, res.lattice, cur, next, t, res.dt, opt.parallel);
                if (res.dt * max_lambda >= 0.5)
                    throw SolveError("stability bound dt * max intensity < 0.5 violated", t,
                                     InventoryPair{});
                std::swap(cur, next);
                if (b % every == 0) res.slices[n_stored - 1 - b / every] = cur;
            }
            return res;
        } catch (const SolveError&) {
            if (attempt >= opt.max_dt_halvings) throw;
            dt_req /= 2.0;
        }
    }
}

std::vector<QuoteMatrix> quote_surface(const SolveResult& result, double t) {
    const int s = result.slice_index(t);
    std::vector<QuoteMatrix> out(result.lattice.size());
    for (int idx = 0; idx < result.lattice.size(); ++idx)
        out[idx] = result.quotes_at(s, result.lattice.state(idx));
    return out;
}

double reservation_utility(const SolveResult& none_result, int maker, InventoryPair q0) {
    if (none_result.regime != Regime::none)
        throw std::invalid_argument("reservation_utility needs a regime-none solve");
    const double w0 = none_result.slices.front()[maker][none_result.lattice.index(q0)];
    return -std::exp(-none_result.params.gamma[maker] * w0);
}

Grid exchange_fee_value(const SolveResult& env, int m, bool parallel) {
    const ModelParams& p = env.params;
    const Lattice& lat = env.lattice;
    const int n = lat.size();
    Grid cur(n, -1.0), next(n, 0.0);
    const double fee_factor = std::exp(-p.eta[m] * p.c[m]);

    for (int s = env.n_slices() - 1; s >= 1; --s) {
        // Quotes frozen at slice s over [t_{s-1}, t_s); sub-step as the
        // stability bound requires.
        std::vector<QuoteMatrix> quotes(n);
        double max_lambda = 0.0;
        for (int idx = 0; idx < n; ++idx) {
            const InventoryPair q = lat.state(idx);
            quotes[idx] = env.quotes_at(s, q);
            max_lambda = std::max(max_lambda, active_intensity_sum(p, quotes[idx], q));
        }
        const int sub = std::max(1, static_cast<int>(std::ceil(env.store_dt * max_lambda / 0.25)));
        const double h = env.store_dt / sub;
        for (int u = 0; u < sub; ++u) {
#pragma omp parallel for schedule(static) if (parallel)
            for (int idx = 0; idx < n; ++idx) {
                const InventoryPair q = lat.state(idx);
                double flow = 0.0;
                for (Side k : both_sides)
                    for (int i = 0; i < 2; ++i) {
                        if (side_blocked(p, k, q[i])) continue;
                        const int jdx = lat.index(Lattice::jump(q, k, i));
                        for (int j = 0; j < 2; ++j) {
                            const double lam = intensity(p, j, quotes[idx].at(k, i));
                            const double mult = (j == m) ? fee_factor : 1.0;
                            flow += lam * (mult * cur[jdx] - cur[idx]);
                        }
                    }
                next[idx] = cur[idx] + h * flow;
            }
            std::swap(cur, next);
        }
    }
    return cur;
}

} // namespace slob
