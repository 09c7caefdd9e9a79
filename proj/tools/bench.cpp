// Timing comparison of the serial reference kernels against the OpenMP ones:
// backward Euler steps at several lattice sizes, and a Monte Carlo batch.

#include <chrono>
#include <cstdio>

#include "slob/pde.hpp"
#include "slob/simulate.hpp"

using namespace slob;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double time_steps(const ModelParams& p, Regime regime, bool parallel, int n_steps) {
    const Lattice lat(p.q_bar);
    std::array<Grid, 2> cur, next;
    const double term0 = (regime == Regime::none) ? 0.0 : -1.0;
    const double term1 = (regime == Regime::both) ? -1.0 : 0.0;
    cur[0].assign(lat.size(), term0);
    cur[1].assign(lat.size(), term1);
    next = cur;
    const double dt = 1e-4;
    const auto t0 = Clock::now();
    for (int b = 0; b < n_steps; ++b) {
        step_regime(p, regime, lat, cur, next, p.T - b * dt, dt, parallel);
        std::swap(cur, next);
    }
    return seconds_since(t0);
}

} // namespace

int main() {
    std::printf("%-28s %10s %10s %8s\n", "kernel", "serial(s)", "openmp(s)", "speedup");

    for (int q_bar : {5, 15, 30}) {
        ModelParams p;
        p.q_bar = q_bar;
        const int n_steps = q_bar <= 5 ? 400 : (q_bar <= 15 ? 120 : 40);
        for (Regime r : {Regime::none, Regime::both}) {
            const double ts = time_steps(p, r, false, n_steps);
            const double tp = time_steps(p, r, true, n_steps);
            char name[64];
            std::snprintf(name, sizeof(name), "euler_%s_qbar%d x%d", regime_name(r), q_bar,
                          n_steps);
            std::printf("%-28s %10.3f %10.3f %8.2f\n", name, ts, tp, ts / tp);
        }
    }

    {
        ModelParams p;
        SolveOptions opt;
        opt.dt = 2e-4;
        opt.store_every = 5;
        const SolveResult res = solve_regime(p, Regime::none, opt);
        SimOptions sopt;
        sopt.sim_dt = 2e-4;
        sopt.seed = 7;
        const long paths = 2000;
        auto t0 = Clock::now();
        mc_run(res, sopt, paths, false);
        const double ts = seconds_since(t0);
        t0 = Clock::now();
        mc_run(res, sopt, paths, true);
        const double tp = seconds_since(t0);
        std::printf("%-28s %10.3f %10.3f %8.2f\n", "mc_none_2000paths", ts, tp, ts / tp);
    }
    return 0;
}
