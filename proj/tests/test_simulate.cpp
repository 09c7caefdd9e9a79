#include "doctest.h"

#include <cmath>

#include "slob/pde.hpp"
#include "slob/simulate.hpp"

using namespace slob;

namespace {

// Regime-none environment with identically zero value grids: every rate is
// zero, every interior quote sits at the fundamental spread for all t, so
// each event channel is a constant-rate process.
SolveResult flat_environment(const ModelParams& p) {
    SolveResult res;
    res.regime = Regime::none;
    res.params = p;
    res.lattice = Lattice(p.q_bar);
    res.dt = p.T / 2;
    res.store_dt = p.T / 2;
    res.slices.assign(3, {Grid(res.lattice.size(), 0.0), Grid(res.lattice.size(), 0.0)});
    return res;
}

SolveResult quick_solve(const ModelParams& p, Regime r, double dt = 2e-4) {
    SolveOptions opt;
    opt.dt = dt;
    opt.store_every = 1;
    return solve_regime(p, r, opt);
}

} // namespace

TEST_CASE("seeded determinism and batch consistency") {
    ModelParams p = ModelParams::baseline();
    p.T = 0.05;
    const SolveResult res = quick_solve(p, Regime::none);
    SimOptions opt;
    opt.sim_dt = 2e-4;
    opt.seed = 42;
    opt.checkpoints = {0.0, 0.025, 0.05};

    const McRun run_par = mc_run(res, opt, 64, true);
    const McRun run_ser = mc_run(res, opt, 64, false);
    for (int i = 0; i < 64; ++i) {
        const PathSummary single = simulate_path(res, opt, i);
        for (const McRun* run : {&run_par, &run_ser}) {
            const PathSummary& b = run->paths[i];
            CHECK(single.pl[0] == b.pl[0]);
            CHECK(single.pl[1] == b.pl[1]);
            CHECK(single.Y[0] == b.Y[0]);
            CHECK(single.Y[1] == b.Y[1]);
            CHECK(single.fees[0] == b.fees[0]);
            for (int k = 0; k < 2; ++k)
                for (int ii = 0; ii < 2; ++ii)
                    for (int j = 0; j < 2; ++j) CHECK(single.counts[k][ii][j] == b.counts[k][ii][j]);
            for (int m = 0; m < 2; ++m)
                for (size_t ci = 0; ci < single.mart[m].size(); ++ci)
                    CHECK(single.mart[m][ci] == b.mart[m][ci]);
        }
    }

    SUBCASE("a different seed moves the draws") {
        SimOptions opt2 = opt;
        opt2.seed = 43;
        CHECK(simulate_path(res, opt2, 0).pl[0] != simulate_path(res, opt, 0).pl[0]);
    }
}

TEST_CASE("inventory cap and gating") {
    ModelParams p = ModelParams::baseline();
    p.T = 0.25;
    const SolveResult res = quick_solve(p, Regime::none);
    SimOptions opt;
    opt.sim_dt = 2e-4;
    opt.seed = 7;
    opt.q0 = {p.q_bar, p.q_bar};

    for (int path = 0; path < 16; ++path) {
        PathRecord rec;
        simulate_path(res, opt, path, &rec);
        long first_bid = -1, first_ask = -1;
        for (size_t s = 0; s < rec.t.size(); ++s) {
            CHECK(std::abs(rec.q0[s]) <= p.q_bar);
            CHECK(std::abs(rec.q1[s]) <= p.q_bar);
            const long bid0 = rec.n[0][0][0][s] + rec.n[0][0][1][s];
            const long ask0 = rec.n[1][0][0][s] + rec.n[1][0][1][s];
            if (first_bid < 0 && bid0 > 0) first_bid = static_cast<long>(s);
            if (first_ask < 0 && ask0 > 0) first_ask = static_cast<long>(s);
        }
        // starting long at the cap, a buy can only happen after a sell
        if (first_bid >= 0) {
            REQUIRE(first_ask >= 0);
            CHECK(first_ask < first_bid);
        }
    }
}

TEST_CASE("fee accounting counts venue fills of both makers") {
    ModelParams p = ModelParams::baseline();
    p.T = 0.1;
    const SolveResult res = quick_solve(p, Regime::none);
    SimOptions opt;
    opt.sim_dt = 2e-4;
    opt.seed = 5;
    const McRun run = mc_run(res, opt, 32);
    for (const PathSummary& s : run.paths)
        for (int m = 0; m < 2; ++m) {
            long venue_fills = 0;
            for (int k = 0; k < 2; ++k)
                for (int i = 0; i < 2; ++i) venue_fills += s.counts[k][i][m];
            CHECK(s.fees[m] == doctest::Approx(p.c[m] * venue_fills).epsilon(1e-12));
        }
}

TEST_CASE("constant-rate channels look Poisson") {
    ModelParams p = ModelParams::baseline();
    p.q_bar = 60; // cap never binds over one day at ~37 fills/channel
    const SolveResult res = flat_environment(p);
    SimOptions opt;
    opt.sim_dt = 1e-4;
    opt.seed = 11;
    const long n = 1500;
    const McRun run = mc_run(res, opt, n);

    const double lam = intensity(p, 0, 0.14988761237359488) * p.T;
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double mean = 0.0, m2 = 0.0;
                for (const PathSummary& s : run.paths) mean += s.counts[k][i][j];
                mean /= n;
                for (const PathSummary& s : run.paths)
                    m2 += (s.counts[k][i][j] - mean) * (s.counts[k][i][j] - mean);
                const double var = m2 / (n - 1);
                // thinning bias is O(lambda^2 dt / 2) = 0.07 fills here
                CHECK(std::abs(mean - lam) <= 4.0 * std::sqrt(lam / n) + 0.09);
                CHECK(var / mean == doctest::Approx(1.0).epsilon(0.12));
            }

    SUBCASE("pooled count histogram matches the exact pmf coarsely") {
        // cells: below/inside/above one standard deviation of the mean
        const double sd = std::sqrt(lam);
        long lo = 0, mid = 0, hi = 0;
        for (const PathSummary& s : run.paths) {
            const double x = s.counts[0][0][0];
            if (x < lam - sd) ++lo;
            else if (x > lam + sd) ++hi;
            else ++mid;
        }
        // exact Poisson cell masses
        double p_lo = 0.0, p_mid = 0.0;
        double pk = std::exp(-lam);
        for (int kk = 0; kk <= 200; ++kk) {
            if (kk < lam - sd) p_lo += pk;
            else if (kk <= lam + sd) p_mid += pk;
            pk *= lam / (kk + 1);
        }
        CHECK(std::abs(lo / double(n) - p_lo) <= 4.0 * std::sqrt(p_lo * (1 - p_lo) / n) + 0.01);
        CHECK(std::abs(mid / double(n) - p_mid) <= 4.0 * std::sqrt(p_mid * (1 - p_mid) / n) + 0.01);
    }
}

TEST_CASE("maker utility against the no-incentive grids") {
    ModelParams p = ModelParams::baseline();
    p.T = 0.1;
    const SolveResult res = quick_solve(p, Regime::none, 1e-4);
    SimOptions opt;
    opt.sim_dt = 1e-4;
    opt.seed = 3;
    const McRun run = mc_run(res, opt, 4000);
    for (int maker = 0; maker < 2; ++maker) {
        const McEstimate est = mm_utility(run, res, maker, false);
        const double ref = reservation_utility(res, maker, {0, 0});
        CHECK(std::abs(est.mean - ref) <= 4.0 * est.std_error);
    }
}

TEST_CASE("symmetric two-contract estimates agree across exchanges") {
    ModelParams p = ModelParams::baseline();
    p.T = 0.1;
    const SolveResult res = quick_solve(p, Regime::both, 1e-4);
    SimOptions opt;
    opt.sim_dt = 1e-4;
    opt.seed = 31;
    const McRun run = mc_run(res, opt, 3000);
    const McEstimate e0 = exchange_utility(run, res, 0);
    const McEstimate e1 = exchange_utility(run, res, 1);
    const double joint = std::sqrt(e0.std_error * e0.std_error + e1.std_error * e1.std_error);
    CHECK(std::abs(e0.mean - e1.mean) <= 4.0 * joint);
    // and both against the solved grids
    const int c = res.lattice.index({0, 0});
    CHECK(std::abs(e0.mean - res.slices.front()[0][c]) <= 4.0 * e0.std_error);
    CHECK(std::abs(e1.mean - res.slices.front()[1][c]) <= 4.0 * e1.std_error);
}

TEST_CASE("martingale checkpoints are flat under optimal quotes") {
    ModelParams p = ModelParams::baseline();
    p.T = 0.2;
    const SolveResult res = quick_solve(p, Regime::none, 1e-4);
    SimOptions opt;
    opt.sim_dt = 1e-4;
    opt.seed = 19;
    opt.checkpoints = {0.0, 0.05, 0.1, 0.15, 0.2};
    const McRun run = mc_run(res, opt, 3000);
    const auto marts = martingale_check(run, 0);
    REQUIRE(marts.size() == 5);
    CHECK(marts[0].mean == -1.0);
    for (const McEstimate& e : marts) CHECK(std::abs(e.mean + 1.0) <= 4.0 * e.std_error + 1e-6);

    SUBCASE("perturbed quotes drift down monotonically") {
        SimOptions bad = opt;
        bad.quote_scale = 1.25;
        const auto drift = martingale_check(mc_run(res, bad, 3000), 0);
        for (size_t i = 1; i < drift.size(); ++i) CHECK(drift[i].mean < drift[i - 1].mean);
        CHECK(drift.back().mean < -1.0 - 3.0 * drift.back().std_error);
    }
}

TEST_CASE("certainty equivalent transform") {
    McEstimate est;
    est.mean = -1.0;
    est.std_error = 0.01;
    est.paths = 100;
    CHECK(certainty_equivalent(est, 0.5).value == 0.0);
    est.mean = -std::exp(-0.5);
    CHECK(certainty_equivalent(est, 0.5).value == doctest::Approx(1.0).epsilon(1e-13));
    est.mean = 0.1;
    CHECK_THROWS_AS(certainty_equivalent(est, 0.5), std::invalid_argument);

    SUBCASE("standard error shrinks like one over root paths") {
        ModelParams p = ModelParams::baseline();
        p.T = 0.05;
        const SolveResult res = quick_solve(p, Regime::none);
        SimOptions opt;
        opt.sim_dt = 2e-4;
        opt.seed = 23;
        const McEstimate small = mm_utility(mc_run(res, opt, 500), res, 0, false);
        const McEstimate big = mm_utility(mc_run(res, opt, 8000), res, 0, false);
        const double ratio = small.std_error / big.std_error;
        CHECK(ratio == doctest::Approx(4.0).epsilon(0.25));
        const auto ce_small = certainty_equivalent(small, p.gamma[0]);
        const auto ce_big = certainty_equivalent(big, p.gamma[0]);
        CHECK(ce_small.std_error / ce_big.std_error == doctest::Approx(4.0).epsilon(0.3));
    }
}

TEST_CASE("input validation") {
    ModelParams p = ModelParams::baseline();
    p.T = 0.01;
    const SolveResult res = quick_solve(p, Regime::none);
    SimOptions opt;
    CHECK_THROWS_AS(mc_run(res, opt, 0), std::invalid_argument);
    opt.sim_dt = -1.0;
    CHECK_THROWS_AS(simulate_path(res, opt, 0), std::invalid_argument);
    opt.sim_dt = 0.5; // thinning invalid at ~100 events/channel/day
    CHECK_THROWS_AS(simulate_path(res, opt, 0), std::invalid_argument);
}
