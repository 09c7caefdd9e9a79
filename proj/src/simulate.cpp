#include "slob/simulate.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "slob/equilibrium.hpp"
#include "slob/intensity.hpp"

namespace slob {

namespace {

// Everything the path update needs at one (slice, state): equilibrium
// rates/quotes and the contract drift Hamiltonians.
struct StateTable {
    RateVector z0, z1;
    QuoteMatrix quotes;
    double H[2];
};

StateTable make_state_table(const SolveResult& res, int slice, InventoryPair q) {
    StateTable st;
    const StateRates z = res.rates_at(slice, q);
    st.z0 = z.z0;
    st.z1 = z.z1;
    st.quotes = delta_fixed_point(res.params, z.z0, z.z1, q);
    st.H[0] = hamiltonian_h(res.params, 0, st.quotes, st.z0, q);
    st.H[1] = hamiltonian_h(res.params, 1, st.quotes, st.z1, q);
    return st;
}

QuoteMatrix played_quotes(const ModelParams& p, const QuoteMatrix& eq, InventoryPair q,
                          double scale, int maker) {
    if (scale == 1.0) return eq;
    QuoteMatrix out = eq;
    for (Side k : both_sides)
        if (!side_blocked(p, k, q[maker]))
            out.at(k, maker) = clamp_quote(p, eq.at(k, maker) * scale);
    return out;
}

struct PathCursor {
    InventoryPair q;
    double S = 0.0;
    double pl[2] = {0, 0};
    double Y[2] = {0, 0};
    double fees[2] = {0, 0};
    long counts[2][2][2] = {};
    std::vector<double> mart[2];
};

// One thinning step; every RNG draw is a pure function of (seed, path, step,
// stream), so batched and single-path runs agree bit for bit.
void advance(const ModelParams& p, const SimOptions& opt, const CounterRng& rng, uint64_t path,
             uint64_t step, const StateTable& st, PathCursor& c) {
    const double dt = opt.sim_dt;
    const QuoteMatrix played =
        played_quotes(p, st.quotes, c.q, opt.quote_scale, opt.perturb_maker);

    const double dS = p.sigma * std::sqrt(dt) * rng.normal(path, step, rng_stream_price);

    // Inventory mark and contract drift use the step-start state.
    for (int i = 0; i < 2; ++i) c.pl[i] += c.q[i] * dS;
    for (int m = 0; m < 2; ++m) {
        const double zS = (m == 0) ? st.z0.zS : st.z1.zS;
        const double a = zS + c.q[m];
        c.Y[m] += zS * dS + (p.gamma[m] * p.sigma * p.sigma / 2.0 * a * a - st.H[m]) * dt;
    }
    c.S += dS;

    uint32_t stream = rng_stream_events;
    double total_intensity = 0.0;
    for (Side k : both_sides)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j, ++stream) {
                const double u = rng.u01(path, step, stream);
                // Gate re-checked against the running inventory so a same-step
                // earlier fill cannot push past the cap.
                if (side_blocked(p, k, c.q[i])) continue;
                const double lam = intensity(p, j, played.at(k, i));
                total_intensity += lam;
                if (u >= lam * dt) continue;
                const double cap_earn =
                    played.at(k, i) - p.beta * (played.at(k, i) - played.best(k));
                // a fill never earns less than the best quote
                if (cap_earn < played.best(k) - 1e-12)
                    throw std::logic_error("simulate_path: spread capture below best quote");
                c.pl[i] += cap_earn;
                c.fees[j] += p.c[j];
                c.counts[static_cast<int>(k)][i][j]++;
                for (int m = 0; m < 2; ++m) c.Y[m] += (m == 0 ? st.z0 : st.z1).at(k, i, j);
                if (i == 0) c.q.q0 += phi(k);
                else c.q.q1 += phi(k);
                if (std::abs(c.q[i]) > p.q_bar)
                    throw std::logic_error("simulate_path: inventory cap violated");
            }
    // thinning validity: at most one event per channel per step needs
    // max total intensity x sim_dt <= 0.1
    if (total_intensity * dt > 0.1)
        throw std::invalid_argument("simulate: sim_dt too large for the realized intensities");
}

long step_count(const ModelParams& p, const SimOptions& opt) {
    if (opt.sim_dt <= 0) throw std::invalid_argument("simulate: sim_dt must be > 0");
    if (opt.sim_dt * 8.0 * intensity(p, 0, 0.0) > 0.8)
        throw std::invalid_argument("simulate: sim_dt too large for Bernoulli thinning");
    return std::lround(std::ceil(p.T / opt.sim_dt - 1e-12));
}

std::vector<long> checkpoint_steps(const SimOptions& opt, long steps) {
    std::vector<long> out;
    for (double tc : opt.checkpoints)
        out.push_back(std::clamp(std::lround(tc / opt.sim_dt), 0L, steps));
    return out;
}

void maybe_checkpoint(const ModelParams& p, const std::vector<long>& check_steps, long step_idx,
                      PathCursor& c) {
    for (long cs : check_steps)
        if (cs == step_idx)
            for (int i = 0; i < 2; ++i)
                c.mart[i].push_back(-std::exp(-p.gamma[i] * (c.pl[i] + c.Y[i])));
}

void record_step(PathRecord& rec, double t, const PathCursor& c) {
    rec.t.push_back(t);
    rec.S.push_back(c.S);
    rec.q0.push_back(c.q.q0);
    rec.q1.push_back(c.q.q1);
    rec.pl0.push_back(c.pl[0]);
    rec.pl1.push_back(c.pl[1]);
    rec.Y0.push_back(c.Y[0]);
    rec.Y1.push_back(c.Y[1]);
    rec.fees0.push_back(c.fees[0]);
    rec.fees1.push_back(c.fees[1]);
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) rec.n[k][i][j].push_back(c.counts[k][i][j]);
}

PathSummary finish(const PathCursor& c) {
    PathSummary out;
    for (int i = 0; i < 2; ++i) {
        out.pl[i] = c.pl[i];
        out.Y[i] = c.Y[i];
        out.fees[i] = c.fees[i];
        out.mart[i] = c.mart[i];
    }
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) out.counts[k][i][j] = c.counts[k][i][j];
    return out;
}

} // namespace

PathSummary simulate_path(const SolveResult& result, const SimOptions& opt, uint64_t path_index,
                          PathRecord* record) {
    const ModelParams& p = result.params;
    const long steps = step_count(p, opt);
    const std::vector<long> check_steps = checkpoint_steps(opt, steps);

    CounterRng rng{opt.seed};
    PathCursor c;
    c.q = opt.q0;
    c.S = p.S0;

    if (record) record_step(*record, 0.0, c);
    maybe_checkpoint(p, check_steps, 0, c);
    for (long s = 0; s < steps; ++s) {
        const int slice = result.slice_index(s * opt.sim_dt);
        const StateTable st = make_state_table(result, slice, c.q);
        advance(p, opt, rng, path_index, static_cast<uint64_t>(s), st, c);
        if (record) record_step(*record, (s + 1) * opt.sim_dt, c);
        maybe_checkpoint(p, check_steps, s + 1, c);
    }
    return finish(c);
}

McRun mc_run(const SolveResult& result, const SimOptions& opt, long n_paths, bool parallel) {
    if (n_paths <= 0) throw std::invalid_argument("mc_run: need at least one path");
    const ModelParams& p = result.params;
    const long steps = step_count(p, opt);
    const std::vector<long> check_steps = checkpoint_steps(opt, steps);
    const CounterRng rng{opt.seed};
    const int n_states = result.lattice.size();

    std::vector<PathCursor> cursors(n_paths);
    for (long i = 0; i < n_paths; ++i) {
        cursors[i].q = opt.q0;
        cursors[i].S = p.S0;
        maybe_checkpoint(p, check_steps, 0, cursors[i]);
    }

    // Time-outer lockstep: every path at step s reads the same stored slice,
    // so the per-state tables are built once per slice and shared. Errors
    // are collected and rethrown outside the parallel regions.
    std::vector<StateTable> table(n_states);
    int cached_slice = -1;
    std::string error;
    std::mutex error_mu;
    auto record_error = [&](const char* what) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (error.empty()) error = what;
    };
    for (long s = 0; s < steps && error.empty(); ++s) {
        const int slice = result.slice_index(s * opt.sim_dt);
        if (slice != cached_slice) {
#pragma omp parallel for schedule(static) if (parallel)
            for (int idx = 0; idx < n_states; ++idx) {
                try {
                    table[idx] = make_state_table(result, slice, result.lattice.state(idx));
                } catch (const std::exception& e) {
                    record_error(e.what());
                }
            }
            cached_slice = slice;
        }
        if (!error.empty()) break;
#pragma omp parallel for schedule(static) if (parallel)
        for (long i = 0; i < n_paths; ++i) {
            try {
                advance(p, opt, rng, static_cast<uint64_t>(i), static_cast<uint64_t>(s),
                        table[result.lattice.index(cursors[i].q)], cursors[i]);
                maybe_checkpoint(p, check_steps, s + 1, cursors[i]);
            } catch (const std::exception& e) {
                record_error(e.what());
            }
        }
    }
    if (!error.empty()) throw std::runtime_error("mc_run: " + error);

    McRun run;
    run.opt = opt;
    run.paths.resize(n_paths);
    for (long i = 0; i < n_paths; ++i) run.paths[i] = finish(cursors[i]);
    return run;
}

namespace {

McEstimate estimate(const std::vector<double>& xs, uint64_t seed) {
    McEstimate e;
    e.paths = static_cast<long>(xs.size());
    e.seed = seed;
    double sum = 0.0;
    for (double x : xs) sum += x;
    e.mean = sum / e.paths;
    double ss = 0.0;
    for (double x : xs) ss += (x - e.mean) * (x - e.mean);
    const double var = e.paths > 1 ? ss / (e.paths - 1) : 0.0;
    e.std_error = std::sqrt(var / e.paths);
    return e;
}

} // namespace

McEstimate mm_utility(const McRun& run, const SolveResult& result, int maker, bool with_contract) {
    const double g = result.params.gamma[maker];
    std::vector<double> xs;
    xs.reserve(run.paths.size());
    for (const PathSummary& s : run.paths) {
        const double xi = with_contract ? s.Y[maker] : 0.0;
        xs.push_back(-std::exp(-g * (s.pl[maker] + xi)));
    }
    return estimate(xs, run.opt.seed);
}

McEstimate exchange_utility(const McRun& run, const SolveResult& result, int m) {
    const double e = result.params.eta[m];
    std::vector<double> xs;
    xs.reserve(run.paths.size());
    for (const PathSummary& s : run.paths) xs.push_back(-std::exp(-e * (s.fees[m] - s.Y[m])));
    return estimate(xs, run.opt.seed);
}

McEstimate exchange_fee_utility(const McRun& run, const SolveResult& result, int m) {
    const double e = result.params.eta[m];
    std::vector<double> xs;
    xs.reserve(run.paths.size());
    for (const PathSummary& s : run.paths) xs.push_back(-std::exp(-e * s.fees[m]));
    return estimate(xs, run.opt.seed);
}

CertaintyEquivalent certainty_equivalent(const McEstimate& est, double risk_aversion) {
    if (!(est.mean < 0.0))
        throw std::invalid_argument("certainty_equivalent: utility mean must be negative");
    CertaintyEquivalent ce;
    ce.value = -std::log(-est.mean) / risk_aversion;
    ce.std_error = est.std_error / (risk_aversion * -est.mean);
    return ce;
}

std::vector<McEstimate> martingale_check(const McRun& run, int maker) {
    const size_t n_checks = run.paths.empty() ? 0 : run.paths.front().mart[maker].size();
    std::vector<McEstimate> out;
    for (size_t ci = 0; ci < n_checks; ++ci) {
        std::vector<double> xs;
        xs.reserve(run.paths.size());
        for (const PathSummary& s : run.paths) xs.push_back(s.mart[maker][ci]);
        out.push_back(estimate(xs, run.opt.seed));
    }
    return out;
}

} // namespace slob
