#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "slob/pde.hpp"
#include "slob/types.hpp"

namespace slob {

// Counter-based generator: every draw is a pure function of
// (seed, path, step, stream), so paths are reproducible independently of
// worker count and batching.
struct CounterRng {
    uint64_t seed = 0;

    static uint64_t mix(uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    double u01(uint64_t path, uint64_t step, uint32_t stream) const {
        uint64_t x = mix(seed ^ 0x6a09e667f3bcc909ULL);
        x = mix(x ^ (path * 0xd1342543de82ef95ULL));
        x = mix(x ^ (step * 0xaf251af3b0f025b5ULL));
        x = mix(x ^ (stream * 0x9e3779b97f4a7c15ULL));
        return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal(uint64_t path, uint64_t step, uint32_t stream) const {
        const double u1 = u01(path, step, stream);
        const double u2 = u01(path, step, stream + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
};

// RNG stream layout per step: 0,1 price normal; 8 event channels follow.
constexpr uint32_t rng_stream_price = 0;
constexpr uint32_t rng_stream_events = 2;

struct SimOptions {
    double sim_dt = 1e-4;
    uint64_t seed = 1;
    InventoryPair q0{0, 0};
    // Unilateral off-equilibrium play: maker `perturb_maker` multiplies its
    // unblocked quotes by quote_scale while the competitor stays on the
    // fixed point (the supermartingale comparison needs the deviation to be
    // one-sided).
    double quote_scale = 1.0;
    int perturb_maker = 0;
    std::vector<double> checkpoints; // times at which the utility martingales are recorded
};

// Terminal statistics of one simulated trajectory.
struct PathSummary {
    double pl[2] = {0, 0};     // maker P&L: spread capture + inventory mark
    double Y[2] = {0, 0};      // contract accumulators, Y_0 = 0
    double fees[2] = {0, 0};   // exchange fee totals c^m * (venue-m fills)
    long counts[2][2][2] = {}; // [side][maker][venue]
    std::vector<double> mart[2]; // -exp(-gamma_i (PL_t + Y_t)) at checkpoints
};

// Full trajectory record (flag-gated CSV dumps and tests).
struct PathRecord {
    std::vector<double> t, S;
    std::vector<int> q0, q1;
    std::vector<double> pl0, pl1, Y0, Y1, fees0, fees1;
    std::vector<long> n[2][2][2];
};

// Simulate one path under the regime equilibrium stored in `result`,
// Bernoulli-thinned at sim_dt per event channel (at most one event per
// channel per step). `record`, when given, is filled with the whole path.
PathSummary simulate_path(const SolveResult& result, const SimOptions& opt, uint64_t path_index,
                          PathRecord* record = nullptr);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long paths = 0;
    uint64_t seed = 0;
};

struct McRun {
    SimOptions opt;
    std::vector<PathSummary> paths;
};

// Simulate `n_paths` independent paths (OpenMP over paths; results are
// bit-identical for any thread count).
McRun mc_run(const SolveResult& result, const SimOptions& opt, long n_paths,
             bool parallel = true);

// Sample mean of -exp(-gamma_i (PL_T + xi)) with xi = Y_T when the maker's
// exchange contracts in this regime (with_contract), else 0.
McEstimate mm_utility(const McRun& run, const SolveResult& result, int maker, bool with_contract);

// Sample mean of -exp(-eta_m (fees_m - Y_T^m)), the Y_0 = 0 normalized
// exchange objective.
McEstimate exchange_utility(const McRun& run, const SolveResult& result, int m);

// Sample mean of -exp(-eta_m fees_m): fee-revenue utility of a contract-free
// exchange (pairs with exchange_fee_value).
McEstimate exchange_fee_utility(const McRun& run, const SolveResult& result, int m);

// Certainty equivalent -ln(-u)/a with a delta-method standard error.
struct CertaintyEquivalent {
    double value = 0.0;
    double std_error = 0.0;
};
CertaintyEquivalent certainty_equivalent(const McEstimate& est, double risk_aversion);

// Mean and standard error of the maker's exponential-utility process at each
// checkpoint; flat at -1 under optimal quotes, drifting under perturbed ones.
std::vector<McEstimate> martingale_check(const McRun& run, int maker);

} // namespace slob
