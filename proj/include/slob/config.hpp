#pragma once

#include <map>
#include <string>
#include <vector>

#include "slob/params.hpp"
#include "slob/types.hpp"

namespace slob {

// Run configuration: model parameter overrides plus solver / simulation /
// figure settings. Populated from a flat key=value file ('#' comments), then
// from command-line overrides; validated before any run.
struct RunConfig {
    ModelParams params;
    Regime regime = Regime::none;
    double dt = 1e-4;
    double sim_dt = 1e-4;
    long paths = 10000;
    unsigned long long seed = 1;
    int q0_0 = 0;
    int q0_1 = 0;
    std::vector<double> snapshots; // defaults to {0, T/4, T/2, 3T/4, T}
    std::string out_dir = "out";
    std::string figure = "all"; // fig2a,fig2b,fig2c,fig2d,fig3a,fig3b,fig4a,fig4b
    bool report_ce = false;     // report certainty equivalents instead of utilities
    bool dump_paths = false;    // per-path CSV dump from `simulate`
    // sweep grids for fig2d / fig3 (inclusive endpoints, `count` points)
    double gamma_sweep_lo = 0.005, gamma_sweep_hi = 0.03;
    int gamma_sweep_count = 6;
    double gamma0_sweep_lo = 0.005, gamma0_sweep_hi = 0.03;
    int gamma0_sweep_count = 6;

    std::vector<double> snapshot_times() const;
    void validate() const;
};

// Parse `key = value` lines; unknown keys are an error (catches typos).
RunConfig load_config(const std::string& path);

// Apply one key=value override (same keys as the file).
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

// Evenly spaced sweep grid, inclusive of both endpoints.
std::vector<double> sweep_grid(double lo, double hi, int count);

} // namespace slob
