// slob: two-exchange shared-order-book engine.
// Subcommands: solve, simulate, figures, check. Configuration comes from a
// flat key=value file (--config); any flag of the form --key value overrides
// the file. Exit code 0 only when every requested check passes.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "slob/csv.hpp"
#include "slob/equilibrium.hpp"
#include "slob/figures.hpp"
#include "slob/pde.hpp"
#include "slob/simulate.hpp"

using namespace slob;

namespace {

SolveResult run_solve(const RunConfig& cfg, Regime regime, bool verbose) {
    SolveOptions opt;
    opt.dt = cfg.dt;
    opt.store_every = 1;
    opt.max_dt_halvings = 6;
    SolveResult res = solve_regime(cfg.params, regime, opt);
    if (verbose && res.dt_halvings > 0)
        std::cerr << "warning: dt " << cfg.dt << " unstable, halved " << res.dt_halvings
                  << "x to " << res.dt << "\n";
    return res;
}

int cmd_solve(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const SolveResult res = run_solve(cfg, cfg.regime, true);
    const std::string path =
        (fs::path(cfg.out_dir) / ("solve_" + std::string(regime_name(cfg.regime)) + ".csv"))
            .string();
    write_solve_csv(path, res, cfg.snapshot_times());
    const InventoryPair q0{cfg.q0_0, cfg.q0_1};
    const int idx = res.lattice.index(q0);
    std::cout << "regime " << regime_name(cfg.regime) << ": dt=" << res.dt
              << " v0(0,q0)=" << fmt_num(res.slices.front()[0][idx])
              << " v1(0,q0)=" << fmt_num(res.slices.front()[1][idx]) << "\n";
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_simulate(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const SolveResult res = run_solve(cfg, cfg.regime, true);

    SimOptions sopt;
    sopt.sim_dt = cfg.sim_dt;
    sopt.seed = cfg.seed;
    sopt.q0 = {cfg.q0_0, cfg.q0_1};
    const McRun run = mc_run(res, sopt, cfg.paths);

    const InventoryPair q0 = sopt.q0;
    const int idx = res.lattice.index(q0);
    std::cout << "{\n  \"regime\": \"" << regime_name(cfg.regime) << "\",\n  \"paths\": "
              << cfg.paths << ",\n  \"seed\": " << cfg.seed << ",\n";
    bool all_ok = true;
    for (int m = 0; m < 2; ++m) {
        const bool contracted = exchange_contracts(cfg.regime, m);
        const McEstimate mm = mm_utility(run, res, m, contracted);
        const McEstimate ex = exchange_utility(run, res, m);
        std::cout << "  \"maker" << m << "_utility\": {\"mean\": " << fmt_num(mm.mean)
                  << ", \"se\": " << fmt_num(mm.std_error) << "},\n";
        std::cout << "  \"exchange" << m << "_utility\": {\"mean\": " << fmt_num(ex.mean)
                  << ", \"se\": " << fmt_num(ex.std_error) << "},\n";
        // PDE cross-checks where the solved grids pin the value
        if (contracted) {
            const double ref = res.slices.front()[m][idx];
            const bool ok = std::abs(ex.mean - ref) <= 3.0 * ex.std_error;
            all_ok = all_ok && ok;
            std::cout << "  \"exchange" << m << "_pde_ref\": " << fmt_num(ref)
                      << ",\n  \"exchange" << m << "_consistent\": " << (ok ? "true" : "false")
                      << ",\n";
            const bool mok = std::abs(mm.mean - (-1.0)) <= 3.0 * mm.std_error;
            all_ok = all_ok && mok;
            std::cout << "  \"maker" << m << "_at_reservation\": " << (mok ? "true" : "false")
                      << ",\n";
        } else if (cfg.regime == Regime::none) {
            const double ref = -std::exp(-cfg.params.gamma[m] * res.slices.front()[m][idx]);
            const bool ok = std::abs(mm.mean - ref) <= 3.0 * mm.std_error;
            all_ok = all_ok && ok;
            std::cout << "  \"maker" << m << "_pde_ref\": " << fmt_num(ref)
                      << ",\n  \"maker" << m << "_consistent\": " << (ok ? "true" : "false")
                      << ",\n";
        }
    }
    std::cout << "  \"all_consistent\": " << (all_ok ? "true" : "false") << "\n}\n";

    if (cfg.dump_paths) {
        PathRecord rec;
        simulate_path(res, sopt, 0, &rec);
        std::vector<std::string> header = {"t",  "S",  "q0",    "q1",    "pl0",  "pl1",
                                           "Y0", "Y1", "fees0", "fees1"};
        for (Side k : both_sides)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    header.push_back(std::string("n_") + side_name(k) + std::to_string(i) +
                                     std::to_string(j));
        std::vector<std::vector<std::string>> rows;
        const size_t stride = std::max<size_t>(1, rec.t.size() / 2000);
        for (size_t s = 0; s < rec.t.size(); s += stride) {
            std::vector<std::string> row = {
                fmt_num(rec.t[s]),  fmt_num(rec.S[s]),     std::to_string(rec.q0[s]),
                std::to_string(rec.q1[s]), fmt_num(rec.pl0[s]), fmt_num(rec.pl1[s]),
                fmt_num(rec.Y0[s]), fmt_num(rec.Y1[s]),    fmt_num(rec.fees0[s]),
                fmt_num(rec.fees1[s])};
            for (int k = 0; k < 2; ++k)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) row.push_back(std::to_string(rec.n[k][i][j][s]));
            rows.push_back(std::move(row));
        }
        const std::string path = (fs::path(cfg.out_dir) / "path0.csv").string();
        write_csv(path, header, rows);
        std::cout << "wrote " << path << "\n";
    }
    return all_ok ? 0 : 1;
}

int cmd_figures(const RunConfig& cfg) {
    const auto files = run_figures(cfg);
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
    return 0;
}

// Fast property sweep: quote fixed-point spot checks, PDE symmetries and
// sign invariants at a coarse dt. The full acceptance suite lives in the
// test tree (ctest -R acceptance).
int cmd_check(const RunConfig& cfg) {
    const ModelParams& p = cfg.params;
    int failures = 0;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS" : "FAIL") << " " << name;
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << "\n";
        if (!ok) ++failures;
    };

    {
        std::mt19937_64 gen(cfg.seed);
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        std::uniform_int_distribution<int> qd(-p.q_bar, p.q_bar);
        double worst = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            RateVector z0, z1;
            for (Side k : both_sides)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) {
                        z0.at(k, i, j) = u(gen);
                        z1.at(k, i, j) = u(gen);
                    }
            const InventoryPair q{qd(gen), qd(gen)};
            const QuoteMatrix fast = delta_fixed_point(p, z0, z1, q);
            const QuoteMatrix brute = nash_bruteforce(p, z0, z1, q, 1e-4);
            for (Side k : both_sides)
                for (int i = 0; i < 2; ++i)
                    worst = std::max(worst, std::abs(fast.at(k, i) - brute.at(k, i)));
        }
        report("fixed-point-vs-bruteforce", worst <= 1e-4 + 1e-12,
               "max deviation " + fmt_num(worst));
    }

    SolveOptions opt;
    opt.dt = std::max(cfg.dt, 2e-4);
    opt.store_every = 10;
    opt.max_dt_halvings = 4;
    for (Regime r : {Regime::none, Regime::one, Regime::both}) {
        try {
            const SolveResult res = solve_regime(p, r, opt);
            const Lattice& lat = res.lattice;
            double mirror = 0.0;
            for (int idx = 0; idx < lat.size(); ++idx) {
                const InventoryPair q = lat.state(idx);
                for (int m = 0; m < 2; ++m)
                    mirror = std::max(mirror,
                                      std::abs(res.slices.front()[m][idx] -
                                               res.slices.front()[m][lat.index({-q.q0, -q.q1})]));
            }
            report(std::string("mirror-symmetry-") + regime_name(r), mirror <= 1e-8,
                   "max asymmetry " + fmt_num(mirror));
        } catch (const std::exception& e) {
            report(std::string("solve-") + regime_name(r), false, e.what());
        }
    }
    std::cout << (failures == 0 ? "all checks passed\n" : "some checks FAILED\n");
    return failures > 0 ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-exchange shared limit order book engine"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value configuration file");
        sub->add_option("--set", overrides, "override: key=value (repeatable)")
            ->take_all();
        sub->add_option_function<std::string>(
            "--regime", [&](const std::string& v) { overrides.push_back("regime=" + v); },
            "none|one|both");
        sub->add_option_function<double>(
            "--dt", [&](double v) { overrides.push_back("dt=" + fmt_num(v)); }, "solver step");
        sub->add_option_function<double>(
            "--sim-dt", [&](double v) { overrides.push_back("sim_dt=" + fmt_num(v)); },
            "simulation step");
        sub->add_option_function<long>(
            "--paths", [&](long v) { overrides.push_back("paths=" + std::to_string(v)); },
            "Monte Carlo paths");
        sub->add_option_function<unsigned long long>(
            "--seed", [&](unsigned long long v) { overrides.push_back("seed=" + std::to_string(v)); },
            "RNG seed");
        sub->add_option_function<std::string>(
            "--out", [&](const std::string& v) { overrides.push_back("out_dir=" + v); },
            "output directory");
        sub->add_option_function<std::string>(
            "--figure", [&](const std::string& v) { overrides.push_back("figure=" + v); },
            "figure panel or 'all'");
        sub->add_flag_function(
            "--ce", [&](int64_t) { overrides.push_back("ce=1"); },
            "report certainty equivalents");
        sub->add_flag_function(
            "--dump-paths", [&](int64_t) { overrides.push_back("dump_paths=1"); },
            "write a per-path CSV from `simulate`");
    };

    CLI::App* solve = app.add_subcommand("solve", "solve the regime's backward system");
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo run with PDE cross-checks");
    CLI::App* figures = app.add_subcommand("figures", "emit figure CSV + SVG panels");
    CLI::App* check = app.add_subcommand("check", "run the fast property suite");
    for (CLI::App* sub : {solve, simulate, figures, check}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("override must be key=value: " + kv);
            apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        cfg.validate();

        if (solve->parsed()) return cmd_solve(cfg);
        if (simulate->parsed()) return cmd_simulate(cfg);
        if (figures->parsed()) return cmd_figures(cfg);
        if (check->parsed()) return cmd_check(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
