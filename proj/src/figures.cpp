#include "slob/figures.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>

#include "slob/csv.hpp"
#include "slob/svg.hpp"

namespace slob {

namespace {

constexpr std::array<Regime, 3> all_regimes = {Regime::none, Regime::one, Regime::both};

struct PanelTable {
    std::string name, x_label, y_label;
    std::vector<std::string> columns; // first column is x
    std::vector<std::vector<double>> rows;
};

std::vector<std::string> param_columns() {
    return {"sigma", "kappa", "A0",  "A1",   "c0",    "c1", "gamma0", "gamma1",
            "eta0",  "eta1",  "beta", "q_bar", "delta_inf", "T"};
}

std::vector<double> param_values(const ModelParams& p) {
    return {p.sigma, p.kappa, p.A[0], p.A[1], p.c[0], p.c[1], p.gamma[0], p.gamma[1],
            p.eta[0], p.eta[1], p.beta, static_cast<double>(p.q_bar), p.delta_inf, p.T};
}

std::vector<std::string> emit_panel(const RunConfig& cfg, const PanelTable& t) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const std::string csv_path = (fs::path(cfg.out_dir) / (t.name + ".csv")).string();
    const std::string svg_path = (fs::path(cfg.out_dir) / (t.name + ".svg")).string();

    std::vector<std::string> header = t.columns;
    for (const auto& c : param_columns()) header.push_back(c);
    const std::vector<double> pv = param_values(cfg.params);
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : t.rows) {
        std::vector<std::string> row;
        for (double x : r) row.push_back(fmt_num(x));
        for (double x : pv) row.push_back(fmt_num(x));
        rows.push_back(std::move(row));
    }
    write_csv(csv_path, header, rows);

    SvgChart chart(t.name, t.x_label, t.y_label);
    for (size_t c = 1; c < t.columns.size(); ++c) {
        std::vector<double> xs, ys;
        for (const auto& r : t.rows) {
            xs.push_back(r[0]);
            ys.push_back(r[c]);
        }
        chart.add_series(t.columns[c], std::move(xs), std::move(ys));
    }
    chart.write(svg_path);
    return {csv_path, svg_path};
}

// Memoized per-parameter-set solves plus derived passive-exchange values.
class FigureContext {
public:
    FigureContext(const RunConfig& cfg) : cfg_(cfg) {}

    const SolveResult& solved(const ModelParams& p, Regime r) {
        const std::string key = cache_key(p, r);
        auto it = solves_.find(key);
        if (it != solves_.end()) return it->second;
        SolveOptions opt;
        opt.dt = cfg_.dt;
        opt.store_every = store_every(p);
        opt.max_dt_halvings = 4;
        auto [pos, _] = solves_.emplace(key, solve_regime(p, r, opt));
        return pos->second;
    }

    const Grid& value_grid(const ModelParams& p, Regime r, int m) {
        const std::string key = cache_key(p, r) + "#m" + std::to_string(m);
        auto it = values_.find(key);
        if (it != values_.end()) return it->second;
        auto [pos, _] = values_.emplace(key, exchange_value_grid(solved(p, r), m));
        return pos->second;
    }

    double value_at(const ModelParams& p, Regime r, int m, InventoryPair q) {
        const double u = value_grid(p, r, m)[Lattice(p.q_bar).index(q)];
        return cfg_.report_ce ? -std::log(-u) / p.eta[m] : u;
    }

    double bid_quote(const ModelParams& p, Regime r, int maker, InventoryPair q) {
        const SolveResult& res = solved(p, r);
        return res.quotes_at(0, q).at(Side::bid, maker);
    }

private:
    int store_every(const ModelParams& p) const {
        // figure runs only read slice 0 and feed the fee-value transport;
        // ~1e-3 day stored spacing keeps both accurate and small
        return std::max(1, static_cast<int>(std::lround(1e-3 / cfg_.dt)));
    }
    static std::string cache_key(const ModelParams& p, Regime r) {
        std::string k = regime_name(r);
        for (double x : param_values(p)) k += ":" + fmt_num(x);
        return k;
    }
    const RunConfig& cfg_;
    std::map<std::string, SolveResult> solves_;
    std::map<std::string, Grid> values_;
};

void sweep_warning(const char* panel, double x, const std::exception& e) {
    std::cerr << "warning: " << panel << " sweep point " << x << " failed: " << e.what()
              << " (point skipped)\n";
}

} // namespace

Grid exchange_value_grid(const SolveResult& env, int m) {
    if (exchange_contracts(env.regime, m)) return env.slices.front()[m];
    return exchange_fee_value(env, m);
}

std::vector<std::string> run_figures(const RunConfig& cfg) {
    FigureContext ctx(cfg);
    const ModelParams& p = cfg.params;
    const int qb = p.q_bar;
    const std::string ylab = cfg.report_ce ? "certainty equivalent ($)" : "utility";
    std::vector<std::string> files;
    auto selected = [&](const std::string& name) {
        return cfg.figure == "all" || cfg.figure == name;
    };
    auto emit = [&](const PanelTable& t) {
        const auto out = emit_panel(cfg, t);
        files.insert(files.end(), out.begin(), out.end());
    };

    // value of one exchange against its own inventory, three regimes
    if (selected("fig2a") || selected("fig2b")) {
        for (int m = 0; m < 2; ++m) {
            if (m == 0 && !selected("fig2a")) continue;
            if (m == 1 && !selected("fig2b")) continue;
            PanelTable t;
            t.name = m == 0 ? "fig2a" : "fig2b";
            t.x_label = m == 0 ? "q0" : "q1";
            t.y_label = "exchange " + std::to_string(m) + " " + ylab;
            t.columns = {t.x_label, "none", "one", "both"};
            for (int q = -qb; q <= qb; ++q) {
                const InventoryPair state = m == 0 ? InventoryPair{q, 0} : InventoryPair{0, q};
                std::vector<double> row = {static_cast<double>(q)};
                for (Regime r : all_regimes) row.push_back(ctx.value_at(p, r, m, state));
                t.rows.push_back(row);
            }
            emit(t);
        }
    }

    if (selected("fig2c")) {
        PanelTable t;
        t.name = "fig2c";
        t.x_label = "q0";
        t.y_label = std::string("sum of exchange ") + (cfg.report_ce ? "CEs ($)" : "utilities");
        t.columns = {"q0", "none", "one", "both"};
        for (int q = -qb; q <= qb; ++q) {
            std::vector<double> row = {static_cast<double>(q)};
            for (Regime r : all_regimes)
                row.push_back(ctx.value_at(p, r, 0, {q, 0}) + ctx.value_at(p, r, 1, {q, 0}));
            t.rows.push_back(row);
        }
        emit(t);
    }

    if (selected("fig2d")) {
        PanelTable t;
        t.name = "fig2d";
        t.x_label = "gamma";
        t.y_label = std::string("exchange ") + (cfg.report_ce ? "CE ($)" : "utility");
        t.columns = {"gamma",   "e0_none", "e0_one", "e0_both",
                     "e1_none", "e1_one",  "e1_both"};
        for (double g : sweep_grid(cfg.gamma_sweep_lo, cfg.gamma_sweep_hi, cfg.gamma_sweep_count)) {
            ModelParams ps = p;
            ps.gamma = {g, g};
            try {
                std::vector<double> row = {g};
                const InventoryPair q0{cfg.q0_0, cfg.q0_1};
                for (int m = 0; m < 2; ++m)
                    for (Regime r : all_regimes) row.push_back(ctx.value_at(ps, r, m, q0));
                t.rows.push_back(row);
            } catch (const std::exception& e) {
                sweep_warning("fig2d", g, e);
            }
        }
        emit(t);
    }

    // bid quotes at zero inventories against maker risk aversion
    for (int hetero = 0; hetero < 2; ++hetero) {
        const char* name = hetero ? "fig3a" : "fig3b";
        if (!selected(name)) continue;
        PanelTable t;
        t.name = name;
        t.x_label = hetero ? "gamma0" : "gamma";
        t.y_label = "bid quote ($)";
        t.columns = {t.x_label,  "none_m0", "none_m1", "one_m0",
                     "one_m1",   "both_m0", "both_m1"};
        const auto grid = hetero
                              ? sweep_grid(cfg.gamma0_sweep_lo, cfg.gamma0_sweep_hi,
                                           cfg.gamma0_sweep_count)
                              : sweep_grid(cfg.gamma_sweep_lo, cfg.gamma_sweep_hi,
                                           cfg.gamma_sweep_count);
        for (double g : grid) {
            ModelParams ps = p;
            if (hetero) ps.gamma[0] = g;
            else ps.gamma = {g, g};
            try {
                std::vector<double> row = {g};
                const InventoryPair q0{cfg.q0_0, cfg.q0_1};
                for (Regime r : all_regimes)
                    for (int maker = 0; maker < 2; ++maker)
                        row.push_back(ctx.bid_quote(ps, r, maker, q0));
                t.rows.push_back(row);
            } catch (const std::exception& e) {
                sweep_warning(name, g, e);
            }
        }
        emit(t);
    }

    // bid quotes against inventory, other maker's inventory at zero
    for (int axis = 0; axis < 2; ++axis) {
        const char* name = axis == 0 ? "fig4a" : "fig4b";
        if (!selected(name)) continue;
        PanelTable t;
        t.name = name;
        t.x_label = axis == 0 ? "q0" : "q1";
        t.y_label = "bid quote ($)";
        t.columns = {t.x_label,  "none_m0", "none_m1", "one_m0",
                     "one_m1",   "both_m0", "both_m1"};
        for (int q = -qb; q <= qb; ++q) {
            const InventoryPair state = axis == 0 ? InventoryPair{q, 0} : InventoryPair{0, q};
            std::vector<double> row = {static_cast<double>(q)};
            for (Regime r : all_regimes)
                for (int maker = 0; maker < 2; ++maker)
                    row.push_back(ctx.bid_quote(p, r, maker, state));
            t.rows.push_back(row);
        }
        emit(t);
    }

    return files;
}

} // namespace slob
