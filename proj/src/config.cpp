#include "slob/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace slob {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config: expected a boolean, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& v) {
    std::vector<double> out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

// lo:hi:count
void parse_sweep_spec(const std::string& v, double& lo, double& hi, int& count) {
    std::istringstream is(v);
    std::string a, b, c;
    if (!std::getline(is, a, ':') || !std::getline(is, b, ':') || !std::getline(is, c))
        throw std::invalid_argument("config: sweep spec must be lo:hi:count, got '" + v + "'");
    lo = std::stod(trim(a));
    hi = std::stod(trim(b));
    count = std::stoi(trim(c));
}

} // namespace

std::vector<double> sweep_grid(double lo, double hi, int count) {
    if (count < 1) throw std::invalid_argument("sweep count must be >= 1");
    std::vector<double> out;
    if (count == 1) {
        out.push_back(lo);
        return out;
    }
    for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * i / (count - 1));
    return out;
}

std::vector<double> RunConfig::snapshot_times() const {
    if (!snapshots.empty()) return snapshots;
    const double T = params.T;
    return {0.0, T / 4, T / 2, 3 * T / 4, T};
}

void RunConfig::validate() const {
    params.validate();
    if (dt <= 0) throw std::invalid_argument("config: dt must be > 0");
    if (sim_dt <= 0) throw std::invalid_argument("config: sim_dt must be > 0");
    if (paths <= 0) throw std::invalid_argument("config: paths must be > 0");
    if (std::abs(q0_0) > params.q_bar || std::abs(q0_1) > params.q_bar)
        throw std::invalid_argument("config: q0 outside the inventory lattice");
    for (double t : snapshots)
        if (t < 0 || t > params.T)
            throw std::invalid_argument("config: snapshot time outside [0, T]");
    if (gamma_sweep_count < 1 || gamma0_sweep_count < 1)
        throw std::invalid_argument("config: sweep count must be >= 1");
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (key == "sigma") cfg.params.sigma = std::stod(v);
    else if (key == "kappa") cfg.params.kappa = std::stod(v);
    else if (key == "A0") cfg.params.A[0] = std::stod(v);
    else if (key == "A1") cfg.params.A[1] = std::stod(v);
    else if (key == "c0") cfg.params.c[0] = std::stod(v);
    else if (key == "c1") cfg.params.c[1] = std::stod(v);
    else if (key == "gamma0") cfg.params.gamma[0] = std::stod(v);
    else if (key == "gamma1") cfg.params.gamma[1] = std::stod(v);
    else if (key == "eta0") cfg.params.eta[0] = std::stod(v);
    else if (key == "eta1") cfg.params.eta[1] = std::stod(v);
    else if (key == "beta") cfg.params.beta = std::stod(v);
    else if (key == "q_bar") cfg.params.q_bar = std::stoi(v);
    else if (key == "delta_inf") cfg.params.delta_inf = std::stod(v);
    else if (key == "T") cfg.params.T = std::stod(v);
    else if (key == "S0") cfg.params.S0 = std::stod(v);
    else if (key == "regime") {
        if (v == "none") cfg.regime = Regime::none;
        else if (v == "one") cfg.regime = Regime::one;
        else if (v == "both") cfg.regime = Regime::both;
        else throw std::invalid_argument("config: regime must be none|one|both, got '" + v + "'");
    } else if (key == "dt") cfg.dt = std::stod(v);
    else if (key == "sim_dt") cfg.sim_dt = std::stod(v);
    else if (key == "paths") cfg.paths = std::stol(v);
    else if (key == "seed") cfg.seed = std::stoull(v);
    else if (key == "q0_0") cfg.q0_0 = std::stoi(v);
    else if (key == "q0_1") cfg.q0_1 = std::stoi(v);
    else if (key == "snapshots") cfg.snapshots = parse_list(v);
    else if (key == "out_dir") cfg.out_dir = v;
    else if (key == "figure") cfg.figure = v;
    else if (key == "ce") cfg.report_ce = parse_bool(v);
    else if (key == "dump_paths") cfg.dump_paths = parse_bool(v);
    else if (key == "gamma_sweep")
        parse_sweep_spec(v, cfg.gamma_sweep_lo, cfg.gamma_sweep_hi, cfg.gamma_sweep_count);
    else if (key == "gamma0_sweep")
        parse_sweep_spec(v, cfg.gamma0_sweep_lo, cfg.gamma0_sweep_hi, cfg.gamma0_sweep_count);
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file " + path);
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected key = value");
        try {
            apply_override(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

} // namespace slob
