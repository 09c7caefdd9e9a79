#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace slob {

// All model constants. Units: dollars, days, shares. Shared read-only by
// every module; validate() must pass before anything else runs.
struct ModelParams {
    double sigma = 1.2;                    // price volatility, $ / sqrt(day)
    double kappa = 8.0;                    // intensity decay, 1/$ / sqrt(day)
    std::array<double, 2> A = {100.0, 100.0};   // base intensity per venue, 1/day
    std::array<double, 2> c = {1e-5, 1e-5};     // per-venue fee / intensity shift, $
    std::array<double, 2> gamma = {0.01, 0.01}; // market-maker risk aversion, 1/$
    std::array<double, 2> eta = {0.1, 0.1};     // exchange risk aversion, 1/$
    double beta = 0.6;                     // connection efficiency, in [0,1)
    int q_bar = 5;                         // inventory cap, shares
    double delta_inf = 10.0;               // quote bound, $
    double T = 1.0;                        // horizon, days
    double S0 = 100.0;                     // initial price, $ (simulation only)

    void validate() const {
        auto req = [](bool ok, const std::string& msg) {
            if (!ok) throw std::invalid_argument("ModelParams: " + msg);
        };
        req(sigma > 0, "sigma must be > 0");
        req(kappa > 0, "kappa must be > 0");
        for (int j = 0; j < 2; ++j) {
            req(A[j] > 0, "A must be > 0");
            req(c[j] > 0, "c must be > 0");
            req(gamma[j] > 0, "gamma must be > 0");
            req(eta[j] > 0, "eta must be > 0");
        }
        req(beta >= 0 && beta < 1, "beta must be in [0,1)");
        req(q_bar >= 1, "q_bar must be a positive integer");
        req(delta_inf > 0, "delta_inf must be > 0");
        req(T > 0, "T must be > 0");
        req(S0 > 0, "S0 must be > 0");
        // Holds algebraically for positive parameters; the log argument in the
        // contracted spread formulas needs it strictly.
        for (int i = 0; i < 2; ++i) {
            const double lhs = sigma * sigma * gamma[i] * eta[i];
            const double rhs = (kappa + sigma * gamma[i]) * (kappa + sigma * eta[i]);
            req(lhs < rhs, "sigma^2*gamma*eta < (kappa+sigma*gamma)*(kappa+sigma*eta) violated");
        }
    }

    // Baseline parameter set used throughout the numerical study.
    static ModelParams baseline() { return ModelParams{}; }
};

} // namespace slob
