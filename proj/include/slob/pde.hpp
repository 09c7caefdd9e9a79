#pragma once

#include <array>
#include <string>
#include <vector>

#include "slob/lattice.hpp"
#include "slob/params.hpp"
#include "slob/rates.hpp"
#include "slob/types.hpp"

namespace slob {

struct SolveOptions {
    double dt = 1e-4;      // requested step; actual step divides T exactly
    int store_every = 1;   // keep every k-th slice (simulator wants 1)
    bool parallel = true;  // OpenMP map over lattice states
    int max_dt_halvings = 0; // retries on blow-up / stability breach
};

// Backward-solved value grids for one regime. slices[s] holds the two
// unknowns at time t_s = s * store_dt, s = 0 .. n_slices-1 (forward order,
// last slice is the terminal condition).
//   none: (w_hat_0, w_hat_1)   maker certainty equivalents, terminal (0, 0)
//   one:  (v_hat_0, v_hat_1)   exchange-0 value / maker-1 CE, terminal (-1, 0)
//   both: (v_0, v_1)           exchange values, terminal (-1, -1)
struct SolveResult {
    Regime regime = Regime::none;
    ModelParams params;
    Lattice lattice{1};
    double dt = 0.0;
    double store_dt = 0.0;
    int dt_halvings = 0;
    std::vector<std::array<Grid, 2>> slices;

    int n_slices() const { return static_cast<int>(slices.size()); }
    double slice_time(int s) const { return s * store_dt; }
    int slice_index(double t) const; // nearest stored slice
    const std::array<Grid, 2>& at_time(double t) const { return slices[slice_index(t)]; }

    StateRates rates_at(int slice, InventoryPair q) const;
    QuoteMatrix quotes_at(int slice, InventoryPair q) const;
};

// One explicit backward Euler step of the regime's coupled system from the
// grids `in` at time t to `out` at time t - dt. Returns the largest per-state
// sum of active intensities seen (stability diagnostic). Throws SolveError on
// non-finite values or sign-invariant breaches.
double step_regime(const ModelParams& p, Regime regime, const Lattice& lat,
                   const std::array<Grid, 2>& in, std::array<Grid, 2>& out, double t,
                   double dt, bool parallel);

// Full backward solve from T to 0. Retries with halved dt up to
// opt.max_dt_halvings times when stepping blows up or violates the
// stability bound dt * max total intensity < 0.5.
SolveResult solve_regime(const ModelParams& p, Regime regime, const SolveOptions& opt);

// Equilibrium quotes at every lattice state at the stored time nearest t.
std::vector<QuoteMatrix> quote_surface(const SolveResult& result, double t);

// Reservation utility of maker i: -exp(-gamma_i w_hat_i(0, q0)); requires a
// regime-none result.
double reservation_utility(const SolveResult& none_result, int maker, InventoryPair q0);

// Expected fee-revenue utility -E[exp(-eta_m c_m F_T)] of exchange m running
// *without* any contract, under the quote dynamics of `env`. Solved by a
// linear transport over env's stored slices (sub-stepped as the stability
// bound requires); returns the grid at t = 0.
Grid exchange_fee_value(const SolveResult& env, int m, bool parallel = true);

} // namespace slob
