#pragma once

#include <array>

#include "slob/equilibrium.hpp"
#include "slob/lattice.hpp"
#include "slob/params.hpp"
#include "slob/types.hpp"

namespace slob {

// Thrown when a value grid breaks the negativity invariant required by the
// log-ratio contract formulas, or when stepping produces non-finite values.
struct SolveError : std::runtime_error {
    double t;
    InventoryPair q;
    SolveError(const std::string& msg, double t_, InventoryPair q_)
        : std::runtime_error(msg), t(t_), q(q_) {}
};

// Price-exposure rate of a contracting exchange: -gamma_m q_m / (gamma_m + eta_m).
inline double zeta_price_rate(const ModelParams& p, int m, int q_m) {
    return -p.gamma[m] / (p.gamma[m] + p.eta[m]) * q_m;
}

// Own-maker payment rate of contracting exchange m (venue-independent).
// `beta_adjusted` selects the follower-branch variant; y and y_jump are the
// exchange's value at q and at the post-fill state, both strictly negative.
double tilde_zeta_own(const ModelParams& p, int m, bool beta_adjusted, double y, double y_jump);

// Cross-maker payment rate of exchange m on venue j; the fee-earning venue
// (j == m) carries the c-shift.
double zeta_cross(const ModelParams& p, int m, int venue, double y, double y_jump);

// g^{m,S}: running cost of the price-exposure rate.
inline double g_price(const ModelParams& p, int m, double zS, int q_m) {
    const double a = zS + q_m;
    return p.eta[m] * p.sigma * p.sigma / 2.0 * (p.gamma[m] * a * a + p.eta[m] * zS * zS);
}

// g^{m,k}: side-k source of contracting exchange m's value equation.
// z_own is the own-maker rate (venue-symmetric), z_cross the per-venue rates
// on the other maker's fills, z_opp the other maker's own rate entering the
// quote fixed point. y = v_m(q), y_own = v_m(q + phi(k) e^m),
// y_cross = v_m(q + phi(k) e^{1-m}).
double g_side(const ModelParams& p, int m, Side k, double z_own,
              const std::array<double, 2>& z_cross, double z_opp, InventoryPair q,
              double y, double y_own, double y_cross);

// Maker m's quote response to its own rate pair with the competitor's quote
// frozen at d_opp: the leader quote when it undercuts d_opp, otherwise the
// beta response or an exact match. Coincides with that maker's coordinate of
// the fixed point when d_opp is the competitor's leader quote.
double maker_response_quote(const ModelParams& p, int m, Side k, OwnRatePair z_own,
                            double d_opp, int q_m);

// g^{m,k} with the competitor's quote frozen at d_opp and maker m's quote set
// to its response; the own-rate first-order condition behind the closed-form
// rates holds in this form, so optimizer certification perturbs rates here.
// Agrees with g_side at the equilibrium rate pair.
double g_side_response(const ModelParams& p, int m, Side k, double z_own,
                       const std::array<double, 2>& z_cross, double d_opp, InventoryPair q,
                       double y, double y_own, double y_cross);

// Payment-rate fields of both exchanges at one state, assembled from the
// regime's two value grids:
//   none: both exchanges carry the null-contract representation of grid_l.
//   one:  exchange 0 contracts off grid0; exchange 1's null contract is
//         represented off grid1.
//   both: each exchange m contracts off grid_m.
struct StateRates {
    RateVector z0;
    RateVector z1;
};

StateRates regime_rates(const ModelParams& p, Regime regime, const Lattice& lat,
                        const Grid& grid0, const Grid& grid1, InventoryPair q, double t);

} // namespace slob
