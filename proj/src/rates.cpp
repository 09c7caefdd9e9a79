#include "slob/rates.hpp"

#include <cmath>

namespace slob {

namespace {

void require_negative(double y, double y_jump, InventoryPair q, double t) {
    if (!(y < 0.0) || !(y_jump < 0.0))
        throw SolveError("exchange value grid lost strict negativity", t, q);
}

} // namespace

double tilde_zeta_own(const ModelParams& p, int m, bool beta_adjusted, double y, double y_jump) {
    const double ef = beta_adjusted ? 1.0 - p.beta : 1.0;
    const double g = p.gamma[m], e = p.eta[m];
    const double mid = std::log1p(-ef * ef * p.sigma * p.sigma * g * e /
                                  ((p.kappa + ef * p.sigma * g) * (p.kappa + ef * p.sigma * e)));
    double num = 0.0;
    for (int j = 0; j < 2; ++j) num += p.A[j] * std::exp(-(p.kappa / p.sigma) * p.c[j]);
    const double den = p.A[1 - m] * std::exp(-(p.kappa / p.sigma) * p.c[1 - m]) +
                       p.A[m] * std::exp(-(p.kappa / p.sigma + e) * p.c[m]);
    return (std::log(y / y_jump) + mid + std::log(num / den)) / e;
}

double zeta_cross(const ModelParams& p, int m, int venue, double y, double y_jump) {
    const double ge = p.gamma[m] + p.eta[m];
    double r = std::log(y / y_jump) / ge;
    if (venue == m) r += p.eta[m] * p.c[m] / ge;
    return r;
}

namespace {

double g_side_at_quotes(const ModelParams& p, int m, Side k, double z_own,
                        const std::array<double, 2>& z_cross, double d_m, double d_o,
                        InventoryPair q, double y, double y_own, double y_cross) {
    const double g = p.gamma[m], e = p.eta[m];
    double total = 0.0;
    if (!side_blocked(p, k, q[m])) {
        const double cap = d_m - p.beta * (d_m - std::min(d_m, d_o));
        const double maker_term = 1.0 + e * (1.0 - std::exp(-g * (z_own + cap))) / g;
        for (int j = 0; j < 2; ++j) {
            const double fee = (j == m) ? p.c[m] : 0.0;
            total += intensity(p, j, d_m) * (std::exp(e * (z_own - fee)) * y_own - y * maker_term);
        }
    }
    if (!side_blocked(p, k, q[1 - m])) {
        for (int j = 0; j < 2; ++j) {
            const double fee = (j == m) ? p.c[m] : 0.0;
            const double maker_term = 1.0 + e * (1.0 - std::exp(-g * z_cross[j])) / g;
            total +=
                intensity(p, j, d_o) * (std::exp(e * (z_cross[j] - fee)) * y_cross - y * maker_term);
        }
    }
    return total;
}

} // namespace

double g_side(const ModelParams& p, int m, Side k, double z_own,
              const std::array<double, 2>& z_cross, double z_opp, InventoryPair q,
              double y, double y_own, double y_cross) {
    const OwnRatePair z_m{z_own, z_own}, z_o{z_opp, z_opp};
    const auto [d0, d1] = delta_side(p, k, m == 0 ? z_m : z_o, m == 0 ? z_o : z_m, q);
    const double d_m = (m == 0) ? d0 : d1;
    const double d_o = (m == 0) ? d1 : d0;
    return g_side_at_quotes(p, m, k, z_own, z_cross, d_m, d_o, q, y, y_own, y_cross);
}

double maker_response_quote(const ModelParams& p, int m, Side k, OwnRatePair z_own,
                            double d_opp, int q_m) {
    const double G = gamma_quote(p, m, k, z_own, q_m);
    if (G <= d_opp) return G;
    const double gb = gamma_beta_quote(p, m, k, d_opp, z_own, q_m);
    return gb > d_opp ? gb : d_opp;
}

double g_side_response(const ModelParams& p, int m, Side k, double z_own,
                       const std::array<double, 2>& z_cross, double d_opp, InventoryPair q,
                       double y, double y_own, double y_cross) {
    const double d_m = maker_response_quote(p, m, k, OwnRatePair{z_own, z_own}, d_opp, q[m]);
    return g_side_at_quotes(p, m, k, z_own, z_cross, d_m, d_opp, q, y, y_own, y_cross);
}

namespace {

// Null-contract representation: every rate is a plain grid difference across
// the jump, identical on both venues; zS = 0.
RateVector representation_rates(const Lattice& lat, const Grid& w, InventoryPair q) {
    RateVector z;
    for (Side k : both_sides)
        for (int i = 0; i < 2; ++i) {
            const double d = jump_diff(lat, w, q, k, i);
            z.at(k, i, 0) = d;
            z.at(k, i, 1) = d;
        }
    return z;
}

// Optimal contract rates of exchange m from its value grid v_m. The own-rate
// case test induces quotes from the candidate pair: exchange m's non-beta
// candidate against the opponent maker's own rate `opp_own[k]`. Ties keep
// the non-beta branch. Blocked jumps leave the (unused) rate at zero.
RateVector contract_rates(const ModelParams& p, const Lattice& lat, const Grid& v_m, int m,
                          const std::array<OwnRatePair, 2>& opp_own, InventoryPair q, double t) {
    RateVector z;
    z.zS = zeta_price_rate(p, m, q[m]);
    const double y = v_m[lat.index(q)];
    for (Side k : both_sides) {
        const int ki = static_cast<int>(k);
        if (!side_blocked(p, k, q[m])) {
            const double y_own = v_m[lat.index(Lattice::jump(q, k, m))];
            require_negative(y, y_own, q, t);
            const double cand = tilde_zeta_own(p, m, false, y, y_own);
            const OwnRatePair mine{cand, cand};
            const auto [d0, d1] =
                delta_side(p, k, m == 0 ? mine : opp_own[ki], m == 0 ? opp_own[ki] : mine, q);
            const double d_m = (m == 0) ? d0 : d1;
            const double d_o = (m == 0) ? d1 : d0;
            const double sel = (d_m <= d_o) ? cand : tilde_zeta_own(p, m, true, y, y_own);
            z.at(k, m, 0) = sel;
            z.at(k, m, 1) = sel;
        }
        if (!side_blocked(p, k, q[1 - m])) {
            const double y_cross = v_m[lat.index(Lattice::jump(q, k, 1 - m))];
            require_negative(y, y_cross, q, t);
            for (int j = 0; j < 2; ++j) z.at(k, 1 - m, j) = zeta_cross(p, m, j, y, y_cross);
        }
    }
    return z;
}

} // namespace

StateRates regime_rates(const ModelParams& p, Regime regime, const Lattice& lat,
                        const Grid& grid0, const Grid& grid1, InventoryPair q, double t) {
    StateRates out;
    switch (regime) {
        case Regime::none: {
            out.z0 = representation_rates(lat, grid0, q);
            out.z1 = representation_rates(lat, grid1, q);
            break;
        }
        case Regime::one: {
            out.z1 = representation_rates(lat, grid1, q);
            std::array<OwnRatePair, 2> opp{};
            for (Side k : both_sides) {
                const int ki = static_cast<int>(k);
                opp[ki] = OwnRatePair{out.z1.at(k, 1, 0), out.z1.at(k, 1, 1)};
            }
            out.z0 = contract_rates(p, lat, grid0, 0, opp, q, t);
            break;
        }
        case Regime::both: {
            // Both exchanges' case tests compare quotes at the pair of
            // non-beta candidates.
            const Grid* grids[2] = {&grid0, &grid1};
            std::array<std::array<OwnRatePair, 2>, 2> cand_of{}; // [maker][side]
            for (int m = 0; m < 2; ++m)
                for (Side k : both_sides) {
                    const int ki = static_cast<int>(k);
                    if (side_blocked(p, k, q[m])) continue;
                    const double y = (*grids[m])[lat.index(q)];
                    const double y_own = (*grids[m])[lat.index(Lattice::jump(q, k, m))];
                    require_negative(y, y_own, q, t);
                    const double cand = tilde_zeta_own(p, m, false, y, y_own);
                    cand_of[m][ki] = OwnRatePair{cand, cand};
                }
            out.z0 = contract_rates(p, lat, grid0, 0, cand_of[1], q, t);
            out.z1 = contract_rates(p, lat, grid1, 1, cand_of[0], q, t);
            break;
        }
    }
    return out;
}

} // namespace slob
