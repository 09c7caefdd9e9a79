#pragma once

#include <utility>

#include "slob/intensity.hpp"
#include "slob/params.hpp"
#include "slob/types.hpp"

namespace slob {

// Own-rate pair (z^{i,k,i,0}, z^{i,k,i,1}) for one maker and side.
struct OwnRatePair {
    double z0 = 0.0;
    double z1 = 0.0;
};

// Leader quote: clamp of
//   (1/gamma_i) [ log(1 + sigma gamma_i / kappa)
//               + log( sum_j A^j e^{-kappa c^j/sigma - gamma_i z_j}
//                      / sum_j A^j e^{-kappa c^j/sigma} ) ],
// or delta_inf when the cap blocks the side.
double gamma_quote(const ModelParams& p, int maker, Side k, OwnRatePair z_own, int q_i);

// Follower best response to the competitor quote d_other:
//   clamp of -beta/(1-beta) d_other
//            + (1/(gamma_i (1-beta))) [ log(1 + (1-beta) sigma gamma_i / kappa)
//                                     + same rate-ratio log as gamma_quote ],
// boundary rule as above.
double gamma_beta_quote(const ModelParams& p, int maker, Side k, double d_other,
                        OwnRatePair z_own, int q_i);

// One side of the fixed point given each maker's own-rate pair. Returns
// (quote of maker 0, quote of maker 1).
std::pair<double, double> delta_side(const ModelParams& p, Side k, OwnRatePair z_own0,
                                     OwnRatePair z_own1, InventoryPair q);

// Unique Nash fixed point of the two makers' quote responses given payment
// rates (z0, z1). Per side independently:
//   (a) the maker whose leader quote is weakly smaller posts it;
//   (b) the other posts the beta-response when that stays above the leader;
//   (c) otherwise the other matches the leader exactly.
// Ties resolve to case (a) for both makers. Blocked sides quote delta_inf.
QuoteMatrix delta_fixed_point(const ModelParams& p, const RateVector& z0,
                              const RateVector& z1, InventoryPair q);

// Running utility rate of maker i at quotes `quotes` with rate vector z_i:
// own fills earn the rate plus beta-penalized spread capture, the other
// maker's fills pay the cross rate, all gated by the cap indicators.
double hamiltonian_h(const ModelParams& p, int maker, const QuoteMatrix& quotes,
                     const RateVector& z_i, InventoryPair q);

// H^i(z, q) = h^i evaluated at the Nash fixed point Delta(z, q).
double hamiltonian_H(const ModelParams& p, int maker, const RateVector& z0,
                     const RateVector& z1, InventoryPair q);

// Spread actually captured by maker i on a side-k fill: d - beta (d - best).
inline double spread_capture(const ModelParams& p, Side k, int maker, const QuoteMatrix& quotes) {
    const double d = quotes.at(k, maker);
    return d - p.beta * (d - quotes.best(k));
}

// Verification oracle: argmax of h^i over a quote mesh on [-delta_inf,
// delta_inf]^2 with the competitor's quotes held fixed. Respects the
// boundary rule. Returns (bid, ask).
std::pair<double, double> best_response_bruteforce(const ModelParams& p, int maker,
                                                   const QuoteMatrix& quotes_other,
                                                   const RateVector& z_i, InventoryPair q,
                                                   double mesh);

// Iterated brute-force best responses until the quote matrix stops moving;
// oracle for delta_fixed_point. `refine` sharpens the final iterate on a
// 16x finer local mesh.
QuoteMatrix nash_bruteforce(const ModelParams& p, const RateVector& z0, const RateVector& z1,
                            InventoryPair q, double mesh, bool refine = true);

} // namespace slob
