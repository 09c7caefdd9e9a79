#pragma once

#include <cmath>
#include <stdexcept>

#include "slob/params.hpp"
#include "slob/types.hpp"

namespace slob {

// Arrival rate of venue-j market orders lifting a quote at distance d:
// Lambda^j(d) = A^j exp(-(kappa/sigma) (d + c^j)). Strictly decreasing in d.
inline double intensity(const ModelParams& p, int venue, double d) {
    return p.A[venue] * std::exp(-(p.kappa / p.sigma) * (d + p.c[venue]));
}

// Intensity of N^{k,i,j} under quotes `quotes` at inventory `q`: the raw
// intensity gated to zero when the cap blocks that side for maker i.
// Quotes violating the boundary rule (blocked side not at delta_inf) are
// rejected: they are outside the admissible set.
inline double effective_intensity(const ModelParams& p, Side k, int maker, int venue,
                                  const QuoteMatrix& quotes, InventoryPair q) {
    if (side_blocked(p, k, q[maker])) {
        if (quotes.at(k, maker) != p.delta_inf)
            throw std::invalid_argument("effective_intensity: blocked side must quote delta_inf");
        return 0.0;
    }
    return intensity(p, venue, quotes.at(k, maker));
}

} // namespace slob
