#include "slob/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace slob {

namespace {

// log( sum_j A^j e^{-kappa c^j/sigma - gamma_i z_j} / sum_j A^j e^{-kappa c^j/sigma} )
double rate_ratio_log(const ModelParams& p, int maker, OwnRatePair z) {
    const double g = p.gamma[maker];
    double num = 0.0, den = 0.0;
    const double z_arr[2] = {z.z0, z.z1};
    for (int j = 0; j < 2; ++j) {
        const double base = p.A[j] * std::exp(-(p.kappa / p.sigma) * p.c[j]);
        den += base;
        num += base * std::exp(-g * z_arr[j]);
    }
    return std::log(num / den);
}

} // namespace

double gamma_quote(const ModelParams& p, int maker, Side k, OwnRatePair z_own, int q_i) {
    if (side_blocked(p, k, q_i)) return p.delta_inf;
    const double g = p.gamma[maker];
    const double raw = (std::log1p(p.sigma * g / p.kappa) + rate_ratio_log(p, maker, z_own)) / g;
    return clamp_quote(p, raw);
}

double gamma_beta_quote(const ModelParams& p, int maker, Side k, double d_other,
                        OwnRatePair z_own, int q_i) {
    if (side_blocked(p, k, q_i)) return p.delta_inf;
    const double g = p.gamma[maker];
    const double omb = 1.0 - p.beta;
    const double raw = -p.beta / omb * d_other +
                       (std::log1p(omb * p.sigma * g / p.kappa) + rate_ratio_log(p, maker, z_own)) /
                           (g * omb);
    return clamp_quote(p, raw);
}

std::pair<double, double> delta_side(const ModelParams& p, Side k, OwnRatePair z_own0,
                                     OwnRatePair z_own1, InventoryPair q) {
    const OwnRatePair zo[2] = {z_own0, z_own1};
    const double G[2] = {gamma_quote(p, 0, k, z_own0, q[0]),
                         gamma_quote(p, 1, k, z_own1, q[1])};
    double out[2];
    for (int i = 0; i < 2; ++i) {
        const int o = 1 - i;
        if (G[i] <= G[o]) {
            out[i] = G[i];
        } else {
            const double gb = gamma_beta_quote(p, i, k, G[o], zo[i], q[i]);
            out[i] = (G[o] < gb) ? gb : G[o];
        }
    }
    return {out[0], out[1]};
}

QuoteMatrix delta_fixed_point(const ModelParams& p, const RateVector& z0,
                              const RateVector& z1, InventoryPair q) {
    QuoteMatrix out;
    for (Side k : both_sides) {
        const auto [d0, d1] = delta_side(p, k, OwnRatePair{z0.at(k, 0, 0), z0.at(k, 0, 1)},
                                         OwnRatePair{z1.at(k, 1, 0), z1.at(k, 1, 1)}, q);
        out.at(k, 0) = d0;
        out.at(k, 1) = d1;
    }
    return out;
}

double hamiltonian_h(const ModelParams& p, int maker, const QuoteMatrix& quotes,
                     const RateVector& z_i, InventoryPair q) {
    const double g = p.gamma[maker];
    const int other = 1 - maker;
    double total = 0.0;
    for (Side k : both_sides) {
        if (!side_blocked(p, k, q[maker])) {
            const double cap = spread_capture(p, k, maker, quotes);
            for (int j = 0; j < 2; ++j) {
                const double lam = intensity(p, j, quotes.at(k, maker));
                total += (1.0 - std::exp(-g * (z_i.at(k, maker, j) + cap))) / g * lam;
            }
        }
        if (!side_blocked(p, k, q[other])) {
            for (int j = 0; j < 2; ++j) {
                const double lam = intensity(p, j, quotes.at(k, other));
                total += (1.0 - std::exp(-g * z_i.at(k, other, j))) / g * lam;
            }
        }
    }
    return total;
}

double hamiltonian_H(const ModelParams& p, int maker, const RateVector& z0,
                     const RateVector& z1, InventoryPair q) {
    const QuoteMatrix quotes = delta_fixed_point(p, z0, z1, q);
    return hamiltonian_h(p, maker, quotes, maker == 0 ? z0 : z1, q);
}

namespace {

// h^i restricted to side k as a function of maker i's quote d, competitor
// quote fixed. Cross-maker terms do not depend on d, so they are dropped:
// the argmax is unaffected.
double h_side_own(const ModelParams& p, int maker, Side k, double d, double d_other,
                  const RateVector& z_i, InventoryPair q) {
    if (side_blocked(p, k, q[maker])) return 0.0;
    const double g = p.gamma[maker];
    const double cap = d - p.beta * (d - std::min(d, d_other));
    double s = 0.0;
    for (int j = 0; j < 2; ++j)
        s += (1.0 - std::exp(-g * (z_i.at(k, maker, j) + cap))) / g * intensity(p, j, d);
    return s;
}

double argmax_on_mesh(const ModelParams& p, int maker, Side k, double d_other,
                      const RateVector& z_i, InventoryPair q, double lo, double hi,
                      double mesh) {
    const int n = static_cast<int>(std::floor((hi - lo) / mesh + 0.5));
    double best_d = lo, best_v = h_side_own(p, maker, k, lo, d_other, z_i, q);
    for (int s = 1; s <= n; ++s) {
        const double d = std::min(lo + s * mesh, hi);
        const double v = h_side_own(p, maker, k, d, d_other, z_i, q);
        if (v > best_v) {
            best_v = v;
            best_d = d;
        }
    }
    return best_d;
}

} // namespace

std::pair<double, double> best_response_bruteforce(const ModelParams& p, int maker,
                                                   const QuoteMatrix& quotes_other,
                                                   const RateVector& z_i, InventoryPair q,
                                                   double mesh) {
    double out[2];
    for (Side k : both_sides) {
        const int ki = static_cast<int>(k);
        if (side_blocked(p, k, q[maker])) {
            out[ki] = p.delta_inf;
            continue;
        }
        out[ki] = argmax_on_mesh(p, maker, k, quotes_other.at(k, 1 - maker), z_i, q,
                                 -p.delta_inf, p.delta_inf, mesh);
    }
    return {out[0], out[1]};
}

QuoteMatrix nash_bruteforce(const ModelParams& p, const RateVector& z0, const RateVector& z1,
                            InventoryPair q, double mesh, bool refine) {
    const RateVector* z[2] = {&z0, &z1};
    // Matching over any level below both leader quotes is a fixed point, so
    // the game has a continuum of them; best responses started at the bound
    // descend onto the Pareto-optimal one, which is the quote map's value.
    QuoteMatrix cur;
    for (Side k : both_sides)
        for (int i = 0; i < 2; ++i) cur.at(k, i) = p.delta_inf;

    for (int it = 0; it < 64; ++it) {
        QuoteMatrix next = cur;
        for (int i = 0; i < 2; ++i) {
            auto [b, a] = best_response_bruteforce(p, i, next, *z[i], q, mesh);
            next.at(Side::bid, i) = b;
            next.at(Side::ask, i) = a;
        }
        bool same = true;
        for (Side k : both_sides)
            for (int i = 0; i < 2; ++i)
                if (next.at(k, i) != cur.at(k, i)) same = false;
        cur = next;
        if (same) break;
    }

    if (refine) {
        // Local sweeps on a 16x finer mesh around the coarse fixed point so the
        // oracle's own rounding stays well under one coarse mesh step.
        const double fine = mesh / 16.0;
        for (int it = 0; it < 8; ++it) {
            QuoteMatrix next = cur;
            for (int i = 0; i < 2; ++i) {
                for (Side k : both_sides) {
                    const int ki = static_cast<int>(k);
                    if (side_blocked(p, k, q[i])) continue;
                    const double center = next.at(k, i);
                    const double lo = std::max(-p.delta_inf, center - 2.0 * mesh);
                    const double hi = std::min(p.delta_inf, center + 2.0 * mesh);
                    double d = argmax_on_mesh(p, i, k, next.at(k, 1 - i), *z[i], q, lo, hi, fine);
                    // The matching case sits exactly on the competitor's quote;
                    // snap when the fine mesh lands within one fine step of it.
                    const double d_other = next.at(k, 1 - i);
                    if (std::abs(d - d_other) <= fine &&
                        h_side_own(p, i, k, d_other, d_other, *z[i], q) >=
                            h_side_own(p, i, k, d, d_other, *z[i], q) - 1e-15)
                        d = d_other;
                    next.at(k, i) = d;
                }
            }
            bool same = true;
            for (Side k : both_sides)
                for (int i = 0; i < 2; ++i)
                    if (next.at(k, i) != cur.at(k, i)) same = false;
            cur = next;
            if (same) break;
        }
    }
    return cur;
}

} // namespace slob
