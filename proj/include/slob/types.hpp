#pragma once

#include <array>
#include <cmath>

#include "slob/params.hpp"

namespace slob {

enum class Side : int { bid = 0, ask = 1 };

constexpr std::array<Side, 2> both_sides = {Side::bid, Side::ask};

// Sign map: +1 for bid (inventory up on fill), -1 for ask.
constexpr int phi(Side k) { return k == Side::bid ? 1 : -1; }

constexpr const char* side_name(Side k) { return k == Side::bid ? "b" : "a"; }

// Inventory pair (q0, q1), each in [-q_bar, q_bar].
struct InventoryPair {
    int q0 = 0;
    int q1 = 0;

    int operator[](int maker) const { return maker == 0 ? q0 : q1; }
    bool operator==(const InventoryPair&) const = default;
};

// The four quotes at one state, indexed [side][maker].
struct QuoteMatrix {
    std::array<std::array<double, 2>, 2> d{};

    double& at(Side k, int maker) { return d[static_cast<int>(k)][maker]; }
    double at(Side k, int maker) const { return d[static_cast<int>(k)][maker]; }
    double best(Side k) const { return std::min(d[static_cast<int>(k)][0], d[static_cast<int>(k)][1]); }
};

// Payment-rate object for one exchange: zN[side][maker][venue] on the eight
// counting processes, plus the price-exposure rate zS.
struct RateVector {
    std::array<std::array<std::array<double, 2>, 2>, 2> zN{};
    double zS = 0.0;

    double& at(Side k, int maker, int venue) { return zN[static_cast<int>(k)][maker][venue]; }
    double at(Side k, int maker, int venue) const { return zN[static_cast<int>(k)][maker][venue]; }

    static RateVector zero() { return RateVector{}; }
};

// Which exchanges offer an incentive contract.
enum class Regime : int { none = 0, one = 1, both = 2 };

constexpr const char* regime_name(Regime r) {
    switch (r) {
        case Regime::none: return "none";
        case Regime::one: return "one";
        default: return "both";
    }
}

inline bool exchange_contracts(Regime r, int m) {
    return r == Regime::both || (r == Regime::one && m == 0);
}

// Projection onto the admissible quote interval [-delta_inf, delta_inf].
inline double clamp_quote(const ModelParams& p, double d) {
    return std::min(std::max(d, -p.delta_inf), p.delta_inf);
}

// True when the inventory cap blocks side k for this inventory level.
inline bool side_blocked(const ModelParams& p, Side k, int q_i) {
    return phi(k) * q_i >= p.q_bar;
}

} // namespace slob
