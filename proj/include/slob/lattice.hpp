#pragma once

#include <vector>

#include "slob/types.hpp"

namespace slob {

// Inventory lattice [-q_bar, q_bar]^2, row-major over (q0, q1). Inventories
// are integers (unit orders), so the grid has exactly (2 q_bar + 1)^2 states
// and no interpolation is needed anywhere.
struct Lattice {
    int q_bar = 0;
    int n = 0;

    explicit Lattice(int q_bar_) : q_bar(q_bar_), n(2 * q_bar_ + 1) {}

    int size() const { return n * n; }
    bool in_bounds(int q) const { return q >= -q_bar && q <= q_bar; }
    bool in_bounds(InventoryPair q) const { return in_bounds(q.q0) && in_bounds(q.q1); }

    int index(InventoryPair q) const { return (q.q0 + q_bar) * n + (q.q1 + q_bar); }
    InventoryPair state(int idx) const { return {idx / n - q_bar, idx % n - q_bar}; }

    // State after a side-k fill of maker i; caller checks bounds.
    static InventoryPair jump(InventoryPair q, Side k, int maker) {
        if (maker == 0) q.q0 += phi(k);
        else q.q1 += phi(k);
        return q;
    }
};

using Grid = std::vector<double>;

// w(q + phi(k) e^maker) - w(q); zero when the jump target is out of bounds
// (the corresponding intensity is gated off, so the value is never used).
inline double jump_diff(const Lattice& lat, const Grid& w, InventoryPair q, Side k, int maker) {
    const InventoryPair qj = Lattice::jump(q, k, maker);
    if (!lat.in_bounds(qj)) return 0.0;
    return w[lat.index(qj)] - w[lat.index(q)];
}

} // namespace slob
