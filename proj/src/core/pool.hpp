#pragma once

#include <span>
#include <utility>
#include <vector>

#include "core/tick_grid.hpp"
#include "core/types.hpp"

namespace clmm {

// Aggregate pool snapshot: the tick grid, the resting ("passive")
// liquidity per atomic interval, the current pool price and the swap fee
// rate.  Immutable by convention; swaps return updated copies.
struct PoolState {
    TickGrid grid;
    std::vector<double> passive;  // size grid.interval_count(), each >= 0
    double price = 0.0;           // current pool price q, inside the grid span
    double fee_rate = 0.0;        // fee fraction charged on the input amount

    PoolState(TickGrid g, std::vector<double> passive_liquidity, double current_price,
              double fee);

    // Builds the per-interval liquidity vector from individual positions.
    // Every position must be grid-aligned.
    static PoolState from_positions(const TickGrid& g, std::span<const Position> positions,
                                    double current_price, double fee);

    // Interval indices [first, last] covered by a grid-aligned position.
    // A position over ticks (i, j) covers intervals i..j-1.
    std::pair<int, int> position_interval_span(const Position& pos) const;

    PoolState with_price(double new_price) const;
};

// Sum of liquidity over the positions whose range contains the whole
// atomic interval (t_m, t_{m+1}].  Positions merely overlapping the
// interval contribute nothing to it.
double liquidity_at(const PoolState& pool, std::span<const Position> positions, int m);

// Token amounts (x, y) held by a position when the pool trades at `q`.
// The price is clamped onto [lower, upper] first, so a position entirely
// above the price is pure X and one entirely below is pure Y.  Accepts
// the unbounded proxies lower = 0 and upper = +inf.
struct TokenAmounts {
    double x = 0.0;
    double y = 0.0;
};
TokenAmounts position_amounts(const Position& pos, double q);

}  // namespace clmm
