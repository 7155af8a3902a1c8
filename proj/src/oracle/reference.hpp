#pragma once

#include <optional>

#include "jit/optimizer.hpp"

namespace clmm::oracle {

// Reference implementations that deliberately avoid the closed-form tick
// algebra used by the fast paths.  They exist to catch sign and formula
// errors, not to be quick: the swap reference integrates the reserve
// differentials numerically, and the strategy reference brute-forces the
// search space.

struct ReferenceSwap {
    double final_price = 0.0;
    double amount_out = 0.0;
};

// Integrates dx = lambda/(2 p^1.5) dp and dy = lambda/(2 sqrt(p)) dp in
// micro-steps across the touched intervals (cumulative trapezoid, with a
// bisection inside the last micro-cell) until the input amount is spent.
// Throws insufficient_liquidity_error when the grid runs out, mirroring
// the fast path.
ReferenceSwap integrate_swap(const PoolState& pool, double amount_in, Direction direction,
                             const std::optional<Position>& extra,
                             long steps_per_interval = 1 << 17);

struct SwapAgreement {
    ReferenceSwap reference;
    double fast_final_price = 0.0;
    double fast_amount_out = 0.0;
    double rel_dev_price = 0.0;
    double rel_dev_out = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

// Runs both the fast walk and the reference integrator on the same trade
// and reports the relative deviations of the final price and the output
// amount.
SwapAgreement check_swap(const PoolState& pool, double amount_in, Direction direction,
                         const std::optional<Position>& extra, double tolerance = 1e-6,
                         long steps_per_interval = 1 << 17);

struct GridSearchResult {
    bool found = false;  // false when the trade admits no placement range
    double utility = 0.0;
    double liquidity = 0.0;
    jit::TickRange range;  // normalized orientation
};

// Exhaustive (range, liquidity) sweep: every candidate range, a uniform
// liquidity grid up to the budget cap in each, budget checks applied per
// candidate.  `total_points` liquidity evaluations are spread across the
// ranges.  The best strategy found must never beat the optimizer by more
// than rounding.
GridSearchResult exhaustive_strategy_search(const jit::SwapParams& params,
                                            const jit::JitConfig& config,
                                            int total_points = 10000);

}  // namespace clmm::oracle
