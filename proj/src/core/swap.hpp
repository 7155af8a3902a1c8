#pragma once

#include <optional>
#include <vector>

#include "core/pool.hpp"

namespace clmm {

// One atomic interval's contribution to a trade.  delta_x/delta_y are the
// token amounts exchanged inside the interval (both positive); fee_usd is
// the dollar fee charged on the interval's share of the input amount.
struct SwapFill {
    int interval = 0;
    double delta_x = 0.0;
    double delta_y = 0.0;
    double fee_usd = 0.0;
};

struct SwapResult {
    double amount_in = 0.0;    // equals the requested input when fully absorbed
    double amount_out = 0.0;   // sum of the output-side fills
    double final_price = 0.0;  // pool price after the trade
    std::vector<SwapFill> fills;
    PoolState after;           // input pool with the price advanced
};

// Walks the tick grid interval by interval, draining each interval's
// capacity until the input amount is spent.  Appends one fill per interval
// that exchanged a nonzero amount (zero-liquidity intervals are crossed
// silently) into `fills`, which is cleared first, and returns the final
// price.  `fee_usd_per_input` is the dollar fee charged per unit of input
// (fee_rate times the input token's dollar price).  This is the
// allocation-light path used by the optimizer's inner loops.
double walk_swap(const PoolState& pool, double amount_in, Direction direction,
                 const Position* extra, double fee_usd_per_input,
                 std::vector<SwapFill>& fills, double& amount_out);

// Full-fat swap: validates inputs, runs the walk with an optional extra
// position supplying liquidity alongside the resting intervals, and
// returns the result together with the advanced pool state.  The input
// pool is left untouched.  `input_price_usd` is the dollar price of the
// input-side token and only scales the recorded fees; the curve itself is
// moved by the full input amount (fees are charged on top).
SwapResult execute_swap(const PoolState& pool, double amount_in, Direction direction,
                        const std::optional<Position>& extra, double input_price_usd);

// Final pool price of the trade executed against resting liquidity only.
double final_price_no_jit(const PoolState& pool, double amount_in, Direction direction);

}  // namespace clmm
