#pragma once

#include <span>

#include "core/pool.hpp"

namespace clmm {

// Dollar value of a position's holdings at pool price q.
double position_value(const Position& pos, double q, const MarketPrices& prices);

// Mint-versus-withdraw value comparison for a position held across a
// price move from q to q_prime, with market prices constant.
struct ImpactReport {
    double v_mint = 0.0;      // position value at q
    double v_withdraw = 0.0;  // position value at q_prime
    double impact = 0.0;      // v_mint - v_withdraw; positive = loss
    double relative = 0.0;    // impact / v_mint, 0 when undefined
    bool relative_defined = false;
};
ImpactReport price_impact(const Position& pos, double q, double q_prime,
                          const MarketPrices& prices);

// Shortcut for the dollar impact alone.
double absolute_price_impact(const Position& pos, double q, double q_prime,
                             const MarketPrices& prices);

// Sign test for the impact of a move q -> q_prime on a range [a, b],
// decided from the clamped endpoint prices alone.  NONPOSITIVE covers the
// equality case; ZERO means the price never entered the range.
enum class ThresholdSign { nonpositive, positive, zero };
const char* to_string(ThresholdSign s);
ThresholdSign threshold_sign(double q, double q_prime, double a, double b,
                             const MarketPrices& prices);

// Market-level classification of a price move relative to the
// market-implied price p = px/py.  A move that starts or ends exactly on
// p counts as diverging/crossing per the comparisons below; `boundary`
// carries the unclamped sign test, which resolves the CROSSING cases.
enum class MoveKind { diverging_gain, converging_loss, crossing };
const char* to_string(MoveKind k);
struct MoveClass {
    MoveKind kind = MoveKind::crossing;
    ThresholdSign boundary = ThresholdSign::zero;
};
MoveClass classify_move(double q, double q_prime, const MarketPrices& prices);

// Pro-rata fee split between resting liquidity and a flash position, per
// interval.  Spans must have equal length; passive[m] + jit[m] must be
// positive wherever fees[m] > 0.  passive + jit equals the fee total
// exactly (the passive share is computed by subtraction).
struct FeeSplit {
    double passive = 0.0;
    double jit = 0.0;
};
FeeSplit fee_shares(std::span<const double> fees, std::span<const double> passive,
                    std::span<const double> jit);

}  // namespace clmm
