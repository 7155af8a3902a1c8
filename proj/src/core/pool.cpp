#include "core/pool.hpp"

#include <algorithm>
#include <cmath>

namespace clmm {

PoolState::PoolState(TickGrid g, std::vector<double> passive_liquidity, double current_price,
                     double fee)
    : grid(std::move(g)), passive(std::move(passive_liquidity)), price(current_price),
      fee_rate(fee) {
    if (static_cast<int>(passive.size()) != grid.interval_count())
        throw invalid_argument_error("liquidity vector size must equal the interval count");
    for (double p : passive)
        if (!(p >= 0.0) || !std::isfinite(p))
            throw invalid_argument_error("interval liquidity must be finite and >= 0");
    if (!std::isfinite(price) || !grid.contains(price))
        throw invalid_argument_error("pool price must lie within the grid span");
    if (!(fee_rate > 0.0) || !(fee_rate < 1.0))
        throw invalid_argument_error("fee rate must lie in (0, 1)");
}

PoolState PoolState::from_positions(const TickGrid& g, std::span<const Position> positions,
                                    double current_price, double fee) {
    std::vector<double> acc(g.interval_count(), 0.0);
    PoolState pool(g, std::move(acc), current_price, fee);
    for (int m = 0; m < g.interval_count(); ++m)
        pool.passive[m] = liquidity_at(pool, positions, m);
    return pool;
}

std::pair<int, int> PoolState::position_interval_span(const Position& pos) const {
    pos.validate();
    int lo = grid.index_of_tick(pos.lower);
    int hi = grid.index_of_tick(pos.upper);
    if (lo >= hi)
        throw invalid_argument_error("position must span at least one interval");
    return {lo, hi - 1};
}

PoolState PoolState::with_price(double new_price) const {
    PoolState next = *this;
    if (!std::isfinite(new_price) || !grid.contains(new_price))
        throw invalid_argument_error("new price must lie within the grid span");
    next.price = new_price;
    return next;
}

TokenAmounts position_amounts(const Position& pos, double q) {
    pos.validate();
    if (!(q > 0.0))
        throw invalid_argument_error("price must be positive");
    double clamped = std::min(pos.upper, std::max(pos.lower, q));
    double sqrt_clamped = std::sqrt(clamped);
    double sqrt_lower = std::sqrt(pos.lower);

    // Difference-of-roots forms keep the error relative to the amounts
    // themselves; the naive sqrt-then-subtract carries an absolute error
    // of order liquidity * eps, which dominates when the price sits near
    // a bound and the liquidity is large.
    double y = pos.liquidity * ((clamped - pos.lower) / (sqrt_clamped + sqrt_lower));
    double x;
    if (std::isinf(pos.upper)) {
        x = pos.liquidity / sqrt_clamped;
    } else {
        double sqrt_upper = std::sqrt(pos.upper);
        x = pos.liquidity * ((pos.upper - clamped) / sqrt_upper) /
            (sqrt_upper + sqrt_clamped) / sqrt_clamped;
    }
    return TokenAmounts{x, y};
}

double liquidity_at(const PoolState& pool, std::span<const Position> positions, int m) {
    if (m < 0 || m >= pool.grid.interval_count())
        throw invalid_argument_error("interval index out of range");
    double lo = pool.grid.tick_price(m);
    double hi = pool.grid.tick_price(m + 1);
    // Coverage is tested with a tiny relative slack so a bound that was
    // recomputed externally (and differs from the stored tick by a ULP)
    // still counts as sitting on the tick.
    constexpr double slack = 1e-12;
    double total = 0.0;
    for (const Position& pos : positions) {
        pos.validate();
        if (pos.lower <= lo * (1.0 + slack) && hi * (1.0 - slack) <= pos.upper)
            total += pos.liquidity;
    }
    return total;
}

}  // namespace clmm
