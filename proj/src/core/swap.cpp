#include "core/swap.hpp"

#include <cmath>
#include <string>

namespace clmm {

namespace {

struct ExtraSpan {
    double liquidity = 0.0;
    int first = 0;
    int last = -1;  // inclusive; empty when last < first

    double at(int m) const { return (m >= first && m <= last) ? liquidity : 0.0; }
};

ExtraSpan resolve_extra(const PoolState& pool, const Position* extra) {
    ExtraSpan span;
    if (extra == nullptr || extra->liquidity == 0.0) return span;
    auto [first, last] = pool.position_interval_span(*extra);
    span.liquidity = extra->liquidity;
    span.first = first;
    span.last = last;
    return span;
}

[[noreturn]] void throw_exhausted(double remaining, double amount_in) {
    throw insufficient_liquidity_error(
        "trade exhausts the tick grid: " + std::to_string(remaining) + " of " +
        std::to_string(amount_in) + " left unfilled");
}

}  // namespace

double walk_swap(const PoolState& pool, double amount_in, Direction direction,
                 const Position* extra, double fee_usd_per_input,
                 std::vector<SwapFill>& fills, double& amount_out) {
    fills.clear();
    amount_out = 0.0;

    const TickGrid& grid = pool.grid;
    const ExtraSpan jit = resolve_extra(pool, extra);
    double remaining = amount_in;
    double cur_sqrt = std::sqrt(pool.price);

    // Deltas use quotient-of-difference forms throughout: the naive
    // 1/sqrt subtractions carry an absolute error of order lam * eps,
    // which dominates the fill amounts when lam is very deep.
    if (direction == Direction::x_in) {
        // Price decreases; drain intervals downward from the current one.
        int m = grid.interval_below(pool.price);
        while (remaining > 0.0) {
            if (m < 0) throw_exhausted(remaining, amount_in);
            double lam = pool.passive[m] + jit.at(m);
            double lo_sqrt = grid.sqrt_tick_price(m);
            if (lam <= 0.0) {
                // Empty interval: the price slides through without a fill.
                cur_sqrt = lo_sqrt;
                --m;
                continue;
            }
            double capacity = lam * (cur_sqrt - lo_sqrt) / (lo_sqrt * cur_sqrt);
            if (capacity <= remaining) {
                double dy = lam * (cur_sqrt - lo_sqrt);
                fills.push_back({m, capacity, dy, capacity * fee_usd_per_input});
                amount_out += dy;
                remaining -= capacity;
                cur_sqrt = lo_sqrt;
                --m;
            } else {
                double denom = lam + remaining * cur_sqrt;
                double new_sqrt = lam * cur_sqrt / denom;
                double dy = lam * remaining * (cur_sqrt * cur_sqrt) / denom;
                fills.push_back({m, remaining, dy, remaining * fee_usd_per_input});
                amount_out += dy;
                cur_sqrt = new_sqrt;
                remaining = 0.0;
            }
        }
    } else {
        // Price increases; fill intervals upward.
        int m = grid.interval_above(pool.price);
        while (remaining > 0.0) {
            if (m >= grid.interval_count()) throw_exhausted(remaining, amount_in);
            double lam = pool.passive[m] + jit.at(m);
            double hi_sqrt = grid.sqrt_tick_price(m + 1);
            if (lam <= 0.0) {
                cur_sqrt = hi_sqrt;
                ++m;
                continue;
            }
            double capacity = lam * (hi_sqrt - cur_sqrt);
            if (capacity <= remaining) {
                double dx = lam * (hi_sqrt - cur_sqrt) / (cur_sqrt * hi_sqrt);
                fills.push_back({m, dx, capacity, capacity * fee_usd_per_input});
                amount_out += dx;
                remaining -= capacity;
                cur_sqrt = hi_sqrt;
                ++m;
            } else {
                double new_sqrt = remaining / lam + cur_sqrt;
                double dx = remaining / (cur_sqrt * new_sqrt);
                fills.push_back({m, dx, remaining, remaining * fee_usd_per_input});
                amount_out += dx;
                cur_sqrt = new_sqrt;
                remaining = 0.0;
            }
        }
    }
    return cur_sqrt * cur_sqrt;
}

SwapResult execute_swap(const PoolState& pool, double amount_in, Direction direction,
                        const std::optional<Position>& extra, double input_price_usd) {
    if (!(amount_in > 0.0) || !std::isfinite(amount_in))
        throw invalid_argument_error("swap amount must be positive and finite");
    if (!(input_price_usd > 0.0) || !std::isfinite(input_price_usd))
        throw invalid_argument_error("input token price must be positive and finite");

    SwapResult result{0.0, 0.0, 0.0, {}, pool};
    const Position* extra_ptr = extra.has_value() ? &*extra : nullptr;
    result.final_price = walk_swap(pool, amount_in, direction, extra_ptr,
                                   pool.fee_rate * input_price_usd, result.fills,
                                   result.amount_out);
    result.amount_in = amount_in;
    result.after.price = result.final_price;
    return result;
}

double final_price_no_jit(const PoolState& pool, double amount_in, Direction direction) {
    if (!(amount_in > 0.0) || !std::isfinite(amount_in))
        throw invalid_argument_error("swap amount must be positive and finite");
    std::vector<SwapFill> scratch;
    double out = 0.0;
    return walk_swap(pool, amount_in, direction, nullptr, 0.0, scratch, out);
}

}  // namespace clmm
