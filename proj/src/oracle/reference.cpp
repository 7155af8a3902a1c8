#include "oracle/reference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace clmm::oracle {

namespace {

// Reserve flow densities per unit price move at constant liquidity.
double density_x(double lambda, double p) { return lambda / (2.0 * p * std::sqrt(p)); }
double density_y(double lambda, double p) { return lambda / (2.0 * std::sqrt(p)); }

struct Segment {
    double from = 0.0;  // integration start price (trade entry side)
    double to = 0.0;    // integration end price (interval boundary)
};

// Trapezoid integral of `f` over one micro-cell.
template <typename F>
double cell(F f, double lambda, double p0, double p1) {
    return std::abs(p1 - p0) * 0.5 * (f(lambda, p0) + f(lambda, p1));
}

}  // namespace

ReferenceSwap integrate_swap(const PoolState& pool, double amount_in, Direction direction,
                             const std::optional<Position>& extra, long steps_per_interval) {
    if (!(amount_in > 0.0) || !std::isfinite(amount_in))
        throw invalid_argument_error("swap amount must be positive and finite");
    if (steps_per_interval < 16)
        throw invalid_argument_error("reference integrator needs at least 16 steps");

    const TickGrid& grid = pool.grid;
    int extra_first = 0;
    int extra_last = -1;
    double extra_liq = 0.0;
    if (extra.has_value() && extra->liquidity > 0.0) {
        auto [first, last] = pool.position_interval_span(*extra);
        extra_first = first;
        extra_last = last;
        extra_liq = extra->liquidity;
    }
    auto liquidity_in = [&](int m) {
        double lam = pool.passive[m];
        if (m >= extra_first && m <= extra_last) lam += extra_liq;
        return lam;
    };

    const bool down = direction == Direction::x_in;
    // Input/output densities depend on the side: an X deposit consumes
    // density_x while the price falls, a Y deposit consumes density_y
    // while it rises.
    auto in_density = [&](double lambda, double p) {
        return down ? density_x(lambda, p) : density_y(lambda, p);
    };
    auto out_density = [&](double lambda, double p) {
        return down ? density_y(lambda, p) : density_x(lambda, p);
    };

    double remaining = amount_in;
    double out_total = 0.0;
    double price = pool.price;
    int m = down ? grid.interval_below(price) : grid.interval_above(price);

    while (true) {
        bool exhausted = down ? m < 0 : m >= grid.interval_count();
        if (exhausted)
            throw insufficient_liquidity_error(
                "trade exhausts the tick grid: " + std::to_string(remaining) + " of " +
                std::to_string(amount_in) + " left unfilled");

        double lambda = liquidity_in(m);
        Segment seg{price, down ? grid.tick_price(m) : grid.tick_price(m + 1)};
        if (lambda <= 0.0) {
            price = seg.to;
            m += down ? -1 : 1;
            continue;
        }

        double h = (seg.to - seg.from) / static_cast<double>(steps_per_interval);
        double p_lo = seg.from;
        bool done = false;
        for (long k = 0; k < steps_per_interval; ++k) {
            double p_hi = (k == steps_per_interval - 1) ? seg.to : seg.from + h * (k + 1);
            double take = cell(in_density, lambda, p_lo, p_hi);
            if (take < remaining) {
                remaining -= take;
                out_total += cell(out_density, lambda, p_lo, p_hi);
                p_lo = p_hi;
                continue;
            }
            // The trade ends inside this micro-cell; bisect the endpoint.
            double a = p_lo;
            double b = p_hi;
            for (int i = 0; i < 64; ++i) {
                double mid = 0.5 * (a + b);
                (cell(in_density, lambda, p_lo, mid) < remaining ? a : b) = mid;
            }
            double p_end = 0.5 * (a + b);
            out_total += cell(out_density, lambda, p_lo, p_end);
            price = p_end;
            remaining = 0.0;
            done = true;
            break;
        }
        if (done) break;
        price = seg.to;
        m += down ? -1 : 1;
        if (remaining <= 0.0) break;
    }
    return ReferenceSwap{price, out_total};
}

SwapAgreement check_swap(const PoolState& pool, double amount_in, Direction direction,
                         const std::optional<Position>& extra, double tolerance,
                         long steps_per_interval) {
    SwapAgreement agreement;
    agreement.tolerance = tolerance;
    agreement.reference = integrate_swap(pool, amount_in, direction, extra, steps_per_interval);

    SwapResult fast = execute_swap(pool, amount_in, direction, extra, 1.0);
    agreement.fast_final_price = fast.final_price;
    agreement.fast_amount_out = fast.amount_out;
    agreement.rel_dev_price = std::abs(fast.final_price - agreement.reference.final_price) /
                              agreement.reference.final_price;
    agreement.rel_dev_out = std::abs(fast.amount_out - agreement.reference.amount_out) /
                            std::max(agreement.reference.amount_out, 1e-300);
    agreement.passed =
        agreement.rel_dev_price <= tolerance && agreement.rel_dev_out <= tolerance;
    return agreement;
}

GridSearchResult exhaustive_strategy_search(const jit::SwapParams& params,
                                            const jit::JitConfig& config, int total_points) {
    using jit::TickRange;
    params.validate();
    config.validate();
    if (total_points < 2) throw invalid_argument_error("total_points must be >= 2");

    jit::SwapParams normalized = jit::normalize_direction(params);
    double q_star = final_price_no_jit(normalized.pool, normalized.amount_in, Direction::x_in);
    std::vector<TickRange> ranges =
        jit::enumerate_ranges(normalized, q_star, config.strict_membership);

    GridSearchResult best;
    if (ranges.empty()) return best;
    best.found = true;
    best.utility = -std::numeric_limits<double>::infinity();

    int per_range = std::max(2, total_points / static_cast<int>(ranges.size()));
    double limit = config.budget * (1.0 + 1e-9);
    for (TickRange range : ranges) {
        Position unit{1.0, normalized.pool.grid.tick_price(range.lo),
                      normalized.pool.grid.tick_price(range.hi)};
        double unit_cost = position_value(unit, normalized.pool.price, normalized.prices);
        double cap = (config.budget - config.bid_cost) / unit_cost;
        if (!(cap > 0.0)) continue;
        for (int k = 0; k < per_range; ++k) {
            double liquidity = cap * k / (per_range - 1);
            jit::UtilityBreakdown bd =
                jit::evaluate_utility(normalized, liquidity, range, config.bid_cost);
            if (bd.position_value_entry + config.bid_cost > limit) continue;
            if (bd.position_value_exit > limit) continue;
            if (bd.utility > best.utility) {
                best.utility = bd.utility;
                best.liquidity = liquidity;
                best.range = range;
            }
        }
    }
    return best;
}

}  // namespace clmm::oracle
