#include "jit/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "util/text.hpp"

namespace clmm::jit {

namespace {

// Relative overlap below this is treated as rounding dust, both when
// deciding whether the price path touched an interval and when checking
// budget feasibility.
constexpr double kRelSlack = 1e-12;
constexpr double kBudgetSlack = 1e-9;

// Pulls a price onto the nearest grid tick when it is within a couple of
// ULP of one.  Mirrored prices (1/q) land next to, not on, the mirrored
// tick; without snapping a boundary walk could graze an interval the
// original trade never touched.
double snap_to_tick(const TickGrid& grid, double price) {
    constexpr double tol = 1e-13;
    double lo = grid.min_price();
    double hi = grid.max_price();
    if (price < lo) return (lo - price <= tol * lo) ? lo : price;
    if (price > hi) return (price - hi <= tol * hi) ? hi : price;
    int below = grid.interval_below(price);  // -1 only when price == lo
    for (int i : {below, below + 1}) {
        if (i < 0 || i > grid.interval_count()) continue;
        double tick = grid.tick_price(i);
        if (std::abs(price - tick) <= tol * tick) return tick;
    }
    return price;
}

std::uint64_t mix_seed(std::uint64_t seed, TickRange range) {
    std::uint64_t h = seed;
    h ^= static_cast<std::uint64_t>(range.lo) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(range.hi) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    return h;
}

// Candidate ordering: higher utility wins; exact ties prefer the smaller
// position, then the narrower range, then the lower bound.  Keeps the
// search result independent of evaluation order.
struct Candidate {
    double utility = -std::numeric_limits<double>::infinity();
    double liquidity = 0.0;
    TickRange range;
    UtilityBreakdown breakdown;
};

bool better(const Candidate& a, const Candidate& b) {
    if (a.utility != b.utility) return a.utility > b.utility;
    if (a.liquidity != b.liquidity) return a.liquidity < b.liquidity;
    if (a.range.width() != b.range.width()) return a.range.width() < b.range.width();
    return a.range.lo < b.range.lo;
}

Position range_position(const TickGrid& grid, TickRange range, double liquidity) {
    return Position{liquidity, grid.tick_price(range.lo), grid.tick_price(range.hi)};
}

}  // namespace

void SwapParams::validate() const {
    if (!(amount_in > 0.0) || !std::isfinite(amount_in))
        throw invalid_argument_error("swap amount must be positive and finite");
    prices.validate();
}

const char* to_string(Solver s) {
    return s == Solver::grid_refine ? "GRID_REFINE" : "PSO";
}

Solver solver_from_string(const std::string& s) {
    if (s == "GRID_REFINE") return Solver::grid_refine;
    if (s == "PSO") return Solver::pso;
    throw parse_error("unknown solver '" + s + "' (expected GRID_REFINE or PSO)");
}

const char* to_string(Archetype a) {
    switch (a) {
        case Archetype::overpriced: return "OVERPRICED";
        case Archetype::arbitrageur: return "ARBITRAGEUR";
        case Archetype::overshoot: return "OVERSHOOT";
    }
    return "?";
}

void JitConfig::validate() const {
    if (!std::isfinite(budget) || !(bid_cost >= 0.0))
        throw invalid_argument_error("budget must be finite and bid cost >= 0");
    if (grid_points < 2) throw invalid_argument_error("grid_points must be >= 2");
    if (refine_iterations < 0) throw invalid_argument_error("refine_iterations must be >= 0");
    if (pso_particles < 1 || pso_iterations < 1)
        throw invalid_argument_error("PSO sizes must be >= 1");
    if (threads < 0) throw invalid_argument_error("threads must be >= 0");
}

SwapParams normalize_direction(const SwapParams& params) {
    params.validate();
    if (params.direction == Direction::x_in) return params;

    const TickGrid& grid = params.pool.grid;
    int count = grid.interval_count();
    TickGrid mirror = grid.inverted();
    std::vector<double> passive(count);
    for (int m = 0; m < count; ++m) passive[m] = params.pool.passive[count - 1 - m];
    double price = snap_to_tick(mirror, 1.0 / params.pool.price);
    PoolState pool(std::move(mirror), std::move(passive), price, params.pool.fee_rate);
    return SwapParams{std::move(pool), params.amount_in, Direction::x_in,
                      params.prices.swapped()};
}

std::vector<TickRange> enumerate_ranges(const SwapParams& params, double q_star,
                                        bool strict_membership) {
    const TickGrid& grid = params.pool.grid;
    double q = params.pool.price;
    if (q_star == q) return {};

    double path_lo = std::min(q, q_star);
    double path_hi = std::max(q, q_star);
    int first = -1;
    int last = -1;
    for (int m = 0; m < grid.interval_count(); ++m) {
        bool touched = grid.tick_price(m) < path_hi * (1.0 - kRelSlack) &&
                       grid.tick_price(m + 1) > path_lo * (1.0 + kRelSlack);
        if (!touched) continue;
        if (first < 0) first = m;
        last = m;
    }
    if (first < 0) return {};

    std::vector<TickRange> ranges;
    ranges.reserve(static_cast<size_t>(last - first + 1) * (last - first + 2) / 2);
    for (int a = first; a <= last; ++a) {
        for (int b = a + 1; b <= last + 1; ++b) {
            if (strict_membership) {
                bool contains_entry = grid.tick_price(a) <= q * (1.0 + kRelSlack) &&
                                      q <= grid.tick_price(b) * (1.0 + kRelSlack);
                if (!contains_entry) continue;
            }
            ranges.push_back({a, b});
        }
    }
    return ranges;
}

UtilityBreakdown evaluate_utility(const SwapParams& params, double liquidity, TickRange range,
                                  double bid_cost) {
    if (!(liquidity >= 0.0) || !std::isfinite(liquidity))
        throw invalid_argument_error("liquidity must be >= 0 and finite");
    if (params.direction != Direction::x_in)
        throw invalid_argument_error("evaluate_utility requires normalized parameters");

    UtilityBreakdown bd;
    bd.bid_cost = bid_cost;
    if (liquidity == 0.0) {
        bd.utility = -bid_cost;
        bd.final_price = params.pool.price;
        return bd;
    }

    const TickGrid& grid = params.pool.grid;
    const double q = params.pool.price;
    const double px = params.prices.px;
    const double py = params.prices.py;
    Position pos = range_position(grid, range, liquidity);

    thread_local std::vector<SwapFill> fills;
    double amount_out = 0.0;
    double fee_per_input = params.pool.fee_rate * px;
    bd.final_price = walk_swap(params.pool, params.amount_in, Direction::x_in, &pos,
                               fee_per_input, fills, amount_out);

    for (const SwapFill& fill : fills) {
        int m = fill.interval;
        if (m < range.lo || m >= range.hi) continue;
        double total = params.pool.passive[m] + liquidity;
        double share = liquidity / total;
        double entry = std::min(grid.tick_price(m + 1), std::max(q, grid.tick_price(m)));
        double kept_y = fill.delta_x * entry * total / (fill.delta_x * std::sqrt(entry) + total);
        double impact = (-px * fill.delta_x + py * kept_y) * share;
        double fee = fill.fee_usd * share;
        bd.fees += fee;
        bd.impact += impact;
        bd.per_tick.push_back({m, fee, impact});
    }
    bd.utility = bd.fees - bd.impact - bid_cost;

    // The per-interval decomposition must reprice to the same dollars as a
    // direct mint-versus-withdraw valuation of the position; the epsilon
    // term absorbs cancellation when the position dwarfs the impact.  The
    // final price carries a few ulps of walk rounding, and the valuation's
    // sensitivity to it is the position's marginal dollar value, so the
    // comparison budget must include that derivative.
    ImpactReport report = price_impact(pos, q, bd.final_price, params.prices);
    bd.position_value_entry = report.v_mint;
    bd.position_value_exit = report.v_withdraw;
    double clamped = std::min(pos.upper, std::max(pos.lower, bd.final_price));
    double sqc = std::sqrt(clamped);
    double price_deriv = 0.5 * liquidity * (px / (clamped * sqc) + py / sqc);
    double tol = std::max(1e-8 * std::max(std::abs(bd.impact), std::abs(report.impact)),
                          1e-13 * (report.v_mint + report.v_withdraw) + 1e-15 +
                              8.0 * std::numeric_limits<double>::epsilon() * clamped *
                                  price_deriv);
    if (std::abs(bd.impact - report.impact) > tol)
        throw internal_error("utility impact decomposition disagrees with valuation: per-tick " +
                             util::g12(bd.impact) + " vs direct " + util::g12(report.impact) +
                             ", tolerance " + util::g12(tol) + " at liquidity " +
                             util::g12(liquidity) + " range [" + std::to_string(range.lo) +
                             ", " + std::to_string(range.hi) + ")");

    return bd;
}

bool insufficiency_check(const SwapParams& params, TickRange range) {
    if (params.direction != Direction::x_in)
        throw invalid_argument_error("insufficiency_check requires normalized parameters");
    thread_local std::vector<SwapFill> fills;
    double amount_out = 0.0;
    walk_swap(params.pool, params.amount_in, Direction::x_in, nullptr, 0.0, fills, amount_out);

    double hurdle = 1.0 + params.pool.fee_rate;
    bool any = false;
    for (const SwapFill& fill : fills) {
        if (fill.interval < range.lo || fill.interval >= range.hi) continue;
        if (fill.delta_x <= 0.0) continue;
        any = true;
        double ratio = (fill.delta_y * params.prices.py) / (fill.delta_x * params.prices.px);
        if (!(hurdle < ratio)) return false;
    }
    return any;
}

namespace {

// Largest liquidity whose mint cost plus bid fits the budget and whose
// withdrawal value after the trade still fits it.  The exit value grows
// with the position size, so a bisection on the exit constraint is
// enough when the entry-cost cap alone overshoots.
double feasible_cap(const SwapParams& params, TickRange range, const JitConfig& config) {
    double unit_cost =
        position_value(range_position(params.pool.grid, range, 1.0), params.pool.price,
                       params.prices);
    double cap = (config.budget - config.bid_cost) / unit_cost;
    if (!(cap > 0.0)) return 0.0;

    double budget_limit = config.budget * (1.0 + kBudgetSlack);
    UtilityBreakdown at_cap = evaluate_utility(params, cap, range, config.bid_cost);
    if (at_cap.position_value_exit <= budget_limit) return cap;

    double lo = 0.0;
    double hi = cap;
    for (int i = 0; i < 64; ++i) {
        double mid = 0.5 * (lo + hi);
        UtilityBreakdown bd = evaluate_utility(params, mid, range, config.bid_cost);
        (bd.position_value_exit <= budget_limit ? lo : hi) = mid;
    }
    return lo;
}

Candidate solve_grid_refine(const SwapParams& params, TickRange range, const JitConfig& config,
                            double cap) {
    Candidate best;
    auto consider = [&](double liquidity) {
        UtilityBreakdown bd = evaluate_utility(params, liquidity, range, config.bid_cost);
        double utility = bd.utility;
        Candidate cand{utility, liquidity, range, std::move(bd)};
        if (better(cand, best)) best = std::move(cand);
        return utility;
    };

    int points = config.grid_points;
    double step = cap / (points - 1);
    int best_index = 0;
    double best_grid_utility = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < points; ++k) {
        double liquidity = (k == points - 1) ? cap : step * k;
        double utility = consider(liquidity);
        if (utility > best_grid_utility) {
            best_grid_utility = utility;
            best_index = k;
        }
    }

    // Golden-section pass inside the bracket around the best grid point.
    double lo = std::max(0.0, step * (best_index - 1));
    double hi = std::min(cap, step * (best_index + 1));
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double u1 = consider(x1);
    double u2 = consider(x2);
    for (int i = 0; i < config.refine_iterations; ++i) {
        if (u1 > u2) {
            hi = x2;
            x2 = x1;
            u2 = u1;
            x1 = hi - inv_phi * (hi - lo);
            u1 = consider(x1);
        } else {
            lo = x1;
            x1 = x2;
            u1 = u2;
            x2 = lo + inv_phi * (hi - lo);
            u2 = consider(x2);
        }
    }
    consider(0.5 * (lo + hi));
    return best;
}

Candidate solve_pso(const SwapParams& params, TickRange range, const JitConfig& config,
                    double cap) {
    Candidate best;
    auto assess = [&](double liquidity) {
        UtilityBreakdown bd = evaluate_utility(params, liquidity, range, config.bid_cost);
        Candidate cand{bd.utility, liquidity, range, std::move(bd)};
        if (better(cand, best)) best = cand;
        return cand;
    };

    // Non-participation and the budget boundary are always assessed so the
    // swarm cannot miss them.
    assess(0.0);
    assess(cap);

    std::mt19937_64 rng(mix_seed(config.seed, range));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    constexpr double inertia = 0.7298;
    constexpr double pull = 1.49618;

    int n = config.pso_particles;
    std::vector<double> pos(n), vel(n, 0.0), best_pos(n), best_util(n);
    for (int i = 0; i < n; ++i) {
        pos[i] = unit(rng) * cap;
        Candidate c = assess(pos[i]);
        best_pos[i] = pos[i];
        best_util[i] = c.utility;
    }
    for (int t = 0; t < config.pso_iterations; ++t) {
        for (int i = 0; i < n; ++i) {
            vel[i] = inertia * vel[i] + pull * unit(rng) * (best_pos[i] - pos[i]) +
                     pull * unit(rng) * (best.liquidity - pos[i]);
            pos[i] += vel[i];
            if (pos[i] < 0.0 || pos[i] > cap) {
                pos[i] = std::clamp(pos[i], 0.0, cap);
                vel[i] = 0.0;
            }
            Candidate c = assess(pos[i]);
            if (c.utility > best_util[i]) {
                best_util[i] = c.utility;
                best_pos[i] = pos[i];
            }
        }
    }
    return best;
}

Candidate solve_range(const SwapParams& params, TickRange range, const JitConfig& config) {
    double cap = feasible_cap(params, range, config);
    if (cap <= 0.0) {
        UtilityBreakdown bd = evaluate_utility(params, 0.0, range, config.bid_cost);
        return Candidate{bd.utility, 0.0, range, std::move(bd)};
    }
    return config.solver == Solver::grid_refine ? solve_grid_refine(params, range, config, cap)
                                                : solve_pso(params, range, config, cap);
}

}  // namespace

LiquidityResult optimize_liquidity(const SwapParams& params, TickRange range,
                                   const JitConfig& config) {
    config.validate();
    if (!(config.budget > config.bid_cost))
        throw budget_error("budget does not cover the bid cost");
    Candidate best = solve_range(params, range, config);
    return LiquidityResult{best.liquidity, std::move(best.breakdown)};
}

Archetype classify_archetype(double q, double q_star, const MarketPrices& prices) {
    prices.validate();
    if (!(q > 0.0) || !(q_star > 0.0))
        throw invalid_argument_error("prices must be positive");
    if (q == q_star)
        throw invalid_argument_error("degenerate trade: final price equals entry price");

    double p = prices.ratio();
    if ((q_star < q && q <= p) || (q_star > q && q >= p)) return Archetype::overpriced;
    if ((q < q_star && q_star <= p) || (q > q_star && q_star >= p))
        return Archetype::arbitrageur;
    return Archetype::overshoot;
}

namespace {

struct NormalizedProblem {
    SwapParams params;  // direction == x_in
    bool mirrored = false;
    double q_star = 0.0;  // normalized orientation
    std::vector<TickRange> ranges;
};

NormalizedProblem build_problem(const SwapParams& raw, const JitConfig& config) {
    NormalizedProblem prob{normalize_direction(raw), raw.direction == Direction::y_in, 0.0, {}};
    prob.q_star = final_price_no_jit(prob.params.pool, prob.params.amount_in, Direction::x_in);
    prob.ranges = enumerate_ranges(prob.params, prob.q_star, config.strict_membership);
    return prob;
}

// Maps a caller-space position onto a normalized-space range, or nothing
// when the position is off-grid.
std::optional<TickRange> normalized_range_of(const NormalizedProblem& prob,
                                             const SwapParams& raw, const Position& pos) {
    int first;
    int last;
    try {
        std::tie(first, last) = raw.pool.position_interval_span(pos);
    } catch (const invalid_argument_error&) {
        return std::nullopt;
    }
    int count = raw.pool.grid.interval_count();
    if (prob.mirrored) return TickRange{count - 1 - last, count - first};
    return TickRange{first, last + 1};
}

bool candidate_feasible(const UtilityBreakdown& bd, const JitConfig& config) {
    double limit = config.budget * (1.0 + kBudgetSlack);
    return bd.position_value_entry + config.bid_cost <= limit &&
           bd.position_value_exit <= limit;
}

}  // namespace

OptimizeOutcome optimal_strategy(const SwapParams& params, const JitConfig& config,
                                 const std::optional<Position>& seed_position) {
    params.validate();
    config.validate();
    if (!(config.budget > config.bid_cost))
        throw budget_error("budget does not cover the bid cost");

    NormalizedProblem prob = build_problem(params, config);

    OptimizeOutcome outcome;
    outcome.q_star = final_price_no_jit(params.pool, params.amount_in, params.direction);
    outcome.archetype = classify_archetype(params.pool.price, outcome.q_star, params.prices);
    outcome.ranges_evaluated = static_cast<int>(prob.ranges.size());

    Candidate best;
    for (TickRange range : prob.ranges) {
        Candidate cand = solve_range(prob.params, range, config);
        if (better(cand, best)) best = std::move(cand);
    }

    if (seed_position.has_value() && seed_position->liquidity > 0.0) {
        auto range = normalized_range_of(prob, params, *seed_position);
        if (range.has_value() &&
            std::find(prob.ranges.begin(), prob.ranges.end(), *range) != prob.ranges.end()) {
            UtilityBreakdown bd = evaluate_utility(prob.params, seed_position->liquidity, *range,
                                                   config.bid_cost);
            if (candidate_feasible(bd, config)) {
                Candidate cand{bd.utility, seed_position->liquidity, *range, std::move(bd)};
                if (better(cand, best)) best = std::move(cand);
            }
        }
    }

    bool participate = best.liquidity > 0.0 && best.utility > config.utility_floor;
    if (!participate) {
        outcome.strategy.participate = false;
        outcome.breakdown = UtilityBreakdown{};
        outcome.breakdown.final_price = outcome.q_star;
        return outcome;
    }

    int count = params.pool.grid.interval_count();
    TickRange caller_range = prob.mirrored
                                 ? TickRange{count - best.range.hi, count - best.range.lo}
                                 : best.range;
    outcome.strategy.participate = true;
    outcome.strategy.liquidity = best.liquidity;
    outcome.strategy.range = caller_range;
    outcome.strategy.lower = params.pool.grid.tick_price(caller_range.lo);
    outcome.strategy.upper = params.pool.grid.tick_price(caller_range.hi);
    outcome.breakdown = std::move(best.breakdown);
    if (prob.mirrored) {
        // Reindexing alone restores the caller's walk order: the mirrored
        // walk visits intervals in descending index order, which maps back
        // to ascending caller indices.
        for (PerTickUtility& tick : outcome.breakdown.per_tick)
            tick.interval = count - 1 - tick.interval;
        outcome.breakdown.final_price = 1.0 / outcome.breakdown.final_price;
    }
    return outcome;
}

bool strategy_in_search_space(const SwapParams& params, const JitConfig& config,
                              const Position& pos) {
    params.validate();
    config.validate();
    if (!(pos.liquidity > 0.0)) return false;
    NormalizedProblem prob = build_problem(params, config);
    auto range = normalized_range_of(prob, params, pos);
    if (!range.has_value()) return false;
    if (std::find(prob.ranges.begin(), prob.ranges.end(), *range) == prob.ranges.end())
        return false;
    UtilityBreakdown bd =
        evaluate_utility(prob.params, pos.liquidity, *range, config.bid_cost);
    return candidate_feasible(bd, config);
}

}  // namespace clmm::jit
