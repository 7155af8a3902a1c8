#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/swap.hpp"
#include "valuation/impact.hpp"

namespace clmm::jit {

// Full description of one incoming trade from the JIT provider's
// viewpoint: the pool it hits, the input amount and side, and the
// external market prices used to value tokens in dollars.
struct SwapParams {
    PoolState pool;
    double amount_in = 0.0;
    Direction direction = Direction::x_in;
    MarketPrices prices;

    void validate() const;
};

enum class Solver { grid_refine, pso };
const char* to_string(Solver s);
Solver solver_from_string(const std::string& s);

struct JitConfig {
    double budget = 1e6;     // total dollars available for the position
    double bid_cost = 0.0;   // fixed cost paid on participation
    Solver solver = Solver::grid_refine;
    int grid_points = 512;       // uniform liquidity grid size
    int refine_iterations = 64;  // golden-section steps after the grid pass
    int pso_particles = 32;
    int pso_iterations = 200;
    double utility_floor = 0.0;  // participate only when best U exceeds this
    bool strict_membership = false;  // require the entry price inside the range
    std::uint64_t seed = 42;         // PSO randomness
    int threads = 0;                 // reserved for batch callers; 0 = sequential

    void validate() const;
};

// Half-open run of atomic intervals expressed by its bounding tick
// indices: prices (t_lo, t_hi), covering intervals lo .. hi-1.
struct TickRange {
    int lo = 0;
    int hi = 0;

    int width() const { return hi - lo; }
    bool operator==(const TickRange&) const = default;
};

struct PerTickUtility {
    int interval = 0;
    double fee = 0.0;     // dollars earned from this interval
    double impact = 0.0;  // dollars lost to adverse repricing here
};

struct UtilityBreakdown {
    double fees = 0.0;      // F
    double impact = 0.0;    // C
    double bid_cost = 0.0;  // v
    double utility = 0.0;   // F - C - v
    std::vector<PerTickUtility> per_tick;

    // Extras recorded for budget checks and reporting.
    double final_price = 0.0;            // pool price after the trade
    double position_value_entry = 0.0;   // mint cost in dollars
    double position_value_exit = 0.0;    // withdrawal value in dollars
};

struct Strategy {
    bool participate = false;
    double liquidity = 0.0;
    TickRange range;     // indices on the caller's pool grid
    double lower = 0.0;  // tick prices of the range bounds
    double upper = 0.0;
};

enum class Archetype { overpriced, arbitrageur, overshoot };
const char* to_string(Archetype a);

// ===== Direction normalization =====
// Trades are analysed with the input token called X and the price
// falling.  A Y-side input is mapped onto the mirror pool (prices
// inverted, grid reversed, token prices swapped); applying the map twice
// restores the original parameters up to grid reindexing.
SwapParams normalize_direction(const SwapParams& params);

// ===== Algorithm building blocks (normalized params) =====

// All candidate placement ranges for the price path q -> q_star: every
// pair of grid ticks whose atomic intervals are all touched by the open
// path interval.  Empty when the trade does not move the price.
std::vector<TickRange> enumerate_ranges(const SwapParams& params, double q_star,
                                        bool strict_membership);

// Runs the trade with `liquidity` deployed over `range` and decomposes
// the provider's profit per interval: pro-rata fee income minus the
// mint-versus-withdraw value loss, minus the fixed bid cost.
UtilityBreakdown evaluate_utility(const SwapParams& params, double liquidity, TickRange range,
                                  double bid_cost);

// True when, on the no-extra-liquidity fills restricted to `range`, every
// interval's output-to-input dollar ratio exceeds 1 + fee_rate: fees can
// then never compensate the repricing loss, for any liquidity.  Intervals
// without a fill are skipped; returns false when no interval filled.
bool insufficiency_check(const SwapParams& params, TickRange range);

struct LiquidityResult {
    double liquidity = 0.0;
    UtilityBreakdown breakdown;
};

// Best liquidity for a fixed range, subject to the budget: the mint cost
// plus bid may not exceed `budget`, and the position's withdrawal value
// after the trade may not exceed it either.
LiquidityResult optimize_liquidity(const SwapParams& params, TickRange range,
                                   const JitConfig& config);

// ===== Trade classification =====
// Relative position of the entry price q, the no-extra final price
// q_star, and the market-implied price.
Archetype classify_archetype(double q, double q_star, const MarketPrices& prices);

// ===== Full search =====

struct OptimizeOutcome {
    Strategy strategy;           // BOTTOM encoded as participate = false
    UtilityBreakdown breakdown;  // all-zero for BOTTOM
    Archetype archetype;
    double q_star = 0.0;  // in the caller's orientation
    int ranges_evaluated = 0;
};

// Enumerates every candidate range, optimizes liquidity within each, and
// returns the best strategy, or BOTTOM when nothing beats the utility
// floor.  Accepts raw (unnormalized) parameters.  `seed_position`, when
// given and inside the search space, is evaluated as an extra candidate
// so a known-good placement is never lost to grid resolution.
OptimizeOutcome optimal_strategy(const SwapParams& params, const JitConfig& config,
                                 const std::optional<Position>& seed_position = {});

// Whether a concrete position is something optimal_strategy could have
// returned: grid-aligned, only touched intervals, within budget at entry
// and after the trade.
bool strategy_in_search_space(const SwapParams& params, const JitConfig& config,
                              const Position& pos);

}  // namespace clmm::jit
