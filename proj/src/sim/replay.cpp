#include "sim/replay.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <thread>

#include "core/swap.hpp"
#include "util/text.hpp"
#include "valuation/impact.hpp"

namespace clmm::sim {

namespace {

// Runs fn(0..n-1); worker threads pull indices from a shared counter,
// so results must be written into per-index slots.
template <typename Fn>
void for_each_index(std::size_t n, int threads, Fn fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t workers = std::min(static_cast<std::size_t>(threads), n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    std::vector<std::thread> crew;
    crew.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        crew.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> hold(failure_lock);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    for (std::thread& t : crew) t.join();
    if (failure) std::rethrow_exception(failure);
}

Position observed_position(const ObservedJit& jit, const TickGrid& grid) {
    return Position{jit.liquidity, grid.tick_price(jit.lower_tick),
                    grid.tick_price(jit.upper_tick)};
}

// Interval range after direction normalization; the grid mirror reverses
// interval order, and the mapping is its own inverse.
jit::TickRange mirrored_range(jit::TickRange range, Direction direction, int count) {
    if (direction == Direction::x_in) return range;
    return jit::TickRange{count - range.hi, count - range.lo};
}

jit::TickRange normalized_range(const ObservedJit& jit, Direction direction, int count) {
    return mirrored_range(jit::TickRange{jit.lower_tick, jit.upper_tick}, direction, count);
}

struct SandwichMetrics {
    double trader_out = 0.0;
    double passive_fees = 0.0;
    double jit_fees = 0.0;
    double slippage = 0.0;
    double trader_income_usd = 0.0;
};

SandwichMetrics measure_sandwich(const PoolState& pool, const SwapEvent& event,
                                 const std::optional<Position>& extra) {
    bool x_in = event.direction == Direction::x_in;
    double input_price = x_in ? event.prices.px : event.prices.py;
    double output_price = x_in ? event.prices.py : event.prices.px;
    SwapResult result = execute_swap(pool, event.amount_in, event.direction, extra, input_price);

    SandwichMetrics met;
    met.trader_out = result.amount_out;
    if (extra && extra->liquidity > 0.0) {
        thread_local std::vector<double> fee_cells, passive_cells, jit_cells;
        fee_cells.clear();
        passive_cells.clear();
        jit_cells.clear();
        auto [first, last] = pool.position_interval_span(*extra);
        for (const SwapFill& fill : result.fills) {
            fee_cells.push_back(fill.fee_usd);
            passive_cells.push_back(pool.passive[static_cast<std::size_t>(fill.interval)]);
            bool in_range = fill.interval >= first && fill.interval <= last;
            jit_cells.push_back(in_range ? extra->liquidity : 0.0);
        }
        FeeSplit split = fee_shares(fee_cells, passive_cells, jit_cells);
        met.passive_fees = split.passive;
        met.jit_fees = split.jit;
    } else {
        for (const SwapFill& fill : result.fills) met.passive_fees += fill.fee_usd;
    }

    // Ideal execution fills the whole trade at the entry price.
    double ideal_out = x_in ? event.amount_in * pool.price : event.amount_in / pool.price;
    met.slippage = (ideal_out - result.amount_out) / ideal_out;
    met.trader_income_usd =
        output_price * result.amount_out - input_price * event.amount_in;
    return met;
}

double resolve_budget(const SwapEvent& event, const PoolState& pool,
                      const jit::JitConfig& config) {
    if (event.observed) {
        Position pos = observed_position(*event.observed, pool.grid);
        return position_value(pos, pool.price, event.prices);
    }
    if (event.budget_usd) return *event.budget_usd;
    return config.budget;
}

// Replays one event.  `forced_budget`, when set, replaces the resolved
// budget (the sweep passes multiplier * budget; zero skips the search
// and reproduces the plain trade).
ReplayRecord run_event(const SwapEvent& event, const PoolState& snapshot,
                       const jit::JitConfig& base_config,
                       std::optional<double> forced_budget) {
    ReplayRecord rec;
    rec.event_id = event.event_id;
    try {
        PoolState pool(snapshot.grid, snapshot.passive, snapshot.price, event.fee_rate);
        jit::SwapParams params{pool, event.amount_in, event.direction, event.prices};

        SandwichMetrics baseline = measure_sandwich(pool, event, std::nullopt);
        rec.trader_out_baseline = baseline.trader_out;
        rec.passive_fees_baseline = baseline.passive_fees;
        rec.slippage_baseline = baseline.slippage;

        double budget = forced_budget ? *forced_budget
                                      : resolve_budget(event, pool, base_config);
        rec.budget = budget;

        if (event.observed) {
            rec.has_real = true;
            jit::SwapParams normalized = jit::normalize_direction(params);
            jit::UtilityBreakdown real_bd = jit::evaluate_utility(
                normalized, event.observed->liquidity,
                normalized_range(*event.observed, event.direction,
                                 pool.grid.interval_count()),
                base_config.bid_cost);
            rec.real_jit_utility = real_bd.utility;
        }

        jit::OptimizeOutcome outcome;
        if (budget > base_config.bid_cost) {
            jit::JitConfig config = base_config;
            config.budget = budget;
            std::optional<Position> seed;
            if (event.observed) seed = observed_position(*event.observed, pool.grid);
            outcome = jit::optimal_strategy(params, config, seed);
            rec.archetype = jit::to_string(outcome.archetype);
        } else {
            // No affordable position; classify from the plain trade.
            double q_star = final_price_no_jit(pool, event.amount_in, event.direction);
            rec.archetype =
                jit::to_string(jit::classify_archetype(pool.price, q_star, event.prices));
        }

        rec.participate = outcome.strategy.participate;
        if (rec.participate) {
            rec.strategy = outcome.strategy;
            rec.optimized_utility = outcome.breakdown.utility;
            rec.fee_jit = outcome.breakdown.fees;
            rec.impact_gain = std::abs(outcome.breakdown.impact);
            double returns = outcome.breakdown.fees + rec.impact_gain;
            rec.impact_share = returns > 0.0 ? rec.impact_gain / returns : 0.0;

            Position pos{outcome.strategy.liquidity, outcome.strategy.lower,
                         outcome.strategy.upper};
            SandwichMetrics sandwich = measure_sandwich(pool, event, pos);
            rec.trader_out = sandwich.trader_out;
            rec.passive_fees = sandwich.passive_fees;
            rec.slippage = sandwich.slippage;
            rec.trader_income_usd = sandwich.trader_income_usd;
        } else {
            rec.optimized_utility = 0.0;
            rec.trader_out = baseline.trader_out;
            rec.passive_fees = baseline.passive_fees;
            rec.slippage = baseline.slippage;
            rec.trader_income_usd = baseline.trader_income_usd;
        }
        rec.ok = true;
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
    }
    return rec;
}

// Re-runs one event with the placement held to a fixed normalized range
// and only the liquidity re-optimized under `budget`.  The sweep uses
// this above the multiplier where an event first joins: with the range
// pinned, a larger budget can only deepen the position, so the per-event
// fee split and slippage move monotonically with the multiplier.
ReplayRecord rerun_locked(const SwapEvent& event, const PoolState& snapshot,
                          const jit::JitConfig& base_config, double budget,
                          jit::TickRange range_n) {
    ReplayRecord rec;
    rec.event_id = event.event_id;
    try {
        PoolState pool(snapshot.grid, snapshot.passive, snapshot.price, event.fee_rate);
        jit::SwapParams params{pool, event.amount_in, event.direction, event.prices};

        SandwichMetrics baseline = measure_sandwich(pool, event, std::nullopt);
        rec.trader_out_baseline = baseline.trader_out;
        rec.passive_fees_baseline = baseline.passive_fees;
        rec.slippage_baseline = baseline.slippage;
        rec.budget = budget;

        double q_star = final_price_no_jit(pool, event.amount_in, event.direction);
        rec.archetype =
            jit::to_string(jit::classify_archetype(pool.price, q_star, event.prices));

        jit::LiquidityResult best;
        if (budget > base_config.bid_cost) {
            jit::JitConfig config = base_config;
            config.budget = budget;
            best = jit::optimize_liquidity(jit::normalize_direction(params), range_n, config);
        }
        rec.participate =
            best.liquidity > 0.0 && best.breakdown.utility > base_config.utility_floor;
        if (rec.participate) {
            int count = pool.grid.interval_count();
            jit::TickRange range_c = mirrored_range(range_n, event.direction, count);
            rec.strategy.participate = true;
            rec.strategy.liquidity = best.liquidity;
            rec.strategy.range = range_c;
            rec.strategy.lower = pool.grid.tick_price(range_c.lo);
            rec.strategy.upper = pool.grid.tick_price(range_c.hi);
            rec.optimized_utility = best.breakdown.utility;
            rec.fee_jit = best.breakdown.fees;
            rec.impact_gain = std::abs(best.breakdown.impact);
            double returns = best.breakdown.fees + rec.impact_gain;
            rec.impact_share = returns > 0.0 ? rec.impact_gain / returns : 0.0;

            Position pos{best.liquidity, rec.strategy.lower, rec.strategy.upper};
            SandwichMetrics sandwich = measure_sandwich(pool, event, pos);
            rec.trader_out = sandwich.trader_out;
            rec.passive_fees = sandwich.passive_fees;
            rec.slippage = sandwich.slippage;
            rec.trader_income_usd = sandwich.trader_income_usd;
        } else {
            rec.optimized_utility = 0.0;
            rec.trader_out = baseline.trader_out;
            rec.passive_fees = baseline.passive_fees;
            rec.slippage = baseline.slippage;
            rec.trader_income_usd = baseline.trader_income_usd;
        }
        rec.ok = true;
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
    }
    return rec;
}

}  // namespace

std::vector<ReplayRecord> replay(const Corpus& corpus, const ReplayConfig& config) {
    std::vector<ReplayRecord> records(corpus.events.size());
    for_each_index(corpus.events.size(), config.jit.threads, [&](std::size_t i) {
        const SwapEvent& event = corpus.events[i];
        records[i] =
            run_event(event, corpus.pools.at(event.pool_id), config.jit, std::nullopt);
    });
    return records;
}

std::vector<SweepPoint> budget_sweep(const Corpus& corpus, const ReplayConfig& config,
                                     std::span<const double> multipliers) {
    if (multipliers.empty()) throw invalid_argument_error("multipliers must not be empty");
    if (std::find(multipliers.begin(), multipliers.end(), 0.0) == multipliers.end())
        throw invalid_argument_error("multipliers must include the 0 baseline anchor");
    for (double k : multipliers)
        if (!(k >= 0.0) || !std::isfinite(k))
            throw invalid_argument_error("multipliers must be nonnegative finite");
    if (corpus.events.empty()) throw invalid_argument_error("empty corpus");

    std::size_t n = corpus.events.size();
    std::vector<double> base_budgets(n);
    for (std::size_t i = 0; i < n; ++i) {
        const SwapEvent& event = corpus.events[i];
        base_budgets[i] =
            resolve_budget(event, corpus.pools.at(event.pool_id), config.jit);
    }

    // Multipliers are processed per event in ascending order: the range is
    // searched freely until the event first participates and stays locked
    // above that, so each event's curves are monotone in the multiplier.
    std::vector<std::size_t> order(multipliers.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return multipliers[a] < multipliers[b];
    });

    std::vector<std::vector<ReplayRecord>> by_multiplier(
        multipliers.size(), std::vector<ReplayRecord>(n));
    for_each_index(n, config.jit.threads, [&](std::size_t i) {
        const SwapEvent& event = corpus.events[i];
        const PoolState& snapshot = corpus.pools.at(event.pool_id);
        std::optional<jit::TickRange> locked;
        for (std::size_t slot : order) {
            double budget = multipliers[slot] * base_budgets[i];
            ReplayRecord rec =
                locked ? rerun_locked(event, snapshot, config.jit, budget, *locked)
                       : run_event(event, snapshot, config.jit, budget);
            if (!locked && rec.ok && rec.participate)
                locked = mirrored_range(rec.strategy.range, event.direction,
                                        snapshot.grid.interval_count());
            by_multiplier[slot][i] = std::move(rec);
        }
    });

    // Aggregate only events that replayed cleanly at every multiplier so
    // each curve compares the same population.
    std::vector<bool> usable(n, true);
    for (const auto& records : by_multiplier)
        for (std::size_t i = 0; i < n; ++i)
            if (!records[i].ok) usable[i] = false;
    std::size_t kept = static_cast<std::size_t>(
        std::count(usable.begin(), usable.end(), true));
    if (kept == 0) throw error("no event replayed cleanly at every multiplier");

    double baseline_passive = 0.0;
    std::size_t anchor = static_cast<std::size_t>(
        std::find(multipliers.begin(), multipliers.end(), 0.0) - multipliers.begin());
    for (std::size_t i = 0; i < n; ++i)
        if (usable[i]) baseline_passive += by_multiplier[anchor][i].passive_fees;
    if (!(baseline_passive > 0.0))
        throw error("baseline passive fees are zero, percentages undefined");

    std::vector<SweepPoint> points;
    points.reserve(multipliers.size());
    for (std::size_t m = 0; m < multipliers.size(); ++m) {
        double passive = 0.0, slippage = 0.0, income = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!usable[i]) continue;
            passive += by_multiplier[m][i].passive_fees;
            slippage += by_multiplier[m][i].slippage;
            income += by_multiplier[m][i].trader_income_usd;
        }
        SweepPoint point;
        point.budget_multiplier = multipliers[m];
        point.passive_fee_pct = 100.0 * passive / baseline_passive;
        point.trader_slippage_pct = 100.0 * slippage / static_cast<double>(kept);
        point.trader_income_usd = income / static_cast<double>(kept);
        points.push_back(point);
    }
    return points;
}

Summary summarize(std::span<const ReplayRecord> records) {
    if (records.empty()) throw invalid_argument_error("empty record set");
    Summary s;
    std::vector<double> profits, shares;
    double slippage = 0.0, slippage_base = 0.0;
    double passive = 0.0, passive_base = 0.0, share_total = 0.0;
    for (const ReplayRecord& rec : records) {
        if (!rec.ok) {
            ++s.failed;
            continue;
        }
        ++s.events;
        if (rec.has_real) {
            ++s.with_real;
            s.total_real_utility += rec.real_jit_utility;
        }
        s.total_optimized_utility += rec.optimized_utility;
        profits.push_back(rec.optimized_utility);
        if (rec.participate) {
            ++s.participated;
            shares.push_back(rec.impact_share);
            share_total += rec.impact_share;
        }
        slippage += rec.slippage;
        slippage_base += rec.slippage_baseline;
        passive += rec.passive_fees;
        passive_base += rec.passive_fees_baseline;
    }
    if (s.events == 0) throw invalid_argument_error("no record replayed cleanly");

    if (s.with_real > 0 && s.total_real_utility != 0.0) {
        s.uplift_defined = true;
        s.uplift = (s.total_optimized_utility - s.total_real_utility) /
                   std::abs(s.total_real_utility);
    }
    s.mean_impact_share =
        s.participated > 0 ? share_total / static_cast<double>(s.participated) : 0.0;
    s.mean_slippage = slippage / static_cast<double>(s.events);
    s.mean_slippage_baseline = slippage_base / static_cast<double>(s.events);
    s.passive_fee_pct = passive_base > 0.0 ? 100.0 * passive / passive_base : 100.0;

    auto cdf_of = [](std::vector<double>& values) {
        std::sort(values.begin(), values.end());
        std::vector<CdfPoint> table;
        table.reserve(values.size());
        for (std::size_t i = 0; i < values.size(); ++i)
            table.push_back(CdfPoint{values[i], static_cast<double>(i + 1) /
                                                    static_cast<double>(values.size())});
        return table;
    };
    s.profit_cdf = cdf_of(profits);
    s.impact_share_cdf = cdf_of(shares);
    return s;
}

void write_records_csv(const std::string& path, std::span<const ReplayRecord> records) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << "event_id,ok,error,archetype,budget_usd,has_real,real_jit_utility,"
           "optimized_utility,participate,jit_liquidity,jit_lower_tick,jit_upper_tick,"
           "fee_jit,impact_gain,impact_share,passive_fees,passive_fees_baseline,"
           "trader_out,trader_out_baseline,slippage,slippage_baseline,trader_income_usd\n";
    using util::g12;
    for (const ReplayRecord& rec : records) {
        std::string error = rec.error;
        std::replace(error.begin(), error.end(), ',', ';');
        out << rec.event_id << ',' << (rec.ok ? 1 : 0) << ',' << error << ','
            << rec.archetype << ',' << g12(rec.budget) << ',' << (rec.has_real ? 1 : 0)
            << ',' << g12(rec.real_jit_utility) << ',' << g12(rec.optimized_utility) << ','
            << (rec.participate ? 1 : 0) << ',';
        if (rec.participate)
            out << g12(rec.strategy.liquidity) << ',' << rec.strategy.range.lo << ','
                << rec.strategy.range.hi;
        else
            out << ",,";
        out << ',' << g12(rec.fee_jit) << ',' << g12(rec.impact_gain) << ','
            << g12(rec.impact_share) << ',' << g12(rec.passive_fees) << ','
            << g12(rec.passive_fees_baseline) << ',' << g12(rec.trader_out) << ','
            << g12(rec.trader_out_baseline) << ',' << g12(rec.slippage) << ','
            << g12(rec.slippage_baseline) << ',' << g12(rec.trader_income_usd) << '\n';
    }
    if (!out) throw io_error("write failed: " + path);
}

void write_sweep_csv(const std::string& path, std::span<const SweepPoint> points) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << "budget_multiplier,passive_fee_pct,trader_slippage_pct,trader_income_usd\n";
    using util::g12;
    for (const SweepPoint& p : points)
        out << g12(p.budget_multiplier) << ',' << g12(p.passive_fee_pct) << ','
            << g12(p.trader_slippage_pct) << ',' << g12(p.trader_income_usd) << '\n';
    if (!out) throw io_error("write failed: " + path);
}

nlohmann::json summary_to_json(const Summary& summary) {
    using util::round12;
    nlohmann::json j{{"events", summary.events},
                     {"failed", summary.failed},
                     {"with_real", summary.with_real},
                     {"participated", summary.participated},
                     {"total_real_utility", round12(summary.total_real_utility)},
                     {"total_optimized_utility", round12(summary.total_optimized_utility)},
                     {"uplift_defined", summary.uplift_defined},
                     {"mean_impact_share", round12(summary.mean_impact_share)},
                     {"mean_slippage", round12(summary.mean_slippage)},
                     {"mean_slippage_baseline", round12(summary.mean_slippage_baseline)},
                     {"passive_fee_pct", round12(summary.passive_fee_pct)}};
    if (summary.uplift_defined) j["uplift"] = round12(summary.uplift);
    auto table = [](const std::vector<CdfPoint>& points) {
        nlohmann::json rows = nlohmann::json::array();
        for (const CdfPoint& p : points)
            rows.push_back({round12(p.value), round12(p.cdf)});
        return rows;
    };
    j["profit_cdf"] = table(summary.profit_cdf);
    j["impact_share_cdf"] = table(summary.impact_share_cdf);
    return j;
}

}  // namespace clmm::sim
