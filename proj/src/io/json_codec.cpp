#include "io/json_codec.hpp"

#include <fstream>
#include <map>

#include "util/text.hpp"

namespace clmm::io {

namespace {

const json& require(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw parse_error(std::string("missing key \"") + key + "\"");
    return *it;
}

double number(const json& j, const char* key) {
    const json& v = require(j, key);
    if (!v.is_number()) throw parse_error(std::string("key \"") + key + "\" must be a number");
    return v.get<double>();
}

int integer(const json& j, const char* key) {
    const json& v = require(j, key);
    if (!v.is_number_integer())
        throw parse_error(std::string("key \"") + key + "\" must be an integer");
    return v.get<int>();
}

std::string text(const json& j, const char* key) {
    const json& v = require(j, key);
    if (!v.is_string()) throw parse_error(std::string("key \"") + key + "\" must be a string");
    return v.get<std::string>();
}

double r12(double v) { return util::round12(v); }

}  // namespace

// ===== pool snapshot =====

PoolState pool_from_json(const json& j) {
    if (!j.is_object()) throw parse_error("pool document must be an object");
    int tau = integer(j, "tau");
    int iota = integer(j, "iota");
    int count = integer(j, "tick_count");
    TickGrid grid(tau, iota, count);

    std::vector<double> passive(static_cast<std::size_t>(count), 0.0);
    const json& liq = require(j, "liquidity");
    if (!liq.is_array()) throw parse_error("key \"liquidity\" must be an array");
    for (const json& entry : liq) {
        int m = integer(entry, "m");
        if (m < 0 || m >= count)
            throw parse_error("liquidity entry m = " + std::to_string(m) + " outside grid");
        passive[static_cast<std::size_t>(m)] = number(entry, "P");
    }
    return PoolState(std::move(grid), std::move(passive), number(j, "current_price"),
                     number(j, "fee_rate"));
}

json pool_to_json(const PoolState& pool) {
    json liq = json::array();
    for (int m = 0; m < pool.grid.interval_count(); ++m) {
        double p = pool.passive[static_cast<std::size_t>(m)];
        if (p != 0.0) liq.push_back(json{{"m", m}, {"P", r12(p)}});
    }
    return json{{"tau", pool.grid.spacing()},
                {"iota", pool.grid.offset()},
                {"tick_count", pool.grid.interval_count()},
                {"fee_rate", r12(pool.fee_rate)},
                {"current_price", r12(pool.price)},
                {"liquidity", std::move(liq)}};
}

PoolState load_pool_file(const std::string& path) {
    try {
        return pool_from_json(load_json_file(path));
    } catch (const io_error&) {
        throw;  // already carries the path
    } catch (const error& e) {
        throw parse_error(path + ": " + e.what());
    }
}

// ===== trade request =====

TradeSpec trade_from_json(const json& j) {
    if (!j.is_object()) throw parse_error("trade document must be an object");
    TradeSpec trade;
    trade.amount_in = number(j, "amount_in");
    trade.direction = direction_from_string(text(j, "direction"));
    trade.prices = MarketPrices{number(j, "p_x_usd"), number(j, "p_y_usd")};
    trade.prices.validate();
    if (!(trade.amount_in > 0.0))
        throw parse_error("\"amount_in\" must be positive");
    return trade;
}

json trade_to_json(const TradeSpec& trade) {
    return json{{"amount_in", r12(trade.amount_in)},
                {"direction", to_string(trade.direction)},
                {"p_x_usd", r12(trade.prices.px)},
                {"p_y_usd", r12(trade.prices.py)}};
}

TradeSpec load_trade_file(const std::string& path) {
    try {
        return trade_from_json(load_json_file(path));
    } catch (const io_error&) {
        throw;  // already carries the path
    } catch (const error& e) {
        throw parse_error(path + ": " + e.what());
    }
}

// ===== optimizer config =====

jit::JitConfig config_from_json(const json& j, jit::JitConfig defaults) {
    if (!j.is_object()) throw parse_error("config document must be an object");
    jit::JitConfig c = defaults;
    if (j.contains("budget")) c.budget = number(j, "budget");
    if (j.contains("bid_cost")) c.bid_cost = number(j, "bid_cost");
    if (j.contains("solver")) c.solver = jit::solver_from_string(text(j, "solver"));
    if (j.contains("grid_points")) c.grid_points = integer(j, "grid_points");
    if (j.contains("refine_iterations")) c.refine_iterations = integer(j, "refine_iterations");
    if (j.contains("pso_particles")) c.pso_particles = integer(j, "pso_particles");
    if (j.contains("pso_iterations")) c.pso_iterations = integer(j, "pso_iterations");
    if (j.contains("utility_floor")) c.utility_floor = number(j, "utility_floor");
    if (j.contains("strict_membership")) {
        const json& v = require(j, "strict_membership");
        if (!v.is_boolean()) throw parse_error("\"strict_membership\" must be a boolean");
        c.strict_membership = v.get<bool>();
    }
    if (j.contains("seed")) {
        const json& v = require(j, "seed");
        if (!v.is_number_integer()) throw parse_error("\"seed\" must be an integer");
        c.seed = v.get<std::uint64_t>();
    }
    if (j.contains("threads")) c.threads = integer(j, "threads");
    c.validate();
    return c;
}

json config_to_json(const jit::JitConfig& config) {
    return json{{"budget", r12(config.budget)},
                {"bid_cost", r12(config.bid_cost)},
                {"solver", jit::to_string(config.solver)},
                {"grid_points", config.grid_points},
                {"refine_iterations", config.refine_iterations},
                {"pso_particles", config.pso_particles},
                {"pso_iterations", config.pso_iterations},
                {"utility_floor", r12(config.utility_floor)},
                {"strict_membership", config.strict_membership},
                {"seed", config.seed},
                {"threads", config.threads}};
}

// ===== reports =====

json impact_to_json(const ImpactReport& report) {
    json out{{"value_at_entry", r12(report.v_mint)},
             {"value_at_exit", r12(report.v_withdraw)},
             {"impact", r12(report.impact)}};
    if (report.relative_defined) out["relative_impact"] = r12(report.relative);
    return out;
}

json move_class_to_json(const MoveClass& mc) {
    return json{{"kind", to_string(mc.kind)},
                {"boundary", to_string(mc.boundary)}};
}

json strategy_to_json(const jit::Strategy& strategy) {
    if (!strategy.participate) return json{{"participate", false}};
    return json{{"participate", true},
                {"liquidity", r12(strategy.liquidity)},
                {"lower_tick", strategy.range.lo},
                {"upper_tick", strategy.range.hi},
                {"lower_price", r12(strategy.lower)},
                {"upper_price", r12(strategy.upper)}};
}

json breakdown_to_json(const jit::UtilityBreakdown& breakdown, bool with_per_tick) {
    json out{{"fees", r12(breakdown.fees)},
             {"impact", r12(breakdown.impact)},
             {"bid_cost", r12(breakdown.bid_cost)},
             {"utility", r12(breakdown.utility)},
             {"final_price", r12(breakdown.final_price)},
             {"position_value_entry", r12(breakdown.position_value_entry)},
             {"position_value_exit", r12(breakdown.position_value_exit)}};
    if (with_per_tick) {
        json ticks = json::array();
        for (const jit::PerTickUtility& t : breakdown.per_tick)
            ticks.push_back(json{
                {"interval", t.interval}, {"fee", r12(t.fee)}, {"impact", r12(t.impact)}});
        out["per_tick"] = std::move(ticks);
    }
    return out;
}

json outcome_to_json(const jit::OptimizeOutcome& outcome, bool with_per_tick) {
    return json{{"strategy", strategy_to_json(outcome.strategy)},
                {"breakdown", breakdown_to_json(outcome.breakdown, with_per_tick)},
                {"archetype", jit::to_string(outcome.archetype)},
                {"q_star", r12(outcome.q_star)},
                {"ranges_evaluated", outcome.ranges_evaluated}};
}

json agreement_to_json(const oracle::SwapAgreement& agreement) {
    return json{{"reference_final_price", r12(agreement.reference.final_price)},
                {"reference_amount_out", r12(agreement.reference.amount_out)},
                {"fast_final_price", r12(agreement.fast_final_price)},
                {"fast_amount_out", r12(agreement.fast_amount_out)},
                {"rel_dev_price", r12(agreement.rel_dev_price)},
                {"rel_dev_out", r12(agreement.rel_dev_out)},
                {"tolerance", r12(agreement.tolerance)},
                {"passed", agreement.passed}};
}

json swap_result_to_json(const SwapResult& result) {
    double fee_total = 0.0;
    for (const SwapFill& f : result.fills) fee_total += f.fee_usd;
    return json{{"amount_in", r12(result.amount_in)},
                {"amount_out", r12(result.amount_out)},
                {"final_price", r12(result.final_price)},
                {"fee_usd", r12(fee_total)},
                {"intervals_touched", result.fills.size()}};
}

// ===== files =====

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw parse_error(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw io_error("write failed: " + path);
}

}  // namespace clmm::io
