#include "clmmjit/clmmjit.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "io/json_codec.hpp"
#include "oracle/reference.hpp"
#include "sim/replay.hpp"

// Exception-to-status boundary: every entry point funnels through
// guarded(), which traps the library error types and records the
// message for clmm_last_error().

namespace {

using clmm::io::json;

thread_local std::string g_last_error = "no error";

struct pool_impl {
    clmm::PoolState state;
};

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) return nullptr;
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

clmm_status status_of(const std::exception& e) {
    if (dynamic_cast<const clmm::insufficient_liquidity_error*>(&e))
        return CLMM_ERR_INSUFFICIENT_LIQUIDITY;
    if (dynamic_cast<const clmm::budget_error*>(&e)) return CLMM_ERR_BUDGET;
    if (dynamic_cast<const clmm::parse_error*>(&e)) return CLMM_ERR_PARSE;
    if (dynamic_cast<const clmm::io_error*>(&e)) return CLMM_ERR_IO;
    if (dynamic_cast<const clmm::invalid_argument_error*>(&e)) return CLMM_ERR_INVALID_ARGUMENT;
    if (dynamic_cast<const clmm::internal_error*>(&e)) return CLMM_ERR_INTERNAL;
    return CLMM_ERR_INTERNAL;
}

template <typename Fn>
clmm_status guarded(Fn fn) {
    try {
        fn();
        return CLMM_OK;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (...) {
        g_last_error = "unknown failure";
        return CLMM_ERR_INTERNAL;
    }
}

clmm_status require(bool ok, const char* message) {
    if (ok) return CLMM_OK;
    g_last_error = message;
    return CLMM_ERR_INVALID_ARGUMENT;
}

clmm_status emit(const json& j, char** out_json) {
    char* text = dup_string(j.dump(2));
    if (!text) {
        g_last_error = "out of memory";
        return CLMM_ERR_INTERNAL;
    }
    *out_json = text;
    return CLMM_OK;
}

clmm::Direction to_direction(clmm_direction d) {
    if (d != CLMM_X_IN && d != CLMM_Y_IN)
        throw clmm::invalid_argument_error("bad direction enum value");
    return d == CLMM_X_IN ? clmm::Direction::x_in : clmm::Direction::y_in;
}

clmm::jit::JitConfig parse_config(const char* config_json) {
    if (!config_json) return {};
    return clmm::io::config_from_json(json::parse(config_json));
}

}  // namespace

extern "C" {

const char* clmm_last_error(void) { return g_last_error.c_str(); }

void clmm_string_free(char* s) { std::free(s); }

const char* clmm_version(void) { return "1.0.0"; }

clmm_status clmm_pool_from_json(const char* json_text, clmm_pool** out_pool) {
    if (clmm_status bad = require(json_text && out_pool, "NULL argument")) return bad;
    return guarded([&] {
        json doc;
        try {
            doc = json::parse(json_text);
        } catch (const json::parse_error& e) {
            throw clmm::parse_error(e.what());
        }
        auto pool = new pool_impl{clmm::io::pool_from_json(doc)};
        *out_pool = reinterpret_cast<clmm_pool*>(pool);
    });
}

clmm_status clmm_pool_from_file(const char* path, clmm_pool** out_pool) {
    if (clmm_status bad = require(path && out_pool, "NULL argument")) return bad;
    return guarded([&] {
        auto pool = new pool_impl{clmm::io::load_pool_file(path)};
        *out_pool = reinterpret_cast<clmm_pool*>(pool);
    });
}

void clmm_pool_free(clmm_pool* pool) { delete reinterpret_cast<pool_impl*>(pool); }

clmm_status clmm_pool_info(const clmm_pool* pool, char** out_json) {
    if (clmm_status bad = require(pool && out_json, "NULL argument")) return bad;
    return guarded([&] {
        const auto* impl = reinterpret_cast<const pool_impl*>(pool);
        clmm_status rc = emit(clmm::io::pool_to_json(impl->state), out_json);
        if (rc != CLMM_OK) throw clmm::internal_error(g_last_error);
    });
}

clmm_status clmm_swap_execute(const clmm_pool* pool, double amount_in,
                              clmm_direction direction, double input_price_usd,
                              char** out_json) {
    if (clmm_status bad = require(pool && out_json, "NULL argument")) return bad;
    return guarded([&] {
        const auto* impl = reinterpret_cast<const pool_impl*>(pool);
        clmm::SwapResult result = clmm::execute_swap(
            impl->state, amount_in, to_direction(direction), std::nullopt, input_price_usd);
        clmm_status rc = emit(clmm::io::swap_result_to_json(result), out_json);
        if (rc != CLMM_OK) throw clmm::internal_error(g_last_error);
    });
}

clmm_status clmm_oracle_check(const clmm_pool* pool, double amount_in,
                              clmm_direction direction, double tolerance,
                              long steps_per_interval, char** out_json) {
    if (clmm_status bad = require(pool && out_json, "NULL argument")) return bad;
    return guarded([&] {
        const auto* impl = reinterpret_cast<const pool_impl*>(pool);
        if (steps_per_interval <= 0) steps_per_interval = 1L << 17;
        clmm::oracle::SwapAgreement agreement = clmm::oracle::check_swap(
            impl->state, amount_in, to_direction(direction), std::nullopt, tolerance,
            steps_per_interval);
        clmm_status rc = emit(clmm::io::agreement_to_json(agreement), out_json);
        if (rc != CLMM_OK) throw clmm::internal_error(g_last_error);
    });
}

clmm_status clmm_price_impact(double liquidity, double lower, double upper, double q,
                              double q_prime, double px, double py, char** out_json) {
    if (clmm_status bad = require(out_json != nullptr, "NULL argument")) return bad;
    return guarded([&] {
        clmm::Position pos{liquidity, lower, upper};
        pos.validate();
        clmm::MarketPrices prices{px, py};
        prices.validate();
        clmm::ImpactReport report = clmm::price_impact(pos, q, q_prime, prices);
        clmm_status rc = emit(clmm::io::impact_to_json(report), out_json);
        if (rc != CLMM_OK) throw clmm::internal_error(g_last_error);
    });
}

clmm_status clmm_classify_move(double q, double q_prime, double px, double py,
                               char** out_json) {
    if (clmm_status bad = require(out_json != nullptr, "NULL argument")) return bad;
    return guarded([&] {
        clmm::MarketPrices prices{px, py};
        prices.validate();
        clmm::MoveClass mc = clmm::classify_move(q, q_prime, prices);
        json out = clmm::io::move_class_to_json(mc);
        // The strategic setting is defined only for a real move.
        if (q_prime != q)
            out["archetype"] = clmm::jit::to_string(
                clmm::jit::classify_archetype(q, q_prime, prices));
        clmm_status rc = emit(out, out_json);
        if (rc != CLMM_OK) throw clmm::internal_error(g_last_error);
    });
}

clmm_status clmm_optimize(const clmm_pool* pool, const char* trade_json,
                          const char* config_json, char** out_json) {
    if (clmm_status bad = require(pool && trade_json && out_json, "NULL argument")) return bad;
    return guarded([&] {
        const auto* impl = reinterpret_cast<const pool_impl*>(pool);
        json doc;
        try {
            doc = json::parse(trade_json);
        } catch (const json::parse_error& e) {
            throw clmm::parse_error(e.what());
        }
        clmm::io::TradeSpec trade = clmm::io::trade_from_json(doc);
        clmm::jit::JitConfig config = parse_config(config_json);
        clmm::jit::SwapParams params{impl->state, trade.amount_in, trade.direction,
                                     trade.prices};
        clmm::jit::OptimizeOutcome outcome = clmm::jit::optimal_strategy(params, config);
        clmm_status rc = emit(clmm::io::outcome_to_json(outcome), out_json);
        if (rc != CLMM_OK) throw clmm::internal_error(g_last_error);
    });
}

clmm_status clmm_replay(const char* swaps_csv_path, const char* pools_dir,
                        const char* config_json, const char* records_csv_path,
                        char** out_summary_json) {
    if (clmm_status bad =
            require(swaps_csv_path && pools_dir && out_summary_json, "NULL argument"))
        return bad;
    return guarded([&] {
        clmm::sim::Corpus corpus = clmm::sim::ingest(swaps_csv_path, pools_dir);
        clmm::sim::ReplayConfig config{parse_config(config_json)};
        std::vector<clmm::sim::ReplayRecord> records = clmm::sim::replay(corpus, config);
        if (records_csv_path) clmm::sim::write_records_csv(records_csv_path, records);
        json summary = clmm::sim::summary_to_json(clmm::sim::summarize(records));
        summary["rejected_rows"] = corpus.rejects;
        clmm_status rc = emit(summary, out_summary_json);
        if (rc != CLMM_OK) throw clmm::internal_error(g_last_error);
    });
}

clmm_status clmm_budget_sweep(const char* swaps_csv_path, const char* pools_dir,
                              const char* config_json, const double* multipliers,
                              size_t multiplier_count, const char* sweep_csv_path,
                              char** out_json) {
    if (clmm_status bad = require(swaps_csv_path && pools_dir && multipliers && out_json,
                                  "NULL argument"))
        return bad;
    return guarded([&] {
        clmm::sim::Corpus corpus = clmm::sim::ingest(swaps_csv_path, pools_dir);
        clmm::sim::ReplayConfig config{parse_config(config_json)};
        std::vector<clmm::sim::SweepPoint> points = clmm::sim::budget_sweep(
            corpus, config, std::span<const double>(multipliers, multiplier_count));
        if (sweep_csv_path) clmm::sim::write_sweep_csv(sweep_csv_path, points);
        json rows = json::array();
        for (const clmm::sim::SweepPoint& p : points)
            rows.push_back(json{{"budget_multiplier", p.budget_multiplier},
                                {"passive_fee_pct", p.passive_fee_pct},
                                {"trader_slippage_pct", p.trader_slippage_pct},
                                {"trader_income_usd", p.trader_income_usd}});
        clmm_status rc = emit(json{{"points", std::move(rows)},
                                   {"rejected_rows", corpus.rejects}},
                              out_json);
        if (rc != CLMM_OK) throw clmm::internal_error(g_last_error);
    });
}

}  // extern "C"
