#pragma once

#include <string>

#include <json.hpp>

#include "core/pool.hpp"
#include "core/swap.hpp"
#include "jit/optimizer.hpp"
#include "oracle/reference.hpp"
#include "valuation/impact.hpp"

// JSON codecs for every document the tools read or write.  Parsing is
// strict about types and required keys; unknown keys are ignored so
// documents stay forward compatible.

namespace clmm::io {

using json = nlohmann::json;

// ===== pool snapshot =====
// { "tau": int, "iota": int, "tick_count": int, "fee_rate": float,
//   "current_price": float, "liquidity": [{"m": int, "P": float}] }
// Intervals absent from "liquidity" hold zero.
PoolState pool_from_json(const json& j);
json pool_to_json(const PoolState& pool);
PoolState load_pool_file(const std::string& path);

// ===== trade request =====
// { "amount_in": float, "direction": "X_IN"|"Y_IN",
//   "p_x_usd": float, "p_y_usd": float }
struct TradeSpec {
    double amount_in = 0.0;
    Direction direction = Direction::x_in;
    MarketPrices prices;
};
TradeSpec trade_from_json(const json& j);
json trade_to_json(const TradeSpec& trade);
TradeSpec load_trade_file(const std::string& path);

// ===== optimizer config =====
// Partial document; absent keys keep the given defaults.
jit::JitConfig config_from_json(const json& j, jit::JitConfig defaults = {});
json config_to_json(const jit::JitConfig& config);

// ===== reports =====
json impact_to_json(const ImpactReport& report);
json move_class_to_json(const MoveClass& mc);
json strategy_to_json(const jit::Strategy& strategy);
json breakdown_to_json(const jit::UtilityBreakdown& breakdown, bool with_per_tick);
json outcome_to_json(const jit::OptimizeOutcome& outcome, bool with_per_tick = false);
json agreement_to_json(const oracle::SwapAgreement& agreement);
json swap_result_to_json(const SwapResult& result);

// Parses a document from a file, wrapping stream and syntax failures in
// the library error types.
json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace clmm::io
