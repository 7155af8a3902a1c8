#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "jit/optimizer.hpp"
#include "sim/corpus.hpp"

// Replays each corpus event three ways: the plain trade, the observed
// sandwich when the row carries one, and the optimized sandwich found
// by the strategy search under the same dollar budget.

namespace clmm::sim {

struct ReplayConfig {
    // Solver settings for the strategy search.  `jit.budget` applies
    // only to events that carry neither an observed position nor a
    // budget_usd cell; `jit.threads` caps event-level parallelism
    // (0 = sequential).
    jit::JitConfig jit;
};

struct ReplayRecord {
    std::string event_id;
    bool ok = false;
    std::string error;  // set when the event failed; metrics are zero

    std::string archetype;
    double budget = 0.0;  // resolved dollar cap for this event

    bool has_real = false;
    double real_jit_utility = 0.0;  // observed sandwich, same accounting
    double optimized_utility = 0.0;

    bool participate = false;
    jit::Strategy strategy;

    // Metrics of the optimized sandwich (baseline columns hold the
    // no-participation trade for comparison).
    double fee_jit = 0.0;
    double impact_gain = 0.0;   // |C| of the optimized position
    double impact_share = 0.0;  // |C| / (|C| + F), 0 when idle
    double passive_fees = 0.0;
    double passive_fees_baseline = 0.0;
    double trader_out = 0.0;
    double trader_out_baseline = 0.0;
    double slippage = 0.0;  // (ideal_out - out) / ideal_out at entry price
    double slippage_baseline = 0.0;
    double trader_income_usd = 0.0;  // output value minus input value
};

// One record per event, in corpus order.  Per-event failures land in
// the record's error field; the batch continues.  With jit.threads > 1
// events are processed concurrently; output is independent of the
// thread count.
std::vector<ReplayRecord> replay(const Corpus& corpus, const ReplayConfig& config);

struct SweepPoint {
    double budget_multiplier = 0.0;
    double passive_fee_pct = 0.0;      // aggregate passive fees vs the 0-multiplier baseline
    double trader_slippage_pct = 0.0;  // mean slippage across events, in percent
    double trader_income_usd = 0.0;    // mean trader income per event, secondary metric
};

// Re-optimizes every event at budget multiplier k and aggregates the
// passive-fee and slippage curves.  `multipliers` must include 0, the
// baseline anchor where no position is minted.
std::vector<SweepPoint> budget_sweep(const Corpus& corpus, const ReplayConfig& config,
                                     std::span<const double> multipliers);

struct CdfPoint {
    double value = 0.0;
    double cdf = 0.0;  // fraction of samples <= value
};

struct Summary {
    std::size_t events = 0;       // records that replayed cleanly
    std::size_t failed = 0;       // records with an error
    std::size_t with_real = 0;
    std::size_t participated = 0;
    double total_real_utility = 0.0;
    double total_optimized_utility = 0.0;
    bool uplift_defined = false;  // total real utility was nonzero
    double uplift = 0.0;          // (sum optimized - sum real) / |sum real|
    double mean_impact_share = 0.0;  // over participated events
    double mean_slippage = 0.0;
    double mean_slippage_baseline = 0.0;
    double passive_fee_pct = 0.0;  // aggregate vs baseline, in percent
    std::vector<CdfPoint> profit_cdf;        // optimized utility per event
    std::vector<CdfPoint> impact_share_cdf;  // participated events only
};

// Aggregates clean records; throws when none are usable.
Summary summarize(std::span<const ReplayRecord> records);

void write_records_csv(const std::string& path, std::span<const ReplayRecord> records);
void write_sweep_csv(const std::string& path, std::span<const SweepPoint> points);
nlohmann::json summary_to_json(const Summary& summary);

}  // namespace clmm::sim
