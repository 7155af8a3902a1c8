#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/pool.hpp"

// Swap-event corpus: a CSV table of historical trades plus one pool
// snapshot file per referenced pool id.

namespace clmm::sim {

// A liquidity position observed sandwiching the trade, by grid tick
// indices on the event's pool.
struct ObservedJit {
    double liquidity = 0.0;
    int lower_tick = 0;
    int upper_tick = 0;

    bool operator==(const ObservedJit&) const = default;
};

struct SwapEvent {
    std::string event_id;
    Direction direction = Direction::x_in;
    double amount_in = 0.0;
    MarketPrices prices;
    double fee_rate = 0.0;
    std::string pool_id;
    std::optional<ObservedJit> observed;
    std::optional<double> budget_usd;

    bool operator==(const SwapEvent&) const = default;
};

// Column order of swaps.csv.  The three jit_* cells are either all
// present or all empty; budget_usd may be empty.
extern const char* const kSwapsCsvHeader;

std::string to_csv_row(const SwapEvent& event);
void write_swaps_csv(const std::string& path, std::span<const SwapEvent> events);

// Parses one data row; `row` is the 1-based data row number used in
// diagnostics.  Does not check the pool snapshot.
SwapEvent parse_swap_row(const std::string& line, long row);

struct Corpus {
    std::vector<SwapEvent> events;
    std::map<std::string, PoolState> pools;  // keyed by pool_id
    std::vector<std::string> rejects;        // "row N: reason" per skipped row
};

// Reads the swaps table and every pool snapshot it references
// (`<pools_dir>/<pool_id>.json`).  A malformed header or unreadable
// table throws; rows that fail validation, reference a missing or
// unparseable snapshot, or carry ticks outside their pool's grid are
// skipped and reported in `rejects`.
Corpus ingest(const std::string& swaps_path, const std::string& pools_dir);

}  // namespace clmm::sim
