#include "sim/corpus.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "io/json_codec.hpp"
#include "util/text.hpp"

namespace clmm::sim {

const char* const kSwapsCsvHeader =
    "event_id,direction,amount_in,p_x_usd,p_y_usd,fee_rate,pool_id,"
    "jit_L,jit_lower_tick,jit_upper_tick,budget_usd";

namespace {

constexpr int kColumns = 11;

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_number(const std::string& cell, const char* what, long row) {
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size() || cell.empty() || errno == ERANGE)
        throw parse_error("row " + std::to_string(row) + ": bad " + what + " '" + cell + "'");
    return v;
}

int parse_int(const std::string& cell, const char* what, long row) {
    double v = parse_number(cell, what, row);
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw parse_error("row " + std::to_string(row) + ": " + what + " must be an integer");
    return i;
}

}  // namespace

std::string to_csv_row(const SwapEvent& event) {
    using util::g12;
    std::string row = event.event_id + ',' + to_string(event.direction) + ',' +
                      g12(event.amount_in) + ',' + g12(event.prices.px) + ',' +
                      g12(event.prices.py) + ',' + g12(event.fee_rate) + ',' + event.pool_id +
                      ',';
    if (event.observed) {
        row += g12(event.observed->liquidity);
        row += ',' + std::to_string(event.observed->lower_tick);
        row += ',' + std::to_string(event.observed->upper_tick);
    } else {
        row += ",,";
    }
    row += ',';
    if (event.budget_usd) row += g12(*event.budget_usd);
    return row;
}

void write_swaps_csv(const std::string& path, std::span<const SwapEvent> events) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << kSwapsCsvHeader << '\n';
    for (const SwapEvent& e : events) out << to_csv_row(e) << '\n';
    if (!out) throw io_error("write failed: " + path);
}

SwapEvent parse_swap_row(const std::string& line, long row) {
    std::vector<std::string> cells = split_csv(line);
    if (static_cast<int>(cells.size()) != kColumns)
        throw parse_error("row " + std::to_string(row) + ": expected " +
                          std::to_string(kColumns) + " cells, got " +
                          std::to_string(cells.size()));

    SwapEvent e;
    e.event_id = cells[0];
    if (e.event_id.empty())
        throw parse_error("row " + std::to_string(row) + ": empty event_id");
    try {
        e.direction = direction_from_string(cells[1]);
    } catch (const error& err) {
        throw parse_error("row " + std::to_string(row) + ": " + err.what());
    }
    e.amount_in = parse_number(cells[2], "amount_in", row);
    e.prices = MarketPrices{parse_number(cells[3], "p_x_usd", row),
                            parse_number(cells[4], "p_y_usd", row)};
    e.fee_rate = parse_number(cells[5], "fee_rate", row);
    e.pool_id = cells[6];

    if (!(e.amount_in > 0.0) || !std::isfinite(e.amount_in))
        throw parse_error("row " + std::to_string(row) + ": amount_in must be positive");
    if (!(e.prices.px > 0.0) || !(e.prices.py > 0.0))
        throw parse_error("row " + std::to_string(row) + ": prices must be positive");
    if (!(e.fee_rate > 0.0) || !(e.fee_rate < 1.0))
        throw parse_error("row " + std::to_string(row) + ": fee_rate must lie in (0, 1)");
    if (e.pool_id.empty())
        throw parse_error("row " + std::to_string(row) + ": empty pool_id");

    bool any_jit = !cells[7].empty() || !cells[8].empty() || !cells[9].empty();
    bool all_jit = !cells[7].empty() && !cells[8].empty() && !cells[9].empty();
    if (any_jit && !all_jit)
        throw parse_error("row " + std::to_string(row) +
                          ": jit_L, jit_lower_tick, jit_upper_tick must come together");
    if (all_jit) {
        ObservedJit jit;
        jit.liquidity = parse_number(cells[7], "jit_L", row);
        jit.lower_tick = parse_int(cells[8], "jit_lower_tick", row);
        jit.upper_tick = parse_int(cells[9], "jit_upper_tick", row);
        if (!(jit.liquidity > 0.0) || !std::isfinite(jit.liquidity))
            throw parse_error("row " + std::to_string(row) + ": jit_L must be positive");
        if (jit.lower_tick >= jit.upper_tick)
            throw parse_error("row " + std::to_string(row) +
                              ": jit_lower_tick must be below jit_upper_tick");
        e.observed = jit;
    }
    if (!cells[10].empty()) {
        double budget = parse_number(cells[10], "budget_usd", row);
        if (!(budget > 0.0) || !std::isfinite(budget))
            throw parse_error("row " + std::to_string(row) + ": budget_usd must be positive");
        e.budget_usd = budget;
    }
    return e;
}

Corpus ingest(const std::string& swaps_path, const std::string& pools_dir) {
    std::ifstream in(swaps_path);
    if (!in) throw io_error("cannot open " + swaps_path);

    std::string line;
    if (!std::getline(in, line)) throw parse_error(swaps_path + ": empty file, header expected");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kSwapsCsvHeader)
        throw parse_error(swaps_path + ": header mismatch, expected '" +
                          std::string(kSwapsCsvHeader) + "'");

    Corpus corpus;
    // Snapshot files that failed to load are noted once and poison every
    // row that references them.
    std::map<std::string, std::string> bad_pools;
    long row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        SwapEvent event;
        try {
            event = parse_swap_row(line, row);
        } catch (const error& e) {
            corpus.rejects.emplace_back(e.what());
            continue;
        }

        auto bad = bad_pools.find(event.pool_id);
        if (bad == bad_pools.end() && corpus.pools.find(event.pool_id) == corpus.pools.end()) {
            try {
                corpus.pools.emplace(event.pool_id,
                                     io::load_pool_file(pools_dir + "/" + event.pool_id +
                                                        ".json"));
            } catch (const error& e) {
                bad = bad_pools.emplace(event.pool_id, e.what()).first;
            }
        }
        if (bad != bad_pools.end()) {
            corpus.rejects.emplace_back("row " + std::to_string(row) + ": pool '" +
                                        event.pool_id + "': " + bad->second);
            continue;
        }

        const PoolState& pool = corpus.pools.at(event.pool_id);
        if (event.observed) {
            const ObservedJit& jit = *event.observed;
            if (jit.lower_tick < 0 || jit.upper_tick > pool.grid.interval_count()) {
                corpus.rejects.emplace_back("row " + std::to_string(row) +
                                            ": observed ticks outside pool grid");
                continue;
            }
        }
        corpus.events.push_back(std::move(event));
    }
    return corpus;
}

}  // namespace clmm::sim
