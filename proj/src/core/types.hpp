#pragma once

#include <stdexcept>
#include <string>

namespace clmm {

// ===== Error hierarchy =====
// Every failure the engine can raise derives from clmm::error so callers
// (and the C API shim) can map categories to stable codes.

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller passed a value that violates a documented precondition.
struct invalid_argument_error : error {
    using error::error;
};

// Malformed JSON/CSV payloads.
struct parse_error : error {
    using error::error;
};

// Filesystem problems (missing file, unwritable output path).
struct io_error : error {
    using error::error;
};

// A trade would push the price past the last initialized tick.
struct insufficient_liquidity_error : error {
    using error::error;
};

// The optimizer budget cannot cover the fixed bid cost.
struct budget_error : error {
    using error::error;
};

// An internal cross-check failed; indicates a bug, not bad input.
struct internal_error : error {
    using error::error;
};

// ===== Basic market types =====

enum class Direction {
    x_in,  // trader deposits X, withdraws Y; pool price decreases
    y_in,  // trader deposits Y, withdraws X; pool price increases
};

inline const char* to_string(Direction d) {
    return d == Direction::x_in ? "X_IN" : "Y_IN";
}

inline Direction direction_from_string(const std::string& s) {
    if (s == "X_IN") return Direction::x_in;
    if (s == "Y_IN") return Direction::y_in;
    throw parse_error("unknown direction '" + s + "' (expected X_IN or Y_IN)");
}

// Spot dollar prices of the two pool tokens on the external market.
struct MarketPrices {
    double px = 0.0;  // dollars per unit of X
    double py = 0.0;  // dollars per unit of Y

    // Market-implied pool price (Y per X).
    double ratio() const { return px / py; }

    MarketPrices swapped() const { return MarketPrices{py, px}; }

    void validate() const {
        if (!(px > 0.0) || !(py > 0.0))
            throw invalid_argument_error("market prices must be positive");
    }

    bool operator==(const MarketPrices&) const = default;
};

// A liquidity range [lower, upper] in price space holding `liquidity`
// units.  lower/upper are prices, not indices; pool-resident positions
// must sit on the pool's tick grid, but the valuation math also accepts
// the unbounded proxies lower = 0 and upper = +inf.
struct Position {
    double liquidity = 0.0;
    double lower = 0.0;
    double upper = 0.0;

    void validate() const {
        if (!(liquidity >= 0.0))
            throw invalid_argument_error("position liquidity must be >= 0");
        if (!(lower >= 0.0) || !(lower < upper))
            throw invalid_argument_error("position requires 0 <= lower < upper");
    }
};

}  // namespace clmm
