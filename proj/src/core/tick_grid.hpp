#pragma once

#include <vector>

#include "core/types.hpp"

namespace clmm {

// Geometric price grid t_i = 1.0001^(spacing * (i - offset)), i = 0..count.
// `count` atomic intervals; interval m spans the half-open price band
// (t_m, t_{m+1}].  Tick prices and their square roots are precomputed since
// the swap walk touches them constantly.
class TickGrid {
public:
    TickGrid(int spacing, int offset, int count);

    int spacing() const { return spacing_; }
    int offset() const { return offset_; }
    // Number of atomic intervals; tick indices run 0..interval_count().
    int interval_count() const { return count_; }

    double tick_price(int i) const;
    double sqrt_tick_price(int i) const;

    double min_price() const { return prices_.front(); }
    double max_price() const { return prices_.back(); }
    bool contains(double price) const {
        return price >= min_price() && price <= max_price();
    }

    // Recovers the index of a price that must already be a grid tick
    // (matched to a few ULP); throws invalid_argument_error otherwise.
    int index_of_tick(double price) const;

    // The unique m with t_m < price <= t_{m+1}: the interval drained first
    // by a price-decreasing trade starting at `price`.  Requires
    // contains(price); returns -1 when price == t_0 (nothing below).
    int interval_below(double price) const;

    // The unique m with t_m <= price < t_{m+1}: the interval filled first
    // by a price-increasing trade.  Requires contains(price); returns
    // interval_count() when price == max_price() (nothing above).
    int interval_above(double price) const;

    // Mirror grid under price inversion p -> 1/p: same spacing and count,
    // offset' = count - offset.  Interval m maps to count - 1 - m.
    TickGrid inverted() const { return TickGrid(spacing_, count_ - offset_, count_); }

    bool operator==(const TickGrid&) const = default;

private:
    int spacing_;
    int offset_;
    int count_;
    std::vector<double> prices_;  // size count_ + 1, strictly increasing
    std::vector<double> sqrts_;
};

}  // namespace clmm
