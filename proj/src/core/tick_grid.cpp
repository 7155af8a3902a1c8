#include "core/tick_grid.hpp"

#include <algorithm>
#include <cmath>

namespace clmm {

namespace {
constexpr double kTickBase = 1.0001;
// index_of_tick accepts this much relative drift between a stored tick
// price and the caller's copy of it.
constexpr double kTickMatchRelTol = 1e-9;
}  // namespace

TickGrid::TickGrid(int spacing, int offset, int count)
    : spacing_(spacing), offset_(offset), count_(count) {
    if (spacing <= 0) throw invalid_argument_error("tick spacing must be positive");
    if (count <= 0) throw invalid_argument_error("tick count must be positive");
    prices_.resize(count_ + 1);
    sqrts_.resize(count_ + 1);
    for (int i = 0; i <= count_; ++i) {
        double exponent = static_cast<double>(spacing_) * (i - offset_);
        double p = std::pow(kTickBase, exponent);
        if (!std::isfinite(p) || p <= 0.0)
            throw invalid_argument_error("tick grid exceeds double range");
        prices_[i] = p;
        sqrts_[i] = std::sqrt(p);
    }
}

double TickGrid::tick_price(int i) const {
    if (i < 0 || i > count_)
        throw invalid_argument_error("tick index out of range");
    return prices_[i];
}

double TickGrid::sqrt_tick_price(int i) const {
    if (i < 0 || i > count_)
        throw invalid_argument_error("tick index out of range");
    return sqrts_[i];
}

int TickGrid::index_of_tick(double price) const {
    if (!(price > 0.0) || !contains(price))
        throw invalid_argument_error("price is outside the tick grid span");
    auto it = std::lower_bound(prices_.begin(), prices_.end(), price);
    // Check the two neighbours of the insertion point; the match may round
    // to either side.
    for (auto cand = it == prices_.begin() ? it : it - 1;
         cand != prices_.end() && cand <= it; ++cand) {
        if (std::abs(*cand - price) <= kTickMatchRelTol * *cand)
            return static_cast<int>(cand - prices_.begin());
    }
    throw invalid_argument_error("price does not lie on a grid tick");
}

int TickGrid::interval_below(double price) const {
    // lower_bound gives the first tick >= price, so everything before it
    // satisfies the strict inequality t_m < price.
    auto it = std::lower_bound(prices_.begin(), prices_.end(), price);
    return static_cast<int>(it - prices_.begin()) - 1;
}

int TickGrid::interval_above(double price) const {
    auto it = std::upper_bound(prices_.begin(), prices_.end(), price);
    return static_cast<int>(it - prices_.begin()) - 1;
}

}  // namespace clmm
