#include "valuation/impact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace clmm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double position_value(const Position& pos, double q, const MarketPrices& prices) {
    prices.validate();
    TokenAmounts amounts = position_amounts(pos, q);
    return prices.px * amounts.x + prices.py * amounts.y;
}

ImpactReport price_impact(const Position& pos, double q, double q_prime,
                          const MarketPrices& prices) {
    prices.validate();
    TokenAmounts mint = position_amounts(pos, q);
    TokenAmounts withdraw = position_amounts(pos, q_prime);

    ImpactReport report;
    report.v_mint = prices.px * mint.x + prices.py * mint.y;
    report.v_withdraw = prices.px * withdraw.x + prices.py * withdraw.y;
    report.impact = report.v_mint - report.v_withdraw;

    // Cross-check against the token-delta form.  The two are the same
    // expression regrouped, so they can only drift apart by rounding; the
    // epsilon term keeps the check meaningful when the impact is a tiny
    // difference of large values.
    double delta_form = -prices.px * (withdraw.x - mint.x) - prices.py * (withdraw.y - mint.y);
    double tol = std::max(1e-9 * std::max(std::abs(report.impact), std::abs(delta_form)),
                          64.0 * std::numeric_limits<double>::epsilon() *
                              (std::abs(report.v_mint) + std::abs(report.v_withdraw)));
    if (std::abs(report.impact - delta_form) > tol)
        throw internal_error("price impact forms disagree beyond rounding");

    report.relative_defined = report.v_mint > 0.0;
    report.relative = report.relative_defined ? report.impact / report.v_mint : 0.0;
    return report;
}

double absolute_price_impact(const Position& pos, double q, double q_prime,
                             const MarketPrices& prices) {
    return price_impact(pos, q, q_prime, prices).impact;
}

const char* to_string(ThresholdSign s) {
    switch (s) {
        case ThresholdSign::nonpositive: return "NONPOSITIVE";
        case ThresholdSign::positive: return "POSITIVE";
        case ThresholdSign::zero: return "ZERO";
    }
    return "?";
}

ThresholdSign threshold_sign(double q, double q_prime, double a, double b,
                             const MarketPrices& prices) {
    prices.validate();
    if (!(q > 0.0) || !(q_prime > 0.0))
        throw invalid_argument_error("prices must be positive");
    if (!(a >= 0.0) || !(a < b))
        throw invalid_argument_error("range requires 0 <= a < b");

    double entry = std::min(b, std::max(a, q));
    double exit = std::min(b, std::max(a, q_prime));
    if (entry == exit) return ThresholdSign::zero;

    double ratio = prices.ratio();
    double lhs = (ratio * ratio) / entry;
    if (q_prime < q)
        return lhs >= exit ? ThresholdSign::nonpositive : ThresholdSign::positive;
    return lhs <= exit ? ThresholdSign::nonpositive : ThresholdSign::positive;
}

const char* to_string(MoveKind k) {
    switch (k) {
        case MoveKind::diverging_gain: return "DIVERGING_GAIN";
        case MoveKind::converging_loss: return "CONVERGING_LOSS";
        case MoveKind::crossing: return "CROSSING";
    }
    return "?";
}

MoveClass classify_move(double q, double q_prime, const MarketPrices& prices) {
    prices.validate();
    if (!(q > 0.0) || !(q_prime > 0.0))
        throw invalid_argument_error("prices must be positive");

    double p = prices.ratio();
    MoveClass result;
    result.boundary = threshold_sign(q, q_prime, 0.0, kInf, prices);
    if ((q_prime < q && q <= p) || (q_prime > q && q >= p))
        result.kind = MoveKind::diverging_gain;
    else if ((q < q_prime && q_prime < p) || (q > q_prime && q_prime > p))
        result.kind = MoveKind::converging_loss;
    else
        result.kind = MoveKind::crossing;
    return result;
}

FeeSplit fee_shares(std::span<const double> fees, std::span<const double> passive,
                    std::span<const double> jit) {
    if (fees.size() != passive.size() || fees.size() != jit.size())
        throw invalid_argument_error("fee_shares spans must have equal length");

    FeeSplit split;
    for (size_t m = 0; m < fees.size(); ++m) {
        if (!(fees[m] >= 0.0))
            throw invalid_argument_error("per-interval fees must be >= 0");
        if (fees[m] == 0.0) continue;
        double total = passive[m] + jit[m];
        if (!(total > 0.0))
            throw invalid_argument_error("fee-bearing interval has zero liquidity");
        double jit_share = fees[m] * (jit[m] / total);
        split.jit += jit_share;
        split.passive += fees[m] - jit_share;
    }
    return split;
}

}  // namespace clmm
