// Reference-implementation tests: the micro-step swap integrator against
// independently known closed forms, its agreement with the fast walk, and
// the exhaustive strategy sweep.

#include "oracle/reference.hpp"

#include <cmath>
#include <optional>
#include <vector>

#include <doctest.h>

#include "core/swap.hpp"
#include "testutil/generators.hpp"

using namespace clmm;
using doctest::Approx;

namespace {

PoolState uniform_pool(double depth, double price, double fee) {
    TickGrid grid(6000, 0, 12);
    std::vector<double> passive(12, depth);
    return PoolState(grid, std::move(passive), price, fee);
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("integration reproduces the constant-product closed form") {
    // Uniform depth makes the whole grid one constant-product curve with
    // virtual reserves x = L / sqrt(q), y = L * sqrt(q).
    PoolState pool = uniform_pool(1000.0, 100.0, 0.003);

    SUBCASE("y input") {
        double amount = 10000.0 / 9.0;  // moves y from 10000 to 11111.1..
        oracle::ReferenceSwap ref =
            oracle::integrate_swap(pool, amount, Direction::y_in, std::nullopt);
        CHECK(ref.final_price == Approx(10000.0 / 81.0).epsilon(1e-8));
        CHECK(ref.amount_out == Approx(10.0).epsilon(1e-8));
    }

    SUBCASE("x input") {
        double amount = 10.0;  // moves x from 100 to 110
        oracle::ReferenceSwap ref =
            oracle::integrate_swap(pool, amount, Direction::x_in, std::nullopt);
        CHECK(ref.final_price == Approx(1e6 / 12100.0).epsilon(1e-8));
        CHECK(ref.amount_out == Approx(10000.0 / 11.0).epsilon(1e-8));
    }
}

TEST_CASE("integration and walk agree at default resolution") {
    PoolState pool = uniform_pool(800.0, 95.0, 0.003);
    oracle::SwapAgreement agreement =
        oracle::check_swap(pool, 25.0, Direction::x_in, std::nullopt);
    CHECK(agreement.passed);
    CHECK(agreement.tolerance == 1e-6);
    CHECK(agreement.rel_dev_price <= 1e-7);
    CHECK(agreement.rel_dev_out <= 1e-7);
}

TEST_CASE("agreement holds across random pools, sides, and sandwiches") {
    testutil::rng_t rng(424242);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int with_extra = 0;
    for (int it = 0; it < 40; ++it) {
        PoolState pool = testutil::random_pool(rng);
        Direction dir = it % 2 == 0 ? Direction::x_in : Direction::y_in;
        double amount = testutil::max_input(pool, dir) * (0.05 + 0.7 * unit(rng));

        std::optional<Position> extra;
        if (it % 3 != 0) {
            const TickGrid& grid = pool.grid;
            int active = grid.interval_below(pool.price);
            int lo = std::max(0, active - 2);
            int hi = std::min(grid.interval_count(), active + 2);
            extra = Position{50.0 + 2000.0 * unit(rng), grid.tick_price(lo),
                             grid.tick_price(hi)};
            ++with_extra;
        }

        oracle::SwapAgreement agreement =
            oracle::check_swap(pool, amount, dir, extra, 1e-6, 1 << 12);
        CAPTURE(it);
        CHECK(agreement.passed);
    }
    CHECK(with_extra >= 20);
}

TEST_CASE("draining trades throw from both implementations") {
    PoolState pool = uniform_pool(500.0, 80.0, 0.003);
    for (Direction dir : {Direction::x_in, Direction::y_in}) {
        double too_much = testutil::max_input(pool, dir) * 1.01;
        CHECK_THROWS_AS(
            oracle::integrate_swap(pool, too_much, dir, std::nullopt, 1 << 10),
            insufficient_liquidity_error);
        CHECK_THROWS_AS(execute_swap(pool, too_much, dir, std::nullopt, 1.0),
                        insufficient_liquidity_error);
    }
}

TEST_CASE("integration validates its inputs") {
    PoolState pool = uniform_pool(500.0, 80.0, 0.003);
    CHECK_THROWS_AS(oracle::integrate_swap(pool, 0.0, Direction::x_in, std::nullopt),
                    invalid_argument_error);
    CHECK_THROWS_AS(oracle::integrate_swap(pool, 1.0, Direction::x_in, std::nullopt, 8),
                    invalid_argument_error);
}

TEST_CASE("exhaustive sweep is deterministic and respects the budget") {
    testutil::rng_t rng(8088);
    jit::SwapParams params = testutil::overpriced_instance(rng);
    jit::JitConfig config;

    oracle::GridSearchResult a = oracle::exhaustive_strategy_search(params, config, 1500);
    oracle::GridSearchResult b = oracle::exhaustive_strategy_search(params, config, 1500);
    REQUIRE(a.found);
    CHECK(a.utility == b.utility);
    CHECK(a.liquidity == b.liquidity);
    CHECK(a.range == b.range);

    // Normalized orientation: indices must lie on the grid.
    int count = params.pool.grid.interval_count();
    CHECK(a.range.lo >= 0);
    CHECK(a.range.hi <= count);
    CHECK(a.range.lo < a.range.hi);

    // The winning candidate re-evaluates to the same utility and fits the
    // budget on both sides of the trade.
    jit::SwapParams norm = jit::normalize_direction(params);
    jit::UtilityBreakdown bd =
        jit::evaluate_utility(norm, a.liquidity, a.range, config.bid_cost);
    CHECK(bd.utility == Approx(a.utility).epsilon(1e-12));
    double limit = config.budget * (1.0 + 1e-9);
    CHECK(bd.position_value_entry + config.bid_cost <= limit);
    CHECK(bd.position_value_exit <= limit);
}

}  // TEST_SUITE
