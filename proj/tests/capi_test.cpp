// Exercises the shared-library C interface the way an external consumer
// would: only the public header, JSON documents in and out, and status
// codes checked on every call.

#include <clmmjit/clmmjit.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include <unistd.h>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Uniform 12-interval grid spanning prices 1 .. ~1339 with the pool at
// price 100; every interval holds depth 1000.
std::string uniform_pool_text() {
    json liq = json::array();
    for (int m = 0; m < 12; ++m) liq.push_back({{"m", m}, {"P", 1000.0}});
    json doc{{"tau", 6000},      {"iota", 0},          {"tick_count", 12},
             {"fee_rate", 0.003}, {"current_price", 100.0}, {"liquidity", liq}};
    return doc.dump();
}

struct PoolHandle {
    clmm_pool* pool = nullptr;
    ~PoolHandle() { clmm_pool_free(pool); }
};

// Grabs the JSON output of a call and frees the C string.
json take(char* text) {
    REQUIRE(text != nullptr);
    json parsed = json::parse(text);
    clmm_string_free(text);
    return parsed;
}

struct TempDir {
    fs::path path;

    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / (tag + "-" + std::to_string(::getpid()))) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

// Three trades against pool-a: a plain x sale, an observed sandwich on
// a y purchase, and a budgeted x sale.  Market prices match the pool.
void write_corpus(const TempDir& dir) {
    fs::create_directories(dir.path / "pools");
    std::ofstream(dir.path / "pools" / "pool-a.json") << uniform_pool_text();
    std::ofstream out(dir.file("swaps.csv"));
    out << "event_id,direction,amount_in,p_x_usd,p_y_usd,fee_rate,pool_id,"
           "jit_L,jit_lower_tick,jit_upper_tick,budget_usd\n";
    out << "t-1,X_IN,5,100,1,0.003,pool-a,,,,\n";
    out << "t-2,Y_IN,300,100,1,0.003,pool-a,120,6,8,\n";
    out << "t-3,X_IN,5,100,1,0.003,pool-a,,,,5000\n";
}

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("version and error plumbing") {
    CHECK(std::string(clmm_version()) == "1.0.0");
    CHECK(clmm_last_error() != nullptr);
    clmm_string_free(nullptr);  // must be a no-op

    clmm_pool* pool = nullptr;
    CHECK(clmm_pool_from_json(nullptr, &pool) == CLMM_ERR_INVALID_ARGUMENT);
    CHECK(clmm_pool_from_json("{}", nullptr) == CLMM_ERR_INVALID_ARGUMENT);
    CHECK(std::string(clmm_last_error()).size() > 0);

    CHECK(clmm_pool_from_json("{not json", &pool) == CLMM_ERR_PARSE);
    CHECK(pool == nullptr);
    CHECK(clmm_pool_from_json("{\"tau\": 1}", &pool) == CLMM_ERR_PARSE);
}

TEST_CASE("pool snapshots round-trip through the handle") {
    std::string text = uniform_pool_text();
    PoolHandle h;
    REQUIRE(clmm_pool_from_json(text.c_str(), &h.pool) == CLMM_OK);
    REQUIRE(h.pool != nullptr);

    char* out = nullptr;
    REQUIRE(clmm_pool_info(h.pool, &out) == CLMM_OK);
    json info = take(out);
    CHECK(info["tau"] == 6000);
    CHECK(info["iota"] == 0);
    CHECK(info["tick_count"] == 12);
    CHECK(info["liquidity"].size() == 12);
    CHECK(info["current_price"].get<double>() == doctest::Approx(100.0));
}

TEST_CASE("pool files load and missing paths report io errors") {
    TempDir dir("clmm-capi-pool");
    std::ofstream(dir.file("pool.json")) << uniform_pool_text();

    PoolHandle h;
    CHECK(clmm_pool_from_file(dir.file("pool.json").c_str(), &h.pool) == CLMM_OK);
    CHECK(h.pool != nullptr);

    clmm_pool* missing = nullptr;
    CHECK(clmm_pool_from_file(dir.file("absent.json").c_str(), &missing) == CLMM_ERR_IO);
    CHECK(missing == nullptr);
}

TEST_CASE("swap execution reports the trade") {
    PoolHandle h;
    REQUIRE(clmm_pool_from_json(uniform_pool_text().c_str(), &h.pool) == CLMM_OK);

    // Constant-product check: buying 10 x costs 10000/9 y from (100, 10000).
    char* out = nullptr;
    REQUIRE(clmm_swap_execute(h.pool, 10000.0 / 9.0, CLMM_Y_IN, 1.0, &out) == CLMM_OK);
    json res = take(out);
    CHECK(res["amount_out"].get<double>() == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(res["final_price"].get<double>() ==
          doctest::Approx(10000.0 / 81.0).epsilon(1e-9));
    CHECK(res["fee_usd"].get<double>() ==
          doctest::Approx(0.003 * 10000.0 / 9.0).epsilon(1e-9));
    CHECK(res["intervals_touched"].get<int>() >= 1);

    CHECK(clmm_swap_execute(nullptr, 1.0, CLMM_X_IN, 1.0, &out) ==
          CLMM_ERR_INVALID_ARGUMENT);
    CHECK(clmm_swap_execute(h.pool, -1.0, CLMM_X_IN, 1.0, &out) ==
          CLMM_ERR_INVALID_ARGUMENT);
    CHECK(clmm_swap_execute(h.pool, 1e12, CLMM_X_IN, 1.0, &out) ==
          CLMM_ERR_INSUFFICIENT_LIQUIDITY);
    CHECK(std::string(clmm_last_error()).size() > 0);
}

TEST_CASE("oracle check passes on a routine trade") {
    PoolHandle h;
    REQUIRE(clmm_pool_from_json(uniform_pool_text().c_str(), &h.pool) == CLMM_OK);
    char* out = nullptr;
    REQUIRE(clmm_oracle_check(h.pool, 25.0, CLMM_X_IN, 1e-6, 1 << 12, &out) == CLMM_OK);
    json res = take(out);
    CHECK(res["passed"] == true);
    CHECK(res["rel_dev_price"].get<double>() <= 1e-6);
    CHECK(res["rel_dev_out"].get<double>() <= 1e-6);
    CHECK(res["tolerance"].get<double>() == 1e-6);
}

TEST_CASE("price impact matches the worked example") {
    // Position of 100 liquidity on [1, 4]; pool repricing 2.25 -> 1.44 at
    // unit token prices loses 40/3 dollars against holding.
    char* out = nullptr;
    REQUIRE(clmm_price_impact(100.0, 1.0, 4.0, 2.25, 1.44, 1.0, 1.0, &out) == CLMM_OK);
    json res = take(out);
    CHECK(res["value_at_entry"].get<double>() == doctest::Approx(200.0 / 3.0));
    CHECK(res["value_at_exit"].get<double>() == doctest::Approx(160.0 / 3.0));
    CHECK(res["impact"].get<double>() == doctest::Approx(40.0 / 3.0));
    CHECK(res["relative_impact"].get<double>() == doctest::Approx(0.2));

    CHECK(clmm_price_impact(-1.0, 1.0, 4.0, 2.0, 1.0, 1.0, 1.0, &out) ==
          CLMM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("move classification names the strategic setting") {
    char* out = nullptr;
    REQUIRE(clmm_classify_move(1.2, 0.8, 1.0, 1.0, &out) == CLMM_OK);
    json res = take(out);
    CHECK(res["kind"] == "CROSSING");
    CHECK(res["archetype"] == "OVERSHOOT");

    REQUIRE(clmm_classify_move(1.0, 0.8, 1.0, 1.0, &out) == CLMM_OK);
    res = take(out);
    CHECK(res["kind"] == "DIVERGING_GAIN");
    CHECK(res["boundary"] == "NONPOSITIVE");
    CHECK(res["archetype"] == "OVERPRICED");

    // No move, no strategic setting.
    REQUIRE(clmm_classify_move(1.0, 1.0, 1.0, 1.0, &out) == CLMM_OK);
    res = take(out);
    CHECK(!res.contains("archetype"));

    CHECK(clmm_classify_move(1.0, 1.0, -1.0, 1.0, &out) == CLMM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("strategy search over the C boundary") {
    PoolHandle h;
    REQUIRE(clmm_pool_from_json(uniform_pool_text().c_str(), &h.pool) == CLMM_OK);
    // Pool at the market price, trader sells x: the provider should join.
    json trade{{"amount_in", 15.0},
               {"direction", "X_IN"},
               {"p_x_usd", 100.0},
               {"p_y_usd", 1.0}};
    char* out = nullptr;
    REQUIRE(clmm_optimize(h.pool, trade.dump().c_str(), nullptr, &out) == CLMM_OK);
    json res = take(out);
    CHECK(res["archetype"] == "OVERPRICED");
    CHECK(res["strategy"]["participate"] == true);
    CHECK(res["breakdown"]["utility"].get<double>() > 0.0);
    CHECK(res["ranges_evaluated"].get<int>() >= 1);

    // Same search under an explicit config document.
    json config{{"budget", 2000.0}, {"grid_points", 64}};
    REQUIRE(clmm_optimize(h.pool, trade.dump().c_str(), config.dump().c_str(), &out) ==
            CLMM_OK);
    json capped = take(out);
    CHECK(capped["strategy"]["participate"] == true);
    CHECK(capped["breakdown"]["position_value_entry"].get<double>() <=
          2000.0 * (1.0 + 1e-9));

    CHECK(clmm_optimize(h.pool, "{bad", nullptr, &out) == CLMM_ERR_PARSE);
    CHECK(clmm_optimize(h.pool, trade.dump().c_str(), "{\"solver\":\"NEWTON\"}", &out) ==
          CLMM_ERR_PARSE);
    json broke{{"budget", 1.0}, {"bid_cost", 2.0}};
    CHECK(clmm_optimize(h.pool, trade.dump().c_str(), broke.dump().c_str(), &out) ==
          CLMM_ERR_BUDGET);
}

TEST_CASE("corpus replay over the C boundary") {
    TempDir dir("clmm-capi-replay");
    write_corpus(dir);

    char* out = nullptr;
    REQUIRE(clmm_replay(dir.file("swaps.csv").c_str(), (dir.path / "pools").string().c_str(),
                        nullptr, dir.file("records.csv").c_str(), &out) == CLMM_OK);
    json summary = take(out);
    CHECK(summary["events"] == 3);
    CHECK(summary["failed"] == 0);
    CHECK(summary["with_real"] == 1);
    CHECK(summary["rejected_rows"].empty());
    CHECK(summary.contains("profit_cdf"));

    std::ifstream records(dir.file("records.csv"));
    REQUIRE(records.good());
    int lines = 0;
    std::string line;
    while (std::getline(records, line)) ++lines;
    CHECK(lines == 4);

    CHECK(clmm_replay(dir.file("absent.csv").c_str(), (dir.path / "pools").string().c_str(),
                      nullptr, nullptr, &out) == CLMM_ERR_IO);
}

TEST_CASE("budget sweep over the C boundary") {
    TempDir dir("clmm-capi-sweep");
    write_corpus(dir);

    std::vector<double> multipliers{0.0, 1.5};
    char* out = nullptr;
    REQUIRE(clmm_budget_sweep(dir.file("swaps.csv").c_str(),
                              (dir.path / "pools").string().c_str(), nullptr,
                              multipliers.data(), multipliers.size(),
                              dir.file("sweep.csv").c_str(), &out) == CLMM_OK);
    json res = take(out);
    REQUIRE(res["points"].size() == 2);
    CHECK(res["points"][0]["budget_multiplier"] == 0.0);
    CHECK(res["points"][0]["passive_fee_pct"].get<double>() ==
          doctest::Approx(100.0).epsilon(1e-12));
    CHECK(fs::exists(dir.file("sweep.csv")));

    // Anchorless multiplier sets are invalid.
    std::vector<double> no_anchor{1.0};
    CHECK(clmm_budget_sweep(dir.file("swaps.csv").c_str(),
                            (dir.path / "pools").string().c_str(), nullptr,
                            no_anchor.data(), no_anchor.size(), nullptr,
                            &out) == CLMM_ERR_INVALID_ARGUMENT);
}

}  // TEST_SUITE
