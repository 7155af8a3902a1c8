// Command-line front end over the clmmjit C API: single-shot valuation
// and optimization queries, corpus replay, budget sweeps, and oracle
// cross-checks.  Exit codes: 0 success, 1 input or validation error,
// 2 internal invariant violation (oracle mismatch included).

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "clmmjit/clmmjit.h"

namespace {

using nlohmann::json;

struct PoolHandle {
    clmm_pool* pool = nullptr;
    ~PoolHandle() { clmm_pool_free(pool); }
};

int exit_code(clmm_status rc) { return rc == CLMM_ERR_INTERNAL ? 2 : 1; }

int fail(clmm_status rc) {
    std::fprintf(stderr, "error: %s\n", clmm_last_error());
    return exit_code(rc);
}

// Writes a C-API JSON result to `out_path` or standard output, then
// releases it.
int deliver(char* text, const std::string& out_path) {
    std::string body = text ? text : "";
    clmm_string_free(text);
    if (out_path.empty()) {
        std::cout << body << '\n';
        return 0;
    }
    std::ofstream out(out_path);
    out << body << '\n';
    if (!out) {
        std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
        return 1;
    }
    return 0;
}

std::optional<std::string> slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// The environment variable is a hard cap; it can silence parallelism
// but never raise what the flags requested.
int apply_thread_cap(int threads) {
    const char* env = std::getenv("CLMM_JIT_THREADS");
    if (!env || !*env) return threads;
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 0) {
        std::fprintf(stderr, "error: bad CLMM_JIT_THREADS value '%s'\n", env);
        std::exit(1);
    }
    return static_cast<int>(std::min(static_cast<long>(threads), cap));
}

// Config flags shared by optimize, replay, and sweep.  Only values the
// user actually set are forwarded, so library defaults stay in charge.
struct ConfigFlags {
    std::string config_path;
    double budget = 0.0;
    double bid_cost = 0.0;
    std::string solver;
    int grid_points = 0;
    int refine_iterations = 0;
    int pso_particles = 0;
    int pso_iterations = 0;
    double utility_floor = 0.0;
    bool strict_membership = false;
    std::uint64_t seed = 0;
    int threads = 0;

    CLI::Option* budget_opt = nullptr;
    CLI::Option* bid_cost_opt = nullptr;
    CLI::Option* grid_points_opt = nullptr;
    CLI::Option* refine_opt = nullptr;
    CLI::Option* particles_opt = nullptr;
    CLI::Option* iterations_opt = nullptr;
    CLI::Option* floor_opt = nullptr;
    CLI::Option* strict_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* threads_opt = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Optimizer config JSON file")
            ->check(CLI::ExistingFile);
        budget_opt = cmd->add_option("--budget", budget, "Dollar budget for the position");
        bid_cost_opt = cmd->add_option("--bid-cost", bid_cost, "Fixed participation cost");
        cmd->add_option("--solver", solver, "Liquidity solver: grid_refine or pso")
            ->check(CLI::IsMember({"grid_refine", "pso"}));
        grid_points_opt =
            cmd->add_option("--grid-points", grid_points, "Liquidity grid resolution");
        refine_opt = cmd->add_option("--refine-iterations", refine_iterations,
                                     "Golden-section refinement steps");
        particles_opt = cmd->add_option("--pso-particles", pso_particles, "PSO swarm size");
        iterations_opt =
            cmd->add_option("--pso-iterations", pso_iterations, "PSO iteration count");
        floor_opt = cmd->add_option("--utility-floor", utility_floor,
                                    "Participate only above this utility");
        strict_opt = cmd->add_flag("--strict-membership", strict_membership,
                                   "Only ranges containing the entry price");
        seed_opt = cmd->add_option("--seed", seed, "Randomized-solver seed");
        threads_opt = cmd->add_option("--threads", threads, "Worker threads (0 = sequential)");
    }

    // Merged config document: file first, explicit flags on top.
    std::string render() const {
        json doc = json::object();
        if (!config_path.empty()) {
            auto text = slurp(config_path);
            if (!text) {
                std::fprintf(stderr, "error: cannot read %s\n", config_path.c_str());
                std::exit(1);
            }
            doc = json::parse(*text, nullptr, false);
            if (doc.is_discarded() || !doc.is_object()) {
                std::fprintf(stderr, "error: %s is not a JSON object\n", config_path.c_str());
                std::exit(1);
            }
        }
        if (budget_opt->count()) doc["budget"] = budget;
        if (bid_cost_opt->count()) doc["bid_cost"] = bid_cost;
        if (!solver.empty()) doc["solver"] = solver == "pso" ? "PSO" : "GRID_REFINE";
        if (grid_points_opt->count()) doc["grid_points"] = grid_points;
        if (refine_opt->count()) doc["refine_iterations"] = refine_iterations;
        if (particles_opt->count()) doc["pso_particles"] = pso_particles;
        if (iterations_opt->count()) doc["pso_iterations"] = pso_iterations;
        if (floor_opt->count()) doc["utility_floor"] = utility_floor;
        if (strict_opt->count()) doc["strict_membership"] = strict_membership;
        if (seed_opt->count()) doc["seed"] = seed;
        int capped = apply_thread_cap(threads_opt->count() ? threads
                                                           : doc.value("threads", 0));
        doc["threads"] = capped;
        return doc.dump();
    }
};

// Reads amount_in and direction out of a trade document for the
// handle-based C calls.
bool trade_fields(const std::string& path, double& amount_in, clmm_direction& direction) {
    auto text = slurp(path);
    if (!text) {
        std::fprintf(stderr, "error: cannot read %s\n", path.c_str());
        return false;
    }
    json doc = json::parse(*text, nullptr, false);
    if (doc.is_discarded() || !doc.contains("amount_in") || !doc.contains("direction")) {
        std::fprintf(stderr, "error: %s needs amount_in and direction\n", path.c_str());
        return false;
    }
    amount_in = doc["amount_in"].get<double>();
    std::string dir = doc["direction"].get<std::string>();
    if (dir == "X_IN") {
        direction = CLMM_X_IN;
    } else if (dir == "Y_IN") {
        direction = CLMM_Y_IN;
    } else {
        std::fprintf(stderr, "error: direction must be X_IN or Y_IN, got '%s'\n", dir.c_str());
        return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Concentrated-liquidity swap engine, valuation, and JIT strategy tools"};
    app.require_subcommand(1);
    std::string out_path;

    // ----- impact -----
    auto* impact = app.add_subcommand("impact", "Dollar value change of a position");
    double liquidity = 0.0, lower = 0.0, upper = 0.0, q = 0.0, q_prime = 0.0;
    double px = 0.0, py = 0.0;
    impact->add_option("--liquidity", liquidity, "Position liquidity")->required();
    impact->add_option("--lower", lower, "Range lower price")->required();
    impact->add_option("--upper", upper, "Range upper price (inf allowed)")->required();
    impact->add_option("--q", q, "Entry pool price")->required();
    impact->add_option("--q-prime", q_prime, "Exit pool price")->required();
    impact->add_option("--px", px, "Dollar price of token X")->required();
    impact->add_option("--py", py, "Dollar price of token Y")->required();
    impact->add_option("--out", out_path, "Write the report here instead of stdout");

    // ----- classify -----
    auto* classify = app.add_subcommand("classify", "Classify a price move");
    classify->add_option("--q", q, "Entry pool price")->required();
    classify->add_option("--q-prime", q_prime, "Exit pool price")->required();
    classify->add_option("--px", px, "Dollar price of token X")->required();
    classify->add_option("--py", py, "Dollar price of token Y")->required();
    classify->add_option("--out", out_path, "Write the report here instead of stdout");

    // ----- optimize -----
    auto* optimize = app.add_subcommand("optimize", "Best liquidity response to a trade");
    std::string pool_path, swap_path;
    ConfigFlags opt_flags;
    optimize->add_option("--pool", pool_path, "Pool snapshot JSON")
        ->required()
        ->check(CLI::ExistingFile);
    optimize->add_option("--swap", swap_path, "Trade JSON")
        ->required()
        ->check(CLI::ExistingFile);
    opt_flags.attach(optimize);
    optimize->add_option("--out", out_path, "Write the result here instead of stdout");

    // ----- replay -----
    auto* replay = app.add_subcommand("replay", "Replay a swap corpus");
    std::string swaps_path, pools_dir;
    std::string records_path = "records.csv";
    std::string summary_path;
    ConfigFlags replay_flags;
    replay->add_option("--swaps", swaps_path, "Swap events CSV")
        ->required()
        ->check(CLI::ExistingFile);
    replay->add_option("--pools", pools_dir, "Directory of pool snapshots")
        ->required()
        ->check(CLI::ExistingDirectory);
    replay->add_option("--records", records_path, "Per-event output CSV");
    replay->add_option("--summary", summary_path, "Write the summary here instead of stdout");
    replay_flags.attach(replay);

    // ----- sweep -----
    auto* sweep = app.add_subcommand("sweep", "Budget sweep over a swap corpus");
    std::vector<double> multipliers{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    std::string sweep_csv = "sweep.csv";
    ConfigFlags sweep_flags;
    sweep->add_option("--swaps", swaps_path, "Swap events CSV")
        ->required()
        ->check(CLI::ExistingFile);
    sweep->add_option("--pools", pools_dir, "Directory of pool snapshots")
        ->required()
        ->check(CLI::ExistingDirectory);
    sweep->add_option("--multipliers", multipliers, "Budget multipliers (must include 0)")
        ->delimiter(',');
    sweep->add_option("--sweep-csv", sweep_csv, "Curve output CSV");
    sweep_flags.attach(sweep);
    sweep->add_option("--out", out_path, "Write the curves here instead of stdout");

    // ----- oracle -----
    auto* oracle = app.add_subcommand("oracle", "Cross-check the swap engine");
    double tolerance = 1e-6;
    long steps = 0;
    oracle->add_option("--pool", pool_path, "Pool snapshot JSON")
        ->required()
        ->check(CLI::ExistingFile);
    oracle->add_option("--swap", swap_path, "Trade JSON")
        ->required()
        ->check(CLI::ExistingFile);
    oracle->add_option("--tolerance", tolerance, "Relative agreement tolerance");
    oracle->add_option("--steps", steps, "Integration steps per interval (0 = default)");
    oracle->add_option("--out", out_path, "Write the report here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    char* text = nullptr;

    if (impact->parsed()) {
        clmm_status rc =
            clmm_price_impact(liquidity, lower, upper, q, q_prime, px, py, &text);
        if (rc != CLMM_OK) return fail(rc);
        return deliver(text, out_path);
    }

    if (classify->parsed()) {
        clmm_status rc = clmm_classify_move(q, q_prime, px, py, &text);
        if (rc != CLMM_OK) return fail(rc);
        return deliver(text, out_path);
    }

    if (optimize->parsed()) {
        PoolHandle handle;
        clmm_status rc = clmm_pool_from_file(pool_path.c_str(), &handle.pool);
        if (rc != CLMM_OK) return fail(rc);
        auto trade = slurp(swap_path);
        if (!trade) {
            std::fprintf(stderr, "error: cannot read %s\n", swap_path.c_str());
            return 1;
        }
        std::string config = opt_flags.render();
        rc = clmm_optimize(handle.pool, trade->c_str(), config.c_str(), &text);
        if (rc != CLMM_OK) return fail(rc);
        return deliver(text, out_path);
    }

    if (replay->parsed()) {
        std::string config = replay_flags.render();
        clmm_status rc =
            clmm_replay(swaps_path.c_str(), pools_dir.c_str(), config.c_str(),
                        records_path.empty() ? nullptr : records_path.c_str(), &text);
        if (rc != CLMM_OK) return fail(rc);
        return deliver(text, summary_path);
    }

    if (sweep->parsed()) {
        std::string config = sweep_flags.render();
        clmm_status rc = clmm_budget_sweep(swaps_path.c_str(), pools_dir.c_str(),
                                           config.c_str(), multipliers.data(),
                                           multipliers.size(),
                                           sweep_csv.empty() ? nullptr : sweep_csv.c_str(),
                                           &text);
        if (rc != CLMM_OK) return fail(rc);
        return deliver(text, out_path);
    }

    if (oracle->parsed()) {
        PoolHandle handle;
        clmm_status rc = clmm_pool_from_file(pool_path.c_str(), &handle.pool);
        if (rc != CLMM_OK) return fail(rc);
        double amount_in = 0.0;
        clmm_direction direction = CLMM_X_IN;
        if (!trade_fields(swap_path, amount_in, direction)) return 1;
        rc = clmm_oracle_check(handle.pool, amount_in, direction, tolerance, steps, &text);
        if (rc != CLMM_OK) return fail(rc);
        // Disagreement between the two engines is an internal invariant
        // violation, not an input error.
        bool passed = json::parse(text, nullptr, false).value("passed", false);
        int delivered = deliver(text, out_path);
        if (delivered != 0) return delivered;
        if (!passed) {
            std::fprintf(stderr, "error: oracle deviation above tolerance\n");
            return 2;
        }
        return 0;
    }

    return 1;
}
