#pragma once

#include "noveltree/domains/instances.hpp"
#include "noveltree/oracles/simulator.hpp"
#include "noveltree/oracles/transcript.hpp"
#include "noveltree/pddl/lexicon.hpp"
#include "noveltree/tot/engine.hpp"

#include "json.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace noveltree::eval {

struct GridCell {
    tot::Traversal traversal = tot::Traversal::dfs;
    tot::Mode mode = tot::Mode::esa;
    bool pruning = false;
    bool thinking = false;

    // "dfs-esa-normal-base", "bfs-direct-thinking-pruning", ...
    std::string label() const;
    bool operator==(const GridCell &) const = default;
};

// {DFS, BFS} x {Direct, ESA} x {Normal, Thinking} x {Base, Pruning}.
std::vector<GridCell> table3_grid();
GridCell cell_from_label(std::string_view label);

struct BenchInstance {
    std::string id;
    domains::InstanceSpec spec;
    // Optimal plan length; -1 when not computed (Game of 24).
    int optimal_length = -1;
};

struct BenchSelection {
    int min_blocks = 3;
    int max_blocks = 5;
    int max_length = 8;
};

// Seeded Blocksworld instances whose optimal plan length is within the bound.
std::vector<BenchInstance> select_blocksworld(std::size_t n, std::uint64_t seed, const BenchSelection &selection = {});
// The first n shipped Game of 24 instances after a seeded shuffle.
std::vector<BenchInstance> select_game24(std::size_t n, std::uint64_t seed);

std::shared_ptr<oracles::Simulator> make_simulator(const BenchInstance &inst, pddl::Style style,
                                                   oracles::ActionOrder order = oracles::ActionOrder::optimal_first);

// Builds the oracles for one (instance, cell) run. Must be thread safe when jobs > 1.
using OracleFactory = std::function<tot::OracleSet(const BenchInstance &, const GridCell &,
                                                   std::shared_ptr<oracles::Simulator>,
                                                   std::shared_ptr<oracles::Transcript>)>;

struct InstanceResult {
    std::string id;
    bool solved = false;
    // The search's own claim; `solved` additionally requires revalidation.
    bool claimed = false;
    std::string reason;
    std::size_t generated = 0;
    std::size_t expanded = 0;
    std::size_t pruned = 0;
    std::size_t plan_length = 0;
    TokenUsage usage;
    double wall_ms = 0.0;
};

nlohmann::json to_json(const InstanceResult &r);
InstanceResult instance_result_from_json(const nlohmann::json &j);

struct CellResult {
    GridCell cell;
    std::vector<InstanceResult> results;
    std::string error;

    std::size_t solved() const;
    std::string perf() const;
    double atu() const;
    double mean_generated() const;
};

struct BenchOptions {
    tot::ToTConfig config;
    std::vector<GridCell> grid = table3_grid();
    pddl::Style style = pddl::Style::natural_language;
    oracles::ActionOrder order = oracles::ActionOrder::optimal_first;
    // Run directory; empty keeps everything in memory.
    std::filesystem::path out;
    bool resume = false;
    int jobs = 1;
};

struct BenchmarkTable {
    std::vector<CellResult> cells;
};

// Runs every grid cell over every instance. Plans are revalidated by the
// simulator; a cell whose factory or search throws records the error and the
// grid continues. With `out` set, per-instance results and transcripts land in
// <out>/cells/<label>/ and `resume` reuses them.
BenchmarkTable run_tot_benchmark(const std::vector<BenchInstance> &instances, const OracleFactory &factory,
                                 const BenchOptions &options);

std::string benchmark_csv(const BenchmarkTable &table);
nlohmann::json to_json(const BenchmarkTable &table);
// Writes bench.csv and bench.json into `dir`.
void write_benchmark(const std::filesystem::path &dir, const BenchmarkTable &table);

} // namespace noveltree::eval
