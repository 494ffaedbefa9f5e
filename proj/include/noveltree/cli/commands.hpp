#pragma once

#include "noveltree/cli/config.hpp"
#include "noveltree/eval/benchmark.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace noveltree::cli {

// 0 solved / 1 unsolved / >= 2 error.
enum ExitCode : int { kSolved = 0, kUnsolved = 1, kConfigError = 2, kOracleError = 3, kInternalError = 4 };

// `out` when given, else runs/<command>-<timestamp>-<config hash>. Created,
// with the resolved config echoed to config.json.
std::filesystem::path prepare_run_dir(const std::string &out, const std::string &command, const RunConfig &config);

// Oracles for tot runs per the configured kind. Noisy seeds are mixed with the
// instance id so instances draw independently.
eval::OracleFactory make_oracle_factory(const RunConfig &config);

struct LoadedProblem {
    std::string id;
    pddl::DomainDef domain;
    pddl::ProblemDef problem;
};

// Domain from a sibling domain.pddl, else the shipped domain named by the problem.
LoadedProblem load_problem_file(const std::filesystem::path &path);

struct WidthRow {
    std::string id;
    std::optional<int> width;
    std::size_t generated = 0;
    std::size_t expanded = 0;
    std::size_t pruned = 0;
    std::size_t duplicate_pruned = 0;
    double pruneable = 0.0;
    double wall_ms = 0.0;
    std::string error;
};

struct WidthSummary {
    std::size_t instances = 0;
    std::size_t solved = 0;
    std::size_t errors = 0;
    double mean_width = 0.0;
    int max_width = 0;
    double mean_pruneable = 0.0;
    double mean_states = 0.0;
};

// Per-instance effective width and pruneability; a BudgetExceeded instance is
// recorded in its row and the run continues.
std::vector<WidthRow> analyze_game24(const std::vector<std::array<int, 4>> &instances, int k_max,
                                     std::size_t budget, int jobs = 1);
std::vector<WidthRow> analyze_strips(const std::vector<LoadedProblem> &problems, int k_max, std::size_t budget,
                                     int jobs = 1);
// Means over solved rows without errors.
WidthSummary summarize(const std::vector<WidthRow> &rows);
std::string width_csv(const std::vector<WidthRow> &rows);
// widths.csv, summary.json and histogram files hist_width.csv,
// hist_pruneable.csv (10% bins) and hist_states.csv (log10 bins).
void write_width_report(const std::filesystem::path &dir, const std::vector<WidthRow> &rows);

int cmd_generate(const RunConfig &config, const std::filesystem::path &out, std::ostream &log);
int cmd_analyze_width(const RunConfig &config, const std::vector<std::string> &inputs, const std::string &out,
                      int jobs, std::ostream &log);
// `instance` is a PDDL problem path or, for game24, four numbers. k = 0
// searches for the effective width up to k_max.
int cmd_solve(const RunConfig &config, const std::string &instance, const std::string &engine, int k,
              const std::string &out, std::ostream &log);
int cmd_eval(const RunConfig &config, eval::SubTask subtask, bool thinking, const std::string &out, int jobs,
             std::ostream &log);
int cmd_bench(const RunConfig &config, const std::string &out, bool resume, int jobs, std::ostream &log);

} // namespace noveltree::cli
