#pragma once

#include "noveltree/eval/instances.hpp"
#include "noveltree/oracles/usage.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace noveltree::eval {

struct InstanceVerdict {
    std::string id;
    bool pass = false;
    // "ok", "parse_error", "action_mismatch", "atom_mismatch", "missing_action",
    // "wrong_answer", "unparseable", "oracle_error"
    std::string reason;
    // Single-action generation only: the action starts some optimal plan.
    std::optional<bool> optimal;
    // Novelty only: the query repeats a history state.
    std::optional<bool> duplicate;
    TokenUsage usage;

    bool operator==(const InstanceVerdict &) const = default;
};

struct ScoreReport {
    SubTask subtask = SubTask::action_gen_all;
    std::string style;
    bool thinking = false;
    std::string respondent;
    std::size_t passed = 0;
    std::size_t total = 0;
    std::optional<std::size_t> optimal_passed;
    // Mean total tokens per instance.
    double atu = 0.0;
    bool estimated_tokens = false;
    std::vector<InstanceVerdict> verdicts;

    // "x/N"
    std::string score() const;
    // Recomputes passed/total/optimal_passed/atu from the verdicts.
    void aggregate();

    bool operator==(const ScoreReport &) const = default;
};

nlohmann::json to_json(const ScoreReport &report);
ScoreReport report_from_json(const nlohmann::json &j);

std::string csv_header();
std::string csv_row(const ScoreReport &report);

void write_report(const std::filesystem::path &dir, const ScoreReport &report);
ScoreReport read_report(const std::filesystem::path &json_path);

} // namespace noveltree::eval
