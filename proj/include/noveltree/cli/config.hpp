#pragma once

#include "noveltree/domains/instances.hpp"
#include "noveltree/eval/benchmark.hpp"
#include "noveltree/eval/instances.hpp"
#include "noveltree/oracles/llm_client.hpp"
#include "noveltree/oracles/noisy.hpp"
#include "noveltree/oracles/simulator.hpp"
#include "noveltree/tot/engine.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace noveltree::cli {

// exact: simulator-backed; noisy: exact wrapped in the error model;
// llm: chat completions; duplicate-baseline: text-equality novelty (eval only).
enum class OracleKind { exact, noisy, llm, duplicate_baseline };
const char *to_string(OracleKind kind);
OracleKind oracle_kind_from_string(std::string_view s);

struct OracleConfig {
    OracleKind kind = OracleKind::exact;
    int novelty_k = 2;
    oracles::ActionOrder action_order = oracles::ActionOrder::optimal_first;
    oracles::ErrorModel errors;
};

struct PromptConfig {
    // "base", "extended" or a catalog path.
    std::string catalog = "base";
    pddl::Style style = pddl::Style::natural_language;
    std::string novelty_template = "novelty";
};

struct RunConfig {
    domains::DomainId domain = domains::DomainId::blocksworld;
    std::uint64_t seed = 0;
    std::string out;
    eval::GeneratorOptions generator;
    int n_blocks = 4;
    int max_plan_length = 8;
    tot::ToTConfig tot;
    OracleConfig oracle;
    oracles::LLMParams llm;
    PromptConfig prompts;
    int k_max = 3;
    std::size_t budget = 1000000;
    std::size_t n = 50;
    std::vector<std::string> grid;

    // Throws ConfigError on any out-of-range value.
    void validate() const;
};

// Unknown keys at any level throw ConfigError; missing keys keep defaults.
RunConfig config_from_json(const nlohmann::json &j);
RunConfig load_config(const std::filesystem::path &path);
// Fully resolved form; config_from_json(to_json(c)) reproduces c.
nlohmann::json to_json(const RunConfig &config);
std::string config_hash(const RunConfig &config);

} // namespace noveltree::cli
