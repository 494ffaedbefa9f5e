#pragma once

#include "noveltree/core/types.hpp"
#include "noveltree/domains/instances.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace noveltree::eval {

enum class SubTask {
    action_gen_all,
    action_gen_single,
    successor_joint,
    successor_separate,
    plan_verify,
    novelty,
    novelty_ndap
};

// "action-gen", "action-gen-single", "successor", "successor-separate",
// "plan-verify", "novelty", "novelty-ndap"
const char *to_string(SubTask kind);
SubTask subtask_from_string(std::string_view name);
const std::vector<SubTask> &all_subtasks();

struct GeneratorOptions {
    domains::DomainId domain = domains::DomainId::blocksworld;
    int min_blocks = 3;
    int max_blocks = 5;
    domains::LogisticsSpec logistics;
    // Longest random walk used to pick query states.
    int max_walk = 8;
    int width_k_max = 3;
};

// One sub-task test case. The payload is structured and rendered per style at
// evaluation time; `truth` is recomputable from `problem` and the payload.
struct EvalInstance {
    std::string id;
    SubTask kind = SubTask::action_gen_all;
    domains::InstanceSpec problem;

    core::State state;
    // successor: actions to map; novelty: unused.
    std::vector<core::GroundAction> actions;
    core::Plan plan;
    std::vector<core::State> history;
    core::State query;
    int width = 0;

    nlohmann::json truth;
    std::string truth_hash;
};

// Cached grounding of an instance's problem. Thread safe.
const core::GroundProblem &problem_of(const EvalInstance &inst);
const core::GroundProblem &ground_problem(const domains::InstanceSpec &spec);

// Ground truth computed from the problem reference and payload alone.
nlohmann::json compute_truth(const EvalInstance &inst);
std::string hash_json(const nlohmann::json &value);
bool truth_consistent(const EvalInstance &inst);

std::vector<EvalInstance> gen_action_gen_instances(std::size_t n, bool single, std::uint64_t seed,
                                                   const GeneratorOptions &options = {});
// Separate variant: one instance per query state, issuing one prompt per action.
std::vector<EvalInstance> gen_successor_instances(std::size_t n, bool separate, std::uint64_t seed,
                                                  const GeneratorOptions &options = {});
std::vector<EvalInstance> gen_plan_verify_instances(std::size_t n, std::uint64_t seed,
                                                    const GeneratorOptions &options = {});
std::vector<EvalInstance> gen_novelty_instances(std::size_t n, bool ndap, std::uint64_t seed,
                                                const GeneratorOptions &options = {});

std::vector<EvalInstance> generate_instances(SubTask kind, std::size_t n, std::uint64_t seed,
                                             const GeneratorOptions &options = {});

nlohmann::json to_json(const EvalInstance &inst);
EvalInstance instance_from_json(const nlohmann::json &j);

nlohmann::json to_json(const domains::InstanceSpec &spec);
domains::InstanceSpec spec_from_json(const nlohmann::json &j);

} // namespace noveltree::eval
