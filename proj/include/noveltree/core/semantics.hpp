#pragma once

#include "noveltree/core/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace noveltree::core {

// Actions whose preconditions hold in `state`, in the problem's canonical action order.
std::vector<GroundAction> applicable_actions(const State &state, const GroundProblem &problem);

bool is_applicable(const GroundAction &action, const State &state);

// (state \ del) ∪ add. Throws PreconditionViolation when the action is not admissible.
State apply(const GroundAction &action, const State &state);

bool is_goal(const State &state, const std::vector<Atom> &goal);

enum class FailureReason { none, inadmissible, goal_unreached };

const char *to_string(FailureReason reason);

struct VerificationResult {
    bool valid = false;
    // Index of the first inadmissible step, or plan.size() when the goal is not reached.
    std::optional<std::size_t> failed_step;
    FailureReason reason = FailureReason::none;
    // s0 .. s_j for every state reached before the failure (or the whole run).
    std::vector<State> states;
};

VerificationResult validate_plan(const GroundProblem &problem, const Plan &plan);

// Looks up a ground action by name and arguments.
std::optional<GroundAction> find_action(const GroundProblem &problem, const std::string &name,
                                        const std::vector<std::string> &args);

} // namespace noveltree::core
