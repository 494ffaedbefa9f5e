#include "noveltree/core/semantics.hpp"

#include "noveltree/errors.hpp"

#include <algorithm>

namespace noveltree::core {

bool is_applicable(const GroundAction &action, const State &state) {
    return state.contains_all(action.preconditions);
}

std::vector<GroundAction> applicable_actions(const State &state, const GroundProblem &problem) {
    std::vector<GroundAction> result;
    for (const auto &action : problem.actions) {
        if (is_applicable(action, state))
            result.push_back(action);
    }
    return result;
}

State apply(const GroundAction &action, const State &state) {
    if (!is_applicable(action, state))
        throw PreconditionViolation("action " + action.label() + " is not applicable");
    std::vector<Atom> next;
    next.reserve(state.size() + action.add_effects.size());
    std::set_difference(state.begin(), state.end(), action.del_effects.begin(),
                        action.del_effects.end(), std::back_inserter(next));
    std::vector<Atom> merged;
    merged.reserve(next.size() + action.add_effects.size());
    std::set_union(next.begin(), next.end(), action.add_effects.begin(), action.add_effects.end(),
                   std::back_inserter(merged));
    return State(std::move(merged));
}

bool is_goal(const State &state, const std::vector<Atom> &goal) {
    if (std::is_sorted(goal.begin(), goal.end()))
        return state.contains_all(goal);
    return std::all_of(goal.begin(), goal.end(), [&](const Atom &a) { return state.contains(a); });
}

const char *to_string(FailureReason reason) {
    switch (reason) {
    case FailureReason::none: return "none";
    case FailureReason::inadmissible: return "inadmissible";
    case FailureReason::goal_unreached: return "goal_unreached";
    }
    return "unknown";
}

VerificationResult validate_plan(const GroundProblem &problem, const Plan &plan) {
    VerificationResult result;
    State current = problem.initial;
    result.states.push_back(current);
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        const auto &step = plan.steps[i];
        if (!is_applicable(step, current)) {
            result.failed_step = i;
            result.reason = FailureReason::inadmissible;
            return result;
        }
        current = apply(step, current);
        result.states.push_back(current);
    }
    if (!is_goal(current, problem.goal)) {
        result.failed_step = plan.steps.size();
        result.reason = FailureReason::goal_unreached;
        return result;
    }
    result.valid = true;
    return result;
}

std::optional<GroundAction> find_action(const GroundProblem &problem, const std::string &name,
                                        const std::vector<std::string> &args) {
    GroundAction probe;
    probe.name = name;
    probe.args = args;
    auto it = std::lower_bound(problem.actions.begin(), problem.actions.end(), probe);
    if (it != problem.actions.end() && *it == probe)
        return *it;
    // Problems assembled by hand may not be sorted.
    auto lin = std::find(problem.actions.begin(), problem.actions.end(), probe);
    if (lin != problem.actions.end())
        return *lin;
    return std::nullopt;
}

} // namespace noveltree::core
