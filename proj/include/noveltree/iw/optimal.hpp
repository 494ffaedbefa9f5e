#pragma once

#include "noveltree/core/types.hpp"
#include "noveltree/iw/search.hpp"

#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

namespace noveltree::iw {

// Shortest plan by breadth-first search with a closed list; successors are
// generated in canonical action order so ties resolve canonically.
// Returns nullopt when the goal is unreachable; throws BudgetExceeded.
std::optional<core::Plan> optimal_plan_bfs(const core::GroundProblem &problem, std::size_t budget = kDefaultBudget);

// Exact goal distances over the reachable state graph, built lazily from each
// queried state and cached. Not thread safe.
class GoalDistances {
public:
    explicit GoalDistances(const core::GroundProblem &problem, std::size_t budget = kDefaultBudget);

    // Number of steps of an optimal plan from `state`; nullopt if the goal is unreachable.
    std::optional<int> distance(const core::State &state);
    // Applicable actions that start some optimal plan, in canonical order.
    std::vector<core::GroundAction> optimal_first_actions(const core::State &state);

    const core::GroundProblem &problem() const { return *problem_; }

private:
    void explore(const core::State &root);

    const core::GroundProblem *problem_;
    std::size_t budget_;
    std::unordered_map<core::State, int, core::StateHash> index_;
    std::vector<core::State> states_;
    std::vector<std::vector<int>> preds_;
    std::vector<int> dist_;
};

} // namespace noveltree::iw
