#include "noveltree/iw/optimal.hpp"

#include "noveltree/core/semantics.hpp"
#include "noveltree/errors.hpp"

#include <algorithm>
#include <deque>

namespace noveltree::iw {

std::optional<core::Plan> optimal_plan_bfs(const core::GroundProblem &problem, std::size_t budget) {
    if (core::is_goal(problem.initial, problem.goal)) return core::Plan{};

    struct Node {
        std::size_t parent;
        std::size_t action; // index into problem.actions
    };
    std::unordered_map<core::State, std::size_t, core::StateHash> seen;
    std::vector<core::State> states;
    std::vector<Node> nodes;
    std::deque<std::size_t> queue;

    states.push_back(problem.initial);
    nodes.push_back({0, 0});
    seen.emplace(problem.initial, 0);
    queue.push_back(0);

    auto plan_to = [&](std::size_t index) {
        core::Plan plan;
        for (std::size_t i = index; i != 0; i = nodes[i].parent) plan.steps.push_back(problem.actions[nodes[i].action]);
        std::reverse(plan.steps.begin(), plan.steps.end());
        return plan;
    };

    while (!queue.empty()) {
        const std::size_t current = queue.front();
        queue.pop_front();
        for (std::size_t a = 0; a < problem.actions.size(); ++a) {
            const auto &action = problem.actions[a];
            if (!core::is_applicable(action, states[current])) continue;
            core::State next = core::apply(action, states[current]);
            if (seen.count(next)) continue;
            if (states.size() >= budget)
                throw BudgetExceeded("optimal search exceeded " + std::to_string(budget) + " states");
            const std::size_t index = states.size();
            seen.emplace(next, index);
            const bool goal = core::is_goal(next, problem.goal);
            states.push_back(std::move(next));
            nodes.push_back({current, a});
            if (goal) return plan_to(index);
            queue.push_back(index);
        }
    }
    return std::nullopt;
}

GoalDistances::GoalDistances(const core::GroundProblem &problem, std::size_t budget)
    : problem_(&problem), budget_(budget) {}

void GoalDistances::explore(const core::State &root) {
    std::deque<int> queue;
    auto intern = [&](const core::State &s) -> std::pair<int, bool> {
        auto [it, inserted] = index_.try_emplace(s, static_cast<int>(states_.size()));
        if (inserted) {
            if (states_.size() >= budget_)
                throw BudgetExceeded("goal distance table exceeded " + std::to_string(budget_) + " states");
            states_.push_back(s);
            preds_.emplace_back();
            dist_.push_back(-1);
        }
        return {it->second, inserted};
    };
    queue.push_back(intern(root).first);
    while (!queue.empty()) {
        const int current = queue.front();
        queue.pop_front();
        for (const auto &action : problem_->actions) {
            if (!core::is_applicable(action, states_[current])) continue;
            auto [next, fresh] = intern(core::apply(action, states_[current]));
            preds_[next].push_back(current);
            if (fresh) queue.push_back(next);
        }
    }

    // Reverse breadth-first search from every goal state.
    std::fill(dist_.begin(), dist_.end(), -1);
    std::deque<int> back;
    for (std::size_t i = 0; i < states_.size(); ++i) {
        if (core::is_goal(states_[i], problem_->goal)) {
            dist_[i] = 0;
            back.push_back(static_cast<int>(i));
        }
    }
    while (!back.empty()) {
        const int current = back.front();
        back.pop_front();
        for (int p : preds_[current]) {
            if (dist_[p] >= 0) continue;
            dist_[p] = dist_[current] + 1;
            back.push_back(p);
        }
    }
}

std::optional<int> GoalDistances::distance(const core::State &state) {
    auto it = index_.find(state);
    if (it == index_.end()) {
        explore(state);
        it = index_.find(state);
    }
    const int d = dist_[it->second];
    if (d < 0) return std::nullopt;
    return d;
}

std::vector<core::GroundAction> GoalDistances::optimal_first_actions(const core::State &state) {
    std::vector<core::GroundAction> out;
    const auto d = distance(state);
    if (!d || *d == 0) return out;
    for (const auto &action : core::applicable_actions(state, *problem_)) {
        const auto next = distance(core::apply(action, state));
        if (next && *next == *d - 1) out.push_back(action);
    }
    return out;
}

} // namespace noveltree::iw
