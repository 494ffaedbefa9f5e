#pragma once

#include "noveltree/errors.hpp"
#include "noveltree/iw/novelty_table.hpp"

#include <chrono>
#include <cstddef>
#include <deque>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace noveltree::iw {

inline constexpr std::size_t kDefaultBudget = 1'000'000;
inline constexpr int kDefaultMaxWidth = 3;

// A search model exposes initial(), is_goal(s) and successors(s), the latter
// returning (action, state) pairs in a deterministic order.
template <typename M>
concept SearchModel = requires(const M &m, const typename M::State &s) {
    { m.initial() } -> std::convertible_to<typename M::State>;
    { m.is_goal(s) } -> std::convertible_to<bool>;
    m.successors(s);
};

struct SearchStats {
    std::size_t generated = 0;
    std::size_t expanded = 0;
    std::size_t pruned = 0;
    // Pruned states equal to a state already kept.
    std::size_t duplicate_pruned = 0;
    std::size_t frontier = 0;
    std::size_t max_depth = 0;
    double wall_ms = 0.0;
    bool budget_exceeded = false;
};

template <typename Action>
struct SearchOutcome {
    std::optional<std::vector<Action>> plan;
    SearchStats stats;

    bool solved() const { return plan.has_value(); }
};

struct IWOptions {
    int k = 1;
    std::size_t budget = kDefaultBudget;
};

// Breadth-first search that keeps a generated state only when its novelty is
// at most k. The goal test runs when a state is expanded.
template <SearchModel Model, typename FeatureFn>
auto iw_search(const Model &model, FeatureFn &&features, const IWOptions &options) {
    using State = typename Model::State;
    using Action = typename Model::Action;
    struct Node {
        State state;
        std::size_t parent;
        std::optional<Action> action;
        std::size_t depth;
    };

    const auto start = std::chrono::steady_clock::now();
    SearchOutcome<Action> out;
    auto &stats = out.stats;
    auto finish = [&]() -> SearchOutcome<Action> & {
        stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return out;
    };

    NoveltyTable table(options.k);
    std::vector<Node> nodes;
    std::deque<std::size_t> frontier;
    std::set<State> kept;

    nodes.push_back(Node{model.initial(), 0, std::nullopt, 0});
    table.register_features(features(nodes[0].state));
    kept.insert(nodes[0].state);
    frontier.push_back(0);
    stats.generated = 1;

    while (!frontier.empty()) {
        const std::size_t index = frontier.front();
        frontier.pop_front();
        ++stats.expanded;
        if (model.is_goal(nodes[index].state)) {
            std::vector<Action> plan;
            for (std::size_t i = index; i != 0; i = nodes[i].parent) plan.push_back(*nodes[i].action);
            out.plan.emplace(plan.rbegin(), plan.rend());
            stats.frontier = frontier.size();
            return finish();
        }
        if (stats.generated >= options.budget) {
            // Put the node back so the stats identity still holds.
            --stats.expanded;
            frontier.push_front(index);
            stats.budget_exceeded = true;
            break;
        }
        const std::size_t depth = nodes[index].depth + 1;
        for (auto &[action, succ] : model.successors(nodes[index].state)) {
            ++stats.generated;
            const auto phi = features(succ);
            if (table.novelty(phi) == kAboveK) {
                ++stats.pruned;
                if (kept.count(succ)) ++stats.duplicate_pruned;
                continue;
            }
            table.register_features(phi);
            kept.insert(succ);
            nodes.push_back(Node{std::move(succ), index, std::move(action), depth});
            frontier.push_back(nodes.size() - 1);
            if (depth > stats.max_depth) stats.max_depth = depth;
        }
    }
    stats.frontier = frontier.size();
    return finish();
}

template <typename Action>
struct WidthResult {
    // 0 when the initial state is a goal; empty when unsolved up to k_max.
    std::optional<int> width;
    // Search at the effective width, or at k_max when unsolved.
    SearchOutcome<Action> outcome;
};

template <SearchModel Model, typename FeatureFn>
auto effective_width(const Model &model, FeatureFn &&features, int k_max = kDefaultMaxWidth,
                     std::size_t budget = kDefaultBudget) {
    using Action = typename Model::Action;
    if (k_max < 1) throw Error("k_max must be at least 1");
    WidthResult<Action> result;
    if (model.is_goal(model.initial())) {
        result.width = 0;
        result.outcome.plan.emplace();
        result.outcome.stats.generated = 1;
        result.outcome.stats.expanded = 1;
        return result;
    }
    for (int k = 1; k <= k_max; ++k) {
        result.outcome = iw_search(model, features, IWOptions{k, budget});
        if (result.outcome.solved()) {
            result.width = k;
            break;
        }
    }
    return result;
}

struct PruneStats {
    std::optional<int> width;
    std::size_t generated = 0;
    std::size_t expanded = 0;
    std::size_t pruned = 0;
    std::size_t duplicate_pruned = 0;
    double pruneable = 0.0; // pruned / generated
    double wall_ms = 0.0;
};

// Runs IW at the effective width (k_max when unsolved) and reports the pruned
// share of generated states. Throws BudgetExceeded when that run hits the cap.
template <SearchModel Model, typename FeatureFn>
PruneStats pruneability_stats(const Model &model, FeatureFn &&features, int k_max = kDefaultMaxWidth,
                              std::size_t budget = kDefaultBudget) {
    auto result = effective_width(model, features, k_max, budget);
    const auto &s = result.outcome.stats;
    if (s.budget_exceeded)
        throw BudgetExceeded("state budget of " + std::to_string(budget) + " exceeded");
    PruneStats out;
    out.width = result.width;
    out.generated = s.generated;
    out.expanded = s.expanded;
    out.pruned = s.pruned;
    out.duplicate_pruned = s.duplicate_pruned;
    out.pruneable = s.generated ? static_cast<double>(s.pruned) / static_cast<double>(s.generated) : 0.0;
    out.wall_ms = s.wall_ms;
    return out;
}

} // namespace noveltree::iw
