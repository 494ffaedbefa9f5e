#pragma once

#include "noveltree/core/semantics.hpp"
#include "noveltree/domains/game24.hpp"

#include <utility>
#include <vector>

namespace noveltree::iw {

class StripsModel {
public:
    using State = core::State;
    using Action = core::GroundAction;

    explicit StripsModel(const core::GroundProblem &problem) : problem_(&problem) {}

    State initial() const { return problem_->initial; }
    bool is_goal(const State &s) const { return core::is_goal(s, problem_->goal); }
    std::vector<std::pair<Action, State>> successors(const State &s) const {
        std::vector<std::pair<Action, State>> out;
        for (auto &a : core::applicable_actions(s, *problem_)) {
            State next = core::apply(a, s);
            out.emplace_back(std::move(a), std::move(next));
        }
        return out;
    }

private:
    const core::GroundProblem *problem_;
};

// Φ(s) for STRIPS states is the set of true atoms.
struct AtomFeatures {
    const std::vector<core::Atom> &operator()(const core::State &s) const { return s.atoms(); }
};

class Game24Model {
public:
    using State = game24::Game24State;
    using Action = game24::Game24Action;

    explicit Game24Model(State initial) : initial_(std::move(initial)) {}

    State initial() const { return initial_; }
    bool is_goal(const State &s) const { return game24::game24_goal(s); }
    std::vector<std::pair<Action, State>> successors(const State &s) const {
        std::vector<std::pair<Action, State>> out;
        for (auto &a : game24::game24_actions(s)) {
            State next = game24::game24_apply(a, s);
            out.emplace_back(std::move(a), std::move(next));
        }
        return out;
    }

private:
    State initial_;
};

struct Game24Features {
    std::vector<core::Atom> operator()(const game24::Game24State &s) const { return game24::game24_features(s); }
};

} // namespace noveltree::iw
