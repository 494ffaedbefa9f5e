#include "noveltree/oracles/simulator.hpp"

#include "noveltree/core/semantics.hpp"
#include "noveltree/errors.hpp"

#include <algorithm>

namespace noveltree::oracles {

const char *to_string(ActionOrder order) {
    return order == ActionOrder::canonical ? "canonical" : "optimal_first";
}

ActionOrder action_order_from_string(std::string_view s) {
    if (s == "canonical") return ActionOrder::canonical;
    if (s == "optimal_first") return ActionOrder::optimal_first;
    throw ConfigError("unknown action order '" + std::string(s) + "'");
}

StripsSimulator::StripsSimulator(core::GroundProblem problem, std::shared_ptr<const pddl::Lexicon> lexicon,
                                 pddl::Style style, ActionOrder order)
    : problem_(std::move(problem)), lexicon_(std::move(lexicon)), codec_(*lexicon_, style), order_(order) {
    vocabulary_ = problem_.initial.atoms();
    for (const auto &a : problem_.actions)
        vocabulary_.insert(vocabulary_.end(), a.add_effects.begin(), a.add_effects.end());
    core::canonicalize(vocabulary_);
}

tot::Thought StripsSimulator::root() const { return make_thought(problem_.initial); }

std::string StripsSimulator::goal_text() const { return codec_.render_atoms(problem_.goal); }

core::State StripsSimulator::strips_state(const tot::Thought &thought) const {
    if (const auto *s = std::get_if<core::State>(&thought.state)) return *s;
    return codec_.parse_state(thought.content);
}

tot::StructuredState StripsSimulator::state_of(const tot::Thought &thought) const { return strips_state(thought); }

tot::Thought StripsSimulator::make_thought(const tot::StructuredState &state) const {
    const auto &s = std::get<core::State>(state);
    return tot::Thought{codec_.render_state(s), s};
}

core::GroundAction StripsSimulator::ground_action(const std::string &text) const {
    const auto call = codec_.parse_action(text);
    auto action = core::find_action(problem_, call.name, call.args);
    if (!action) throw NoMatch("no ground action " + call.label());
    return *action;
}

std::string StripsSimulator::canonical_action(const std::string &text) const {
    return codec_.render_action(ground_action(text));
}

std::vector<std::string> StripsSimulator::ranked_actions(const tot::Thought &thought) {
    const core::State s = strips_state(thought);
    auto applicable = core::applicable_actions(s, problem_);
    std::vector<std::string> out;
    if (order_ == ActionOrder::optimal_first) {
        if (!distances_) distances_ = std::make_unique<iw::GoalDistances>(problem_);
        const auto first = distances_->optimal_first_actions(s);
        for (const auto &a : first) out.push_back(codec_.render_action(a));
        for (const auto &a : applicable)
            if (std::find(first.begin(), first.end(), a) == first.end()) out.push_back(codec_.render_action(a));
    } else {
        for (const auto &a : applicable) out.push_back(codec_.render_action(a));
    }
    return out;
}

tot::Thought StripsSimulator::successor(const tot::Thought &thought, const std::string &action) {
    return make_thought(core::apply(ground_action(action), strips_state(thought)));
}

bool StripsSimulator::is_goal(const tot::Thought &thought) {
    return core::is_goal(strips_state(thought), problem_.goal);
}

std::vector<core::Atom> StripsSimulator::features(const tot::Thought &thought) {
    return strips_state(thought).atoms();
}

std::optional<std::string> StripsSimulator::random_inadmissible(const tot::Thought &thought, Rng &rng) {
    const core::State s = strips_state(thought);
    std::vector<const core::GroundAction *> blocked;
    for (const auto &a : problem_.actions)
        if (!core::is_applicable(a, s)) blocked.push_back(&a);
    if (blocked.empty()) return std::nullopt;
    return codec_.render_action(*blocked[rng.below(blocked.size())]);
}

tot::Thought StripsSimulator::perturb(const tot::Thought &thought, Rng &rng) {
    core::State s = strips_state(thought);
    std::vector<core::Atom> absent;
    for (const auto &atom : vocabulary_)
        if (!s.contains(atom)) absent.push_back(atom);
    const bool drop = !s.empty() && (absent.empty() || rng.chance(0.5));
    if (drop) {
        s.erase(s.atoms()[rng.below(s.size())]);
    } else if (!absent.empty()) {
        s.insert(absent[rng.below(absent.size())]);
    }
    return make_thought(s);
}

std::optional<core::Plan> StripsSimulator::to_plan(const std::vector<std::string> &plan) const {
    core::Plan out;
    try {
        for (const auto &text : plan) out.steps.push_back(ground_action(text));
    } catch (const Error &) {
        return std::nullopt;
    }
    return out;
}

bool StripsSimulator::validate(const std::vector<std::string> &plan) {
    const auto p = to_plan(plan);
    return p && core::validate_plan(problem_, *p).valid;
}

Game24Simulator::Game24Simulator(game24::Game24State initial, ActionOrder order)
    : initial_(std::move(initial)), order_(order) {}

tot::Thought Game24Simulator::root() const { return make_thought(initial_); }

game24::Game24State Game24Simulator::game_state(const tot::Thought &thought) const {
    if (const auto *s = std::get_if<game24::Game24State>(&thought.state)) return *s;
    try {
        return game24::parse_state(thought.content);
    } catch (const Error &e) {
        throw NoMatch(e.what());
    }
}

tot::StructuredState Game24Simulator::state_of(const tot::Thought &thought) const { return game_state(thought); }

tot::Thought Game24Simulator::make_thought(const tot::StructuredState &state) const {
    const auto &s = std::get<game24::Game24State>(state);
    return tot::Thought{s.to_string(), s};
}

std::string Game24Simulator::canonical_action(const std::string &text) const {
    try {
        return game24::parse_action(text).to_string();
    } catch (const NoMatch &) {
        throw;
    } catch (const Error &e) {
        throw NoMatch(e.what());
    }
}

bool Game24Simulator::solvable(const game24::Game24State &state) {
    auto it = solvable_.find(state);
    if (it != solvable_.end()) return it->second;
    const bool ok = game24::game24_solve(state).has_value();
    solvable_.emplace(state, ok);
    return ok;
}

std::vector<std::string> Game24Simulator::ranked_actions(const tot::Thought &thought) {
    const auto s = game_state(thought);
    std::vector<std::string> good, rest;
    for (const auto &a : game24::game24_actions(s)) {
        if (order_ == ActionOrder::optimal_first && solvable(game24::game24_apply(a, s)))
            good.push_back(a.to_string());
        else
            rest.push_back(a.to_string());
    }
    good.insert(good.end(), rest.begin(), rest.end());
    return good;
}

tot::Thought Game24Simulator::successor(const tot::Thought &thought, const std::string &action) {
    game24::Game24Action a;
    try {
        a = game24::parse_action(action);
    } catch (const NoMatch &) {
        throw;
    } catch (const Error &e) {
        throw NoMatch(e.what());
    }
    return make_thought(game24::game24_apply(a, game_state(thought)));
}

bool Game24Simulator::is_goal(const tot::Thought &thought) { return game24::game24_goal(game_state(thought)); }

std::vector<core::Atom> Game24Simulator::features(const tot::Thought &thought) {
    return game24::game24_features(game_state(thought));
}

std::optional<std::string> Game24Simulator::random_inadmissible(const tot::Thought &thought, Rng &rng) {
    const auto s = game_state(thought);
    if (s.count() == 0) return std::nullopt;
    // A number that is not on the board.
    const game24::Rational missing = s.remaining().back() + 1 + static_cast<long long>(rng.below(5));
    const auto &other = s.remaining()[rng.below(s.count())];
    return game24::Game24Action{missing, other, game24::kOps[rng.below(4)]}.to_string();
}

tot::Thought Game24Simulator::perturb(const tot::Thought &thought, Rng &rng) {
    auto values = game_state(thought).remaining();
    if (values.empty()) return thought;
    auto &victim = values[rng.below(values.size())];
    game24::Rational replacement(1 + static_cast<long long>(rng.below(13)));
    if (replacement == victim) replacement += 1;
    victim = replacement;
    return make_thought(game24::Game24State(std::move(values)));
}

bool Game24Simulator::validate(const std::vector<std::string> &plan) {
    auto s = initial_;
    try {
        for (const auto &text : plan) s = game24::game24_apply(game24::parse_action(text), s);
    } catch (const Error &) {
        return false;
    }
    return game24::game24_goal(s);
}

} // namespace noveltree::oracles
