#pragma once

#include "noveltree/core/types.hpp"
#include "noveltree/domains/game24.hpp"
#include "noveltree/domains/random.hpp"
#include "noveltree/iw/optimal.hpp"
#include "noveltree/pddl/codec.hpp"
#include "noveltree/tot/thought.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace noveltree::oracles {

// Order in which the exact action oracle hands out admissible actions.
//   canonical:     the problem's canonical action order
//   optimal_first: actions that start an optimal plan, then the rest (both canonical)
enum class ActionOrder { canonical, optimal_first };

const char *to_string(ActionOrder order);
ActionOrder action_order_from_string(std::string_view s);

// Ground-truth view of a domain, working on thought texts in one prompting style.
class Simulator {
public:
    virtual ~Simulator() = default;

    virtual std::string domain() const = 0;
    virtual tot::Thought root() const = 0;
    virtual std::string goal_text() const = 0;

    // Structured state of a thought, parsing its content when needed. Throws NoMatch.
    virtual tot::StructuredState state_of(const tot::Thought &thought) const = 0;
    virtual tot::Thought make_thought(const tot::StructuredState &state) const = 0;
    // Canonical rendering of an action text. Throws NoMatch.
    virtual std::string canonical_action(const std::string &text) const = 0;

    // Admissible actions in sampling order.
    virtual std::vector<std::string> ranked_actions(const tot::Thought &thought) = 0;
    // Throws PreconditionViolation or NoMatch.
    virtual tot::Thought successor(const tot::Thought &thought, const std::string &action) = 0;
    virtual bool is_goal(const tot::Thought &thought) = 0;
    virtual std::vector<core::Atom> features(const tot::Thought &thought) = 0;

    virtual std::optional<std::string> random_inadmissible(const tot::Thought &thought, Rng &rng) = 0;
    // The state with one random fact changed.
    virtual tot::Thought perturb(const tot::Thought &thought, Rng &rng) = 0;

    // Replays action texts from the initial state with the true semantics.
    virtual bool validate(const std::vector<std::string> &plan) = 0;
};

class StripsSimulator : public Simulator {
public:
    StripsSimulator(core::GroundProblem problem, std::shared_ptr<const pddl::Lexicon> lexicon, pddl::Style style,
                    ActionOrder order = ActionOrder::optimal_first);

    const core::GroundProblem &problem() const { return problem_; }
    const pddl::TextCodec &codec() const { return codec_; }
    ActionOrder order() const { return order_; }

    std::string domain() const override { return problem_.domain; }
    tot::Thought root() const override;
    std::string goal_text() const override;
    tot::StructuredState state_of(const tot::Thought &thought) const override;
    tot::Thought make_thought(const tot::StructuredState &state) const override;
    std::string canonical_action(const std::string &text) const override;
    std::vector<std::string> ranked_actions(const tot::Thought &thought) override;
    tot::Thought successor(const tot::Thought &thought, const std::string &action) override;
    bool is_goal(const tot::Thought &thought) override;
    std::vector<core::Atom> features(const tot::Thought &thought) override;
    std::optional<std::string> random_inadmissible(const tot::Thought &thought, Rng &rng) override;
    tot::Thought perturb(const tot::Thought &thought, Rng &rng) override;
    bool validate(const std::vector<std::string> &plan) override;

    core::State strips_state(const tot::Thought &thought) const;
    core::GroundAction ground_action(const std::string &text) const;
    std::optional<core::Plan> to_plan(const std::vector<std::string> &plan) const;

private:
    core::GroundProblem problem_;
    std::shared_ptr<const pddl::Lexicon> lexicon_;
    pddl::TextCodec codec_;
    ActionOrder order_;
    std::unique_ptr<iw::GoalDistances> distances_;
    // Every atom some action can add or the initial state holds, for perturbation.
    std::vector<core::Atom> vocabulary_;
};

class Game24Simulator : public Simulator {
public:
    explicit Game24Simulator(game24::Game24State initial, ActionOrder order = ActionOrder::optimal_first);

    std::string domain() const override { return "game24"; }
    tot::Thought root() const override;
    std::string goal_text() const override { return "24"; }
    tot::StructuredState state_of(const tot::Thought &thought) const override;
    tot::Thought make_thought(const tot::StructuredState &state) const override;
    std::string canonical_action(const std::string &text) const override;
    std::vector<std::string> ranked_actions(const tot::Thought &thought) override;
    tot::Thought successor(const tot::Thought &thought, const std::string &action) override;
    bool is_goal(const tot::Thought &thought) override;
    std::vector<core::Atom> features(const tot::Thought &thought) override;
    std::optional<std::string> random_inadmissible(const tot::Thought &thought, Rng &rng) override;
    tot::Thought perturb(const tot::Thought &thought, Rng &rng) override;
    bool validate(const std::vector<std::string> &plan) override;

    game24::Game24State game_state(const tot::Thought &thought) const;

private:
    bool solvable(const game24::Game24State &state);

    game24::Game24State initial_;
    ActionOrder order_;
    std::map<game24::Game24State, bool> solvable_;
};

} // namespace noveltree::oracles
