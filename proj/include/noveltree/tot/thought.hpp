#pragma once

#include "noveltree/core/types.hpp"
#include "noveltree/domains/game24.hpp"
#include "noveltree/oracles/usage.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace noveltree::tot {

using StructuredState = std::variant<std::monostate, core::State, game24::Game24State>;

// A state as seen by the search: its text rendering plus, on simulator-backed
// domains, the structured state it was parsed from or rendered from.
struct Thought {
    std::string content;
    StructuredState state;
};

// One sample of a direct expansion: the next thought and, when the oracle
// reports it, the action that produced it.
struct Step {
    std::optional<std::string> action;
    Thought thought;
};

enum class YesNo { yes, no, unparseable };

const char *to_string(YesNo answer);

// Oracle result plus the tokens spent obtaining it. `value` is empty when the
// response could not be used (the reason is in `error`).
template <typename T>
struct Answer {
    std::optional<T> value;
    TokenUsage usage;
    std::string error;
};

// Direct mode: one call yields the next thought.
class ThoughtOracle {
public:
    virtual ~ThoughtOracle() = default;
    // m independent samples conditioned on the same parent.
    virtual std::vector<Answer<Step>> sample_steps(const Thought &parent, int m) = 0;
};

class ActionOracle {
public:
    virtual ~ActionOracle() = default;
    virtual std::vector<Answer<std::string>> sample_actions(const Thought &parent, int m) = 0;
};

class SuccessorOracle {
public:
    virtual ~SuccessorOracle() = default;
    // May throw PreconditionViolation for an inadmissible action.
    virtual Answer<Thought> successor(const Thought &parent, const std::string &action) = 0;
};

class VerifierOracle {
public:
    virtual ~VerifierOracle() = default;
    // yes = goal reached.
    virtual Answer<YesNo> is_goal(const Thought &thought) = 0;
};

class NoveltyOracle {
public:
    virtual ~NoveltyOracle() = default;
    // yes = novel (keep). `history` holds kept thoughts, oldest first.
    virtual Answer<YesNo> is_novel(const Thought &candidate, const std::vector<Thought> &history) = 0;
};

} // namespace noveltree::tot
