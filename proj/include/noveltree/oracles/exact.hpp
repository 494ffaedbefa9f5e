#pragma once

#include "noveltree/oracles/simulator.hpp"
#include "noveltree/tot/engine.hpp"

#include <memory>

namespace noveltree::oracles {

inline constexpr int kDefaultNoveltyK = 2;

// Sample i of m is ranked_actions[i mod n]; an empty list yields m empty answers.
class ExactActionOracle : public tot::ActionOracle {
public:
    explicit ExactActionOracle(std::shared_ptr<Simulator> sim) : sim_(std::move(sim)) {}
    std::vector<tot::Answer<std::string>> sample_actions(const tot::Thought &parent, int m) override;

private:
    std::shared_ptr<Simulator> sim_;
};

class ExactSuccessorOracle : public tot::SuccessorOracle {
public:
    explicit ExactSuccessorOracle(std::shared_ptr<Simulator> sim) : sim_(std::move(sim)) {}
    tot::Answer<tot::Thought> successor(const tot::Thought &parent, const std::string &action) override;

private:
    std::shared_ptr<Simulator> sim_;
};

class ExactThoughtOracle : public tot::ThoughtOracle {
public:
    explicit ExactThoughtOracle(std::shared_ptr<Simulator> sim) : sim_(std::move(sim)) {}
    std::vector<tot::Answer<tot::Step>> sample_steps(const tot::Thought &parent, int m) override;

private:
    std::shared_ptr<Simulator> sim_;
};

// Answers unparseable when the thought's state cannot be recovered.
class ExactVerifier : public tot::VerifierOracle {
public:
    explicit ExactVerifier(std::shared_ptr<Simulator> sim) : sim_(std::move(sim)) {}
    tot::Answer<tot::YesNo> is_goal(const tot::Thought &thought) override;

private:
    std::shared_ptr<Simulator> sim_;
};

// Novel iff novelty(Φ(candidate)) ≤ k against a table built from the history.
class ExactNoveltyOracle : public tot::NoveltyOracle {
public:
    ExactNoveltyOracle(std::shared_ptr<Simulator> sim, int k) : sim_(std::move(sim)), k_(k) {}
    tot::Answer<tot::YesNo> is_novel(const tot::Thought &candidate, const std::vector<tot::Thought> &history) override;

private:
    std::shared_ptr<Simulator> sim_;
    int k_;
};

tot::OracleSet exact_oracles(std::shared_ptr<Simulator> sim, int novelty_k = kDefaultNoveltyK);

} // namespace noveltree::oracles
