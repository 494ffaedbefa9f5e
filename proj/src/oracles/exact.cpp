#include "noveltree/oracles/exact.hpp"

#include "noveltree/errors.hpp"
#include "noveltree/iw/novelty_table.hpp"

namespace noveltree::oracles {

std::vector<tot::Answer<std::string>> ExactActionOracle::sample_actions(const tot::Thought &parent, int m) {
    std::vector<tot::Answer<std::string>> out(static_cast<std::size_t>(std::max(m, 0)));
    std::vector<std::string> ranked;
    try {
        ranked = sim_->ranked_actions(parent);
    } catch (const Error &e) {
        for (auto &a : out) a.error = e.what();
        return out;
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (ranked.empty())
            out[i].error = "no applicable actions";
        else
            out[i].value = ranked[i % ranked.size()];
    }
    return out;
}

tot::Answer<tot::Thought> ExactSuccessorOracle::successor(const tot::Thought &parent, const std::string &action) {
    return {sim_->successor(parent, action), {}, {}};
}

std::vector<tot::Answer<tot::Step>> ExactThoughtOracle::sample_steps(const tot::Thought &parent, int m) {
    std::vector<tot::Answer<tot::Step>> out(static_cast<std::size_t>(std::max(m, 0)));
    std::vector<std::string> ranked;
    try {
        ranked = sim_->ranked_actions(parent);
    } catch (const Error &e) {
        for (auto &a : out) a.error = e.what();
        return out;
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (ranked.empty()) {
            out[i].error = "no applicable actions";
            continue;
        }
        const auto &action = ranked[i % ranked.size()];
        out[i].value = tot::Step{action, sim_->successor(parent, action)};
    }
    return out;
}

tot::Answer<tot::YesNo> ExactVerifier::is_goal(const tot::Thought &thought) {
    try {
        return {sim_->is_goal(thought) ? tot::YesNo::yes : tot::YesNo::no, {}, {}};
    } catch (const Error &e) {
        return {tot::YesNo::unparseable, {}, e.what()};
    }
}

tot::Answer<tot::YesNo> ExactNoveltyOracle::is_novel(const tot::Thought &candidate,
                                                    const std::vector<tot::Thought> &history) {
    try {
        iw::NoveltyTable table(k_);
        for (const auto &h : history) table.register_features(sim_->features(h));
        const int w = table.novelty(sim_->features(candidate));
        return {w <= k_ ? tot::YesNo::yes : tot::YesNo::no, {}, {}};
    } catch (const Error &e) {
        return {tot::YesNo::unparseable, {}, e.what()};
    }
}

tot::OracleSet exact_oracles(std::shared_ptr<Simulator> sim, int novelty_k) {
    tot::OracleSet set;
    set.thought = std::make_shared<ExactThoughtOracle>(sim);
    set.action = std::make_shared<ExactActionOracle>(sim);
    set.successor = std::make_shared<ExactSuccessorOracle>(sim);
    set.verifier = std::make_shared<ExactVerifier>(sim);
    set.novelty = std::make_shared<ExactNoveltyOracle>(sim, novelty_k);
    return set;
}

} // namespace noveltree::oracles
