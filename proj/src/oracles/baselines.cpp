#include "noveltree/oracles/baselines.hpp"

#include "noveltree/pddl/lexicon.hpp"

namespace noveltree::oracles {

tot::YesNo duplicate_novelty_baseline(const std::string &new_state_text, const std::vector<std::string> &history) {
    const std::string query = pddl::normalize_text(new_state_text);
    for (const auto &h : history)
        if (pddl::normalize_text(h) == query) return tot::YesNo::no;
    return tot::YesNo::yes;
}

tot::Answer<tot::YesNo> DuplicateNoveltyOracle::is_novel(const tot::Thought &candidate,
                                                        const std::vector<tot::Thought> &history) {
    std::vector<std::string> texts;
    texts.reserve(history.size());
    for (const auto &h : history) texts.push_back(h.content);
    return {duplicate_novelty_baseline(candidate.content, texts), {}, {}};
}

} // namespace noveltree::oracles
