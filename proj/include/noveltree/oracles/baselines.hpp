#pragma once

#include "noveltree/tot/thought.hpp"

#include <string>
#include <vector>

namespace noveltree::oracles {

// no iff the normalized text equals some normalized history entry.
tot::YesNo duplicate_novelty_baseline(const std::string &new_state_text, const std::vector<std::string> &history);

class DuplicateNoveltyOracle : public tot::NoveltyOracle {
public:
    tot::Answer<tot::YesNo> is_novel(const tot::Thought &candidate, const std::vector<tot::Thought> &history) override;
};

} // namespace noveltree::oracles
