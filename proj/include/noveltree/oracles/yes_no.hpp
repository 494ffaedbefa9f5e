#pragma once

#include "noveltree/tot/thought.hpp"

#include <string_view>

namespace noveltree::oracles {

// Case-insensitive and trimmed; accepts exactly "yes" or "no" followed by
// optional punctuation. Anything else is unparseable.
tot::YesNo parse_yes_no(std::string_view text);

} // namespace noveltree::oracles
