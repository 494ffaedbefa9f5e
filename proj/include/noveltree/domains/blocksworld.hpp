#pragma once

#include "noveltree/pddl/defs.hpp"

#include <cstdint>
#include <string>

namespace noveltree::domains {

inline constexpr int kMaxBlocks = 26;

// Block names a, b, c, ... in order.
std::string block_name(int index);

// Random initial and goal towers built by random topological stacking. The goal
// is the goal configuration's `on` atoms (its `ontable` atoms if it has none) and
// is redrawn while it already holds in the initial state. Requires 1 ≤ n ≤ 26;
// with one block the only configuration is the goal itself.
pddl::ProblemDef blocksworld_generate(int n_blocks, std::uint64_t seed);

} // namespace noveltree::domains
