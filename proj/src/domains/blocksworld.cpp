#include "noveltree/domains/blocksworld.hpp"

#include "noveltree/domains/instances.hpp"
#include "noveltree/domains/random.hpp"
#include "noveltree/errors.hpp"

#include <algorithm>

namespace noveltree::domains {

std::string block_name(int index) {
    if (index < 0 || index >= kMaxBlocks) throw ConfigError("block index out of range");
    return std::string(1, static_cast<char>('a' + index));
}

namespace {

using Towers = std::vector<std::vector<int>>;

// Each block, in random order, goes on the table or on top of an existing tower.
Towers random_towers(int n, Rng &rng) {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    Towers towers;
    for (int block : order) {
        const std::size_t slot = rng.below(towers.size() + 1);
        if (slot == towers.size())
            towers.push_back({block});
        else
            towers[slot].push_back(block);
    }
    return towers;
}

std::vector<core::Atom> configuration_atoms(const Towers &towers) {
    std::vector<core::Atom> atoms;
    for (const auto &tower : towers) {
        atoms.emplace_back("ontable", std::vector<std::string>{block_name(tower.front())});
        for (std::size_t i = 1; i < tower.size(); ++i)
            atoms.emplace_back("on", std::vector<std::string>{block_name(tower[i]), block_name(tower[i - 1])});
        atoms.emplace_back("clear", std::vector<std::string>{block_name(tower.back())});
    }
    return atoms;
}

std::vector<core::Atom> goal_atoms(const Towers &towers) {
    std::vector<core::Atom> on;
    std::vector<core::Atom> table;
    for (auto &atom : configuration_atoms(towers)) {
        if (atom.predicate == "on")
            on.push_back(atom);
        else if (atom.predicate == "ontable")
            table.push_back(atom);
    }
    auto goal = on.empty() ? table : on;
    core::canonicalize(goal);
    return goal;
}

} // namespace

pddl::ProblemDef blocksworld_generate(int n_blocks, std::uint64_t seed) {
    if (n_blocks < 1 || n_blocks > kMaxBlocks)
        throw ConfigError("n_blocks must be in [1, " + std::to_string(kMaxBlocks) + "]");
    Rng rng(seed);

    pddl::ProblemDef problem;
    problem.name = "bw-" + std::to_string(n_blocks) + "-" + std::to_string(seed);
    problem.domain = "blocksworld";
    for (int i = 0; i < n_blocks; ++i) problem.objects.push_back({block_name(i), "block"});

    problem.init = configuration_atoms(random_towers(n_blocks, rng));
    problem.init.emplace_back("handempty");
    core::canonicalize(problem.init);
    const core::State initial(problem.init);

    // Any tower configuration is reachable from any other, so only a goal that
    // already holds needs a redraw.
    for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
        problem.goal = goal_atoms(random_towers(n_blocks, rng));
        if (n_blocks == 1 || !initial.contains_all(problem.goal)) return problem;
    }
    throw GeneratorExhausted("no Blocksworld goal differing from the initial state after " +
                             std::to_string(kMaxRedraws) + " draws");
}

} // namespace noveltree::domains
