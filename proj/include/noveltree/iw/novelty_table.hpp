#pragma once

#include "noveltree/core/types.hpp"

#include <cstdint>
#include <limits>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace noveltree::iw {

// Novelty value meaning "no unseen tuple of size ≤ k".
inline constexpr int kAboveK = std::numeric_limits<int>::max();

// Per-size sets of atom tuples seen in registered states. Atoms are interned
// to ids; tuples up to size 3 are packed into one 64-bit key.
class NoveltyTable {
public:
    explicit NoveltyTable(int k);

    int max_size() const { return k_; }
    std::size_t seen_count(int size) const;
    // `tuple` is any set of atoms of size 1..k.
    bool seen(std::vector<core::Atom> tuple) const;
    void clear();

    int novelty(const std::vector<core::Atom> &features) const;
    void register_features(const std::vector<core::Atom> &features);

private:
    static constexpr int kPackedMax = 3;

    bool seen_ids(const std::vector<std::uint32_t> &sorted_ids) const;
    void insert_ids(const std::vector<std::uint32_t> &sorted_ids);

    int k_;
    std::unordered_map<core::Atom, std::uint32_t, core::AtomHash> ids_;
    std::vector<std::unordered_set<std::uint64_t>> packed_;
    std::vector<std::set<std::vector<std::uint32_t>>> wide_;
};

// Smallest t ≤ k with an unseen size-t subset of `features`, else kAboveK.
// Throws EmptyFeatureSet on an empty feature set. Does not modify the table.
int novelty(const std::vector<core::Atom> &features, const NoveltyTable &table);

// Inserts every subset of size 1..k. Throws EmptyFeatureSet.
void register_features(const std::vector<core::Atom> &features, NoveltyTable &table);

} // namespace noveltree::iw
