#include "noveltree/iw/novelty_table.hpp"

#include "noveltree/errors.hpp"

#include <algorithm>

namespace noveltree::iw {

namespace {

constexpr std::uint32_t kIdLimit = 1u << 21;

std::uint64_t pack(const std::vector<std::uint32_t> &ids) {
    std::uint64_t key = 0;
    for (auto id : ids) key = (key << 21) | (id + 1);
    return key;
}

// Calls fn on each size-t combination of `ids` (ascending order); stops when fn returns true.
template <typename Fn>
bool any_combination(const std::vector<std::uint32_t> &ids, int t, Fn fn) {
    const int n = static_cast<int>(ids.size());
    if (t > n) return false;
    std::vector<int> idx(t);
    for (int i = 0; i < t; ++i) idx[i] = i;
    std::vector<std::uint32_t> combo(t);
    while (true) {
        for (int i = 0; i < t; ++i) combo[i] = ids[idx[i]];
        if (fn(combo)) return true;
        int i = t - 1;
        while (i >= 0 && idx[i] == n - t + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (int j = i + 1; j < t; ++j) idx[j] = idx[j - 1] + 1;
    }
}

} // namespace

NoveltyTable::NoveltyTable(int k) : k_(k) {
    if (k < 1) throw Error("novelty bound k must be at least 1");
    packed_.resize(std::min(k, kPackedMax));
    if (k > kPackedMax) wide_.resize(k - kPackedMax);
}

std::size_t NoveltyTable::seen_count(int size) const {
    if (size < 1 || size > k_) return 0;
    if (size <= kPackedMax) return packed_[size - 1].size();
    return wide_[size - kPackedMax - 1].size();
}

bool NoveltyTable::seen_ids(const std::vector<std::uint32_t> &ids) const {
    const int t = static_cast<int>(ids.size());
    if (t <= kPackedMax) return packed_[t - 1].count(pack(ids)) > 0;
    return wide_[t - kPackedMax - 1].count(ids) > 0;
}

void NoveltyTable::insert_ids(const std::vector<std::uint32_t> &ids) {
    const int t = static_cast<int>(ids.size());
    if (t <= kPackedMax)
        packed_[t - 1].insert(pack(ids));
    else
        wide_[t - kPackedMax - 1].insert(ids);
}

bool NoveltyTable::seen(std::vector<core::Atom> tuple) const {
    core::canonicalize(tuple);
    if (tuple.empty() || static_cast<int>(tuple.size()) > k_) return false;
    std::vector<std::uint32_t> ids;
    for (const auto &atom : tuple) {
        auto it = ids_.find(atom);
        if (it == ids_.end()) return false;
        ids.push_back(it->second);
    }
    std::sort(ids.begin(), ids.end());
    return seen_ids(ids);
}

void NoveltyTable::clear() {
    ids_.clear();
    for (auto &s : packed_) s.clear();
    for (auto &s : wide_) s.clear();
}

int NoveltyTable::novelty(const std::vector<core::Atom> &features) const {
    if (features.empty()) throw EmptyFeatureSet();
    std::vector<std::uint32_t> ids;
    ids.reserve(features.size());
    for (const auto &atom : features) {
        auto it = ids_.find(atom);
        // An atom never registered is an unseen singleton.
        if (it == ids_.end()) return 1;
        ids.push_back(it->second);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    const int limit = std::min<int>(k_, static_cast<int>(ids.size()));
    for (int t = 1; t <= limit; ++t) {
        if (any_combination(ids, t, [&](const auto &combo) { return !seen_ids(combo); })) return t;
    }
    return kAboveK;
}

void NoveltyTable::register_features(const std::vector<core::Atom> &features) {
    if (features.empty()) throw EmptyFeatureSet();
    std::vector<std::uint32_t> ids;
    ids.reserve(features.size());
    for (const auto &atom : features) {
        auto [it, inserted] = ids_.try_emplace(atom, static_cast<std::uint32_t>(ids_.size()));
        if (inserted && it->second >= kIdLimit) throw Error("too many distinct atoms for the novelty table");
        ids.push_back(it->second);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    const int limit = std::min<int>(k_, static_cast<int>(ids.size()));
    for (int t = 1; t <= limit; ++t) {
        any_combination(ids, t, [&](const auto &combo) {
            insert_ids(combo);
            return false;
        });
    }
}

int novelty(const std::vector<core::Atom> &features, const NoveltyTable &table) {
    return table.novelty(features);
}

void register_features(const std::vector<core::Atom> &features, NoveltyTable &table) {
    table.register_features(features);
}

} // namespace noveltree::iw
