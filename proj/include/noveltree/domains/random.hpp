#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace noveltree {

// Seeded generator whose draws do not depend on the standard library's
// distribution implementations, so generated files are reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    // Uniform in [0, n); n must be positive.
    std::size_t below(std::size_t n);
    // Uniform in [0, 1).
    double unit();
    bool chance(double p) { return unit() < p; }

    template <typename T>
    void shuffle(std::vector<T> &items) {
        for (std::size_t i = items.size(); i > 1; --i)
            std::swap(items[i - 1], items[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

// Derives an independent stream seed from a base seed and a salt.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

} // namespace noveltree
