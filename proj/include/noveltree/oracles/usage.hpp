#pragma once

#include <cstdint>

namespace noveltree {

struct TokenUsage {
    std::int64_t prompt = 0;
    std::int64_t completion = 0;
    std::int64_t reasoning = 0;
    // Set when any component came from the whitespace estimate rather than the provider.
    bool estimated = false;

    std::int64_t total() const { return prompt + completion + reasoning; }

    TokenUsage &operator+=(const TokenUsage &o) {
        prompt += o.prompt;
        completion += o.completion;
        reasoning += o.reasoning;
        estimated = estimated || o.estimated;
        return *this;
    }
    friend TokenUsage operator+(TokenUsage a, const TokenUsage &b) { return a += b; }
    bool operator==(const TokenUsage &) const = default;
};

} // namespace noveltree
