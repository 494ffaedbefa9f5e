#pragma once

#include "noveltree/oracles/transcript.hpp"
#include "noveltree/oracles/usage.hpp"

#include "json.hpp"

#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace noveltree::oracles {

struct RetryPolicy {
    int max_attempts = 3;
    int initial_backoff_ms = 500;
    double multiplier = 2.0;
    int max_backoff_ms = 8000;
};

// How the thinking flag reaches the server.
enum class ThinkingStyle { none, field, directive };

const char *to_string(ThinkingStyle s);
ThinkingStyle thinking_style_from_string(std::string_view s);

struct LLMParams {
    // Base URL such as "http://127.0.0.1:8000/v1"; requests go to <endpoint>/chat/completions.
    std::string endpoint;
    std::string model;
    double temperature = 0.0;
    int max_tokens = 1024;
    bool thinking = false;
    ThinkingStyle thinking_style = ThinkingStyle::field;
    // Boolean body field set to the thinking flag (field style).
    std::string thinking_field = "enable_thinking";
    // Appended to the system message (directive style).
    std::string thinking_on_directive = "/think";
    std::string thinking_off_directive = "/no_think";
    RetryPolicy retry;
    int timeout_ms = 60000;
    // Name of the environment variable holding the bearer token; unset means no auth header.
    std::string api_key_env = "OPENAI_API_KEY";
    // Client-side rate limit; 0 disables it.
    double requests_per_minute = 0.0;

    void validate() const;
};

struct Completion {
    std::string text;
    TokenUsage usage;
    double latency_ms = 0.0;
    int attempts = 0;
    int status = 0;
    nlohmann::json raw;
};

// Whitespace-separated word count, used when the server reports no usage.
std::int64_t estimate_tokens(std::string_view text);

// Token bucket refilled at `per_minute` requests per minute.
class RateLimiter {
public:
    explicit RateLimiter(double per_minute);
    void acquire();

private:
    std::mutex mutex_;
    double rate_per_ms_;
    double capacity_;
    double tokens_;
    std::chrono::steady_clock::time_point last_;
};

// OpenAI-compatible chat completions client. Safe for concurrent requests.
class LLMClient {
public:
    explicit LLMClient(LLMParams params, std::shared_ptr<Transcript> transcript = nullptr);

    const LLMParams &params() const { return params_; }
    const std::shared_ptr<Transcript> &transcript() const { return transcript_; }

    nlohmann::json request_body(const std::string &system, const std::string &user,
                                std::optional<double> temperature = std::nullopt) const;

    // Retries transport errors, 429 and 5xx with exponential backoff; throws
    // AuthError on 401/403 and OracleUnavailable once attempts run out.
    Completion complete(const std::string &system, const std::string &user,
                        std::optional<double> temperature = std::nullopt, const std::string &tag = "");

private:
    LLMParams params_;
    std::shared_ptr<Transcript> transcript_;
    std::unique_ptr<RateLimiter> limiter_;
    std::string host_;
    std::string path_;
};

// One round trip with no system message.
Completion llm_complete(const std::string &prompt, const LLMParams &params);

} // namespace noveltree::oracles
