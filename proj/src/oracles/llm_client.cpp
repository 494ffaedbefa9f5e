#include "noveltree/oracles/llm_client.hpp"

#include "noveltree/errors.hpp"

#include "httplib.h"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace noveltree::oracles {

const char *to_string(ThinkingStyle s) {
    switch (s) {
    case ThinkingStyle::none: return "none";
    case ThinkingStyle::field: return "field";
    case ThinkingStyle::directive: return "directive";
    }
    return "?";
}

ThinkingStyle thinking_style_from_string(std::string_view s) {
    if (s == "none") return ThinkingStyle::none;
    if (s == "field") return ThinkingStyle::field;
    if (s == "directive") return ThinkingStyle::directive;
    throw ConfigError("unknown thinking style '" + std::string(s) + "'");
}

void LLMParams::validate() const {
    if (endpoint.empty()) throw ConfigError("LLM endpoint is empty");
    if (model.empty()) throw ConfigError("LLM model name is empty");
    if (temperature < 0) throw ConfigError("temperature must be non-negative");
    if (retry.max_attempts < 1) throw ConfigError("retry attempts must be at least 1");
    if (retry.initial_backoff_ms < 0 || retry.max_backoff_ms < 0) throw ConfigError("backoff must be non-negative");
    if (timeout_ms <= 0) throw ConfigError("timeout must be positive");
    if (requests_per_minute < 0) throw ConfigError("requests_per_minute must be non-negative");
}

std::int64_t estimate_tokens(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::int64_t n = 0;
    std::string word;
    while (in >> word) ++n;
    return n;
}

RateLimiter::RateLimiter(double per_minute)
    : rate_per_ms_(per_minute / 60000.0), capacity_(std::max(1.0, per_minute / 60.0)), tokens_(capacity_),
      last_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
    std::unique_lock lock(mutex_);
    while (true) {
        const auto now = std::chrono::steady_clock::now();
        const double elapsed = std::chrono::duration<double, std::milli>(now - last_).count();
        tokens_ = std::min(capacity_, tokens_ + elapsed * rate_per_ms_);
        last_ = now;
        if (tokens_ >= 1.0) {
            tokens_ -= 1.0;
            return;
        }
        const double wait_ms = (1.0 - tokens_) / rate_per_ms_;
        lock.unlock();
        std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(wait_ms));
        lock.lock();
    }
}

LLMClient::LLMClient(LLMParams params, std::shared_ptr<Transcript> transcript)
    : params_(std::move(params)), transcript_(std::move(transcript)) {
    params_.validate();
    if (params_.requests_per_minute > 0) limiter_ = std::make_unique<RateLimiter>(params_.requests_per_minute);
    const auto scheme = params_.endpoint.find("://");
    if (scheme == std::string::npos) throw ConfigError("endpoint needs a scheme: " + params_.endpoint);
    const auto slash = params_.endpoint.find('/', scheme + 3);
    host_ = params_.endpoint.substr(0, slash);
    std::string base = slash == std::string::npos ? "" : params_.endpoint.substr(slash);
    while (!base.empty() && base.back() == '/') base.pop_back();
    path_ = base + "/chat/completions";
}

nlohmann::json LLMClient::request_body(const std::string &system, const std::string &user,
                                       std::optional<double> temperature) const {
    std::string system_text = system;
    if (params_.thinking_style == ThinkingStyle::directive) {
        const auto &directive = params_.thinking ? params_.thinking_on_directive : params_.thinking_off_directive;
        if (!directive.empty()) system_text += system_text.empty() ? directive : "\n" + directive;
    }
    nlohmann::json messages = nlohmann::json::array();
    if (!system_text.empty()) messages.push_back({{"role", "system"}, {"content", system_text}});
    messages.push_back({{"role", "user"}, {"content", user}});
    nlohmann::json body = {{"model", params_.model},
                           {"messages", messages},
                           {"temperature", temperature.value_or(params_.temperature)},
                           {"max_tokens", params_.max_tokens}};
    if (params_.thinking_style == ThinkingStyle::field) body[params_.thinking_field] = params_.thinking;
    return body;
}

namespace {

TokenUsage read_usage(const nlohmann::json &response, std::string_view prompt, std::string_view text) {
    TokenUsage usage;
    const auto it = response.find("usage");
    if (it != response.end() && it->is_object() && it->contains("prompt_tokens")) {
        usage.prompt = it->value("prompt_tokens", std::int64_t{0});
        std::int64_t completion = it->value("completion_tokens", std::int64_t{0});
        // completion_tokens already includes reasoning tokens when both are reported.
        std::int64_t reasoning = 0;
        if (auto d = it->find("completion_tokens_details"); d != it->end() && d->is_object())
            reasoning = d->value("reasoning_tokens", std::int64_t{0});
        reasoning = std::clamp<std::int64_t>(reasoning, 0, completion);
        usage.completion = completion - reasoning;
        usage.reasoning = reasoning;
        return usage;
    }
    usage.prompt = estimate_tokens(prompt);
    usage.completion = estimate_tokens(text);
    usage.estimated = true;
    return usage;
}

std::string message_text(const nlohmann::json &response) {
    const auto &choices = response.at("choices");
    if (!choices.is_array() || choices.empty()) throw std::runtime_error("no choices");
    const auto &message = choices[0].at("message");
    const auto &content = message.at("content");
    return content.is_null() ? std::string() : content.get<std::string>();
}

} // namespace

Completion LLMClient::complete(const std::string &system, const std::string &user,
                               std::optional<double> temperature, const std::string &tag) {
    const nlohmann::json body = request_body(system, user, temperature);
    const std::string payload = body.dump();
    httplib::Headers headers;
    if (const char *key = std::getenv(params_.api_key_env.c_str()); key && *key)
        headers.emplace("Authorization", std::string("Bearer ") + key);

    const auto timeout = std::chrono::milliseconds(params_.timeout_ms);
    double backoff = params_.retry.initial_backoff_ms;
    std::string last_error;

    for (int attempt = 1; attempt <= params_.retry.max_attempts; ++attempt) {
        if (limiter_) limiter_->acquire();
        httplib::Client client(host_);
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        client.set_write_timeout(timeout);

        const auto start = std::chrono::steady_clock::now();
        auto result = client.Post(path_, headers, payload, "application/json");
        const double latency = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

        nlohmann::json record = {{"type", "llm"}, {"tag", tag}, {"attempt", attempt}, {"request", body},
                                 {"latency_ms", latency}};
        bool retry = false;
        if (!result) {
            last_error = "transport error: " + httplib::to_string(result.error());
            record["error"] = last_error;
            retry = true;
        } else {
            record["status"] = result->status;
            if (result->status == 401 || result->status == 403) {
                record["error"] = "authentication failed";
                if (transcript_) transcript_->write(std::move(record));
                throw AuthError("server rejected credentials (HTTP " + std::to_string(result->status) + ")");
            }
            if (result->status == 429 || result->status >= 500) {
                last_error = "HTTP " + std::to_string(result->status);
                record["error"] = last_error;
                record["response_body"] = result->body;
                retry = true;
            } else if (result->status != 200) {
                record["error"] = "HTTP " + std::to_string(result->status);
                record["response_body"] = result->body;
                if (transcript_) transcript_->write(std::move(record));
                throw OracleUnavailable("request rejected with HTTP " + std::to_string(result->status) + ": " +
                                        result->body.substr(0, 200));
            } else {
                Completion out;
                try {
                    out.raw = nlohmann::json::parse(result->body);
                    out.text = message_text(out.raw);
                } catch (const std::exception &e) {
                    last_error = std::string("malformed response: ") + e.what();
                    record["error"] = last_error;
                    record["response_body"] = result->body;
                    if (transcript_) transcript_->write(std::move(record));
                    throw OracleUnavailable(last_error);
                }
                out.usage = read_usage(out.raw, system + "\n" + user, out.text);
                out.latency_ms = latency;
                out.attempts = attempt;
                out.status = result->status;
                record["response"] = out.text;
                record["usage"] = {{"prompt", out.usage.prompt},
                                   {"completion", out.usage.completion},
                                   {"reasoning", out.usage.reasoning},
                                   {"total", out.usage.total()},
                                   {"estimated", out.usage.estimated}};
                if (transcript_) transcript_->write(std::move(record));
                return out;
            }
        }
        if (transcript_) transcript_->write(std::move(record));
        if (retry && attempt < params_.retry.max_attempts) {
            std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(backoff));
            backoff = std::min<double>(backoff * params_.retry.multiplier, params_.retry.max_backoff_ms);
        }
    }
    throw OracleUnavailable("no response after " + std::to_string(params_.retry.max_attempts) +
                            " attempts: " + last_error);
}

Completion llm_complete(const std::string &prompt, const LLMParams &params) {
    LLMClient client(params);
    return client.complete("", prompt);
}

} // namespace noveltree::oracles
