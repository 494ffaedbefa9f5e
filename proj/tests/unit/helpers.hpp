#pragma once

#include "noveltree/core/types.hpp"
#include "noveltree/domains/instances.hpp"
#include "noveltree/oracles/simulator.hpp"
#include "noveltree/pddl/lexicon.hpp"

#include "httplib.h"
#include "json.hpp"

#include <atomic>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace testing {

namespace fs = std::filesystem;

// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
    fs::path path;
    explicit TempDir(const std::string &name) {
        static std::atomic<int> counter{0};
        path = fs::temp_directory_path() /
               ("noveltree-test-" + name + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

inline noveltree::domains::InstanceSpec blocks(int n, std::uint64_t seed) {
    noveltree::domains::InstanceSpec spec;
    spec.domain = noveltree::domains::DomainId::blocksworld;
    spec.n_blocks = n;
    spec.seed = seed;
    return spec;
}

inline std::shared_ptr<const noveltree::pddl::Lexicon> lexicon(noveltree::domains::DomainId id) {
    return std::make_shared<noveltree::pddl::Lexicon>(
        noveltree::pddl::Lexicon::load(noveltree::domains::lexicon_file(id)));
}

inline std::shared_ptr<noveltree::oracles::StripsSimulator>
strips_sim(const noveltree::core::GroundProblem &problem,
           noveltree::pddl::Style style = noveltree::pddl::Style::natural_language,
           noveltree::oracles::ActionOrder order = noveltree::oracles::ActionOrder::optimal_first) {
    return std::make_shared<noveltree::oracles::StripsSimulator>(
        problem, lexicon(noveltree::domains::domain_from_string(problem.domain)), style, order);
}

// Local OpenAI-compatible endpoint. The handler maps a request body to
// (status, response body); every request body is recorded.
class StubServer {
public:
    using Handler = std::function<std::pair<int, std::string>(const nlohmann::json &request, int index)>;

    explicit StubServer(Handler handler) : handler_(std::move(handler)) {
        server_.Post("/v1/chat/completions", [this](const httplib::Request &req, httplib::Response &res) {
            int index;
            nlohmann::json body = nlohmann::json::parse(req.body, nullptr, false);
            {
                std::lock_guard lock(mutex_);
                index = static_cast<int>(requests_.size());
                requests_.push_back(body);
                auth_.push_back(req.get_header_value("Authorization"));
            }
            auto [status, text] = handler_(body, index);
            res.status = status;
            res.set_content(text, "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~StubServer() {
        server_.stop();
        thread_.join();
    }

    std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }
    std::vector<nlohmann::json> requests() const {
        std::lock_guard lock(mutex_);
        return requests_;
    }
    std::vector<std::string> auth_headers() const {
        std::lock_guard lock(mutex_);
        return auth_;
    }

    static std::string reply(const std::string &text, int prompt, int completion, int reasoning = -1) {
        nlohmann::json usage = {{"prompt_tokens", prompt},
                                {"completion_tokens", completion},
                                {"total_tokens", prompt + completion}};
        if (reasoning >= 0) usage["completion_tokens_details"] = {{"reasoning_tokens", reasoning}};
        return nlohmann::json{{"id", "stub"},
                              {"object", "chat.completion"},
                              {"choices", {{{"index", 0},
                                            {"message", {{"role", "assistant"}, {"content", text}}},
                                            {"finish_reason", "stop"}}}},
                              {"usage", usage}}
            .dump();
    }

private:
    Handler handler_;
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
    mutable std::mutex mutex_;
    std::vector<nlohmann::json> requests_;
    std::vector<std::string> auth_;
};

} // namespace testing
