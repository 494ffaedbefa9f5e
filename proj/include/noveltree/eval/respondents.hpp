#pragma once

#include "noveltree/eval/scoring.hpp"
#include "noveltree/oracles/llm_client.hpp"

#include <functional>
#include <memory>

namespace noveltree::eval {

// Answers from the rendered payload text alone: states and actions are parsed
// back through the codec, then solved exactly. Scores 100% when the codec
// round trip is lossless.
class ExactRespondent : public Respondent {
public:
    std::string name() const override { return "exact"; }
    std::vector<tot::Answer<std::string>> respond(const EvalInstance &inst, const RenderedQuery &query,
                                                  const EvalContext &ctx) override;
};

// Novelty kinds only: "no" iff the new state's text repeats a history entry.
class DuplicateBaselineRespondent : public Respondent {
public:
    std::string name() const override { return "duplicate-baseline"; }
    std::vector<tot::Answer<std::string>> respond(const EvalInstance &inst, const RenderedQuery &query,
                                                  const EvalContext &ctx) override;
};

// One chat completion per prompt with the rendered system message.
class LLMRespondent : public Respondent {
public:
    explicit LLMRespondent(std::shared_ptr<oracles::LLMClient> client) : client_(std::move(client)) {}
    std::string name() const override { return client_->params().model; }
    std::vector<tot::Answer<std::string>> respond(const EvalInstance &inst, const RenderedQuery &query,
                                                  const EvalContext &ctx) override;

private:
    std::shared_ptr<oracles::LLMClient> client_;
};

// Wraps a callable mapping (instance, prompt index, query) to a response; for tests.
class FunctionRespondent : public Respondent {
public:
    using Fn = std::function<std::string(const EvalInstance &, std::size_t, const RenderedQuery &)>;
    FunctionRespondent(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}
    std::string name() const override { return name_; }
    std::vector<tot::Answer<std::string>> respond(const EvalInstance &inst, const RenderedQuery &query,
                                                  const EvalContext &ctx) override;

private:
    std::string name_;
    Fn fn_;
};

} // namespace noveltree::eval
