#pragma once

#include "noveltree/oracles/llm_client.hpp"
#include "noveltree/oracles/prompt.hpp"
#include "noveltree/oracles/simulator.hpp"
#include "noveltree/tot/engine.hpp"

#include <memory>
#include <string>

namespace noveltree::oracles {

// Template ids used by the LLM-backed oracles and the sub-task evaluations.
namespace prompt_id {
inline constexpr const char *context = "context";
inline constexpr const char *action_gen = "action_gen";
inline constexpr const char *action_gen_single = "action_gen_single";
inline constexpr const char *successor = "successor";
inline constexpr const char *successor_joint = "successor_joint";
inline constexpr const char *direct_step = "direct_step";
inline constexpr const char *verify_state = "verify_state";
inline constexpr const char *verify_plan = "verify_plan";
inline constexpr const char *novelty = "novelty";
} // namespace prompt_id

struct LLMContext {
    std::shared_ptr<LLMClient> client;
    std::shared_ptr<const PromptCatalog> catalog;
    std::string domain;
    std::string style = "natural_language";
    std::string goal;
    // Optional; when present, answers are parsed into structured states and
    // canonical action texts, and unparseable states count as failures.
    std::shared_ptr<Simulator> sim;
    tot::Temperatures temperatures;
    // Replaces the catalog's context template when non-empty.
    std::string context_text;
    // Template used for novelty questions.
    std::string novelty_template = prompt_id::novelty;
};

// The rendered system message for the context.
std::string system_prompt(const LLMContext &ctx);

// Renders template `id` for the context's style and domain; goal and
// domain_context are bound automatically.
std::string render_for(const LLMContext &ctx, const std::string &id, Bindings bindings);

tot::OracleSet llm_oracles(const LLMContext &ctx);

// First non-empty line with any list marker ("1.", "-", "*") removed.
std::string first_answer_line(std::string_view text);

} // namespace noveltree::oracles
