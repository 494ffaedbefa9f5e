#pragma once

#include "noveltree/eval/instances.hpp"
#include "noveltree/eval/report.hpp"
#include "noveltree/oracles/prompt.hpp"
#include "noveltree/oracles/transcript.hpp"
#include "noveltree/pddl/codec.hpp"
#include "noveltree/tot/thought.hpp"

#include <memory>
#include <string>
#include <vector>

namespace noveltree::eval {

struct EvalContext {
    std::shared_ptr<const oracles::PromptCatalog> catalog;
    std::shared_ptr<const pddl::Lexicon> lexicon;
    pddl::Style style = pddl::Style::natural_language;
    std::string novelty_template = "novelty";

    pddl::TextCodec codec() const { return pddl::TextCodec(*lexicon, style); }

    // Shipped catalog ("base", "extended" or a path) and the domain's lexicon.
    static EvalContext builtin(domains::DomainId domain, pddl::Style style, const std::string &catalog = "base");
};

// The instance rendered in one style: the payload pieces and the prompts.
struct RenderedQuery {
    std::string system;
    std::vector<std::string> prompts;
    std::string state_text;
    std::string goal_text;
    // successor: one per action; plan verification: one per step.
    std::vector<std::string> action_texts;
    std::string new_state_text;
    std::vector<std::string> history_texts;

    // Every payload text (not the template wording).
    std::vector<std::string> payload_texts() const;
};

RenderedQuery render_query(const EvalInstance &inst, const EvalContext &ctx);

// Answers the prompts of one instance, one response per prompt.
class Respondent {
public:
    virtual ~Respondent() = default;
    virtual std::string name() const = 0;
    virtual std::vector<tot::Answer<std::string>> respond(const EvalInstance &inst, const RenderedQuery &query,
                                                          const EvalContext &ctx) = 0;
};

// Parses the responses against the stored ground truth.
InstanceVerdict score_response(const EvalInstance &inst, const std::vector<std::string> &responses,
                               const EvalContext &ctx);

struct EvalOptions {
    bool thinking = false;
    int jobs = 1;
    std::shared_ptr<oracles::Transcript> transcript;
};

// Respondent errors score as failures with reason oracle_error. With jobs > 1
// the respondent must be thread safe.
ScoreReport run_subtask_eval(const std::vector<EvalInstance> &instances, Respondent &respondent,
                             const EvalContext &ctx, const EvalOptions &options = {});

} // namespace noveltree::eval
