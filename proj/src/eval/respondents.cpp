#include "noveltree/eval/respondents.hpp"

#include "noveltree/core/semantics.hpp"
#include "noveltree/errors.hpp"
#include "noveltree/iw/novelty_table.hpp"
#include "noveltree/iw/optimal.hpp"
#include "noveltree/oracles/baselines.hpp"

namespace noveltree::eval {

namespace {

tot::Answer<std::string> answer(std::string text, TokenUsage usage = {}) {
    tot::Answer<std::string> a;
    a.value = std::move(text);
    a.usage = usage;
    return a;
}

core::GroundAction resolve(const core::GroundProblem &problem, const pddl::ActionCall &call) {
    auto action = core::find_action(problem, call.name, call.args);
    if (!action) throw NoMatch("no ground action " + call.label());
    return *action;
}

} // namespace

std::vector<tot::Answer<std::string>> ExactRespondent::respond(const EvalInstance &inst, const RenderedQuery &query,
                                                               const EvalContext &ctx) {
    const auto &problem = problem_of(inst);
    const auto codec = ctx.codec();
    std::vector<tot::Answer<std::string>> out;

    switch (inst.kind) {
    case SubTask::action_gen_all: {
        const auto state = codec.parse_state(query.state_text);
        std::string lines;
        for (const auto &a : core::applicable_actions(state, problem))
            lines += (lines.empty() ? "" : "\n") + codec.render_action(a);
        out.push_back(answer(lines));
        break;
    }
    case SubTask::action_gen_single: {
        const auto state = codec.parse_state(query.state_text);
        iw::GoalDistances distances(problem);
        const auto best = distances.optimal_first_actions(state);
        if (best.empty()) throw NoMatch("no optimal action from the query state");
        out.push_back(answer(codec.render_action(best.front())));
        break;
    }
    case SubTask::successor_joint: {
        const auto state = codec.parse_state(query.state_text);
        std::string lines;
        for (const auto &text : query.action_texts) {
            const auto action = resolve(problem, codec.parse_action(text));
            lines += (lines.empty() ? "" : "\n") + text + " => " + codec.render_state(core::apply(action, state));
        }
        out.push_back(answer(lines));
        break;
    }
    case SubTask::successor_separate: {
        const auto state = codec.parse_state(query.state_text);
        for (const auto &text : query.action_texts)
            out.push_back(answer(codec.render_state(core::apply(resolve(problem, codec.parse_action(text)), state))));
        break;
    }
    case SubTask::plan_verify: {
        core::Plan plan;
        for (const auto &text : query.action_texts) plan.steps.push_back(resolve(problem, codec.parse_action(text)));
        core::GroundProblem from_state = problem;
        from_state.initial = codec.parse_state(query.state_text);
        out.push_back(answer(core::validate_plan(from_state, plan).valid ? "yes" : "no"));
        break;
    }
    case SubTask::novelty:
    case SubTask::novelty_ndap: {
        iw::NoveltyTable table(inst.width);
        for (const auto &h : query.history_texts) table.register_features(codec.parse_state(h).atoms());
        const int w = table.novelty(codec.parse_state(query.new_state_text).atoms());
        out.push_back(answer(w <= inst.width ? "yes" : "no"));
        break;
    }
    }
    return out;
}

std::vector<tot::Answer<std::string>> DuplicateBaselineRespondent::respond(const EvalInstance &inst,
                                                                           const RenderedQuery &query,
                                                                           const EvalContext &) {
    if (inst.kind != SubTask::novelty && inst.kind != SubTask::novelty_ndap)
        throw ConfigError("the duplicate baseline only answers novelty sub-tasks");
    const auto yn = oracles::duplicate_novelty_baseline(query.new_state_text, query.history_texts);
    return {answer(yn == tot::YesNo::yes ? "yes" : "no")};
}

std::vector<tot::Answer<std::string>> LLMRespondent::respond(const EvalInstance &inst, const RenderedQuery &query,
                                                             const EvalContext &) {
    std::vector<tot::Answer<std::string>> out;
    for (std::size_t i = 0; i < query.prompts.size(); ++i) {
        try {
            auto c = client_->complete(query.system, query.prompts[i], std::nullopt,
                                       inst.id + (query.prompts.size() > 1 ? "#" + std::to_string(i) : ""));
            out.push_back(answer(std::move(c.text), c.usage));
        } catch (const OracleUnavailable &e) {
            tot::Answer<std::string> a;
            a.error = e.what();
            out.push_back(std::move(a));
        }
    }
    return out;
}

std::vector<tot::Answer<std::string>> FunctionRespondent::respond(const EvalInstance &inst, const RenderedQuery &query,
                                                                  const EvalContext &) {
    std::vector<tot::Answer<std::string>> out;
    for (std::size_t i = 0; i < query.prompts.size(); ++i) {
        auto text = fn_(inst, i, query);
        TokenUsage usage;
        usage.prompt = oracles::estimate_tokens(query.system) + oracles::estimate_tokens(query.prompts[i]);
        usage.completion = oracles::estimate_tokens(text);
        usage.estimated = true;
        out.push_back(answer(std::move(text), usage));
    }
    return out;
}

} // namespace noveltree::eval
