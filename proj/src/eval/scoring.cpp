#include "noveltree/eval/scoring.hpp"

#include "noveltree/core/parallel.hpp"
#include "noveltree/core/semantics.hpp"
#include "noveltree/errors.hpp"
#include "noveltree/oracles/llm_oracles.hpp"
#include "noveltree/oracles/yes_no.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace noveltree::eval {

EvalContext EvalContext::builtin(domains::DomainId domain, pddl::Style style, const std::string &catalog) {
    EvalContext ctx;
    ctx.catalog = std::make_shared<oracles::PromptCatalog>(oracles::PromptCatalog::builtin(catalog));
    ctx.lexicon = std::make_shared<pddl::Lexicon>(pddl::Lexicon::load(domains::lexicon_file(domain)));
    ctx.style = style;
    return ctx;
}

std::vector<std::string> RenderedQuery::payload_texts() const {
    std::vector<std::string> out{state_text, goal_text, new_state_text};
    out.insert(out.end(), action_texts.begin(), action_texts.end());
    out.insert(out.end(), history_texts.begin(), history_texts.end());
    return out;
}

RenderedQuery render_query(const EvalInstance &inst, const EvalContext &ctx) {
    const auto &problem = problem_of(inst);
    const auto codec = ctx.codec();
    const std::string style = pddl::to_string(ctx.style);
    const std::string domain = problem.domain;

    RenderedQuery q;
    q.goal_text = codec.render_atoms(problem.goal);
    oracles::Bindings common{{"goal", q.goal_text}, {"domain_context", ""}};
    q.system = oracles::render_prompt(ctx.catalog->select(oracles::prompt_id::context, style, domain), common);
    auto render = [&](const char *id, oracles::Bindings extra) {
        extra.insert(common.begin(), common.end());
        return oracles::render_prompt(ctx.catalog->select(id, style, domain), extra);
    };

    switch (inst.kind) {
    case SubTask::action_gen_all:
        q.state_text = codec.render_state(inst.state);
        q.prompts.push_back(render(oracles::prompt_id::action_gen, {{"state", q.state_text}}));
        break;
    case SubTask::action_gen_single:
        q.state_text = codec.render_state(inst.state);
        q.prompts.push_back(render(oracles::prompt_id::action_gen_single, {{"state", q.state_text}}));
        break;
    case SubTask::successor_joint: {
        q.state_text = codec.render_state(inst.state);
        std::string list;
        for (const auto &a : inst.actions) {
            q.action_texts.push_back(codec.render_action(a));
            list += (list.empty() ? "" : "\n") + q.action_texts.back();
        }
        q.prompts.push_back(render(oracles::prompt_id::successor_joint, {{"state", q.state_text}, {"actions", list}}));
        break;
    }
    case SubTask::successor_separate:
        q.state_text = codec.render_state(inst.state);
        for (const auto &a : inst.actions) {
            q.action_texts.push_back(codec.render_action(a));
            q.prompts.push_back(
                render(oracles::prompt_id::successor, {{"state", q.state_text}, {"action", q.action_texts.back()}}));
        }
        break;
    case SubTask::plan_verify: {
        q.state_text = codec.render_state(inst.state);
        std::string plan;
        for (const auto &a : inst.plan.steps) {
            q.action_texts.push_back(codec.render_action(a));
            plan += (plan.empty() ? "" : "\n") + q.action_texts.back();
        }
        q.prompts.push_back(render(oracles::prompt_id::verify_plan, {{"state", q.state_text}, {"plan", plan}}));
        break;
    }
    case SubTask::novelty:
    case SubTask::novelty_ndap:
        q.new_state_text = codec.render_state(inst.query);
        for (const auto &h : inst.history) q.history_texts.push_back(codec.render_state(h));
        q.prompts.push_back(render(ctx.novelty_template.c_str(),
                                   {{"new_state", q.new_state_text},
                                    {"previous_states_str", oracles::join_history(q.history_texts)}}));
        break;
    }
    return q;
}

namespace {

std::set<std::string> labels_of(const nlohmann::json &arr) {
    std::set<std::string> out;
    for (const auto &x : arr) out.insert(x.get<std::string>());
    return out;
}

core::State truth_state(const nlohmann::json &arr) {
    std::vector<core::Atom> atoms;
    for (const auto &text : arr)
        for (auto &g : pddl::extract_paren_groups(text.get<std::string>()))
            atoms.emplace_back(g.front(), std::vector<std::string>(g.begin() + 1, g.end()));
    return core::State(std::move(atoms));
}

InstanceVerdict verdict(const EvalInstance &inst, bool pass, std::string reason) {
    InstanceVerdict v;
    v.id = inst.id;
    v.pass = pass;
    v.reason = pass ? "ok" : std::move(reason);
    return v;
}

} // namespace

InstanceVerdict score_response(const EvalInstance &inst, const std::vector<std::string> &responses,
                               const EvalContext &ctx) {
    const auto codec = ctx.codec();
    const auto &truth = inst.truth;
    if (responses.empty()) return verdict(inst, false, "oracle_error");

    switch (inst.kind) {
    case SubTask::action_gen_all: {
        std::set<std::string> got;
        try {
            for (const auto &call : codec.parse_action_lines(responses[0])) got.insert(call.label());
        } catch (const Error &) {
            return verdict(inst, false, "parse_error");
        }
        return verdict(inst, got == labels_of(truth.at("valid")), "action_mismatch");
    }
    case SubTask::action_gen_single: {
        const std::string line = oracles::first_answer_line(responses[0]);
        std::string label;
        try {
            label = codec.parse_action(line).label();
        } catch (const Error &) {
            auto v = verdict(inst, false, "parse_error");
            v.optimal = false;
            return v;
        }
        const bool valid = labels_of(truth.at("valid")).count(label) > 0;
        auto v = verdict(inst, valid, "action_mismatch");
        v.optimal = labels_of(truth.at("optimal")).count(label) > 0;
        return v;
    }
    case SubTask::successor_joint: {
        std::map<std::string, core::State> got;
        std::istringstream in(responses[0]);
        std::string line;
        try {
            while (std::getline(in, line)) {
                const auto arrow = line.find("=>");
                if (arrow == std::string::npos) {
                    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
                    return verdict(inst, false, "parse_error");
                }
                const auto action = codec.parse_action(oracles::first_answer_line(line.substr(0, arrow))).label();
                got[action] = codec.parse_state(line.substr(arrow + 2));
            }
        } catch (const Error &) {
            return verdict(inst, false, "parse_error");
        }
        for (const auto &entry : truth.at("successors")) {
            auto it = got.find(entry.at("action").get<std::string>());
            if (it == got.end()) return verdict(inst, false, "missing_action");
            if (it->second != truth_state(entry.at("state"))) return verdict(inst, false, "atom_mismatch");
        }
        return verdict(inst, got.size() == truth.at("successors").size(), "action_mismatch");
    }
    case SubTask::successor_separate: {
        const auto &expected = truth.at("successors");
        if (responses.size() != expected.size()) return verdict(inst, false, "oracle_error");
        for (std::size_t i = 0; i < responses.size(); ++i) {
            core::State got;
            try {
                got = codec.parse_state(responses[i]);
            } catch (const Error &) {
                return verdict(inst, false, "parse_error");
            }
            if (got != truth_state(expected[i].at("state"))) return verdict(inst, false, "atom_mismatch");
        }
        return verdict(inst, true, "");
    }
    case SubTask::plan_verify: {
        const auto answer = oracles::parse_yes_no(responses[0]);
        if (answer == tot::YesNo::unparseable) return verdict(inst, false, "unparseable");
        return verdict(inst, (answer == tot::YesNo::yes) == truth.at("valid").get<bool>(), "wrong_answer");
    }
    case SubTask::novelty:
    case SubTask::novelty_ndap: {
        const auto answer = oracles::parse_yes_no(responses[0]);
        InstanceVerdict v = answer == tot::YesNo::unparseable
                                ? verdict(inst, false, "unparseable")
                                : verdict(inst, (answer == tot::YesNo::yes) == truth.at("novel").get<bool>(),
                                          "wrong_answer");
        v.duplicate = truth.at("duplicate").get<bool>();
        return v;
    }
    }
    return verdict(inst, false, "oracle_error");
}

ScoreReport run_subtask_eval(const std::vector<EvalInstance> &instances, Respondent &respondent,
                             const EvalContext &ctx, const EvalOptions &options) {
    ScoreReport report;
    if (!instances.empty()) report.subtask = instances.front().kind;
    report.style = pddl::to_string(ctx.style);
    report.thinking = options.thinking;
    report.respondent = respondent.name();
    report.verdicts.resize(instances.size());

    auto run_one = [&](std::size_t i) {
        const auto &inst = instances[i];
        const auto query = render_query(inst, ctx);
        std::vector<std::string> texts;
        TokenUsage usage;
        std::string error;
        try {
            auto answers = respondent.respond(inst, query, ctx);
            for (auto &a : answers) {
                usage += a.usage;
                if (!a.value && error.empty()) error = a.error.empty() ? "no answer" : a.error;
                texts.push_back(a.value.value_or(""));
            }
        } catch (const AuthError &) {
            throw;
        } catch (const Error &e) {
            error = e.what();
        }
        InstanceVerdict v = error.empty() ? score_response(inst, texts, ctx) : verdict(inst, false, "oracle_error");
        if (!error.empty() && (inst.kind == SubTask::novelty || inst.kind == SubTask::novelty_ndap))
            v.duplicate = inst.truth.at("duplicate").get<bool>();
        v.usage = usage;
        if (options.transcript) {
            options.transcript->write({{"type", "eval"},
                                       {"id", inst.id},
                                       {"subtask", to_string(inst.kind)},
                                       {"prompts", query.prompts},
                                       {"responses", texts},
                                       {"pass", v.pass},
                                       {"reason", v.reason},
                                       {"error", error},
                                       {"tokens", usage.total()}});
        }
        report.verdicts[i] = std::move(v);
    };

    parallel_for(instances.size(), options.jobs, run_one);
    report.aggregate();
    return report;
}

} // namespace noveltree::eval
