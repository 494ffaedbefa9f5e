#include "noveltree/oracles/llm_oracles.hpp"

#include "noveltree/errors.hpp"
#include "noveltree/oracles/yes_no.hpp"

#include <cctype>
#include <sstream>

namespace noveltree::oracles {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
    for (char &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

TokenUsage usage_of(const Completion &c) { return c.usage; }

class Base {
public:
    explicit Base(LLMContext ctx) : ctx_(std::move(ctx)), system_(system_prompt(ctx_)) {}

protected:
    Completion ask(const std::string &id, Bindings bindings, double temperature, const std::string &tag) {
        return ctx_.client->complete(system_, render_for(ctx_, id, std::move(bindings)), temperature, tag);
    }

    LLMContext ctx_;
    std::string system_;
};

class LLMActions : public tot::ActionOracle, Base {
public:
    using Base::Base;
    std::vector<tot::Answer<std::string>> sample_actions(const tot::Thought &parent, int m) override {
        std::vector<tot::Answer<std::string>> out;
        for (int i = 0; i < m; ++i) {
            auto c = ask(prompt_id::action_gen_single, {{"state", parent.content}}, ctx_.temperatures.action_gen,
                         "action_gen");
            tot::Answer<std::string> a;
            a.usage = usage_of(c);
            std::string line = first_answer_line(c.text);
            if (line.empty()) {
                a.error = "empty action";
            } else if (ctx_.sim) {
                try {
                    a.value = ctx_.sim->canonical_action(line);
                } catch (const Error &) {
                    // Kept verbatim; the successor step decides what to make of it.
                    a.value = line;
                }
            } else {
                a.value = line;
            }
            out.push_back(std::move(a));
        }
        return out;
    }
};

std::optional<tot::Thought> to_thought(const LLMContext &ctx, const std::string &text, std::string &error) {
    if (text.empty()) {
        error = "empty state";
        return std::nullopt;
    }
    if (!ctx.sim) return tot::Thought{text, {}};
    try {
        return ctx.sim->make_thought(ctx.sim->state_of(tot::Thought{text, {}}));
    } catch (const Error &e) {
        error = std::string("unparseable state: ") + e.what();
        return std::nullopt;
    }
}

class LLMSuccessor : public tot::SuccessorOracle, Base {
public:
    using Base::Base;
    tot::Answer<tot::Thought> successor(const tot::Thought &parent, const std::string &action) override {
        auto c = ask(prompt_id::successor, {{"state", parent.content}, {"action", action}},
                     ctx_.temperatures.successor, "successor");
        tot::Answer<tot::Thought> a;
        a.usage = usage_of(c);
        a.value = to_thought(ctx_, trim(c.text), a.error);
        return a;
    }
};

class LLMThoughts : public tot::ThoughtOracle, Base {
public:
    using Base::Base;
    std::vector<tot::Answer<tot::Step>> sample_steps(const tot::Thought &parent, int m) override {
        std::vector<tot::Answer<tot::Step>> out;
        for (int i = 0; i < m; ++i) {
            auto c = ask(prompt_id::direct_step, {{"state", parent.content}}, ctx_.temperatures.direct_step,
                         "direct_step");
            tot::Answer<tot::Step> a;
            a.usage = usage_of(c);
            std::optional<std::string> action;
            std::string state_text;
            std::istringstream in(c.text);
            std::string line;
            bool in_state = false;
            while (std::getline(in, line)) {
                const std::string t = trim(line);
                const std::string l = lower(t);
                if (l.rfind("action:", 0) == 0) {
                    action = trim(t.substr(7));
                    in_state = false;
                } else if (l.rfind("state:", 0) == 0) {
                    state_text = trim(t.substr(6));
                    in_state = true;
                } else if (in_state && !t.empty()) {
                    state_text += " " + t;
                }
            }
            if (state_text.empty() && !action) state_text = trim(c.text);
            if (action && ctx_.sim) {
                try {
                    action = ctx_.sim->canonical_action(*action);
                } catch (const Error &) {
                }
            }
            if (auto thought = to_thought(ctx_, state_text, a.error)) a.value = tot::Step{action, *thought};
            out.push_back(std::move(a));
        }
        return out;
    }
};

class LLMVerifier : public tot::VerifierOracle, Base {
public:
    using Base::Base;
    tot::Answer<tot::YesNo> is_goal(const tot::Thought &thought) override {
        auto c = ask(prompt_id::verify_state, {{"state", thought.content}}, ctx_.temperatures.verify, "verify");
        return {parse_yes_no(c.text), usage_of(c), {}};
    }
};

class LLMNovelty : public tot::NoveltyOracle, Base {
public:
    using Base::Base;
    tot::Answer<tot::YesNo> is_novel(const tot::Thought &candidate, const std::vector<tot::Thought> &history) override {
        std::vector<std::string> texts;
        for (const auto &h : history) texts.push_back(h.content);
        auto c = ask(ctx_.novelty_template,
                     {{"new_state", candidate.content}, {"previous_states_str", join_history(texts)}},
                     ctx_.temperatures.novelty, "novelty");
        return {parse_yes_no(c.text), usage_of(c), {}};
    }
};

} // namespace

std::string system_prompt(const LLMContext &ctx) {
    if (!ctx.context_text.empty()) return ctx.context_text;
    if (!ctx.catalog) throw ConfigError("LLM oracles need a prompt catalog");
    return render_prompt(ctx.catalog->select(prompt_id::context, ctx.style, ctx.domain), {{"goal", ctx.goal}});
}

std::string render_for(const LLMContext &ctx, const std::string &id, Bindings bindings) {
    if (!ctx.catalog) throw ConfigError("LLM oracles need a prompt catalog");
    bindings.emplace("goal", ctx.goal);
    if (!bindings.count("domain_context")) bindings.emplace("domain_context", ctx.context_text);
    return render_prompt(ctx.catalog->select(id, ctx.style, ctx.domain), bindings);
}

tot::OracleSet llm_oracles(const LLMContext &ctx) {
    if (!ctx.client) throw ConfigError("LLM oracles need a client");
    tot::OracleSet set;
    set.action = std::make_shared<LLMActions>(ctx);
    set.successor = std::make_shared<LLMSuccessor>(ctx);
    set.thought = std::make_shared<LLMThoughts>(ctx);
    set.verifier = std::make_shared<LLMVerifier>(ctx);
    set.novelty = std::make_shared<LLMNovelty>(ctx);
    return set;
}

std::string first_answer_line(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty()) continue;
        std::size_t i = 0;
        while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
        if (i > 0 && i < t.size() && (t[i] == '.' || t[i] == ')'))
            t = trim(t.substr(i + 1));
        else if (t[0] == '-' || t[0] == '*')
            t = trim(t.substr(1));
        return t;
    }
    return "";
}

} // namespace noveltree::oracles
