#include "doctest.h"
#include "helpers.hpp"

#include "noveltree/domains/instances.hpp"
#include "noveltree/errors.hpp"
#include "noveltree/oracles/baselines.hpp"
#include "noveltree/oracles/exact.hpp"
#include "noveltree/oracles/llm_client.hpp"
#include "noveltree/oracles/llm_oracles.hpp"
#include "noveltree/oracles/noisy.hpp"
#include "noveltree/oracles/prompt.hpp"
#include "noveltree/oracles/transcript.hpp"
#include "noveltree/oracles/yes_no.hpp"
#include "noveltree/tot/engine.hpp"

#include <cstdlib>
#include <fstream>

using namespace noveltree;
using namespace noveltree::oracles;
using testing::StubServer;
using tot::YesNo;

namespace {

LLMParams params_for(const StubServer &server) {
    LLMParams p;
    p.endpoint = server.endpoint();
    p.model = "stub";
    p.retry.initial_backoff_ms = 1;
    p.retry.max_backoff_ms = 2;
    p.timeout_ms = 5000;
    p.api_key_env = "NOVELTREE_TEST_KEY";
    return p;
}

PromptTemplate tmpl(std::string body) {
    PromptTemplate t;
    t.id = "t";
    t.body = std::move(body);
    return t;
}

} // namespace

TEST_CASE("parse_yes_no is strict") {
    CHECK(parse_yes_no("yes") == YesNo::yes);
    CHECK(parse_yes_no("  Yes.\n") == YesNo::yes);
    CHECK(parse_yes_no("NO!") == YesNo::no);
    CHECK(parse_yes_no("no") == YesNo::no);
    CHECK(parse_yes_no("") == YesNo::unparseable);
    CHECK(parse_yes_no("yes, because the tower is new") == YesNo::unparseable);
    CHECK(parse_yes_no("maybe") == YesNo::unparseable);
    CHECK(parse_yes_no("nope") == YesNo::unparseable);
}

TEST_CASE("prompt rendering") {
    CHECK(render_prompt(tmpl("Is '{new_state}' novel? {{x}}"), {{"new_state", "s1"}}) == "Is 's1' novel? {x}");
    CHECK_THROWS_AS(render_prompt(tmpl("{state} then {action}"), {{"state", "s"}}), MissingSlot);
    CHECK(tmpl("{state} {action} {state}").slots() == std::vector<std::string>{"state", "action"});
    CHECK(join_history({}) == "(none)");
    CHECK(join_history({"a"}) == "a");
    CHECK(join_history({"a", "b", "c"}) == "a | b | c");
    CHECK(kHistorySeparator == " | ");
}

TEST_CASE("novelty prompt carries the joined history") {
    const auto catalog = PromptCatalog::builtin("base");
    const auto &t = catalog.select("novelty", "natural_language", "blocksworld");
    const auto text = render_prompt(t, {{"new_state", "NEW"}, {"previous_states_str", join_history({"A", "B"})},
                                        {"goal", "G"}, {"domain_context", ""}});
    CHECK(text.find("NEW") != std::string::npos);
    CHECK(text.find("A | B") != std::string::npos);
}

TEST_CASE("prompt catalogs") {
    for (const char *name : {"base", "extended"}) {
        const auto c = PromptCatalog::builtin(name);
        CHECK(c.name() == name);
        for (const char *id : {"context", "action_gen", "action_gen_single", "successor", "successor_joint",
                               "direct_step", "verify_state", "verify_plan", "novelty"})
            for (const char *domain : {"blocksworld", "logistics", "game24"})
                CHECK_MESSAGE(c.has(id, "natural_language", domain), name, " ", id, " ", domain);
    }

    const auto c = PromptCatalog::from_json_text(R"({"name": "t", "templates": [
        {"id": "x", "role": "verify", "style": "any", "domain": "*", "body": "generic {state}"},
        {"id": "x", "role": "verify", "style": "pddl", "domain": "*", "body": "pddl {state}"},
        {"id": "x", "role": "verify", "style": "any", "domain": "game24", "body": "g24 {state}"}]})");
    CHECK(c.select("x", "pddl", "blocksworld").body == "pddl {state}");
    CHECK(c.select("x", "natural_language", "blocksworld").body == "generic {state}");
    CHECK(c.select("x", "pddl", "game24").body == "g24 {state}");
    CHECK_THROWS_AS(c.select("y", "pddl", "game24"), MissingTemplate);

    CHECK_THROWS_AS(PromptCatalog::from_json_text(R"({"name": "t", "bogus": 1, "templates": []})"), ConfigError);
    CHECK_THROWS_AS(PromptCatalog::from_json_text(
                        R"({"name": "t", "templates": [{"id": "x", "role": "verify", "body": "{nope}"}]})"),
                    ConfigError);
    CHECK_THROWS_AS(PromptCatalog::from_json_text(
                        R"({"name": "t", "templates": [{"id": "x", "role": "judge", "body": "b"}]})"),
                    ConfigError);
    CHECK_THROWS_AS(PromptCatalog::from_json_text(
                        R"({"name": "t", "templates": [{"id": "x", "role": "verify", "body": "b", "extra": 1}]})"),
                    ConfigError);
}

TEST_CASE("duplicate baseline answers by normalized text") {
    CHECK(duplicate_novelty_baseline("a b", {}) == YesNo::yes);
    CHECK(duplicate_novelty_baseline("A  b ", {"x", "a b"}) == YesNo::no);
    CHECK(duplicate_novelty_baseline("a c", {"x", "a b"}) == YesNo::yes);
    DuplicateNoveltyOracle o;
    const auto a = o.is_novel({"s", {}}, {{"s", {}}});
    CHECK(a.value == YesNo::no);
    CHECK(a.usage.total() == 0);
}

TEST_CASE("noisy oracles at rate zero behave like the inner oracles") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto sim = testing::strips_sim(domains::generate_ground(testing::blocks(4, seed)));
        const auto exact = exact_oracles(sim);
        tot::ToTConfig config;
        config.novelty_pruning = true;
        const auto a = tot::tot_search({"t", sim->root()}, config, exact);
        const auto b = tot::tot_search({"t", sim->root()}, config, noisy(exact, ErrorModel::uniform(0.0, seed), sim));
        CHECK(a.solved == b.solved);
        CHECK(a.plan == b.plan);
        CHECK(a.stats.generated == b.stats.generated);
    }
    CHECK_THROWS_AS(ErrorModel::uniform(1.5, 0).validate(), ConfigError);
}

TEST_CASE("noisy oracles at rate one always err") {
    const auto sim = testing::strips_sim(domains::generate_ground(testing::blocks(4, 1)));
    const auto set = noisy(exact_oracles(sim), ErrorModel::uniform(1.0, 3), sim);
    const auto root = sim->root();
    CHECK(set.verifier->is_goal(root).value == YesNo::yes);
    CHECK(set.novelty->is_novel(root, {root}).value == YesNo::yes);
    for (const auto &a : set.action->sample_actions(root, 3)) {
        REQUIRE(a.value);
        CHECK_THROWS(sim->successor(root, *a.value));
    }
    const auto action = sim->ranked_actions(root).front();
    const auto wrong = set.successor->successor(root, action);
    REQUIRE(wrong.value);
    CHECK(sim->strips_state(*wrong.value) != sim->strips_state(sim->successor(root, action)));
}

TEST_CASE("transcripts survive a truncated last line") {
    testing::TempDir dir("transcript");
    const auto path = dir.path / "t.jsonl";
    {
        Transcript t(path);
        t.write({{"type", "a"}});
        t.write({{"type", "b"}});
        CHECK(t.size() == 2);
        CHECK(t.records()[1]["seq"] == 1);
    }
    {
        std::ofstream out(path, std::ios::app);
        out << "{\"type\": \"c\", \"trunc";
    }
    const auto records = Transcript::read(path);
    REQUIRE(records.size() == 2);
    CHECK(records[0]["type"] == "a");
}

TEST_CASE("llm client reads usage and splits reasoning tokens") {
    StubServer server([](const nlohmann::json &, int i) {
        if (i == 0) return std::pair{200, StubServer::reply("yes", 30, 12)};
        if (i == 1) return std::pair{200, StubServer::reply("no", 30, 40, 25)};
        return std::pair{200, std::string(R"({"choices": [{"message": {"content": "three word answer"}}]})")};
    });
    auto transcript = std::make_shared<Transcript>();
    LLMClient client(params_for(server), transcript);

    auto a = client.complete("sys", "user", std::nullopt, "tag0");
    CHECK(a.text == "yes");
    CHECK(a.usage == TokenUsage{30, 12, 0, false});
    CHECK(a.attempts == 1);

    auto b = client.complete("sys", "user");
    CHECK(b.usage.prompt == 30);
    CHECK(b.usage.completion == 15);
    CHECK(b.usage.reasoning == 25);
    CHECK(b.usage.total() == 70);

    auto c = client.complete("one two", "three");
    CHECK(c.usage.estimated);
    CHECK(c.usage.prompt == 3);
    CHECK(c.usage.completion == 3);
    CHECK(estimate_tokens("  a  b\tc\n") == 3);

    const auto records = transcript->records();
    REQUIRE(records.size() == 3);
    CHECK(records[0]["tag"] == "tag0");
    CHECK(records[0]["response"] == "yes");
    CHECK(records[2]["usage"]["estimated"] == true);
}

TEST_CASE("llm client retries server errors") {
    StubServer server([](const nlohmann::json &, int i) {
        if (i < 2) return std::pair{500, std::string("{}")};
        return std::pair{200, StubServer::reply("ok", 1, 1)};
    });
    auto transcript = std::make_shared<Transcript>();
    LLMClient client(params_for(server), transcript);
    const auto out = client.complete("s", "u");
    CHECK(out.text == "ok");
    CHECK(out.attempts == 3);
    CHECK(server.requests().size() == 3);
    const auto records = transcript->records();
    REQUIRE(records.size() == 3);
    CHECK(records[0]["status"] == 500);
    CHECK(records[2]["attempt"] == 3);

    StubServer down([](const nlohmann::json &, int) { return std::pair{503, std::string("{}")}; });
    LLMClient failing(params_for(down));
    CHECK_THROWS_AS(failing.complete("s", "u"), OracleUnavailable);
    CHECK(down.requests().size() == 3);
}

TEST_CASE("llm client error classes") {
    StubServer auth([](const nlohmann::json &, int) { return std::pair{401, std::string("{}")}; });
    LLMClient a(params_for(auth));
    CHECK_THROWS_AS(a.complete("s", "u"), AuthError);
    CHECK(auth.requests().size() == 1);

    StubServer bad([](const nlohmann::json &, int) { return std::pair{400, std::string("{\"error\": \"x\"}")}; });
    LLMClient b(params_for(bad));
    CHECK_THROWS_AS(b.complete("s", "u"), OracleUnavailable);
    CHECK(bad.requests().size() == 1);

    StubServer garbage([](const nlohmann::json &, int) { return std::pair{200, std::string("not json")}; });
    LLMClient g(params_for(garbage));
    CHECK_THROWS_AS(g.complete("s", "u"), OracleUnavailable);

    auto p = params_for(bad);
    p.endpoint = "http://127.0.0.1:1/v1";
    p.retry.max_attempts = 2;
    LLMClient nobody(p);
    CHECK_THROWS_AS(nobody.complete("s", "u"), OracleUnavailable);
}

TEST_CASE("llm request body carries model, thinking and auth") {
    StubServer server([](const nlohmann::json &, int) { return std::pair{200, StubServer::reply("x", 1, 1)}; });
    ::setenv("NOVELTREE_TEST_KEY", "sekret", 1);
    auto p = params_for(server);
    p.thinking = true;
    LLMClient field(p);
    field.complete("sys", "user", 0.7);
    ::unsetenv("NOVELTREE_TEST_KEY");

    p.thinking_style = ThinkingStyle::directive;
    p.thinking = false;
    LLMClient directive(p);
    directive.complete("sys", "user");

    const auto reqs = server.requests();
    REQUIRE(reqs.size() == 2);
    CHECK(reqs[0]["model"] == "stub");
    CHECK(reqs[0]["enable_thinking"] == true);
    CHECK(reqs[0]["temperature"] == 0.7);
    CHECK(reqs[0]["messages"][0]["role"] == "system");
    CHECK(reqs[0]["messages"][1]["content"] == "user");
    CHECK_FALSE(reqs[1].contains("enable_thinking"));
    CHECK(reqs[1]["messages"][0]["content"].get<std::string>().find("/no_think") != std::string::npos);
    const auto auth = server.auth_headers();
    CHECK(auth[0] == "Bearer sekret");
    CHECK(auth[1].empty());
}

TEST_CASE("llm oracles answer through the prompt catalog") {
    const auto sim = testing::strips_sim(domains::generate_ground(testing::blocks(3, 2)));
    const auto root = sim->root();
    const auto first = sim->ranked_actions(root).front();
    const auto next = sim->successor(root, first).content;
    StubServer server([&](const nlohmann::json &req, int) {
        const std::string user = req["messages"][1]["content"];
        std::string answer = "no";
        if (user.find("novel") != std::string::npos) answer = "Yes.";
        else if (user.find("goal") == std::string::npos && user.find(first) == std::string::npos) answer = "1. " + first;
        return std::pair{200, StubServer::reply(answer, 7, 3)};
    });
    LLMContext ctx;
    ctx.client = std::make_shared<LLMClient>(params_for(server));
    ctx.catalog = std::make_shared<PromptCatalog>(PromptCatalog::builtin("base"));
    ctx.domain = "blocksworld";
    ctx.goal = sim->goal_text();
    ctx.sim = sim;
    const auto set = llm_oracles(ctx);

    const auto novel = set.novelty->is_novel(root, {root});
    CHECK(novel.value == YesNo::yes);
    CHECK(novel.usage.total() == 10);
    const auto novelty_prompt = server.requests().back()["messages"][1]["content"].get<std::string>();
    CHECK(novelty_prompt.find(root.content) != std::string::npos);

    const auto acts = set.action->sample_actions(root, 2);
    REQUIRE(acts.size() == 2);
    CHECK(acts[0].value == first);
    CHECK(first_answer_line("\n\n  - pick up the red block\nmore") == "pick up the red block");
    CHECK(next != root.content);
}

TEST_CASE("parse_yes_no is idempotent on its canonical outputs") {
    for (const char *text : {"yes", "No.", "  YES!", "no way", "", "y"}) {
        const auto first = parse_yes_no(text);
        if (first != YesNo::unparseable) CHECK(parse_yes_no(tot::to_string(first)) == first);
    }
}

TEST_CASE("extended catalog adds the stricter blocksworld context") {
    const auto base = PromptCatalog::builtin("base").select("context", "natural_language", "blocksworld").body;
    const auto ext = PromptCatalog::builtin("extended").select("context", "natural_language", "blocksworld").body;
    CHECK(ext != base);
    CHECK(ext.find("NOT") != std::string::npos);
    CHECK(base.find("NOT") == std::string::npos);
}
