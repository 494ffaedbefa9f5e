#include "doctest.h"
#include "helpers.hpp"

#include "noveltree/core/semantics.hpp"
#include "noveltree/errors.hpp"
#include "noveltree/eval/benchmark.hpp"
#include "noveltree/eval/instances.hpp"
#include "noveltree/eval/report.hpp"
#include "noveltree/eval/respondents.hpp"
#include "noveltree/eval/scoring.hpp"
#include "noveltree/oracles/exact.hpp"
#include "noveltree/oracles/llm_client.hpp"

#include <set>

using namespace noveltree;
using namespace noveltree::eval;
using testing::StubServer;

namespace {

constexpr std::size_t kN = 12;

EvalContext context(pddl::Style style) { return EvalContext::builtin(domains::DomainId::blocksworld, style); }

std::vector<std::string> exact_answers(const EvalInstance &inst, const EvalContext &ctx) {
    ExactRespondent r;
    std::vector<std::string> out;
    for (auto &a : r.respond(inst, render_query(inst, ctx), ctx)) out.push_back(a.value.value_or(""));
    return out;
}

} // namespace

TEST_CASE("exact respondent scores every sub-task in both styles") {
    ExactRespondent exact;
    for (auto kind : all_subtasks()) {
        const auto instances = generate_instances(kind, kN, 3);
        REQUIRE(instances.size() == kN);
        std::vector<InstanceVerdict> per_style[2];
        int s = 0;
        for (auto style : {pddl::Style::pddl, pddl::Style::natural_language}) {
            const auto report = run_subtask_eval(instances, exact, context(style));
            CAPTURE(to_string(kind));
            CHECK(report.passed == kN);
            CHECK(report.score() == std::to_string(kN) + "/" + std::to_string(kN));
            if (kind == SubTask::action_gen_single) CHECK(report.optimal_passed == kN);
            per_style[s++] = report.verdicts;
        }
        REQUIRE(per_style[0].size() == per_style[1].size());
        for (std::size_t i = 0; i < per_style[0].size(); ++i) {
            CHECK(per_style[0][i].pass == per_style[1][i].pass);
            CHECK(per_style[0][i].reason == per_style[1][i].reason);
        }
    }
}

TEST_CASE("stored truth is recomputable and instances round trip") {
    for (auto kind : all_subtasks()) {
        for (const auto &inst : generate_instances(kind, 6, 21)) {
            CHECK(truth_consistent(inst));
            CHECK(inst.truth_hash == hash_json(compute_truth(inst)));
            const auto back = instance_from_json(to_json(inst));
            CHECK(to_json(back) == to_json(inst));
            CHECK(truth_consistent(back));
        }
    }
    auto tampered = generate_instances(SubTask::plan_verify, 2, 1).front();
    tampered.truth["valid"] = !tampered.truth["valid"].get<bool>();
    CHECK_FALSE(truth_consistent(tampered));
}

TEST_CASE("plan verification sets are balanced, labelled correctly and deterministic") {
    const auto a = gen_plan_verify_instances(20, 5);
    const auto b = gen_plan_verify_instances(20, 5);
    REQUIRE(a.size() == 20);
    int valid = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool v = a[i].truth["valid"];
        valid += v;
        const auto &g = problem_of(a[i]);
        CHECK(core::validate_plan(g, a[i].plan).valid == v);
        if (!v) {
            // Replaying the admissible prefix never ends in a goal state.
            auto s = g.initial;
            for (const auto &step : a[i].plan.steps) {
                if (!core::is_applicable(step, s)) break;
                s = core::apply(step, s);
            }
            CHECK_FALSE(core::is_goal(s, g.goal));
        }
        CHECK(to_json(a[i]) == to_json(b[i]));
    }
    CHECK(valid == 10);
    const auto c = gen_plan_verify_instances(20, 6);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) differs = differs || a[i].truth != c[i].truth || a[i].id != c[i].id;
    CHECK(differs);
    CHECK_THROWS(gen_plan_verify_instances(3, 5));
}

TEST_CASE("separate successor instances issue one prompt per applicable action") {
    const auto ctx = context(pddl::Style::natural_language);
    for (const auto &inst : gen_successor_instances(5, true, 9)) {
        const auto n = core::applicable_actions(inst.state, problem_of(inst)).size();
        CHECK(inst.actions.size() == n);
        CHECK(render_query(inst, ctx).prompts.size() == n);
    }
}

TEST_CASE("natural language payloads contain no parentheses") {
    const auto ctx = context(pddl::Style::natural_language);
    for (auto kind : all_subtasks())
        for (const auto &inst : generate_instances(kind, 6, 8))
            for (const auto &text : render_query(inst, ctx).payload_texts())
                CHECK_MESSAGE(text.find_first_of("()") == std::string::npos, text);
    const auto pddl_ctx = context(pddl::Style::pddl);
    const auto inst = generate_instances(SubTask::successor_joint, 1, 8).front();
    CHECK(render_query(inst, pddl_ctx).state_text.find('(') != std::string::npos);
}

TEST_CASE("scoring failure reasons") {
    const auto ctx = context(pddl::Style::pddl);
    const auto codec = ctx.codec();

    const auto sep = gen_successor_instances(1, true, 4).front();
    auto answers = exact_answers(sep, ctx);
    CHECK(score_response(sep, answers, ctx).pass);
    auto atoms = codec.parse_state(answers[0]).atoms();
    atoms.pop_back();
    answers[0] = codec.render_atoms(atoms);
    auto v = score_response(sep, answers, ctx);
    CHECK_FALSE(v.pass);
    CHECK(v.reason == "atom_mismatch");
    answers[0] = "the moon is made of cheese";
    CHECK(score_response(sep, answers, ctx).reason == "parse_error");

    const auto joint = gen_successor_instances(1, false, 4).front();
    auto joint_answer = exact_answers(joint, ctx);
    REQUIRE(joint_answer.size() == 1);
    CHECK(score_response(joint, joint_answer, ctx).pass);
    const auto first_newline = joint_answer[0].find('\n');
    if (first_newline != std::string::npos) {
        CHECK(score_response(joint, {joint_answer[0].substr(first_newline + 1)}, ctx).reason == "missing_action");
    }

    EvalInstance all;
    for (const auto &candidate : gen_action_gen_instances(10, false, 4))
        if (candidate.truth["valid"].size() > 1) all = candidate;
    auto listed = exact_answers(all, ctx);
    CHECK(score_response(all, listed, ctx).pass);
    const auto cut = listed[0].find('\n');
    REQUIRE(cut != std::string::npos);
    CHECK_FALSE(score_response(all, {listed[0].substr(cut + 1)}, ctx).pass);

    const auto verify = gen_plan_verify_instances(2, 4).front();
    CHECK(score_response(verify, {"perhaps"}, ctx).reason == "unparseable");
    const bool truth = verify.truth["valid"];
    CHECK(score_response(verify, {truth ? "no" : "yes"}, ctx).reason == "wrong_answer");
}

TEST_CASE("duplicate baseline scores the duplicate share and zero on NDAP") {
    const auto ctx = context(pddl::Style::natural_language);
    DuplicateBaselineRespondent baseline;
    const auto standard = gen_novelty_instances(30, false, 2);
    const auto report = run_subtask_eval(standard, baseline, ctx);
    std::size_t expected = 0;
    for (const auto &inst : standard) {
        const bool duplicate = inst.truth["duplicate"];
        const bool novel = inst.truth["novel"];
        // The baseline answers "no" exactly on duplicates.
        expected += duplicate ? !novel : novel;
    }
    CHECK(report.passed == expected);
    for (const auto &v : report.verdicts)
        if (v.duplicate.value_or(false)) CHECK(v.pass);

    const auto ndap = gen_novelty_instances(10, true, 2);
    for (const auto &inst : ndap) {
        CHECK_FALSE(inst.truth["duplicate"].get<bool>());
        CHECK_FALSE(inst.truth["novel"].get<bool>());
    }
    CHECK(run_subtask_eval(ndap, baseline, ctx).passed == 0);
    for (const auto &v : run_subtask_eval(gen_plan_verify_instances(2, 1), baseline, ctx).verdicts)
        CHECK(v.reason == "oracle_error");
}

TEST_CASE("respondent failures score as oracle_error") {
    const auto ctx = context(pddl::Style::pddl);
    FunctionRespondent broken("broken", [](const EvalInstance &, std::size_t, const RenderedQuery &) -> std::string {
        throw OracleUnavailable("down");
    });
    const auto report = run_subtask_eval(gen_plan_verify_instances(4, 1), broken, ctx);
    CHECK(report.passed == 0);
    for (const auto &v : report.verdicts) CHECK(v.reason == "oracle_error");
}

TEST_CASE("score reports round trip through files") {
    testing::TempDir dir("report");
    const auto ctx = context(pddl::Style::natural_language);
    ExactRespondent exact;
    EvalOptions options;
    options.transcript = std::make_shared<oracles::Transcript>();
    options.jobs = 3;
    auto report = run_subtask_eval(generate_instances(SubTask::action_gen_single, 6, 1), exact, ctx, options);
    CHECK(options.transcript->size() == 6);
    report.verdicts[0].usage = TokenUsage{3, 4, 5, true};
    report.aggregate();
    CHECK(report.estimated_tokens);
    CHECK(report.atu == doctest::Approx(12.0 / 6));
    write_report(dir.path, report);
    CHECK(read_report(dir.path / "action-gen-single-natural_language.json") == report);
    CHECK(report_from_json(to_json(report)) == report);
    CHECK(csv_row(report).find("action-gen-single") != std::string::npos);
}

TEST_CASE("ATU through a stub LLM is computable by hand") {
    StubServer server([](const nlohmann::json &, int) { return std::pair{200, StubServer::reply("yes", 10, 5)}; });
    oracles::LLMParams p;
    p.endpoint = server.endpoint();
    p.model = "stub-model";
    p.api_key_env = "NOVELTREE_TEST_KEY_UNSET";
    LLMRespondent llm(std::make_shared<oracles::LLMClient>(p));
    const auto ctx = context(pddl::Style::natural_language);

    const auto verify = gen_plan_verify_instances(6, 3);
    const auto report = run_subtask_eval(verify, llm, ctx);
    CHECK(report.respondent == "stub-model");
    CHECK(report.atu == doctest::Approx(15.0));
    CHECK(report.passed == 3); // "yes" is right on the valid half only

    const auto sep = gen_successor_instances(4, true, 3);
    std::size_t prompts = 0;
    for (const auto &inst : sep) prompts += inst.actions.size();
    const auto sep_report = run_subtask_eval(sep, llm, ctx);
    CHECK(sep_report.atu == doctest::Approx(15.0 * static_cast<double>(prompts) / 4.0));
    CHECK(sep_report.passed == 0);
}

TEST_CASE("benchmark grid layout") {
    const auto grid = table3_grid();
    REQUIRE(grid.size() == 16);
    std::set<std::string> labels;
    for (const auto &c : grid) {
        labels.insert(c.label());
        CHECK(cell_from_label(c.label()) == c);
    }
    CHECK(labels.size() == 16);
    CHECK(grid.front().label() == "dfs-direct-normal-base");
    CHECK(grid[1].label() == "dfs-direct-normal-pruning");
    CHECK(labels.count("bfs-esa-thinking-pruning"));
}

TEST_CASE("benchmark instance selection respects the length bound") {
    const auto insts = select_blocksworld(10, 4);
    REQUIRE(insts.size() == 10);
    for (const auto &i : insts) {
        CHECK(i.optimal_length <= 8);
        CHECK(i.spec.n_blocks >= 3);
        CHECK(i.spec.n_blocks <= 5);
    }
    CHECK(insts.front().id == "bw-001");
    CHECK(select_game24(5, 1).size() == 5);
    CHECK(select_game24(5, 1).front().id == "g24-001");
}

namespace {

// Fixed-usage oracles over a simulator, so ATU can be computed by hand.
struct CountingVerifier : tot::VerifierOracle {
    std::shared_ptr<tot::VerifierOracle> inner;
    std::atomic<int> *calls;
    tot::Answer<tot::YesNo> is_goal(const tot::Thought &t) override {
        ++*calls;
        auto a = inner->is_goal(t);
        a.usage = TokenUsage{7, 0, 0, false};
        return a;
    }
};

} // namespace

TEST_CASE("benchmark ATU, revalidation and resume") {
    testing::TempDir dir("bench");
    const auto insts = select_blocksworld(4, 2);
    std::atomic<int> calls{0};
    OracleFactory factory = [&](const BenchInstance &, const GridCell &, std::shared_ptr<oracles::Simulator> sim,
                                std::shared_ptr<oracles::Transcript>) {
        auto set = oracles::exact_oracles(sim);
        auto v = std::make_shared<CountingVerifier>();
        v->inner = set.verifier;
        v->calls = &calls;
        set.verifier = v;
        return set;
    };
    BenchOptions options;
    options.grid = {cell_from_label("bfs-esa-normal-base"), cell_from_label("bfs-esa-normal-pruning")};
    options.out = dir.path;
    const auto table = run_tot_benchmark(insts, factory, options);
    REQUIRE(table.cells.size() == 2);
    for (const auto &cell : table.cells) {
        CHECK(cell.solved() == insts.size());
        CHECK(cell.perf() == "4/4");
        double tokens = 0;
        for (const auto &r : cell.results) {
            CHECK(r.usage.total() == 7 * static_cast<std::int64_t>(r.generated));
            tokens += static_cast<double>(r.usage.total());
        }
        CHECK(cell.atu() == doctest::Approx(tokens / 4));
    }
    CHECK(table.cells[1].mean_generated() <= table.cells[0].mean_generated());
    CHECK(std::filesystem::exists(dir.path / "bench.csv"));
    CHECK(std::filesystem::exists(dir.path / "bench.json"));
    CHECK(std::filesystem::exists(dir.path / "transcript.jsonl"));
    CHECK(benchmark_csv(table).rfind("traversal,mode,thinking,pruning,solved,total,perf,atu,mean_generated,error", 0) == 0);

    const int before = calls;
    options.resume = true;
    const auto again = run_tot_benchmark(insts, factory, options);
    CHECK(calls == before);
    CHECK(to_json(again) == to_json(table));

    // A search that claims a goal it did not reach is not counted.
    OracleFactory liar = [](const BenchInstance &, const GridCell &, std::shared_ptr<oracles::Simulator> sim,
                            std::shared_ptr<oracles::Transcript>) {
        struct Yes : tot::VerifierOracle {
            tot::Answer<tot::YesNo> is_goal(const tot::Thought &t) override {
                tot::Answer<tot::YesNo> a;
                a.value = t.content.empty() ? tot::YesNo::no : tot::YesNo::yes;
                return a;
            }
        };
        auto set = oracles::exact_oracles(sim);
        set.verifier = std::make_shared<Yes>();
        return set;
    };
    BenchOptions mem;
    mem.grid = {cell_from_label("dfs-esa-normal-base")};
    const auto lied = run_tot_benchmark(insts, liar, mem);
    for (const auto &r : lied.cells[0].results) {
        CHECK(r.claimed);
        CHECK_FALSE(r.solved);
    }

    OracleFactory throwing = [](const BenchInstance &, const GridCell &, std::shared_ptr<oracles::Simulator>,
                                std::shared_ptr<oracles::Transcript>) -> tot::OracleSet {
        throw ConfigError("no oracle");
    };
    const auto failed = run_tot_benchmark(insts, throwing, mem);
    CHECK_FALSE(failed.cells[0].error.empty());
    CHECK(failed.cells[0].solved() == 0);
}
