#include "doctest.h"
#include "helpers.hpp"

#include "noveltree/core/semantics.hpp"
#include "noveltree/domains/instances.hpp"
#include "noveltree/errors.hpp"
#include "noveltree/iw/optimal.hpp"
#include "noveltree/oracles/baselines.hpp"
#include "noveltree/oracles/exact.hpp"
#include "noveltree/oracles/transcript.hpp"
#include "noveltree/tot/engine.hpp"

using namespace noveltree;
using tot::Answer;
using tot::Thought;
using tot::YesNo;

namespace {

const TokenUsage kUnit{10, 5, 0, false};

// Mocks report fixed usage and record every call so tests can sum them.
struct Ledger {
    TokenUsage spent;
    int calls = 0;
    void add(const TokenUsage &u) {
        spent += u;
        ++calls;
    }
};

// Integer-labelled chain world: state "sN" steps to "s(N+1)" and "s(N+2)".
struct MockThought : tot::ThoughtOracle {
    Ledger *ledger;
    std::vector<std::string> fixed; // when set, every call returns these texts in turn
    explicit MockThought(Ledger *l) : ledger(l) {}
    std::vector<Answer<tot::Step>> sample_steps(const Thought &parent, int m) override {
        std::vector<Answer<tot::Step>> out;
        const int n = std::stoi(parent.content.substr(1));
        for (int i = 0; i < m; ++i) {
            ledger->add(kUnit);
            Answer<tot::Step> a;
            a.usage = kUnit;
            const std::string text = fixed.empty() ? "s" + std::to_string(n + 1 + i % 2) : fixed[i % fixed.size()];
            a.value = tot::Step{"step" + std::to_string(i), Thought{text, {}}};
            out.push_back(std::move(a));
        }
        return out;
    }
};

struct MockVerifier : tot::VerifierOracle {
    Ledger *ledger;
    std::string goal;
    bool garble = false;
    MockVerifier(Ledger *l, std::string g) : ledger(l), goal(std::move(g)) {}
    Answer<YesNo> is_goal(const Thought &t) override {
        ledger->add(kUnit);
        Answer<YesNo> a;
        a.usage = kUnit;
        if (!garble) a.value = t.content == goal ? YesNo::yes : YesNo::no;
        return a;
    }
};

struct MockNovelty : tot::NoveltyOracle {
    Ledger *ledger;
    std::optional<YesNo> fixed;
    std::vector<std::size_t> history_sizes;
    explicit MockNovelty(Ledger *l) : ledger(l) {}
    Answer<YesNo> is_novel(const Thought &c, const std::vector<Thought> &history) override {
        ledger->add(kUnit);
        history_sizes.push_back(history.size());
        Answer<YesNo> a;
        a.usage = kUnit;
        if (fixed) {
            if (*fixed != YesNo::unparseable) a.value = *fixed;
            return a;
        }
        a.value = YesNo::yes;
        for (const auto &h : history)
            if (h.content == c.content) a.value = YesNo::no;
        return a;
    }
};

struct DownActions : tot::ActionOracle {
    std::vector<Answer<std::string>> sample_actions(const Thought &, int) override {
        throw OracleUnavailable("connection refused");
    }
};

tot::ThoughtNode root_node(const std::string &content) {
    tot::ThoughtNode n;
    n.content = content;
    return n;
}

void check_tree(const tot::ToTOutcome &out, const tot::ToTConfig &config) {
    REQUIRE_FALSE(out.nodes.empty());
    CHECK_FALSE(out.nodes[0].parent);
    CHECK(out.nodes[0].depth == 0);
    for (std::size_t i = 0; i < out.nodes.size(); ++i) {
        const auto &n = out.nodes[i];
        CHECK(n.id == i);
        CHECK(n.depth <= static_cast<std::size_t>(config.max_depth));
        if (i == 0) continue;
        REQUIRE(n.parent);
        CHECK(*n.parent < i);
        const auto &p = out.nodes[*n.parent];
        CHECK(n.depth == p.depth + 1);
        CHECK(p.status != tot::NodeStatus::pruned);
        CHECK(p.status != tot::NodeStatus::failed);
    }
    CHECK(out.stats.generated == out.nodes.size());
}

std::shared_ptr<oracles::StripsSimulator> sim_for(int blocks, std::uint64_t seed) {
    return testing::strips_sim(domains::generate_ground(testing::blocks(blocks, seed)));
}

} // namespace

TEST_CASE("expand_direct dedups and caps at the branch factor") {
    Ledger ledger;
    MockThought oracle(&ledger);
    tot::ToTStats stats;

    oracle.fixed = {"t1", "t2"};
    auto kids = tot::expand_direct(root_node("s0"), oracle, 2, 2, stats);
    REQUIRE(kids.size() == 2);
    CHECK(kids[0].content == "t1");
    CHECK(kids[1].content == "t2");
    CHECK(kids[0].depth == 1);
    CHECK(kids[0].parent == 0u);

    oracle.fixed = {"same", "  SAME "};
    kids = tot::expand_direct(root_node("s0"), oracle, 5, 2, stats);
    REQUIRE(kids.size() == 1);
    CHECK(kids[0].token_cost.total() == 5 * kUnit.total());

    oracle.fixed = {"a", "b", "c", "d"};
    kids = tot::expand_direct(root_node("s0"), oracle, 4, 2, stats);
    CHECK(kids.size() == 2);
    CHECK(stats.by_subtask["direct_step"] == TokenUsage{110, 55, 0, false});
    CHECK(stats.total == ledger.spent);
}

TEST_CASE("expand_esa matches planning-core successors") {
    const auto sim = sim_for(4, 11);
    const auto &g = sim->problem();
    oracles::ExactActionOracle actions(sim);
    oracles::ExactSuccessorOracle successors(sim);
    tot::ToTStats stats;
    tot::ThoughtNode root;
    root.content = sim->root().content;
    root.structured_state = sim->root().state;
    const auto applicable = core::applicable_actions(g.initial, g);
    const int m = static_cast<int>(applicable.size());
    const auto kids = tot::expand_esa(root, actions, successors, m, m, stats);
    REQUIRE(kids.size() == applicable.size());
    for (const auto &k : kids) {
        REQUIRE(k.producing_action);
        const auto a = sim->ground_action(*k.producing_action);
        CHECK(std::find(applicable.begin(), applicable.end(), a) != applicable.end());
        CHECK(sim->strips_state(k.thought()) == core::apply(a, g.initial));
    }
    CHECK(tot::expand_esa(root, actions, successors, m, 1, stats).size() == 1);
}

TEST_CASE("inadmissible action marks only that child failed") {
    const auto sim = sim_for(3, 5);
    struct BadActions : tot::ActionOracle {
        std::shared_ptr<oracles::StripsSimulator> sim;
        std::vector<Answer<std::string>> sample_actions(const Thought &t, int) override {
            Rng rng(1);
            std::vector<Answer<std::string>> out(2);
            out[0].value = *sim->random_inadmissible(t, rng);
            out[1].value = sim->ranked_actions(t).front();
            return out;
        }
    } bad;
    bad.sim = sim;
    oracles::ExactSuccessorOracle successors(sim);
    tot::ToTStats stats;
    tot::ThoughtNode root;
    root.content = sim->root().content;
    const auto kids = tot::expand_esa(root, bad, successors, 2, 2, stats);
    REQUIRE(kids.size() == 2);
    CHECK(kids[0].status == tot::NodeStatus::failed);
    CHECK_FALSE(kids[0].note.empty());
    CHECK(kids[1].status == tot::NodeStatus::kept);
}

TEST_CASE("prune_decision") {
    Ledger ledger;
    MockNovelty oracle(&ledger);
    tot::ToTStats stats;
    auto node = root_node("s1");
    CHECK(tot::prune_decision(node, {}, oracle, stats) == tot::PruneDecision::keep);
    CHECK(ledger.calls == 0);
    CHECK(tot::prune_decision(node, {Thought{"s1", {}}}, oracle, stats) == tot::PruneDecision::prune);
    CHECK(tot::prune_decision(node, {Thought{"s0", {}}}, oracle, stats) == tot::PruneDecision::keep);

    oracle.fixed = YesNo::unparseable;
    oracles::Transcript transcript;
    CHECK(tot::prune_decision(node, {Thought{"s1", {}}}, oracle, stats, &transcript) == tot::PruneDecision::keep);
    CHECK(stats.warnings == 1);
    CHECK(transcript.records().at(0)["type"] == "warning");

    const auto sim = sim_for(3, 2);
    oracles::ExactNoveltyOracle exact(sim, 2);
    tot::ThoughtNode dup;
    dup.content = sim->root().content;
    CHECK(tot::prune_decision(dup, {sim->root()}, exact, stats) == tot::PruneDecision::prune);
}

TEST_CASE("verify is fail-closed") {
    Ledger ledger;
    MockVerifier v(&ledger, "s3");
    tot::ToTStats stats;
    CHECK(tot::verify(root_node("s3"), v, stats) == tot::Verdict::goal);
    CHECK(tot::verify(root_node("s2"), v, stats) == tot::Verdict::cont);
    v.garble = true;
    CHECK(tot::verify(root_node("s3"), v, stats) == tot::Verdict::cont);
    CHECK(stats.warnings == 1);

    const auto sim = sim_for(3, 4);
    oracles::ExactVerifier exact(sim);
    tot::ThoughtNode n;
    n.content = sim->root().content;
    CHECK(tot::verify(n, exact, stats) == tot::Verdict::cont);
}

TEST_CASE("exact ESA search solves and the plan validates") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto sim = sim_for(4, seed);
        tot::ToTConfig config;
        config.novelty_pruning = true;
        if (iw::optimal_plan_bfs(sim->problem())->size() > static_cast<std::size_t>(config.max_depth)) continue;
        const auto out = tot::tot_search({"t", sim->root()}, config, oracles::exact_oracles(sim));
        REQUIRE(out.solved);
        CHECK(out.reason == tot::FailReason::none);
        CHECK(sim->validate(out.plan));
        const auto plan = sim->to_plan(out.plan);
        REQUIRE(plan);
        CHECK(core::validate_plan(sim->problem(), *plan).valid);
        CHECK(out.path.size() == out.plan.size() + 1);
        check_tree(out, config);
    }
}

TEST_CASE("goal at the root is solved before any expansion") {
    auto g = domains::generate_ground(testing::blocks(3, 1));
    g.goal = {g.initial.atoms().front()};
    const auto sim = testing::strips_sim(g);
    tot::ToTConfig config;
    config.max_depth = 1;
    const auto out = tot::tot_search({"t", sim->root()}, config, oracles::exact_oracles(sim));
    CHECK(out.solved);
    CHECK(out.plan.empty());
    CHECK(out.path == std::vector<std::size_t>{0});
    CHECK(out.stats.expanded == 0);
}

TEST_CASE("pruning generates no more nodes than no pruning") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto sim = sim_for(4, 100 + seed);
        for (auto traversal : {tot::Traversal::bfs, tot::Traversal::dfs}) {
            tot::ToTConfig off;
            off.traversal = traversal;
            auto on = off;
            on.novelty_pruning = true;
            const auto a = tot::tot_search({"t", sim->root()}, off, oracles::exact_oracles(sim));
            const auto b = tot::tot_search({"t", sim->root()}, on, oracles::exact_oracles(sim));
            CHECK(a.solved);
            CHECK(b.solved);
            CHECK(b.stats.generated <= a.stats.generated);
        }
    }
}

TEST_CASE("depth and frontier exhaustion") {
    Ledger ledger;
    tot::OracleSet set;
    set.thought = std::make_shared<MockThought>(&ledger);
    set.verifier = std::make_shared<MockVerifier>(&ledger, "s100");
    tot::ToTConfig config;
    config.mode = tot::Mode::direct;
    config.max_depth = 3;
    const auto out = tot::tot_search({"t", Thought{"s0", {}}}, config, set);
    CHECK_FALSE(out.solved);
    CHECK(out.reason == tot::FailReason::depth_exhausted);
    check_tree(out, config);

    // Every child repeats a kept state, so pruning empties the frontier.
    auto stuck = std::make_shared<MockThought>(&ledger);
    stuck->fixed = {"s0"};
    set.thought = stuck;
    set.novelty = std::make_shared<MockNovelty>(&ledger);
    config.novelty_pruning = true;
    const auto pruned = tot::tot_search({"t", Thought{"s0", {}}}, config, set);
    CHECK(pruned.reason == tot::FailReason::frontier_exhausted);
    CHECK(pruned.stats.pruned == 1);
}

TEST_CASE("oracle outage ends the search with oracle_error") {
    const auto sim = sim_for(3, 3);
    auto set = oracles::exact_oracles(sim);
    set.action = std::make_shared<DownActions>();
    const auto out = tot::tot_search({"t", sim->root()}, tot::ToTConfig{}, set);
    CHECK_FALSE(out.solved);
    CHECK(out.reason == tot::FailReason::oracle_error);
    CHECK(out.error.find("connection refused") != std::string::npos);
}

TEST_CASE("unparseable novelty answers keep every node") {
    Ledger ledger;
    tot::OracleSet set;
    set.thought = std::make_shared<MockThought>(&ledger);
    set.verifier = std::make_shared<MockVerifier>(&ledger, "s5");
    auto novelty = std::make_shared<MockNovelty>(&ledger);
    novelty->fixed = YesNo::unparseable;
    set.novelty = novelty;
    tot::ToTConfig config;
    config.mode = tot::Mode::direct;
    config.traversal = tot::Traversal::bfs;
    config.novelty_pruning = true;
    const auto out = tot::tot_search({"t", Thought{"s0", {}}}, config, set);
    CHECK(out.solved);
    CHECK(out.stats.pruned == 0);
    CHECK(out.stats.warnings > 0);
}

TEST_CASE("history window bounds what the novelty oracle sees") {
    Ledger ledger;
    tot::OracleSet set;
    set.thought = std::make_shared<MockThought>(&ledger);
    set.verifier = std::make_shared<MockVerifier>(&ledger, "none");
    auto novelty = std::make_shared<MockNovelty>(&ledger);
    set.novelty = novelty;
    tot::ToTConfig config;
    config.mode = tot::Mode::direct;
    config.traversal = tot::Traversal::bfs;
    config.novelty_pruning = true;
    config.history_window = 3;
    config.max_depth = 6;
    tot::tot_search({"t", Thought{"s0", {}}}, config, set);
    REQUIRE_FALSE(novelty->history_sizes.empty());
    for (auto n : novelty->history_sizes) CHECK(n <= 3);
    CHECK(*std::max_element(novelty->history_sizes.begin(), novelty->history_sizes.end()) == 3);
}

TEST_CASE("token totals equal the sum of every oracle query") {
    Ledger ledger;
    tot::OracleSet set;
    auto thought = std::make_shared<MockThought>(&ledger);
    set.thought = thought;
    set.verifier = std::make_shared<MockVerifier>(&ledger, "s6");
    set.novelty = std::make_shared<MockNovelty>(&ledger);
    tot::ToTConfig config;
    config.mode = tot::Mode::direct;
    config.novelty_pruning = true;
    config.samples = 3;
    const auto out = tot::tot_search({"t", Thought{"s0", {}}}, config, set);
    CHECK(out.solved);
    CHECK(out.stats.total == ledger.spent);
    TokenUsage by_kind;
    for (const auto &[k, u] : out.stats.by_subtask) by_kind += u;
    CHECK(by_kind == out.stats.total);
    TokenUsage per_node;
    for (const auto &n : out.nodes) per_node += n.token_cost;
    CHECK(per_node == out.stats.by_subtask.at("direct_step"));
}

TEST_CASE("search is deterministic with seeded oracles") {
    const auto sim = sim_for(5, 9);
    tot::ToTConfig config;
    config.novelty_pruning = true;
    config.traversal = tot::Traversal::bfs;
    const auto a = tot::tot_search({"t", sim->root()}, config, oracles::exact_oracles(sim));
    const auto b = tot::tot_search({"t", sim->root()}, config, oracles::exact_oracles(sim));
    CHECK(a.plan == b.plan);
    CHECK(a.stats.generated == b.stats.generated);
    REQUIRE(a.nodes.size() == b.nodes.size());
    for (std::size_t i = 0; i < a.nodes.size(); ++i) CHECK(a.nodes[i].content == b.nodes[i].content);
}

TEST_CASE("exhaustive BFS with exact oracles finds optimal-length plans") {
    int fixtures = 0;
    for (std::uint64_t seed = 0; fixtures < 20; ++seed) {
        const auto g = domains::generate_ground(testing::blocks(3 + static_cast<int>(seed % 2), seed));
        const auto opt = iw::optimal_plan_bfs(g);
        REQUIRE(opt);
        if (opt->empty()) continue;
        ++fixtures;
        const auto sim = testing::strips_sim(g);
        tot::ToTConfig config;
        config.traversal = tot::Traversal::bfs;
        config.max_depth = static_cast<int>(opt->size());
        config.branch_factor = 64;
        const auto out = tot::tot_search({"t", sim->root()}, config, oracles::exact_oracles(sim));
        REQUIRE(out.solved);
        CHECK(out.plan.size() == opt->size());

        // Duplicate-only pruning keeps a path to the goal.
        config.novelty_pruning = true;
        auto set = oracles::exact_oracles(sim);
        set.novelty = std::make_shared<oracles::DuplicateNoveltyOracle>();
        const auto dup = tot::tot_search({"t", sim->root()}, config, set);
        REQUIRE(dup.solved);
        CHECK(dup.plan.size() == opt->size());
        CHECK(dup.stats.generated <= out.stats.generated);
    }
}
