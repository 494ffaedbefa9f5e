#include "noveltree/eval/instances.hpp"

#include "noveltree/core/semantics.hpp"
#include "noveltree/domains/random.hpp"
#include "noveltree/errors.hpp"
#include "noveltree/iw/models.hpp"
#include "noveltree/iw/novelty_table.hpp"
#include "noveltree/iw/optimal.hpp"
#include "noveltree/iw/search.hpp"
#include "noveltree/pddl/codec.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <set>

namespace noveltree::eval {

namespace {

constexpr std::pair<SubTask, const char *> kNames[] = {
    {SubTask::action_gen_all, "action-gen"},
    {SubTask::action_gen_single, "action-gen-single"},
    {SubTask::successor_joint, "successor"},
    {SubTask::successor_separate, "successor-separate"},
    {SubTask::plan_verify, "plan-verify"},
    {SubTask::novelty, "novelty"},
    {SubTask::novelty_ndap, "novelty-ndap"},
};

std::string pad(std::size_t i) {
    std::string s = std::to_string(i);
    return std::string(s.size() < 4 ? 4 - s.size() : 0, '0') + s;
}

nlohmann::json state_json(const core::State &s) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto &a : s) out.push_back(a.to_string());
    return out;
}

core::State state_from(const nlohmann::json &j) {
    std::vector<core::Atom> atoms;
    for (const auto &text : j) {
        for (auto &group : pddl::extract_paren_groups(text.get<std::string>())) {
            core::Atom atom;
            atom.predicate = group.front();
            atom.args.assign(group.begin() + 1, group.end());
            atoms.push_back(std::move(atom));
        }
    }
    return core::State(std::move(atoms));
}

core::GroundAction action_from(const core::GroundProblem &problem, const std::string &label) {
    auto groups = pddl::extract_paren_groups(label);
    if (groups.size() != 1) throw SyntaxError("bad action label '" + label + "'", 1, 1);
    std::vector<std::string> args(groups[0].begin() + 1, groups[0].end());
    auto a = core::find_action(problem, groups[0].front(), args);
    if (!a) throw NoMatch("unknown action " + label);
    return *a;
}

domains::InstanceSpec draw_problem(const GeneratorOptions &opt, std::uint64_t seed) {
    domains::InstanceSpec spec;
    spec.domain = opt.domain;
    spec.seed = seed;
    spec.logistics = opt.logistics;
    Rng rng(mix_seed(seed, 99));
    spec.n_blocks = opt.min_blocks + static_cast<int>(rng.below(static_cast<std::size_t>(opt.max_blocks - opt.min_blocks + 1)));
    return spec;
}

core::State random_walk(const core::GroundProblem &problem, Rng &rng, int max_walk) {
    core::State s = problem.initial;
    const int steps = static_cast<int>(rng.below(static_cast<std::size_t>(max_walk + 1)));
    for (int i = 0; i < steps; ++i) {
        auto acts = core::applicable_actions(s, problem);
        if (acts.empty()) break;
        s = core::apply(acts[rng.below(acts.size())], s);
    }
    return s;
}

void finalize(EvalInstance &inst) {
    inst.truth = compute_truth(inst);
    inst.truth_hash = hash_json(inst.truth);
}

void check_options(const GeneratorOptions &opt) {
    if (opt.domain == domains::DomainId::game24) throw ConfigError("sub-task evaluations need a STRIPS domain");
    if (opt.min_blocks < 1 || opt.max_blocks < opt.min_blocks) throw ConfigError("bad block range");
    if (opt.max_walk < 0) throw ConfigError("max_walk must be non-negative");
}

} // namespace

const char *to_string(SubTask kind) {
    for (const auto &[k, name] : kNames)
        if (k == kind) return name;
    return "?";
}

SubTask subtask_from_string(std::string_view name) {
    std::string s(name);
    for (char &c : s)
        if (c == '_') c = '-';
    if (s == "action-gen-all") return SubTask::action_gen_all;
    if (s == "successor-joint") return SubTask::successor_joint;
    for (const auto &[k, n] : kNames)
        if (s == n) return k;
    throw ConfigError("unknown sub-task '" + std::string(name) + "'");
}

const std::vector<SubTask> &all_subtasks() {
    static const std::vector<SubTask> all = {SubTask::action_gen_all,   SubTask::action_gen_single,
                                             SubTask::successor_joint,  SubTask::successor_separate,
                                             SubTask::plan_verify,      SubTask::novelty,
                                             SubTask::novelty_ndap};
    return all;
}

const core::GroundProblem &ground_problem(const domains::InstanceSpec &spec) {
    static std::mutex mutex;
    static std::map<std::string, std::unique_ptr<core::GroundProblem>> cache;
    const std::string key = to_json(spec).dump();
    std::lock_guard lock(mutex);
    auto &slot = cache[key];
    if (!slot) slot = std::make_unique<core::GroundProblem>(domains::generate_ground(spec));
    return *slot;
}

const core::GroundProblem &problem_of(const EvalInstance &inst) { return ground_problem(inst.problem); }

nlohmann::json compute_truth(const EvalInstance &inst) {
    const auto &problem = problem_of(inst);
    nlohmann::json truth;
    switch (inst.kind) {
    case SubTask::action_gen_all:
    case SubTask::action_gen_single: {
        nlohmann::json valid = nlohmann::json::array();
        for (const auto &a : core::applicable_actions(inst.state, problem)) valid.push_back(a.label());
        truth["valid"] = valid;
        if (inst.kind == SubTask::action_gen_single) {
            iw::GoalDistances distances(problem);
            nlohmann::json optimal = nlohmann::json::array();
            for (const auto &a : distances.optimal_first_actions(inst.state)) optimal.push_back(a.label());
            truth["optimal"] = optimal;
        }
        break;
    }
    case SubTask::successor_joint:
    case SubTask::successor_separate: {
        nlohmann::json succ = nlohmann::json::array();
        for (const auto &a : inst.actions)
            succ.push_back({{"action", a.label()}, {"state", state_json(core::apply(a, inst.state))}});
        truth["successors"] = succ;
        break;
    }
    case SubTask::plan_verify:
        truth["valid"] = core::validate_plan(problem, inst.plan).valid;
        break;
    case SubTask::novelty:
    case SubTask::novelty_ndap: {
        iw::NoveltyTable table(inst.width);
        bool duplicate = false;
        for (const auto &h : inst.history) {
            table.register_features(h.atoms());
            duplicate = duplicate || h == inst.query;
        }
        const int w = table.novelty(inst.query.atoms());
        truth["k"] = inst.width;
        truth["novelty"] = w == iw::kAboveK ? nlohmann::json("above") : nlohmann::json(w);
        truth["novel"] = w <= inst.width;
        truth["duplicate"] = duplicate;
        break;
    }
    }
    return truth;
}

std::string hash_json(const nlohmann::json &value) {
    // FNV-1a over the compact dump.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : value.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

bool truth_consistent(const EvalInstance &inst) {
    const auto truth = compute_truth(inst);
    return truth == inst.truth && hash_json(truth) == inst.truth_hash;
}

std::vector<EvalInstance> gen_action_gen_instances(std::size_t n, bool single, std::uint64_t seed,
                                                   const GeneratorOptions &options) {
    check_options(options);
    if (n < 1) throw ConfigError("n must be at least 1");
    std::vector<EvalInstance> out;
    std::uint64_t attempt = 0;
    const std::uint64_t limit = n * 100;
    while (out.size() < n) {
        if (attempt >= limit) throw GeneratorExhausted("could not draw enough action generation states");
        const auto spec = draw_problem(options, mix_seed(seed, attempt));
        Rng rng(mix_seed(seed, attempt + 0x5151));
        ++attempt;
        const auto &problem = ground_problem(spec);
        EvalInstance inst;
        inst.kind = single ? SubTask::action_gen_single : SubTask::action_gen_all;
        inst.problem = spec;
        inst.state = random_walk(problem, rng, options.max_walk);
        if (core::applicable_actions(inst.state, problem).empty()) continue;
        if (single) {
            // The next action is only meaningful away from the goal.
            if (core::is_goal(inst.state, problem.goal)) continue;
            iw::GoalDistances distances(problem);
            if (!distances.distance(inst.state)) continue;
        }
        inst.id = std::string(to_string(inst.kind)) + "-" + pad(out.size());
        finalize(inst);
        out.push_back(std::move(inst));
    }
    return out;
}

std::vector<EvalInstance> gen_successor_instances(std::size_t n, bool separate, std::uint64_t seed,
                                                  const GeneratorOptions &options) {
    check_options(options);
    if (n < 1) throw ConfigError("n must be at least 1");
    std::vector<EvalInstance> out;
    std::uint64_t attempt = 0;
    while (out.size() < n) {
        if (attempt >= n * 100) throw GeneratorExhausted("could not draw enough successor states");
        const auto spec = draw_problem(options, mix_seed(seed, attempt));
        Rng rng(mix_seed(seed, attempt + 0x5151));
        ++attempt;
        const auto &problem = ground_problem(spec);
        EvalInstance inst;
        inst.kind = separate ? SubTask::successor_separate : SubTask::successor_joint;
        inst.problem = spec;
        inst.state = random_walk(problem, rng, options.max_walk);
        inst.actions = core::applicable_actions(inst.state, problem);
        if (inst.actions.empty()) continue;
        inst.id = std::string(to_string(inst.kind)) + "-" + pad(out.size());
        finalize(inst);
        out.push_back(std::move(inst));
    }
    return out;
}

std::vector<EvalInstance> gen_plan_verify_instances(std::size_t n, std::uint64_t seed,
                                                    const GeneratorOptions &options) {
    check_options(options);
    if (n < 2 || n % 2 != 0) throw ConfigError("plan verification needs an even n ≥ 2");
    std::vector<bool> labels(n, false);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n / 2), true);
    Rng label_rng(mix_seed(seed, 0x1abe1));
    label_rng.shuffle(labels);

    std::vector<EvalInstance> out;
    std::uint64_t attempt = 0;
    for (std::size_t i = 0; i < n; ++i) {
        bool done = false;
        for (int tries = 0; tries < 100 && !done; ++tries) {
            const auto spec = draw_problem(options, mix_seed(seed, attempt));
            Rng rng(mix_seed(seed, attempt + 0x5151));
            ++attempt;
            const auto &problem = ground_problem(spec);
            const auto optimal = iw::optimal_plan_bfs(problem);
            if (!optimal || optimal->empty()) continue;
            EvalInstance inst;
            inst.kind = SubTask::plan_verify;
            inst.problem = spec;
            inst.state = problem.initial;
            if (labels[i]) {
                inst.plan = *optimal;
            } else {
                // Random sequence whose lenient replay never touches a goal state.
                const int base = static_cast<int>(optimal->size());
                const int length = std::max(1, base - 1 + static_cast<int>(rng.below(3)));
                bool ok = false;
                for (int draw = 0; draw < 200 && !ok; ++draw) {
                    core::Plan plan;
                    core::State s = problem.initial;
                    bool touched_goal = false;
                    for (int k = 0; k < length; ++k) {
                        const auto &a = problem.actions[rng.below(problem.actions.size())];
                        plan.steps.push_back(a);
                        if (core::is_applicable(a, s)) s = core::apply(a, s);
                        touched_goal = touched_goal || core::is_goal(s, problem.goal);
                    }
                    if (!touched_goal) {
                        inst.plan = std::move(plan);
                        ok = true;
                    }
                }
                if (!ok) continue;
            }
            inst.id = "plan-verify-" + pad(i);
            finalize(inst);
            out.push_back(std::move(inst));
            done = true;
        }
        if (!done) throw GeneratorExhausted("could not draw a plan verification instance");
    }
    return out;
}

namespace {

struct QueryPick {
    std::vector<core::State> history;
    core::State query;
};

// Replays IW(k) up to expansion `stop`, then walks that node's successors in
// order and returns the (history, query) pairs available there.
std::vector<QueryPick> candidates_at(const core::GroundProblem &problem, int k, std::size_t stop, bool ndap) {
    iw::NoveltyTable table(k);
    std::vector<core::State> kept{problem.initial};
    std::set<core::State> kept_set{problem.initial};
    std::deque<core::State> frontier{problem.initial};
    table.register_features(problem.initial.atoms());
    std::size_t expanded = 0;
    std::vector<QueryPick> out;
    while (!frontier.empty()) {
        core::State s = frontier.front();
        frontier.pop_front();
        const bool goal = core::is_goal(s, problem.goal);
        for (const auto &a : core::applicable_actions(s, problem)) {
            core::State next = core::apply(a, s);
            const int w = table.novelty(next.atoms());
            if (expanded == stop) {
                const bool dup = kept_set.count(next) > 0;
                if (!ndap || (!dup && w == iw::kAboveK)) out.push_back({kept, next});
            }
            if (w == iw::kAboveK) continue;
            table.register_features(next.atoms());
            kept.push_back(next);
            kept_set.insert(next);
            frontier.push_back(std::move(next));
        }
        if (expanded == stop || goal) break;
        ++expanded;
    }
    return out;
}

} // namespace

std::vector<EvalInstance> gen_novelty_instances(std::size_t n, bool ndap, std::uint64_t seed,
                                                const GeneratorOptions &options) {
    check_options(options);
    if (n < 1) throw ConfigError("n must be at least 1");
    std::vector<EvalInstance> out;
    std::uint64_t attempt = 0;
    while (out.size() < n) {
        if (attempt >= n * 200) throw GeneratorExhausted("novelty query states too rare");
        const auto spec = draw_problem(options, mix_seed(seed, attempt));
        Rng rng(mix_seed(seed, attempt + 0x5151));
        ++attempt;
        const auto &problem = ground_problem(spec);
        iw::StripsModel model(problem);
        const auto width = iw::effective_width(model, iw::AtomFeatures{}, options.width_k_max);
        if (!width.width || *width.width == 0) continue;
        const int k = *width.width;
        const std::size_t expansions = width.outcome.stats.expanded;

        // Uniform stopping point; NDAP resamples the stop a bounded number of times.
        std::vector<QueryPick> picks;
        for (int tries = 0; tries < (ndap ? 50 : 1) && picks.empty(); ++tries)
            picks = candidates_at(problem, k, rng.below(expansions), ndap);
        if (picks.empty()) continue;
        auto &pick = picks[rng.below(picks.size())];

        EvalInstance inst;
        inst.kind = ndap ? SubTask::novelty_ndap : SubTask::novelty;
        inst.problem = spec;
        inst.width = k;
        inst.history = std::move(pick.history);
        inst.query = std::move(pick.query);
        inst.state = inst.query;
        inst.id = std::string(to_string(inst.kind)) + "-" + pad(out.size());
        finalize(inst);
        out.push_back(std::move(inst));
    }
    return out;
}

std::vector<EvalInstance> generate_instances(SubTask kind, std::size_t n, std::uint64_t seed,
                                             const GeneratorOptions &options) {
    switch (kind) {
    case SubTask::action_gen_all: return gen_action_gen_instances(n, false, seed, options);
    case SubTask::action_gen_single: return gen_action_gen_instances(n, true, seed, options);
    case SubTask::successor_joint: return gen_successor_instances(n, false, seed, options);
    case SubTask::successor_separate: return gen_successor_instances(n, true, seed, options);
    case SubTask::plan_verify: return gen_plan_verify_instances(n, seed, options);
    case SubTask::novelty: return gen_novelty_instances(n, false, seed, options);
    case SubTask::novelty_ndap: return gen_novelty_instances(n, true, seed, options);
    }
    throw ConfigError("unknown sub-task");
}

nlohmann::json to_json(const domains::InstanceSpec &spec) {
    nlohmann::json j = {{"domain", domains::to_string(spec.domain)}, {"seed", spec.seed}};
    switch (spec.domain) {
    case domains::DomainId::blocksworld: j["n_blocks"] = spec.n_blocks; break;
    case domains::DomainId::logistics:
        j["n_cities"] = spec.logistics.n_cities;
        j["locations_per_city"] = spec.logistics.locations_per_city;
        j["n_packages"] = spec.logistics.n_packages;
        j["n_trucks"] = spec.logistics.trucks();
        j["n_airplanes"] = spec.logistics.n_airplanes;
        break;
    case domains::DomainId::game24: j["numbers"] = spec.numbers; break;
    }
    return j;
}

domains::InstanceSpec spec_from_json(const nlohmann::json &j) {
    domains::InstanceSpec spec;
    spec.domain = domains::domain_from_string(j.at("domain").get<std::string>());
    spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("n_blocks")) spec.n_blocks = j["n_blocks"].get<int>();
    if (j.contains("n_cities")) {
        spec.logistics.n_cities = j["n_cities"].get<int>();
        spec.logistics.locations_per_city = j.at("locations_per_city").get<int>();
        spec.logistics.n_packages = j.at("n_packages").get<int>();
        spec.logistics.n_trucks = j.at("n_trucks").get<int>();
        spec.logistics.n_airplanes = j.at("n_airplanes").get<int>();
    }
    if (j.contains("numbers")) spec.numbers = j["numbers"].get<std::array<int, 4>>();
    return spec;
}

nlohmann::json to_json(const EvalInstance &inst) {
    nlohmann::json j = {{"id", inst.id}, {"kind", to_string(inst.kind)}, {"problem", to_json(inst.problem)}};
    j["state"] = state_json(inst.state);
    nlohmann::json actions = nlohmann::json::array();
    for (const auto &a : inst.actions) actions.push_back(a.label());
    j["actions"] = actions;
    nlohmann::json plan = nlohmann::json::array();
    for (const auto &a : inst.plan.steps) plan.push_back(a.label());
    j["plan"] = plan;
    nlohmann::json history = nlohmann::json::array();
    for (const auto &h : inst.history) history.push_back(state_json(h));
    j["history"] = history;
    j["query"] = state_json(inst.query);
    j["width"] = inst.width;
    j["truth"] = inst.truth;
    j["truth_hash"] = inst.truth_hash;
    return j;
}

EvalInstance instance_from_json(const nlohmann::json &j) {
    EvalInstance inst;
    inst.id = j.at("id").get<std::string>();
    inst.kind = subtask_from_string(j.at("kind").get<std::string>());
    inst.problem = spec_from_json(j.at("problem"));
    const auto &problem = problem_of(inst);
    inst.state = state_from(j.at("state"));
    for (const auto &a : j.at("actions")) inst.actions.push_back(action_from(problem, a.get<std::string>()));
    for (const auto &a : j.at("plan")) inst.plan.steps.push_back(action_from(problem, a.get<std::string>()));
    for (const auto &h : j.at("history")) inst.history.push_back(state_from(h));
    inst.query = state_from(j.at("query"));
    inst.width = j.at("width").get<int>();
    inst.truth = j.at("truth");
    inst.truth_hash = j.at("truth_hash").get<std::string>();
    return inst;
}

} // namespace noveltree::eval
