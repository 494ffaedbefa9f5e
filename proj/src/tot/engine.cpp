#include "noveltree/tot/engine.hpp"

#include "noveltree/errors.hpp"
#include "noveltree/oracles/transcript.hpp"
#include "noveltree/pddl/lexicon.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <unordered_map>

namespace noveltree::tot {

const char *to_string(YesNo answer) {
    switch (answer) {
    case YesNo::yes: return "yes";
    case YesNo::no: return "no";
    case YesNo::unparseable: return "unparseable";
    }
    return "?";
}

const char *to_string(Traversal t) { return t == Traversal::bfs ? "bfs" : "dfs"; }
const char *to_string(Mode m) { return m == Mode::direct ? "direct" : "esa"; }

const char *to_string(NodeStatus s) {
    switch (s) {
    case NodeStatus::kept: return "kept";
    case NodeStatus::pruned: return "pruned";
    case NodeStatus::goal: return "goal";
    case NodeStatus::failed: return "failed";
    }
    return "?";
}

const char *to_string(FailReason r) {
    switch (r) {
    case FailReason::none: return "none";
    case FailReason::depth_exhausted: return "depth_exhausted";
    case FailReason::frontier_exhausted: return "frontier_exhausted";
    case FailReason::oracle_error: return "oracle_error";
    }
    return "?";
}

Traversal traversal_from_string(std::string_view s) {
    if (s == "bfs" || s == "BFS") return Traversal::bfs;
    if (s == "dfs" || s == "DFS") return Traversal::dfs;
    throw ConfigError("unknown traversal '" + std::string(s) + "'");
}

Mode mode_from_string(std::string_view s) {
    if (s == "direct" || s == "Direct") return Mode::direct;
    if (s == "esa" || s == "ESA") return Mode::esa;
    throw ConfigError("unknown mode '" + std::string(s) + "'");
}

void ToTConfig::validate() const {
    if (max_depth < 1) throw ConfigError("max_depth must be at least 1");
    if (branch_factor < 1) throw ConfigError("branch_factor must be at least 1");
    if (history_window < 0) throw ConfigError("history_window must be non-negative");
    if (samples < 0) throw ConfigError("samples must be non-negative");
}

namespace {

void charge(ToTStats &stats, const char *subtask, const TokenUsage &usage) {
    stats.total += usage;
    stats.by_subtask[subtask] += usage;
}

ThoughtNode make_child(const ThoughtNode &parent) {
    ThoughtNode child;
    child.parent = parent.id;
    child.depth = parent.depth + 1;
    return child;
}

nlohmann::json usage_json(const TokenUsage &u) {
    return {{"prompt", u.prompt}, {"completion", u.completion}, {"reasoning", u.reasoning},
            {"total", u.total()}, {"estimated", u.estimated}};
}

void log_node(oracles::Transcript *transcript, const std::string &task, const ThoughtNode &node) {
    if (!transcript) return;
    nlohmann::json record = {{"type", "node"},       {"task", task},
                             {"id", node.id},        {"depth", node.depth},
                             {"content", node.content}, {"status", to_string(node.status)},
                             {"tokens", usage_json(node.token_cost)}};
    record["parent"] = node.parent ? nlohmann::json(*node.parent) : nlohmann::json(nullptr);
    record["action"] = node.producing_action ? nlohmann::json(*node.producing_action) : nlohmann::json(nullptr);
    if (!node.note.empty()) record["note"] = node.note;
    transcript->write(std::move(record));
}

void warn(ToTStats &stats, oracles::Transcript *transcript, const std::string &message) {
    ++stats.warnings;
    if (transcript) transcript->write({{"type", "warning"}, {"message", message}});
}

} // namespace

std::vector<ThoughtNode> expand_direct(const ThoughtNode &node, ThoughtOracle &oracle, int m, int branch_factor,
                                       ToTStats &stats) {
    auto samples = oracle.sample_steps(node.thought(), m);
    std::vector<ThoughtNode> children;
    std::unordered_map<std::string, std::size_t> by_text;
    for (auto &sample : samples) {
        charge(stats, "direct_step", sample.usage);
        if (!sample.value) continue;
        const std::string key = pddl::normalize_text(sample.value->thought.content);
        if (auto it = by_text.find(key); it != by_text.end()) {
            children[it->second].token_cost += sample.usage;
            continue;
        }
        if (static_cast<int>(children.size()) >= branch_factor) continue;
        ThoughtNode child = make_child(node);
        child.content = std::move(sample.value->thought.content);
        child.structured_state = std::move(sample.value->thought.state);
        child.producing_action = std::move(sample.value->action);
        child.token_cost = sample.usage;
        by_text.emplace(key, children.size());
        children.push_back(std::move(child));
    }
    return children;
}

std::vector<ThoughtNode> expand_esa(const ThoughtNode &node, ActionOracle &actions, SuccessorOracle &successors,
                                    int m, int branch_factor, ToTStats &stats) {
    const Thought parent = node.thought();
    auto samples = actions.sample_actions(parent, m);
    std::vector<ThoughtNode> children;
    std::unordered_map<std::string, std::size_t> by_text;
    for (auto &sample : samples) {
        charge(stats, "action_gen", sample.usage);
        if (!sample.value) continue;
        const std::string key = pddl::normalize_text(*sample.value);
        if (key.empty()) continue;
        if (auto it = by_text.find(key); it != by_text.end()) {
            children[it->second].token_cost += sample.usage;
            continue;
        }
        if (static_cast<int>(children.size()) >= branch_factor) continue;
        ThoughtNode child = make_child(node);
        child.producing_action = *sample.value;
        child.token_cost = sample.usage;
        by_text.emplace(key, children.size());
        children.push_back(std::move(child));
    }
    for (auto &child : children) {
        try {
            auto answer = successors.successor(parent, *child.producing_action);
            charge(stats, "successor", answer.usage);
            child.token_cost += answer.usage;
            if (answer.value) {
                child.content = std::move(answer.value->content);
                child.structured_state = std::move(answer.value->state);
            } else {
                child.status = NodeStatus::failed;
                child.note = answer.error.empty() ? "successor unavailable" : answer.error;
            }
        } catch (const OracleUnavailable &) {
            throw;
        } catch (const Error &e) {
            child.status = NodeStatus::failed;
            child.note = e.what();
        }
    }
    return children;
}

PruneDecision prune_decision(const ThoughtNode &node, const std::vector<Thought> &kept_history,
                             NoveltyOracle &oracle, ToTStats &stats, oracles::Transcript *transcript) {
    if (kept_history.empty()) return PruneDecision::keep;
    try {
        auto answer = oracle.is_novel(node.thought(), kept_history);
        charge(stats, "novelty", answer.usage);
        if (answer.value == YesNo::no) return PruneDecision::prune;
        if (answer.value == YesNo::yes) return PruneDecision::keep;
        warn(stats, transcript, "novelty answer unusable for node " + std::to_string(node.id) + "; keeping it");
    } catch (const Error &e) {
        warn(stats, transcript, std::string("novelty oracle failed: ") + e.what() + "; keeping node");
    }
    return PruneDecision::keep;
}

Verdict verify(const ThoughtNode &node, VerifierOracle &oracle, ToTStats &stats, oracles::Transcript *transcript) {
    try {
        auto answer = oracle.is_goal(node.thought());
        charge(stats, "verify", answer.usage);
        if (answer.value == YesNo::yes) return Verdict::goal;
        if (answer.value == YesNo::no) return Verdict::cont;
        warn(stats, transcript, "verifier answer unusable for node " + std::to_string(node.id) + "; continuing");
    } catch (const OracleUnavailable &) {
        throw;
    } catch (const Error &e) {
        warn(stats, transcript, std::string("verifier failed: ") + e.what() + "; continuing");
    }
    return Verdict::cont;
}

ToTOutcome tot_search(const ToTTask &task, const ToTConfig &config, const OracleSet &oracles,
                      oracles::Transcript *transcript) {
    config.validate();
    if (!oracles.verifier) throw ConfigError("a verifier oracle is required");
    if (config.mode == Mode::direct && !oracles.thought) throw ConfigError("direct mode needs a thought oracle");
    if (config.mode == Mode::esa && (!oracles.action || !oracles.successor))
        throw ConfigError("ESA mode needs action and successor oracles");
    if (config.novelty_pruning && !oracles.novelty) throw ConfigError("novelty pruning needs a novelty oracle");

    const auto start = std::chrono::steady_clock::now();
    ToTOutcome out;
    auto &nodes = out.nodes;
    auto &stats = out.stats;
    auto finish = [&]() -> ToTOutcome & {
        stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        if (transcript) {
            transcript->write({{"type", "outcome"},
                               {"task", task.id},
                               {"solved", out.solved},
                               {"reason", to_string(out.reason)},
                               {"generated", stats.generated},
                               {"expanded", stats.expanded},
                               {"pruned", stats.pruned},
                               {"tokens", usage_json(stats.total)}});
        }
        return out;
    };
    auto succeed = [&](std::size_t goal_id) -> ToTOutcome & {
        out.solved = true;
        for (std::optional<std::size_t> i = goal_id; i; i = nodes[*i].parent) out.path.push_back(*i);
        std::reverse(out.path.begin(), out.path.end());
        for (std::size_t i = 1; i < out.path.size(); ++i)
            out.plan.push_back(nodes[out.path[i]].producing_action.value_or(""));
        out.answer = nodes[goal_id].content;
        return finish();
    };

    try {
        ThoughtNode root;
        root.content = task.root.content;
        root.structured_state = task.root.state;
        nodes.push_back(root);
        stats.generated = 1;
        if (verify(nodes[0], *oracles.verifier, stats, transcript) == Verdict::goal) {
            nodes[0].status = NodeStatus::goal;
            log_node(transcript, task.id, nodes[0]);
            return succeed(0);
        }
        log_node(transcript, task.id, nodes[0]);

        std::vector<Thought> history{task.root};
        std::deque<std::size_t> frontier{0};
        bool depth_limited = false;
        const int m = config.sample_count();

        while (!frontier.empty()) {
            std::size_t current;
            if (config.traversal == Traversal::bfs) {
                current = frontier.front();
                frontier.pop_front();
            } else {
                current = frontier.back();
                frontier.pop_back();
            }
            if (static_cast<int>(nodes[current].depth) >= config.max_depth) {
                depth_limited = true;
                continue;
            }
            ++stats.expanded;
            auto children = config.mode == Mode::direct
                                ? expand_direct(nodes[current], *oracles.thought, m, config.branch_factor, stats)
                                : expand_esa(nodes[current], *oracles.action, *oracles.successor, m,
                                             config.branch_factor, stats);
            if (children.empty()) {
                nodes[current].status = NodeStatus::failed;
                nodes[current].note = "no valid samples";
                continue;
            }
            std::vector<std::size_t> kept;
            for (auto &child : children) {
                child.id = nodes.size();
                nodes.push_back(std::move(child));
                ++stats.generated;
                ThoughtNode &node = nodes.back();
                if (node.status == NodeStatus::failed) {
                    ++stats.failed;
                    log_node(transcript, task.id, node);
                    continue;
                }
                if (verify(node, *oracles.verifier, stats, transcript) == Verdict::goal) {
                    node.status = NodeStatus::goal;
                    log_node(transcript, task.id, node);
                    return succeed(node.id);
                }
                if (config.novelty_pruning) {
                    const std::size_t window = static_cast<std::size_t>(config.history_window);
                    const std::size_t from = history.size() > window ? history.size() - window : 0;
                    std::vector<Thought> recent(history.begin() + static_cast<std::ptrdiff_t>(from), history.end());
                    if (prune_decision(node, recent, *oracles.novelty, stats, transcript) == PruneDecision::prune) {
                        node.status = NodeStatus::pruned;
                        ++stats.pruned;
                        log_node(transcript, task.id, node);
                        continue;
                    }
                }
                history.push_back(node.thought());
                kept.push_back(node.id);
                log_node(transcript, task.id, node);
            }
            if (config.traversal == Traversal::bfs)
                frontier.insert(frontier.end(), kept.begin(), kept.end());
            else
                frontier.insert(frontier.end(), kept.rbegin(), kept.rend());
        }
        out.reason = depth_limited ? FailReason::depth_exhausted : FailReason::frontier_exhausted;
    } catch (const OracleUnavailable &e) {
        out.reason = FailReason::oracle_error;
        out.error = e.what();
    }
    return finish();
}

} // namespace noveltree::tot
