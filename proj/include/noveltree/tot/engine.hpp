#pragma once

#include "noveltree/tot/thought.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace noveltree::oracles {
class Transcript;
}

namespace noveltree::tot {

enum class Traversal { bfs, dfs };
enum class Mode { direct, esa };
enum class NodeStatus { kept, pruned, goal, failed };
enum class FailReason { none, depth_exhausted, frontier_exhausted, oracle_error };

const char *to_string(Traversal t);
const char *to_string(Mode m);
const char *to_string(NodeStatus s);
const char *to_string(FailReason r);
Traversal traversal_from_string(std::string_view s);
Mode mode_from_string(std::string_view s);

struct ThoughtNode {
    std::size_t id = 0;
    std::optional<std::size_t> parent;
    std::size_t depth = 0;
    std::string content;
    StructuredState structured_state;
    std::optional<std::string> producing_action;
    TokenUsage token_cost;
    NodeStatus status = NodeStatus::kept;
    std::string note;

    Thought thought() const { return Thought{content, structured_state}; }
};

struct Temperatures {
    double action_gen = 0.7;
    double successor = 0.0;
    double direct_step = 0.7;
    double verify = 0.0;
    double novelty = 0.0;
};

struct ToTConfig {
    Traversal traversal = Traversal::dfs;
    int max_depth = 8;
    int branch_factor = 2;
    Mode mode = Mode::esa;
    bool novelty_pruning = false;
    int history_window = 30;
    // Samples per expansion; 0 means branch_factor.
    int samples = 0;
    Temperatures temperatures;

    int sample_count() const { return samples > 0 ? samples : branch_factor; }
    void validate() const;
};

struct OracleSet {
    std::shared_ptr<ThoughtOracle> thought;
    std::shared_ptr<ActionOracle> action;
    std::shared_ptr<SuccessorOracle> successor;
    std::shared_ptr<VerifierOracle> verifier;
    std::shared_ptr<NoveltyOracle> novelty;
};

struct ToTTask {
    std::string id;
    Thought root;
};

struct ToTStats {
    std::size_t generated = 0;
    std::size_t expanded = 0;
    std::size_t pruned = 0;
    std::size_t failed = 0;
    std::size_t warnings = 0;
    TokenUsage total;
    // Keys: action_gen, successor, direct_step, verify, novelty.
    std::map<std::string, TokenUsage> by_subtask;
    double wall_ms = 0.0;
};

struct ToTOutcome {
    bool solved = false;
    FailReason reason = FailReason::none;
    std::string error;
    // Root-to-goal node ids, and the producing actions along that path.
    std::vector<std::size_t> path;
    std::vector<std::string> plan;
    std::string answer;
    std::vector<ThoughtNode> nodes;
    ToTStats stats;
};

enum class Verdict { goal, cont };
enum class PruneDecision { keep, prune };

// Engine internals, exposed for testing. Each appends usage to `stats`.
std::vector<ThoughtNode> expand_direct(const ThoughtNode &node, ThoughtOracle &oracle, int m, int branch_factor,
                                       ToTStats &stats);
std::vector<ThoughtNode> expand_esa(const ThoughtNode &node, ActionOracle &actions, SuccessorOracle &successors,
                                    int m, int branch_factor, ToTStats &stats);
PruneDecision prune_decision(const ThoughtNode &node, const std::vector<Thought> &kept_history,
                             NoveltyOracle &oracle, ToTStats &stats, oracles::Transcript *transcript = nullptr);
Verdict verify(const ThoughtNode &node, VerifierOracle &oracle, ToTStats &stats,
               oracles::Transcript *transcript = nullptr);

ToTOutcome tot_search(const ToTTask &task, const ToTConfig &config, const OracleSet &oracles,
                      oracles::Transcript *transcript = nullptr);

} // namespace noveltree::tot
