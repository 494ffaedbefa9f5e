#include "noveltree/cli/config.hpp"

#include "noveltree/errors.hpp"

#include <fstream>
#include <set>

namespace noveltree::cli {

using nlohmann::json;

const char *to_string(OracleKind kind) {
    switch (kind) {
    case OracleKind::exact: return "exact";
    case OracleKind::noisy: return "noisy";
    case OracleKind::llm: return "llm";
    case OracleKind::duplicate_baseline: return "duplicate-baseline";
    }
    return "?";
}

OracleKind oracle_kind_from_string(std::string_view s) {
    for (auto k : {OracleKind::exact, OracleKind::noisy, OracleKind::llm, OracleKind::duplicate_baseline})
        if (s == to_string(k)) return k;
    throw ConfigError("unknown oracle '" + std::string(s) + "'");
}

namespace {

void check_keys(const json &j, const std::set<std::string> &allowed, const std::string &where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto &[key, _] : j.items())
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <typename T>
void read(const json &j, const char *key, T &out, const std::string &where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception &) {
        throw ConfigError("bad value for '" + std::string(key) + "' in " + where);
    }
}

template <typename T, typename Parse>
void read_enum(const json &j, const char *key, T &out, Parse parse, const std::string &where) {
    std::string s;
    read(j, key, s, where);
    if (!s.empty()) out = parse(s);
}

} // namespace

void RunConfig::validate() const {
    if (generator.min_blocks < 1 || generator.max_blocks < generator.min_blocks || generator.max_blocks > 26)
        throw ConfigError("generator block range must satisfy 1 <= min_blocks <= max_blocks <= 26");
    if (n_blocks < 1 || n_blocks > 26) throw ConfigError("n_blocks must be in 1..26");
    if (generator.max_walk < 0) throw ConfigError("max_walk must be non-negative");
    if (generator.width_k_max < 1) throw ConfigError("width_k_max must be at least 1");
    if (max_plan_length < 1) throw ConfigError("max_plan_length must be at least 1");
    generator.logistics.validate();
    tot.validate();
    oracle.errors.validate();
    if (oracle.novelty_k < 1) throw ConfigError("novelty_k must be at least 1");
    if (oracle.kind == OracleKind::llm) llm.validate();
    if (k_max < 1) throw ConfigError("k_max must be at least 1");
    if (budget < 1) throw ConfigError("budget must be positive");
    if (n < 1) throw ConfigError("n must be at least 1");
    for (const auto &label : grid) eval::cell_from_label(label);
}

RunConfig config_from_json(const json &j) {
    RunConfig c;
    check_keys(j, {"domain", "seed", "out", "generator", "tot", "oracle", "llm", "prompts", "iw", "n", "grid"},
               "config");
    read_enum(j, "domain", c.domain, domains::domain_from_string, "config");
    read(j, "seed", c.seed, "config");
    read(j, "out", c.out, "config");
    read(j, "n", c.n, "config");
    read(j, "grid", c.grid, "config");

    if (j.contains("generator")) {
        const auto &g = j["generator"];
        check_keys(g, {"n_blocks", "min_blocks", "max_blocks", "max_walk", "width_k_max", "max_plan_length",
                       "logistics"},
                   "generator");
        read(g, "n_blocks", c.n_blocks, "generator");
        read(g, "min_blocks", c.generator.min_blocks, "generator");
        read(g, "max_blocks", c.generator.max_blocks, "generator");
        read(g, "max_walk", c.generator.max_walk, "generator");
        read(g, "width_k_max", c.generator.width_k_max, "generator");
        read(g, "max_plan_length", c.max_plan_length, "generator");
        if (g.contains("logistics")) {
            const auto &l = g["logistics"];
            check_keys(l, {"n_cities", "locations_per_city", "n_packages", "n_trucks", "n_airplanes"}, "logistics");
            auto &ls = c.generator.logistics;
            read(l, "n_cities", ls.n_cities, "logistics");
            read(l, "locations_per_city", ls.locations_per_city, "logistics");
            read(l, "n_packages", ls.n_packages, "logistics");
            read(l, "n_trucks", ls.n_trucks, "logistics");
            read(l, "n_airplanes", ls.n_airplanes, "logistics");
        }
    }
    c.generator.domain = c.domain == domains::DomainId::game24 ? domains::DomainId::blocksworld : c.domain;

    if (j.contains("tot")) {
        const auto &t = j["tot"];
        check_keys(t, {"traversal", "mode", "max_depth", "branch_factor", "novelty_pruning", "history_window",
                       "samples", "temperatures"},
                   "tot");
        read_enum(t, "traversal", c.tot.traversal, tot::traversal_from_string, "tot");
        read_enum(t, "mode", c.tot.mode, tot::mode_from_string, "tot");
        read(t, "max_depth", c.tot.max_depth, "tot");
        read(t, "branch_factor", c.tot.branch_factor, "tot");
        read(t, "novelty_pruning", c.tot.novelty_pruning, "tot");
        read(t, "history_window", c.tot.history_window, "tot");
        read(t, "samples", c.tot.samples, "tot");
        if (t.contains("temperatures")) {
            const auto &x = t["temperatures"];
            check_keys(x, {"action_gen", "successor", "direct_step", "verify", "novelty"}, "temperatures");
            read(x, "action_gen", c.tot.temperatures.action_gen, "temperatures");
            read(x, "successor", c.tot.temperatures.successor, "temperatures");
            read(x, "direct_step", c.tot.temperatures.direct_step, "temperatures");
            read(x, "verify", c.tot.temperatures.verify, "temperatures");
            read(x, "novelty", c.tot.temperatures.novelty, "temperatures");
        }
    }

    if (j.contains("oracle")) {
        const auto &o = j["oracle"];
        check_keys(o, {"kind", "novelty_k", "action_order", "error_rate", "errors"}, "oracle");
        read_enum(o, "kind", c.oracle.kind, oracle_kind_from_string, "oracle");
        read(o, "novelty_k", c.oracle.novelty_k, "oracle");
        read_enum(o, "action_order", c.oracle.action_order, oracles::action_order_from_string, "oracle");
        if (o.contains("error_rate")) {
            double rate = 0;
            read(o, "error_rate", rate, "oracle");
            c.oracle.errors = oracles::ErrorModel::uniform(rate, c.oracle.errors.seed);
        }
        if (o.contains("errors")) {
            const auto &e = o["errors"];
            check_keys(e, {"invalid_action", "wrong_successor", "false_novelty", "verifier_flip", "seed"}, "errors");
            read(e, "invalid_action", c.oracle.errors.invalid_action, "errors");
            read(e, "wrong_successor", c.oracle.errors.wrong_successor, "errors");
            read(e, "false_novelty", c.oracle.errors.false_novelty, "errors");
            read(e, "verifier_flip", c.oracle.errors.verifier_flip, "errors");
            read(e, "seed", c.oracle.errors.seed, "errors");
        }
    }

    if (j.contains("llm")) {
        const auto &l = j["llm"];
        check_keys(l, {"endpoint", "model", "temperature", "max_tokens", "thinking", "thinking_style",
                       "thinking_field", "thinking_on_directive", "thinking_off_directive", "retry", "timeout_ms",
                       "api_key_env", "requests_per_minute"},
                   "llm");
        auto &p = c.llm;
        read(l, "endpoint", p.endpoint, "llm");
        read(l, "model", p.model, "llm");
        read(l, "temperature", p.temperature, "llm");
        read(l, "max_tokens", p.max_tokens, "llm");
        read(l, "thinking", p.thinking, "llm");
        read_enum(l, "thinking_style", p.thinking_style, oracles::thinking_style_from_string, "llm");
        read(l, "thinking_field", p.thinking_field, "llm");
        read(l, "thinking_on_directive", p.thinking_on_directive, "llm");
        read(l, "thinking_off_directive", p.thinking_off_directive, "llm");
        read(l, "timeout_ms", p.timeout_ms, "llm");
        read(l, "api_key_env", p.api_key_env, "llm");
        read(l, "requests_per_minute", p.requests_per_minute, "llm");
        if (l.contains("retry")) {
            const auto &r = l["retry"];
            check_keys(r, {"max_attempts", "initial_backoff_ms", "multiplier", "max_backoff_ms"}, "retry");
            read(r, "max_attempts", p.retry.max_attempts, "retry");
            read(r, "initial_backoff_ms", p.retry.initial_backoff_ms, "retry");
            read(r, "multiplier", p.retry.multiplier, "retry");
            read(r, "max_backoff_ms", p.retry.max_backoff_ms, "retry");
        }
    }

    if (j.contains("prompts")) {
        const auto &p = j["prompts"];
        check_keys(p, {"catalog", "style", "novelty_template"}, "prompts");
        read(p, "catalog", c.prompts.catalog, "prompts");
        read_enum(p, "style", c.prompts.style, pddl::style_from_string, "prompts");
        read(p, "novelty_template", c.prompts.novelty_template, "prompts");
    }

    if (j.contains("iw")) {
        const auto &w = j["iw"];
        check_keys(w, {"k_max", "budget"}, "iw");
        read(w, "k_max", c.k_max, "iw");
        read(w, "budget", c.budget, "iw");
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception &e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

json to_json(const RunConfig &c) {
    const auto &g = c.generator;
    const auto &l = g.logistics;
    const auto &t = c.tot;
    const auto &e = c.oracle.errors;
    const auto &p = c.llm;
    return {{"domain", domains::to_string(c.domain)},
            {"seed", c.seed},
            {"out", c.out},
            {"n", c.n},
            {"grid", c.grid},
            {"generator",
             {{"n_blocks", c.n_blocks},
              {"min_blocks", g.min_blocks},
              {"max_blocks", g.max_blocks},
              {"max_walk", g.max_walk},
              {"width_k_max", g.width_k_max},
              {"max_plan_length", c.max_plan_length},
              {"logistics",
               {{"n_cities", l.n_cities},
                {"locations_per_city", l.locations_per_city},
                {"n_packages", l.n_packages},
                {"n_trucks", l.n_trucks},
                {"n_airplanes", l.n_airplanes}}}}},
            {"tot",
             {{"traversal", tot::to_string(t.traversal)},
              {"mode", tot::to_string(t.mode)},
              {"max_depth", t.max_depth},
              {"branch_factor", t.branch_factor},
              {"novelty_pruning", t.novelty_pruning},
              {"history_window", t.history_window},
              {"samples", t.samples},
              {"temperatures",
               {{"action_gen", t.temperatures.action_gen},
                {"successor", t.temperatures.successor},
                {"direct_step", t.temperatures.direct_step},
                {"verify", t.temperatures.verify},
                {"novelty", t.temperatures.novelty}}}}},
            {"oracle",
             {{"kind", to_string(c.oracle.kind)},
              {"novelty_k", c.oracle.novelty_k},
              {"action_order", oracles::to_string(c.oracle.action_order)},
              {"errors",
               {{"invalid_action", e.invalid_action},
                {"wrong_successor", e.wrong_successor},
                {"false_novelty", e.false_novelty},
                {"verifier_flip", e.verifier_flip},
                {"seed", e.seed}}}}},
            {"llm",
             {{"endpoint", p.endpoint},
              {"model", p.model},
              {"temperature", p.temperature},
              {"max_tokens", p.max_tokens},
              {"thinking", p.thinking},
              {"thinking_style", oracles::to_string(p.thinking_style)},
              {"thinking_field", p.thinking_field},
              {"thinking_on_directive", p.thinking_on_directive},
              {"thinking_off_directive", p.thinking_off_directive},
              {"retry",
               {{"max_attempts", p.retry.max_attempts},
                {"initial_backoff_ms", p.retry.initial_backoff_ms},
                {"multiplier", p.retry.multiplier},
                {"max_backoff_ms", p.retry.max_backoff_ms}}},
              {"timeout_ms", p.timeout_ms},
              {"api_key_env", p.api_key_env},
              {"requests_per_minute", p.requests_per_minute}}},
            {"prompts",
             {{"catalog", c.prompts.catalog},
              {"style", pddl::to_string(c.prompts.style)},
              {"novelty_template", c.prompts.novelty_template}}},
            {"iw", {{"k_max", c.k_max}, {"budget", c.budget}}}};
}

std::string config_hash(const RunConfig &config) { return eval::hash_json(to_json(config)).substr(0, 8); }

} // namespace noveltree::cli
