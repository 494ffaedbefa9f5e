#include "noveltree/oracles/prompt.hpp"

#include "noveltree/domains/instances.hpp"
#include "noveltree/errors.hpp"
#include "noveltree/pddl/parser.hpp"

#include "json.hpp"

#include <algorithm>

namespace noveltree::oracles {

namespace {

constexpr std::pair<Role, const char *> kRoleNames[] = {
    {Role::context, "context"},       {Role::action_gen, "action_gen"},   {Role::action_gen_single, "action_gen_single"},
    {Role::successor, "successor"},   {Role::direct_step, "direct_step"}, {Role::verify, "verify"},
    {Role::novelty, "novelty"},
};

// Visits literal text and slot names in order.
template <typename Literal, typename Slot>
void scan(std::string_view body, Literal on_literal, Slot on_slot) {
    std::size_t i = 0;
    while (i < body.size()) {
        const char c = body[i];
        if (c == '{' && i + 1 < body.size() && body[i + 1] == '{') {
            on_literal("{");
            i += 2;
        } else if (c == '}' && i + 1 < body.size() && body[i + 1] == '}') {
            on_literal("}");
            i += 2;
        } else if (c == '{') {
            const auto close = body.find('}', i);
            if (close == std::string_view::npos) throw ConfigError("unterminated slot in prompt template");
            on_slot(std::string(body.substr(i + 1, close - i - 1)));
            i = close + 1;
        } else {
            const auto next = body.find_first_of("{}", i + 1);
            const auto end = next == std::string_view::npos ? body.size() : next;
            on_literal(body.substr(i, end - i));
            i = end;
        }
    }
}

} // namespace

const char *to_string(Role role) {
    for (const auto &[r, name] : kRoleNames)
        if (r == role) return name;
    return "?";
}

Role role_from_string(std::string_view name) {
    for (const auto &[r, n] : kRoleNames)
        if (name == n) return r;
    throw ConfigError("unknown prompt role '" + std::string(name) + "'");
}

const std::set<std::string> &known_slots() {
    static const std::set<std::string> slots = {"new_state", "previous_states_str", "state", "goal",
                                                "action", "domain_context", "actions", "plan"};
    return slots;
}

std::vector<std::string> PromptTemplate::slots() const {
    std::vector<std::string> out;
    scan(body, [](std::string_view) {}, [&](std::string slot) {
        if (std::find(out.begin(), out.end(), slot) == out.end()) out.push_back(std::move(slot));
    });
    return out;
}

std::string render_prompt(const PromptTemplate &tmpl, const Bindings &bindings) {
    std::string out;
    scan(tmpl.body, [&](std::string_view text) { out += text; }, [&](const std::string &slot) {
        auto it = bindings.find(slot);
        if (it == bindings.end()) throw MissingSlot("template '" + tmpl.id + "' needs slot {" + slot + "}");
        out += it->second;
    });
    return out;
}

std::string join_history(const std::vector<std::string> &states) {
    if (states.empty()) return std::string(kEmptyHistory);
    std::string out;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (i) out += kHistorySeparator;
        out += states[i];
    }
    return out;
}

PromptCatalog PromptCatalog::from_json_text(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError(std::string("prompt catalog is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("prompt catalog must be a JSON object");
    for (const auto &[key, _] : doc.items())
        if (key != "name" && key != "version" && key != "templates" && key != "description")
            throw ConfigError("unknown prompt catalog key '" + key + "'");

    PromptCatalog catalog;
    catalog.name_ = doc.value("name", "");
    if (!doc.contains("templates") || !doc["templates"].is_array())
        throw ConfigError("prompt catalog needs a 'templates' array");
    for (const auto &entry : doc["templates"]) {
        for (const auto &[key, _] : entry.items())
            if (key != "id" && key != "role" && key != "style" && key != "domain" && key != "body")
                throw ConfigError("unknown prompt template key '" + key + "'");
        PromptTemplate t;
        t.id = entry.at("id").get<std::string>();
        t.role = role_from_string(entry.at("role").get<std::string>());
        t.style = entry.value("style", "any");
        t.domain = entry.value("domain", "*");
        if (t.style != "any" && t.style != "pddl" && t.style != "natural_language")
            throw ConfigError("template '" + t.id + "' has unknown style '" + t.style + "'");
        const auto &body = entry.at("body");
        if (body.is_array()) {
            // Multi-line bodies may be given as an array of lines.
            for (std::size_t i = 0; i < body.size(); ++i) {
                if (i) t.body += '\n';
                t.body += body[i].get<std::string>();
            }
        } else {
            t.body = body.get<std::string>();
        }
        for (const auto &slot : t.slots())
            if (!known_slots().count(slot))
                throw ConfigError("template '" + t.id + "' uses undeclared slot {" + slot + "}");
        for (const auto &other : catalog.templates_)
            if (other.id == t.id && other.style == t.style && other.domain == t.domain)
                throw ConfigError("duplicate template '" + t.id + "' for style " + t.style + ", domain " + t.domain);
        catalog.templates_.push_back(std::move(t));
    }
    return catalog;
}

PromptCatalog PromptCatalog::load(const std::filesystem::path &path) {
    return from_json_text(pddl::read_file(path));
}

PromptCatalog PromptCatalog::builtin(const std::string &name_or_path) {
    if (name_or_path == "base" || name_or_path == "extended")
        return load(domains::data_dir() / "prompts" / (name_or_path + ".json"));
    return load(name_or_path);
}

const PromptTemplate *PromptCatalog::find(const std::string &id, std::string_view style,
                                          std::string_view domain) const {
    const PromptTemplate *best = nullptr;
    int best_score = -1;
    for (const auto &t : templates_) {
        if (t.id != id) continue;
        const bool style_ok = t.style == style || t.style == "any";
        const bool domain_ok = t.domain == domain || t.domain == "*";
        if (!style_ok || !domain_ok) continue;
        const int score = (t.domain == domain ? 2 : 0) + (t.style == style ? 1 : 0);
        if (score > best_score) {
            best = &t;
            best_score = score;
        }
    }
    return best;
}

const PromptTemplate &PromptCatalog::select(const std::string &id, std::string_view style,
                                            std::string_view domain) const {
    if (const auto *t = find(id, style, domain)) return *t;
    throw MissingTemplate("no prompt template '" + id + "' for style " + std::string(style) + ", domain " +
                          std::string(domain));
}

bool PromptCatalog::has(const std::string &id, std::string_view style, std::string_view domain) const {
    return find(id, style, domain) != nullptr;
}

} // namespace noveltree::oracles
