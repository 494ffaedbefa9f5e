#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace noveltree::oracles {

enum class Role { context, action_gen, action_gen_single, successor, direct_step, verify, novelty };

const char *to_string(Role role);
Role role_from_string(std::string_view name);

// Slot names a template body may reference as {name}.
const std::set<std::string> &known_slots();

// Separator placed between history entries in {previous_states_str}.
inline constexpr std::string_view kHistorySeparator = " | ";
// Rendering of an empty history.
inline constexpr std::string_view kEmptyHistory = "(none)";

struct PromptTemplate {
    std::string id;
    Role role = Role::context;
    // "pddl", "natural_language" or "any".
    std::string style = "any";
    // Domain name or "*".
    std::string domain = "*";
    std::string body;

    // Slots referenced by the body, in first-use order.
    std::vector<std::string> slots() const;
};

using Bindings = std::map<std::string, std::string>;

// Substitutes every {slot}; throws MissingSlot when a referenced slot is unbound.
// "{{" and "}}" render as literal braces.
std::string render_prompt(const PromptTemplate &tmpl, const Bindings &bindings);

std::string join_history(const std::vector<std::string> &states);

class PromptCatalog {
public:
    // Throws ConfigError on unknown keys, roles, or undeclared slots.
    static PromptCatalog from_json_text(std::string_view text);
    static PromptCatalog load(const std::filesystem::path &path);
    // "base" or "extended" from the shipped data directory, or a file path.
    static PromptCatalog builtin(const std::string &name_or_path);

    const std::string &name() const { return name_; }
    const std::vector<PromptTemplate> &templates() const { return templates_; }

    // Most specific template for (id, style, domain): an exact domain beats "*",
    // an exact style beats "any". Throws MissingTemplate.
    const PromptTemplate &select(const std::string &id, std::string_view style, std::string_view domain) const;
    bool has(const std::string &id, std::string_view style, std::string_view domain) const;

private:
    const PromptTemplate *find(const std::string &id, std::string_view style, std::string_view domain) const;

    std::string name_;
    std::vector<PromptTemplate> templates_;
};

} // namespace noveltree::oracles
