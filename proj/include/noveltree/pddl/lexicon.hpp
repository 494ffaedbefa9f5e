#pragma once

#include "noveltree/core/types.hpp"
#include "noveltree/pddl/defs.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace noveltree::pddl {

// An action reference recovered from text: name and arguments only.
struct ActionCall {
    std::string name;
    std::vector<std::string> args;
    bool operator==(const ActionCall &) const = default;
    auto operator<=>(const ActionCall &) const = default;
    std::string label() const;
};

ActionCall call_of(const core::GroundAction &action);

// Template-based, invertible mapping between atoms/actions and English.
//
// Templates use positional slots {0}, {1}, ... for arguments. Objects render
// through the display-name table when present, otherwise through
// `object_template` (which may reference {name}).
class Lexicon {
public:
    static Lexicon from_json_text(std::string_view text);
    static Lexicon load(const std::filesystem::path &path);

    const std::string &domain() const { return domain_; }

    std::string object_phrase(const std::string &object) const;
    const std::string &predicate_template(const std::string &predicate) const;
    const std::string &action_template(const std::string &action) const;

    // Throws MissingTemplate unless every predicate and action of the domain has a template.
    void validate(const DomainDef &domain) const;

    // Reverse lookup of a rendered object phrase; empty when unknown.
    std::string object_from_phrase(std::string_view phrase) const;

    const std::map<std::string, std::string> &predicates() const { return predicates_; }
    const std::map<std::string, std::string> &actions() const { return actions_; }

private:
    std::string domain_;
    std::string object_template_ = "{name}";
    std::map<std::string, std::string> objects_;
    std::map<std::string, std::string> phrase_to_object_;
    std::map<std::string, std::string> predicates_;
    std::map<std::string, std::string> actions_;
};

// Lowercase, trim, collapse runs of whitespace.
std::string normalize_text(std::string_view text);

std::string to_natural_language(const core::Atom &atom, const Lexicon &lex);
std::string to_natural_language(const ActionCall &action, const Lexicon &lex);
std::string to_natural_language(const core::GroundAction &action, const Lexicon &lex);
// Sentences in canonical atom order, each terminated by a period.
std::string to_natural_language(const core::State &state, const Lexicon &lex);

using ParsedItem = std::variant<core::Atom, ActionCall>;

// Inverse of to_natural_language on single sentences. A trailing period is
// ignored. Throws NoMatch or AmbiguousMatch.
ParsedItem from_natural_language(std::string_view text, const Lexicon &lex);

core::Atom atom_from_natural_language(std::string_view text, const Lexicon &lex);
ActionCall action_from_natural_language(std::string_view text, const Lexicon &lex);
core::State state_from_natural_language(std::string_view text, const Lexicon &lex);

} // namespace noveltree::pddl
