#include "noveltree/pddl/codec.hpp"

#include "noveltree/errors.hpp"

#include <cctype>
#include <sstream>

namespace noveltree::pddl {

const char *to_string(Style style) {
    return style == Style::pddl ? "pddl" : "natural_language";
}

Style style_from_string(std::string_view name) {
    if (name == "pddl" || name == "standard")
        return Style::pddl;
    if (name == "natural_language" || name == "nl" || name == "natural-language")
        return Style::natural_language;
    throw ConfigError("unknown prompting style '" + std::string(name) + "'");
}

std::vector<std::vector<std::string>> extract_paren_groups(std::string_view text) {
    std::vector<std::vector<std::string>> groups;
    std::size_t pos = 0;
    while ((pos = text.find('(', pos)) != std::string_view::npos) {
        std::size_t close = text.find(')', pos);
        if (close == std::string_view::npos)
            break;
        std::size_t nested = text.find('(', pos + 1);
        if (nested != std::string_view::npos && nested < close) {
            pos = nested;
            continue;
        }
        std::istringstream in(normalize_text(text.substr(pos + 1, close - pos - 1)));
        std::vector<std::string> tokens;
        for (std::string tok; in >> tok;)
            tokens.push_back(tok);
        if (!tokens.empty())
            groups.push_back(std::move(tokens));
        pos = close + 1;
    }
    return groups;
}

std::string TextCodec::render_state(const core::State &state) const {
    return render_atoms(state.atoms());
}

std::string TextCodec::render_atoms(const std::vector<core::Atom> &atoms) const {
    std::string out;
    for (const auto &atom : atoms) {
        if (!out.empty())
            out += ' ';
        if (style_ == Style::pddl) {
            out += atom.to_string();
        } else {
            out += to_natural_language(atom, *lex_);
            out += '.';
        }
    }
    return out;
}

std::string TextCodec::render_action(const ActionCall &action) const {
    if (style_ == Style::pddl)
        return action.label();
    return to_natural_language(action, *lex_);
}

std::string TextCodec::render_actions(const std::vector<ActionCall> &actions) const {
    std::string out;
    for (const auto &a : actions) {
        out += render_action(a);
        out += '\n';
    }
    return out;
}

core::State TextCodec::parse_state(std::string_view text) const {
    if (style_ == Style::natural_language)
        return state_from_natural_language(text, *lex_);
    std::vector<core::Atom> atoms;
    for (auto &group : extract_paren_groups(text)) {
        std::string pred = group.front();
        group.erase(group.begin());
        atoms.emplace_back(std::move(pred), std::move(group));
    }
    if (atoms.empty() && !normalize_text(text).empty())
        throw NoMatch("no PDDL atoms in '" + std::string(text) + "'");
    return core::State(std::move(atoms));
}

ActionCall TextCodec::parse_action(std::string_view text) const {
    if (style_ == Style::natural_language)
        return action_from_natural_language(text, *lex_);
    auto groups = extract_paren_groups(text);
    if (groups.size() != 1)
        throw NoMatch("expected exactly one PDDL action in '" + std::string(text) + "'");
    ActionCall call;
    call.name = groups.front().front();
    call.args.assign(groups.front().begin() + 1, groups.front().end());
    return call;
}

std::vector<ActionCall> TextCodec::parse_action_lines(std::string_view text) const {
    std::vector<ActionCall> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        // Strip list markers such as "1." or "-".
        std::string norm = normalize_text(line);
        std::size_t skip = 0;
        while (skip < norm.size() && (std::isdigit(static_cast<unsigned char>(norm[skip])) ||
                                      norm[skip] == '-' || norm[skip] == '*'))
            ++skip;
        if (skip > 0 && skip < norm.size() && (norm[skip] == '.' || norm[skip] == ')' || norm[skip] == ' ')) {
            if (norm[skip] != ' ')
                ++skip;
            norm = normalize_text(norm.substr(skip));
        }
        if (!norm.empty())
            out.push_back(parse_action(norm));
        if (nl == std::string_view::npos)
            break;
        start = nl + 1;
    }
    return out;
}

} // namespace noveltree::pddl
