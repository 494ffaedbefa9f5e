#include "noveltree/pddl/lexicon.hpp"

#include "json.hpp"
#include "noveltree/errors.hpp"
#include "noveltree/pddl/parser.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>

namespace noveltree::pddl {

std::string ActionCall::label() const {
    std::string out = "(" + name;
    for (const auto &a : args)
        out += " " + a;
    return out + ")";
}

ActionCall call_of(const core::GroundAction &action) {
    return {action.name, action.args};
}

std::string normalize_text(std::string_view text) {
    std::string out;
    bool pending_space = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

namespace {

struct Segment {
    bool is_slot = false;
    std::string literal;
    std::size_t slot = 0;
};

std::vector<Segment> split_template(const std::string &tmpl) {
    std::vector<Segment> out;
    std::string literal;
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        if (tmpl[i] == '{') {
            std::size_t close = tmpl.find('}', i);
            if (close == std::string::npos)
                throw Error("unterminated slot in template '" + tmpl + "'");
            std::string key = tmpl.substr(i + 1, close - i - 1);
            if (key.empty() || !std::all_of(key.begin(), key.end(), ::isdigit))
                throw Error("template slot {" + key + "} is not positional in '" + tmpl + "'");
            if (!literal.empty())
                out.push_back({false, std::move(literal), 0});
            literal.clear();
            out.push_back({true, {}, static_cast<std::size_t>(std::stoul(key))});
            i = close;
        } else {
            literal += tmpl[i];
        }
    }
    if (!literal.empty())
        out.push_back({false, std::move(literal), 0});
    return out;
}

std::size_t slot_count(const std::vector<Segment> &segs) {
    std::set<std::size_t> slots;
    for (const auto &s : segs)
        if (s.is_slot)
            slots.insert(s.slot);
    return slots.size();
}

std::string fill(const std::string &tmpl, const std::vector<std::string> &values) {
    std::string out;
    for (const auto &seg : split_template(tmpl)) {
        if (!seg.is_slot) {
            out += seg.literal;
        } else {
            if (seg.slot >= values.size())
                throw MissingTemplate("template '" + tmpl + "' references missing argument");
            out += values[seg.slot];
        }
    }
    return out;
}

bool is_raw_name(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '/';
    });
}

// Enumerates every way `text` matches `segs`, binding slots to object names.
void match_segments(const std::vector<Segment> &segs, std::size_t si, std::string_view text,
                    std::size_t pos, std::vector<std::optional<std::string>> &slots,
                    const Lexicon &lex, std::vector<std::vector<std::string>> &results) {
    if (si == segs.size()) {
        if (pos != text.size())
            return;
        std::vector<std::string> args;
        for (const auto &s : slots)
            args.push_back(s.value_or(""));
        results.push_back(std::move(args));
        return;
    }
    const Segment &seg = segs[si];
    if (!seg.is_slot) {
        if (text.substr(pos, seg.literal.size()) == seg.literal)
            match_segments(segs, si + 1, text, pos + seg.literal.size(), slots, lex, results);
        return;
    }
    for (std::size_t end = pos + 1; end <= text.size(); ++end) {
        std::string_view piece = text.substr(pos, end - pos);
        std::string object = lex.object_from_phrase(piece);
        if (object.empty())
            continue;
        auto &slot = slots[seg.slot];
        if (slot && *slot != object)
            continue;
        bool was_set = slot.has_value();
        if (!was_set)
            slot = object;
        match_segments(segs, si + 1, text, end, slots, lex, results);
        if (!was_set)
            slot.reset();
    }
}

} // namespace

Lexicon Lexicon::from_json_text(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw Error(std::string("lexicon is not valid JSON: ") + e.what());
    }
    static const std::set<std::string> kKeys = {"domain", "objects", "object_template", "predicates",
                                                "actions", "description"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!kKeys.count(it.key()))
            throw Error("unknown lexicon key '" + it.key() + "'");
    Lexicon lex;
    lex.domain_ = j.value("domain", "");
    lex.object_template_ = normalize_text(j.value("object_template", "{name}"));
    if (j.contains("objects"))
        for (auto &[name, phrase] : j["objects"].items())
            lex.objects_[normalize_text(name)] = normalize_text(phrase.get<std::string>());
    for (auto &[name, tmpl] : j.at("predicates").items())
        lex.predicates_[normalize_text(name)] = normalize_text(tmpl.get<std::string>());
    for (auto &[name, tmpl] : j.at("actions").items())
        lex.actions_[normalize_text(name)] = normalize_text(tmpl.get<std::string>());
    for (const auto &[name, phrase] : lex.objects_) {
        if (!lex.phrase_to_object_.emplace(phrase, name).second)
            throw AmbiguousMatch("two objects share the display name '" + phrase + "'");
    }
    // Surface patterns of distinct templates must not coincide.
    std::set<std::string> shapes;
    auto shape_of = [](const std::string &tmpl) {
        std::string s;
        for (const auto &seg : split_template(tmpl))
            s += seg.is_slot ? std::string("\x01") : seg.literal;
        return s;
    };
    for (const auto *table : {&lex.predicates_, &lex.actions_})
        for (const auto &[name, tmpl] : *table)
            if (!shapes.insert(shape_of(tmpl)).second)
                throw AmbiguousMatch("template for '" + name + "' duplicates another template's pattern");
    return lex;
}

Lexicon Lexicon::load(const std::filesystem::path &path) {
    return from_json_text(read_file(path));
}

std::string Lexicon::object_phrase(const std::string &object) const {
    auto it = objects_.find(object);
    if (it != objects_.end())
        return it->second;
    std::string out;
    std::size_t pos = 0;
    for (;;) {
        std::size_t at = object_template_.find("{name}", pos);
        if (at == std::string::npos) {
            out += object_template_.substr(pos);
            break;
        }
        out += object_template_.substr(pos, at - pos);
        out += object;
        pos = at + 6;
    }
    return out;
}

std::string Lexicon::object_from_phrase(std::string_view phrase) const {
    auto it = phrase_to_object_.find(std::string(phrase));
    if (it != phrase_to_object_.end())
        return it->second;
    std::size_t at = object_template_.find("{name}");
    if (at == std::string::npos)
        return {};
    std::string_view prefix = std::string_view(object_template_).substr(0, at);
    std::string_view suffix = std::string_view(object_template_).substr(at + 6);
    if (phrase.size() <= prefix.size() + suffix.size())
        return {};
    if (phrase.substr(0, prefix.size()) != prefix ||
        phrase.substr(phrase.size() - suffix.size()) != suffix)
        return {};
    std::string_view name = phrase.substr(prefix.size(), phrase.size() - prefix.size() - suffix.size());
    if (!is_raw_name(name))
        return {};
    // A name with a display phrase must be written with that phrase.
    if (objects_.count(std::string(name)))
        return {};
    return std::string(name);
}

const std::string &Lexicon::predicate_template(const std::string &predicate) const {
    auto it = predicates_.find(predicate);
    if (it == predicates_.end())
        throw MissingTemplate("no template for predicate '" + predicate + "'");
    return it->second;
}

const std::string &Lexicon::action_template(const std::string &action) const {
    auto it = actions_.find(action);
    if (it == actions_.end())
        throw MissingTemplate("no template for action '" + action + "'");
    return it->second;
}

void Lexicon::validate(const DomainDef &domain) const {
    for (const auto &p : domain.predicates) {
        const auto &tmpl = predicate_template(p.name);
        if (slot_count(split_template(tmpl)) != p.params.size())
            throw MissingTemplate("template for predicate '" + p.name + "' has wrong slot count");
    }
    for (const auto &a : domain.actions) {
        const auto &tmpl = action_template(a.name);
        if (slot_count(split_template(tmpl)) != a.params.size())
            throw MissingTemplate("template for action '" + a.name + "' has wrong slot count");
    }
}

std::string to_natural_language(const core::Atom &atom, const Lexicon &lex) {
    std::vector<std::string> values;
    for (const auto &arg : atom.args)
        values.push_back(lex.object_phrase(arg));
    return fill(lex.predicate_template(atom.predicate), values);
}

std::string to_natural_language(const ActionCall &action, const Lexicon &lex) {
    std::vector<std::string> values;
    for (const auto &arg : action.args)
        values.push_back(lex.object_phrase(arg));
    return fill(lex.action_template(action.name), values);
}

std::string to_natural_language(const core::GroundAction &action, const Lexicon &lex) {
    return to_natural_language(call_of(action), lex);
}

std::string to_natural_language(const core::State &state, const Lexicon &lex) {
    std::string out;
    for (const auto &atom : state) {
        if (!out.empty())
            out += ' ';
        out += to_natural_language(atom, lex);
        out += '.';
    }
    return out;
}

ParsedItem from_natural_language(std::string_view text, const Lexicon &lex) {
    std::string norm = normalize_text(text);
    while (!norm.empty() && (norm.back() == '.' || norm.back() == ' '))
        norm.pop_back();
    if (norm.empty())
        throw NoMatch("empty text");

    std::vector<ParsedItem> found;
    auto try_table = [&](const std::map<std::string, std::string> &table, bool is_action) {
        for (const auto &[name, tmpl] : table) {
            auto segs = split_template(tmpl);
            std::size_t max_slot = 0;
            for (const auto &s : segs)
                if (s.is_slot)
                    max_slot = std::max(max_slot, s.slot + 1);
            std::vector<std::optional<std::string>> slots(max_slot);
            std::vector<std::vector<std::string>> results;
            match_segments(segs, 0, norm, 0, slots, lex, results);
            for (auto &args : results) {
                if (is_action)
                    found.emplace_back(ActionCall{name, std::move(args)});
                else
                    found.emplace_back(core::Atom(name, std::move(args)));
            }
        }
    };
    try_table(lex.predicates(), false);
    try_table(lex.actions(), true);
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    if (found.empty())
        throw NoMatch("no template matches '" + norm + "'");
    if (found.size() > 1)
        throw AmbiguousMatch("'" + norm + "' matches " + std::to_string(found.size()) + " templates");
    return found.front();
}

core::Atom atom_from_natural_language(std::string_view text, const Lexicon &lex) {
    auto item = from_natural_language(text, lex);
    if (auto *atom = std::get_if<core::Atom>(&item))
        return *atom;
    throw NoMatch("'" + std::string(text) + "' describes an action, not a fact");
}

ActionCall action_from_natural_language(std::string_view text, const Lexicon &lex) {
    auto item = from_natural_language(text, lex);
    if (auto *call = std::get_if<ActionCall>(&item))
        return *call;
    throw NoMatch("'" + std::string(text) + "' describes a fact, not an action");
}

core::State state_from_natural_language(std::string_view text, const Lexicon &lex) {
    std::vector<core::Atom> atoms;
    std::string_view rest = text;
    std::size_t start = 0;
    while (start < rest.size()) {
        std::size_t dot = rest.find_first_of(".\n;", start);
        std::string sentence = normalize_text(rest.substr(start, dot == std::string::npos ? std::string::npos : dot - start));
        if (!sentence.empty())
            atoms.push_back(atom_from_natural_language(sentence, lex));
        if (dot == std::string::npos)
            break;
        start = dot + 1;
    }
    return core::State(std::move(atoms));
}

} // namespace noveltree::pddl
