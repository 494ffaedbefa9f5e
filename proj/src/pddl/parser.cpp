#include "noveltree/pddl/parser.hpp"

#include "noveltree/errors.hpp"
#include "noveltree/pddl/sexpr.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace noveltree::pddl {

const PredicateDecl *DomainDef::find_predicate(const std::string &pred) const {
    for (const auto &p : predicates)
        if (p.name == pred)
            return &p;
    return nullptr;
}

const ActionSchema *DomainDef::find_action(const std::string &action) const {
    for (const auto &a : actions)
        if (a.name == action)
            return &a;
    return nullptr;
}

bool DomainDef::has_type(const std::string &type) const {
    if (type == kRootType)
        return true;
    return std::any_of(types.begin(), types.end(), [&](const TypeDecl &t) { return t.name == type; });
}

bool DomainDef::is_subtype(const std::string &type, const std::string &ancestor) const {
    std::string current = type;
    for (std::size_t guard = 0; guard <= types.size() + 1; ++guard) {
        if (current == ancestor)
            return true;
        if (current == kRootType)
            return false;
        auto it = std::find_if(types.begin(), types.end(),
                               [&](const TypeDecl &t) { return t.name == current; });
        if (it == types.end())
            return false;
        current = it->parent;
    }
    return false;
}

namespace {

[[noreturn]] void fail(const SExpr &at, const std::string &msg) {
    throw SyntaxError(msg, at.line, at.col);
}

const std::string &expect_symbol(const SExpr &e, const char *what) {
    if (!e.is_symbol())
        fail(e, std::string("expected ") + what);
    return e.symbol;
}

bool is_variable(const std::string &s) { return !s.empty() && s.front() == '?'; }

// "a b - t c" → [(a,t), (b,t), (c,object)]
std::vector<TypedName> parse_typed_list(const std::vector<SExpr> &items, std::size_t begin) {
    std::vector<TypedName> out;
    std::vector<std::string> pending;
    for (std::size_t i = begin; i < items.size(); ++i) {
        const SExpr &item = items[i];
        if (item.is_list) {
            if (item.is_form("either"))
                throw UnsupportedFeature("either-types");
            fail(item, "unexpected list in typed list");
        }
        if (item.symbol == "-") {
            if (i + 1 >= items.size())
                fail(item, "missing type after '-'");
            const SExpr &type = items[++i];
            if (type.is_form("either"))
                throw UnsupportedFeature("either-types");
            const std::string &tname = expect_symbol(type, "type name");
            if (pending.empty())
                fail(item, "type annotation without names");
            for (auto &n : pending)
                out.push_back({std::move(n), tname});
            pending.clear();
        } else {
            pending.push_back(item.symbol);
        }
    }
    for (auto &n : pending)
        out.push_back({std::move(n), kRootType});
    return out;
}

AtomSchema parse_atom_schema(const SExpr &e) {
    if (!e.is_list || e.items.empty())
        fail(e, "expected atom");
    const std::string &head = expect_symbol(e.items.front(), "predicate name");
    if (head == "=")
        throw UnsupportedFeature("equality");
    AtomSchema atom;
    atom.predicate = head;
    for (std::size_t i = 1; i < e.items.size(); ++i)
        atom.terms.push_back(expect_symbol(e.items[i], "term"));
    return atom;
}

void reject_connective(const SExpr &e, bool effect) {
    static const std::map<std::string, std::string> kUnsupported = {
        {"or", "disjunctive-preconditions"},  {"imply", "disjunctive-preconditions"},
        {"exists", "existential-preconditions"}, {"forall", "universal-preconditions"},
        {"when", "conditional-effects"},      {"increase", "numeric-fluents"},
        {"decrease", "numeric-fluents"},      {"assign", "numeric-fluents"},
        {"scale-up", "numeric-fluents"},      {"scale-down", "numeric-fluents"},
        {"preference", "preferences"}};
    if (!e.is_list || e.items.empty() || !e.items.front().is_symbol())
        return;
    const std::string &head = e.items.front().symbol;
    // "at" is also an ordinary predicate name; only "(at start ...)" style is temporal.
    if ((head == "at" || head == "over") && e.items.size() == 3 && e.items[1].is_symbol()) {
        const std::string &when = e.items[1].symbol;
        if (when == "start" || when == "end" || when == "all")
            throw UnsupportedFeature("durative-actions");
    }
    auto it = kUnsupported.find(head);
    if (it != kUnsupported.end())
        throw UnsupportedFeature(it->second);
    if (head == "forall" && effect)
        throw UnsupportedFeature("conditional-effects");
    if (head == "<" || head == ">" || head == "<=" || head == ">=")
        throw UnsupportedFeature("numeric-fluents");
}

// Flattens a conjunction of positive atoms.
void parse_condition(const SExpr &e, std::vector<AtomSchema> &out) {
    if (!e.is_list)
        fail(e, "expected condition");
    if (e.items.empty())
        return;
    reject_connective(e, false);
    if (e.is_form("and")) {
        for (std::size_t i = 1; i < e.items.size(); ++i)
            parse_condition(e.items[i], out);
        return;
    }
    if (e.is_form("not"))
        throw UnsupportedFeature("negative-preconditions");
    out.push_back(parse_atom_schema(e));
}

void parse_effect(const SExpr &e, std::vector<AtomSchema> &add, std::vector<AtomSchema> &del) {
    if (!e.is_list)
        fail(e, "expected effect");
    if (e.items.empty())
        return;
    reject_connective(e, true);
    if (e.is_form("and")) {
        for (std::size_t i = 1; i < e.items.size(); ++i)
            parse_effect(e.items[i], add, del);
        return;
    }
    if (e.is_form("not")) {
        if (e.items.size() != 2)
            fail(e, "malformed negated effect");
        reject_connective(e.items[1], true);
        del.push_back(parse_atom_schema(e.items[1]));
        return;
    }
    add.push_back(parse_atom_schema(e));
}

void check_requirements(const SExpr &section, std::vector<std::string> &out) {
    for (std::size_t i = 1; i < section.items.size(); ++i) {
        const std::string &req = expect_symbol(section.items[i], "requirement");
        if (req != ":strips" && req != ":typing")
            throw UnsupportedFeature(req.substr(req.front() == ':' ? 1 : 0));
        out.push_back(req);
    }
}

std::string parse_header(const SExpr &root, const char *kind) {
    if (!root.is_form("define"))
        fail(root, "expected (define ...)");
    if (root.items.size() < 2 || !root.items[1].is_form(kind) || root.items[1].items.size() != 2)
        fail(root, std::string("expected (") + kind + " <name>)");
    return expect_symbol(root.items[1].items[1], "name");
}

void check_atom_against(const DomainDef &domain, const AtomSchema &atom,
                        const std::map<std::string, std::string> &vars, const SExpr &at) {
    const PredicateDecl *decl = domain.find_predicate(atom.predicate);
    if (!decl)
        fail(at, "undeclared predicate '" + atom.predicate + "'");
    if (decl->params.size() != atom.terms.size())
        throw ArityError("predicate '" + atom.predicate + "' expects " +
                         std::to_string(decl->params.size()) + " arguments, got " +
                         std::to_string(atom.terms.size()));
    for (const auto &term : atom.terms) {
        if (!is_variable(term))
            throw UnsupportedFeature("constants");
        if (!vars.count(term))
            fail(at, "undeclared variable '" + term + "' in action");
    }
}

} // namespace

DomainDef parse_domain(std::string_view text) {
    SExpr root = parse_sexpr(text);
    DomainDef domain;
    domain.name = parse_header(root, "domain");
    for (std::size_t i = 2; i < root.items.size(); ++i) {
        const SExpr &section = root.items[i];
        if (!section.is_list || section.items.empty() || !section.items.front().is_symbol())
            fail(section, "expected domain section");
        const std::string &key = section.items.front().symbol;
        if (key == ":requirements") {
            check_requirements(section, domain.requirements);
        } else if (key == ":types") {
            for (auto &tn : parse_typed_list(section.items, 1))
                domain.types.push_back({tn.name, tn.type});
        } else if (key == ":predicates") {
            for (std::size_t j = 1; j < section.items.size(); ++j) {
                const SExpr &p = section.items[j];
                if (!p.is_list || p.items.empty())
                    fail(p, "expected predicate declaration");
                PredicateDecl decl;
                decl.name = expect_symbol(p.items.front(), "predicate name");
                decl.params = parse_typed_list(p.items, 1);
                domain.predicates.push_back(std::move(decl));
            }
        } else if (key == ":action") {
            ActionSchema action;
            if (section.items.size() < 2)
                fail(section, "action without name");
            action.name = expect_symbol(section.items[1], "action name");
            for (std::size_t j = 2; j < section.items.size(); ++j) {
                const std::string &field = expect_symbol(section.items[j], "action field");
                if (j + 1 >= section.items.size())
                    fail(section.items[j], "missing value for " + field);
                const SExpr &value = section.items[++j];
                if (field == ":parameters") {
                    if (!value.is_list)
                        fail(value, "expected parameter list");
                    action.params = parse_typed_list(value.items, 0);
                } else if (field == ":precondition") {
                    parse_condition(value, action.precondition);
                } else if (field == ":effect") {
                    parse_effect(value, action.add_effects, action.del_effects);
                } else {
                    fail(section.items[j - 1], "unknown action field " + field);
                }
            }
            domain.actions.push_back(std::move(action));
        } else if (key == ":constants") {
            throw UnsupportedFeature("constants");
        } else if (key == ":functions") {
            throw UnsupportedFeature("numeric-fluents");
        } else if (key == ":durative-action") {
            throw UnsupportedFeature("durative-actions");
        } else if (key == ":derived") {
            throw UnsupportedFeature("derived-predicates");
        } else {
            fail(section, "unknown domain section " + key);
        }
    }

    for (const auto &type : domain.types)
        if (!domain.has_type(type.parent))
            throw TypeMismatch("type '" + type.name + "' has undeclared parent '" + type.parent + "'");
    for (const auto &pred : domain.predicates)
        for (const auto &param : pred.params)
            if (!domain.has_type(param.type))
                throw TypeMismatch("predicate '" + pred.name + "' uses undeclared type '" + param.type + "'");
    for (std::size_t ai = 0; ai < domain.actions.size(); ++ai) {
        const auto &action = domain.actions[ai];
        std::map<std::string, std::string> vars;
        for (const auto &p : action.params) {
            if (!is_variable(p.name))
                throw SyntaxError("parameter '" + p.name + "' of action '" + action.name +
                                      "' is not a variable", root.line, root.col);
            if (!domain.has_type(p.type))
                throw TypeMismatch("action '" + action.name + "' uses undeclared type '" + p.type + "'");
            vars[p.name] = p.type;
        }
        const SExpr &at = root.items[std::min(root.items.size() - 1, ai + 2)];
        for (const auto *list : {&action.precondition, &action.add_effects, &action.del_effects})
            for (const auto &atom : *list)
                check_atom_against(domain, atom, vars, at);
    }
    return domain;
}

namespace {

std::vector<core::Atom> parse_ground_atoms(const SExpr &e, bool allow_and) {
    std::vector<core::Atom> out;
    if (!e.is_list)
        fail(e, "expected atom list");
    if (e.items.empty())
        return out;
    reject_connective(e, false);
    if (allow_and && e.is_form("and")) {
        for (std::size_t i = 1; i < e.items.size(); ++i) {
            auto sub = parse_ground_atoms(e.items[i], true);
            out.insert(out.end(), sub.begin(), sub.end());
        }
        return out;
    }
    if (e.is_form("not"))
        throw UnsupportedFeature("negative-goals");
    AtomSchema schema = parse_atom_schema(e);
    for (const auto &t : schema.terms)
        if (is_variable(t))
            fail(e, "variable in ground atom");
    out.emplace_back(schema.predicate, schema.terms);
    return out;
}

ProblemDef parse_problem_impl(std::string_view text, const DomainDef *domain) {
    SExpr root = parse_sexpr(text);
    ProblemDef problem;
    problem.name = parse_header(root, "problem");
    std::map<std::string, std::pair<std::size_t, const SExpr *>> arity;
    auto note_arity = [&](const core::Atom &a, const SExpr &at) {
        auto [it, inserted] = arity.emplace(a.predicate, std::make_pair(a.args.size(), &at));
        if (!inserted && it->second.first != a.args.size())
            throw ArityError("predicate '" + a.predicate + "' used with " +
                             std::to_string(a.args.size()) + " and " +
                             std::to_string(it->second.first) + " arguments (line " +
                             std::to_string(at.line) + ")");
    };
    for (std::size_t i = 2; i < root.items.size(); ++i) {
        const SExpr &section = root.items[i];
        if (!section.is_list || section.items.empty() || !section.items.front().is_symbol())
            fail(section, "expected problem section");
        const std::string &key = section.items.front().symbol;
        if (key == ":domain") {
            if (section.items.size() != 2)
                fail(section, "expected (:domain <name>)");
            problem.domain = expect_symbol(section.items[1], "domain name");
        } else if (key == ":requirements") {
            std::vector<std::string> ignored;
            check_requirements(section, ignored);
        } else if (key == ":objects") {
            problem.objects = parse_typed_list(section.items, 1);
        } else if (key == ":init") {
            for (std::size_t j = 1; j < section.items.size(); ++j) {
                const SExpr &a = section.items[j];
                if (a.is_form("="))
                    throw UnsupportedFeature("numeric-fluents");
                for (auto &atom : parse_ground_atoms(a, false)) {
                    note_arity(atom, a);
                    problem.init.push_back(std::move(atom));
                }
            }
        } else if (key == ":goal") {
            if (section.items.size() != 2)
                fail(section, "expected a single goal formula");
            for (auto &atom : parse_ground_atoms(section.items[1], true)) {
                note_arity(atom, section.items[1]);
                problem.goal.push_back(std::move(atom));
            }
        } else if (key == ":metric") {
            throw UnsupportedFeature("action-costs");
        } else {
            fail(section, "unknown problem section " + key);
        }
    }

    std::set<std::string> names;
    for (const auto &o : problem.objects)
        if (!names.insert(o.name).second)
            throw SyntaxError("object '" + o.name + "' declared twice", root.line, root.col);

    if (domain) {
        if (!problem.domain.empty() && problem.domain != domain->name)
            throw TypeMismatch("problem is for domain '" + problem.domain + "', not '" + domain->name + "'");
        std::map<std::string, std::string> type_of;
        for (const auto &o : problem.objects) {
            if (!domain->has_type(o.type))
                throw TypeMismatch("object '" + o.name + "' has undeclared type '" + o.type + "'");
            type_of[o.name] = o.type;
        }
        auto check = [&](const core::Atom &a) {
            const PredicateDecl *decl = domain->find_predicate(a.predicate);
            if (!decl)
                throw SyntaxError("undeclared predicate '" + a.predicate + "'", root.line, root.col);
            if (decl->params.size() != a.args.size())
                throw ArityError("predicate '" + a.predicate + "' expects " +
                                 std::to_string(decl->params.size()) + " arguments, got " +
                                 std::to_string(a.args.size()));
            for (std::size_t k = 0; k < a.args.size(); ++k) {
                auto it = type_of.find(a.args[k]);
                if (it == type_of.end())
                    throw TypeMismatch("undeclared object '" + a.args[k] + "' in " + a.to_string());
                if (!domain->is_subtype(it->second, decl->params[k].type))
                    throw TypeMismatch("object '" + a.args[k] + "' of type '" + it->second +
                                       "' does not fit " + a.to_string());
            }
        };
        for (const auto &a : problem.init) check(a);
        for (const auto &a : problem.goal) check(a);
    }
    return problem;
}

} // namespace

ProblemDef parse_problem(std::string_view text) {
    return parse_problem_impl(text, nullptr);
}

ProblemDef parse_problem(std::string_view text, const DomainDef &domain) {
    return parse_problem_impl(text, &domain);
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path &path, std::string_view content) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

DomainDef load_domain(const std::filesystem::path &path) {
    return parse_domain(read_file(path));
}

ProblemDef load_problem(const std::filesystem::path &path) {
    return parse_problem(read_file(path));
}

} // namespace noveltree::pddl
