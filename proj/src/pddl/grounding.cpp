#include "noveltree/pddl/grounding.hpp"

#include "noveltree/errors.hpp"
#include "noveltree/pddl/parser.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace noveltree::pddl {
namespace {

core::Atom instantiate(const AtomSchema &schema, const std::map<std::string, std::string> &binding) {
    core::Atom atom;
    atom.predicate = schema.predicate;
    atom.args.reserve(schema.terms.size());
    for (const auto &t : schema.terms)
        atom.args.push_back(binding.at(t));
    return atom;
}

void check_atoms(const DomainDef &domain, const std::map<std::string, std::string> &type_of,
                 const std::vector<core::Atom> &atoms, const char *where) {
    for (const auto &a : atoms) {
        const PredicateDecl *decl = domain.find_predicate(a.predicate);
        if (!decl)
            throw TypeMismatch(std::string(where) + " uses undeclared predicate " + a.to_string());
        if (decl->params.size() != a.args.size())
            throw ArityError(std::string(where) + " atom " + a.to_string() + " has wrong arity");
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            auto it = type_of.find(a.args[i]);
            if (it == type_of.end())
                throw TypeMismatch(std::string(where) + " atom " + a.to_string() +
                                   " uses undeclared object '" + a.args[i] + "'");
            if (!domain.is_subtype(it->second, decl->params[i].type))
                throw TypeMismatch(std::string(where) + " atom " + a.to_string() + ": '" + a.args[i] +
                                   "' is not a " + decl->params[i].type);
        }
    }
}

} // namespace

core::GroundProblem ground(const DomainDef &domain, const ProblemDef &problem) {
    if (!problem.domain.empty() && problem.domain != domain.name)
        throw TypeMismatch("problem '" + problem.name + "' targets domain '" + problem.domain +
                           "', not '" + domain.name + "'");

    core::GroundProblem out;
    out.name = problem.name;
    out.domain = domain.name;
    std::map<std::string, std::string> type_of;
    for (const auto &o : problem.objects) {
        if (!domain.has_type(o.type))
            throw TypeMismatch("object '" + o.name + "' has undeclared type '" + o.type + "'");
        type_of[o.name] = o.type;
        out.objects.push_back({o.name, o.type});
    }
    check_atoms(domain, type_of, problem.init, "init");
    check_atoms(domain, type_of, problem.goal, "goal");
    out.initial = core::State(problem.init);
    out.goal = problem.goal;
    core::canonicalize(out.goal);

    std::vector<std::string> object_names;
    for (const auto &o : problem.objects)
        object_names.push_back(o.name);
    std::sort(object_names.begin(), object_names.end());

    for (const auto &schema : domain.actions) {
        std::vector<std::vector<std::string>> candidates;
        for (const auto &param : schema.params) {
            std::vector<std::string> fits;
            for (const auto &name : object_names)
                if (domain.is_subtype(type_of.at(name), param.type))
                    fits.push_back(name);
            candidates.push_back(std::move(fits));
        }
        std::vector<std::string> chosen;
        std::set<std::string> used;
        std::map<std::string, std::string> binding;
        // Depth-first over parameter positions; objects are distinct per action.
        auto recurse = [&](auto &self, std::size_t pos) -> void {
            if (pos == schema.params.size()) {
                std::vector<core::Atom> pre, add, del;
                for (const auto &a : schema.precondition) pre.push_back(instantiate(a, binding));
                for (const auto &a : schema.add_effects) add.push_back(instantiate(a, binding));
                for (const auto &a : schema.del_effects) del.push_back(instantiate(a, binding));
                // STRIPS semantics apply delete before add, so an atom on both sides stays.
                core::canonicalize(add);
                std::erase_if(del, [&](const core::Atom &d) {
                    return std::binary_search(add.begin(), add.end(), d);
                });
                out.actions.emplace_back(schema.name, chosen, std::move(pre), std::move(add), std::move(del));
                return;
            }
            for (const auto &obj : candidates[pos]) {
                if (used.count(obj))
                    continue;
                used.insert(obj);
                chosen.push_back(obj);
                binding[schema.params[pos].name] = obj;
                self(self, pos + 1);
                chosen.pop_back();
                used.erase(obj);
            }
        };
        recurse(recurse, 0);
    }
    std::sort(out.actions.begin(), out.actions.end());
    out.actions.erase(std::unique(out.actions.begin(), out.actions.end()), out.actions.end());
    return out;
}

} // namespace noveltree::pddl
