#include "noveltree/pddl/printer.hpp"

#include <sstream>

namespace noveltree::pddl {
namespace {

// Groups consecutive names that share a type: "a b - block c - place".
std::string typed_list(const std::vector<TypedName> &names, bool typed) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i)
            out += ' ';
        out += names[i].name;
        bool last_of_group = i + 1 == names.size() || names[i + 1].type != names[i].type;
        if (typed && last_of_group && names[i].type != kRootType)
            out += " - " + names[i].type;
    }
    return out;
}

std::string schema_atom(const AtomSchema &a) {
    std::string out = "(" + a.predicate;
    for (const auto &t : a.terms)
        out += " " + t;
    return out + ")";
}

bool uses_types(const DomainDef &d) {
    for (const auto &r : d.requirements)
        if (r == ":typing")
            return true;
    return !d.types.empty();
}

} // namespace

std::string print_domain(const DomainDef &domain) {
    std::ostringstream os;
    bool typed = uses_types(domain);
    os << "(define (domain " << domain.name << ")\n";
    if (!domain.requirements.empty()) {
        os << "  (:requirements";
        for (const auto &r : domain.requirements)
            os << ' ' << r;
        os << ")\n";
    }
    if (!domain.types.empty()) {
        std::vector<TypedName> types;
        for (const auto &t : domain.types)
            types.push_back({t.name, t.parent});
        os << "  (:types " << typed_list(types, true) << ")\n";
    }
    os << "  (:predicates";
    for (const auto &p : domain.predicates) {
        os << "\n    (" << p.name;
        if (!p.params.empty())
            os << ' ' << typed_list(p.params, typed);
        os << ')';
    }
    os << ")\n";
    for (const auto &a : domain.actions) {
        os << "  (:action " << a.name << '\n';
        os << "    :parameters (" << typed_list(a.params, typed) << ")\n";
        os << "    :precondition (and";
        for (const auto &p : a.precondition)
            os << ' ' << schema_atom(p);
        os << ")\n";
        os << "    :effect (and";
        for (const auto &e : a.add_effects)
            os << ' ' << schema_atom(e);
        for (const auto &e : a.del_effects)
            os << " (not " << schema_atom(e) << ')';
        os << "))\n";
    }
    os << ")\n";
    return os.str();
}

std::string print_problem(const ProblemDef &problem) {
    std::ostringstream os;
    os << "(define (problem " << problem.name << ")\n";
    os << "  (:domain " << problem.domain << ")\n";
    bool typed = false;
    for (const auto &o : problem.objects)
        typed = typed || o.type != kRootType;
    os << "  (:objects " << typed_list(problem.objects, typed) << ")\n";
    os << "  (:init";
    for (const auto &a : problem.init)
        os << "\n    " << a.to_string();
    os << ")\n";
    os << "  (:goal (and";
    for (const auto &a : problem.goal)
        os << ' ' << a.to_string();
    os << ")))\n";
    return os.str();
}

} // namespace noveltree::pddl
