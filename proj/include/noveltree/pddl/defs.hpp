#pragma once

#include "noveltree/core/types.hpp"

#include <string>
#include <vector>

namespace noveltree::pddl {

inline constexpr const char *kRootType = "object";

struct TypedName {
    std::string name;
    std::string type = kRootType;
    bool operator==(const TypedName &) const = default;
};

struct TypeDecl {
    std::string name;
    std::string parent = kRootType;
    bool operator==(const TypeDecl &) const = default;
};

struct PredicateDecl {
    std::string name;
    std::vector<TypedName> params;
    bool operator==(const PredicateDecl &) const = default;
};

// Atom whose terms are either `?variables` or object names.
struct AtomSchema {
    std::string predicate;
    std::vector<std::string> terms;
    bool operator==(const AtomSchema &) const = default;
};

struct ActionSchema {
    std::string name;
    std::vector<TypedName> params;
    std::vector<AtomSchema> precondition;
    std::vector<AtomSchema> add_effects;
    std::vector<AtomSchema> del_effects;
    bool operator==(const ActionSchema &) const = default;
};

struct DomainDef {
    std::string name;
    std::vector<std::string> requirements;
    std::vector<TypeDecl> types;
    std::vector<PredicateDecl> predicates;
    std::vector<ActionSchema> actions;
    bool operator==(const DomainDef &) const = default;

    const PredicateDecl *find_predicate(const std::string &pred) const;
    const ActionSchema *find_action(const std::string &action) const;
    bool has_type(const std::string &type) const;
    // `type` equals `ancestor` or descends from it.
    bool is_subtype(const std::string &type, const std::string &ancestor) const;
};

struct ProblemDef {
    std::string name;
    std::string domain;
    std::vector<TypedName> objects;
    std::vector<core::Atom> init;
    std::vector<core::Atom> goal;
    bool operator==(const ProblemDef &) const = default;
};

} // namespace noveltree::pddl
