#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace noveltree::core {

// A ground boolean fact. Ordered lexicographically on predicate, then args.
struct Atom {
    std::string predicate;
    std::vector<std::string> args;

    Atom() = default;
    Atom(std::string pred, std::vector<std::string> arguments = {});

    auto operator<=>(const Atom &) const = default;
    bool operator==(const Atom &) const = default;

    // "(on a b)"
    std::string to_string() const;
};

std::ostream &operator<<(std::ostream &os, const Atom &atom);

struct AtomHash {
    std::size_t operator()(const Atom &atom) const noexcept;
};

// Sorts and removes duplicates in place.
void canonicalize(std::vector<Atom> &atoms);

// Set of ground atoms kept in canonical order.
class State {
public:
    State() = default;
    State(std::vector<Atom> atoms);
    State(std::initializer_list<Atom> atoms);

    const std::vector<Atom> &atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }
    bool contains(const Atom &atom) const;
    // True iff every atom of `sorted_atoms` (canonical order) is in the state.
    bool contains_all(const std::vector<Atom> &sorted_atoms) const;

    void insert(const Atom &atom);
    void erase(const Atom &atom);

    auto begin() const { return atoms_.begin(); }
    auto end() const { return atoms_.end(); }

    auto operator<=>(const State &) const = default;
    bool operator==(const State &) const = default;

    std::string to_string() const;

private:
    std::vector<Atom> atoms_;
};

struct StateHash {
    std::size_t operator()(const State &state) const noexcept;
};

struct GroundAction {
    std::string name;
    std::vector<std::string> args;
    std::vector<Atom> preconditions;
    std::vector<Atom> add_effects;
    std::vector<Atom> del_effects;

    GroundAction() = default;
    // Canonicalizes the atom lists and enforces add ∩ del = ∅.
    GroundAction(std::string action_name, std::vector<std::string> arguments,
                 std::vector<Atom> pre, std::vector<Atom> add, std::vector<Atom> del);

    // "(unstack b a)"
    std::string label() const;

    // Canonical order is by (name, args).
    friend bool operator<(const GroundAction &a, const GroundAction &b) {
        if (a.name != b.name) return a.name < b.name;
        return a.args < b.args;
    }
    friend bool operator==(const GroundAction &a, const GroundAction &b) {
        return a.name == b.name && a.args == b.args;
    }
};

struct TypedObject {
    std::string name;
    std::string type;
    bool operator==(const TypedObject &) const = default;
};

struct GroundProblem {
    std::string name;
    std::string domain;
    std::vector<TypedObject> objects;
    State initial;
    std::vector<Atom> goal; // canonical order
    std::vector<GroundAction> actions; // canonical order, duplicate free
};

struct Plan {
    std::vector<GroundAction> steps;

    std::size_t size() const { return steps.size(); }
    bool empty() const { return steps.empty(); }
    // One action label per line.
    std::string to_string() const;
};

} // namespace noveltree::core
