#include "noveltree/core/types.hpp"

#include "noveltree/errors.hpp"

#include <algorithm>
#include <sstream>

namespace noveltree::core {

Atom::Atom(std::string pred, std::vector<std::string> arguments)
    : predicate(std::move(pred)), args(std::move(arguments)) {}

std::string Atom::to_string() const {
    std::string out = "(" + predicate;
    for (const auto &a : args) {
        out += ' ';
        out += a;
    }
    out += ')';
    return out;
}

std::ostream &operator<<(std::ostream &os, const Atom &atom) {
    return os << atom.to_string();
}

std::size_t AtomHash::operator()(const Atom &atom) const noexcept {
    std::size_t h = std::hash<std::string>{}(atom.predicate);
    for (const auto &a : atom.args)
        h ^= std::hash<std::string>{}(a) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

void canonicalize(std::vector<Atom> &atoms) {
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
}

State::State(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    canonicalize(atoms_);
}

State::State(std::initializer_list<Atom> atoms) : atoms_(atoms) {
    canonicalize(atoms_);
}

bool State::contains(const Atom &atom) const {
    return std::binary_search(atoms_.begin(), atoms_.end(), atom);
}

bool State::contains_all(const std::vector<Atom> &sorted_atoms) const {
    return std::includes(atoms_.begin(), atoms_.end(), sorted_atoms.begin(), sorted_atoms.end());
}

void State::insert(const Atom &atom) {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), atom);
    if (it == atoms_.end() || *it != atom)
        atoms_.insert(it, atom);
}

void State::erase(const Atom &atom) {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), atom);
    if (it != atoms_.end() && *it == atom)
        atoms_.erase(it);
}

std::string State::to_string() const {
    std::string out;
    for (const auto &a : atoms_) {
        if (!out.empty())
            out += ' ';
        out += a.to_string();
    }
    return out;
}

std::size_t StateHash::operator()(const State &state) const noexcept {
    std::size_t h = state.size();
    AtomHash ah;
    for (const auto &a : state)
        h ^= ah(a) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

GroundAction::GroundAction(std::string action_name, std::vector<std::string> arguments,
                           std::vector<Atom> pre, std::vector<Atom> add, std::vector<Atom> del)
    : name(std::move(action_name)), args(std::move(arguments)), preconditions(std::move(pre)),
      add_effects(std::move(add)), del_effects(std::move(del)) {
    canonicalize(preconditions);
    canonicalize(add_effects);
    canonicalize(del_effects);
    std::vector<Atom> overlap;
    std::set_intersection(add_effects.begin(), add_effects.end(), del_effects.begin(),
                          del_effects.end(), std::back_inserter(overlap));
    if (!overlap.empty())
        throw Error("action " + label() + " adds and deletes " + overlap.front().to_string());
}

std::string GroundAction::label() const {
    std::string out = "(" + name;
    for (const auto &a : args) {
        out += ' ';
        out += a;
    }
    out += ')';
    return out;
}

std::string Plan::to_string() const {
    std::ostringstream os;
    for (const auto &step : steps)
        os << step.label() << '\n';
    return os.str();
}

} // namespace noveltree::core
