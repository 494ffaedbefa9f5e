#pragma once

#include "noveltree/core/types.hpp"

#include <boost/rational.hpp>

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace noveltree::game24 {

using Rational = boost::rational<long long>;

// "24", "-3", "1/3"
std::string to_string(const Rational &q);
Rational parse_rational(std::string_view text);

enum class Op { add, sub, mul, div };

inline constexpr std::array<Op, 4> kOps = {Op::add, Op::sub, Op::mul, Op::div};

char symbol(Op op);
Rational evaluate(const Rational &y1, Op op, const Rational &y2);

// Multiset of remaining numbers, stored sorted; the count r is its size.
class Game24State {
public:
    Game24State() = default;
    explicit Game24State(std::vector<Rational> remaining);
    static Game24State from_integers(const std::array<int, 4> &numbers);

    const std::vector<Rational> &remaining() const { return remaining_; }
    std::size_t count() const { return remaining_.size(); }
    std::size_t multiplicity(const Rational &q) const;

    // "4 9 10 13"
    std::string to_string() const;

    friend bool operator==(const Game24State &a, const Game24State &b) { return a.remaining_ == b.remaining_; }
    friend bool operator<(const Game24State &a, const Game24State &b) { return a.remaining_ < b.remaining_; }

private:
    std::vector<Rational> remaining_;
};

// Parses whitespace/comma separated numbers, e.g. "4 9 10 13" or "1/3, 8".
Game24State parse_state(std::string_view text);

struct Game24Action {
    Rational y1;
    Rational y2;
    Op op = Op::add;

    // "10 - 4"
    std::string to_string() const;
    friend bool operator==(const Game24Action &, const Game24Action &) = default;
};

// Accepts "10 - 4", "4*6", "4 x 6", "12 / 3" and unicode −, ×, ÷.
Game24Action parse_action(std::string_view text);

// All (y1, y2, op) with y1, y2 from the multiset (y2 from the remainder after
// removing one y1), no division by zero, and only while r > 1. Ordered by
// (y1, y2, op); each distinct triple appears once.
std::vector<Game24Action> game24_actions(const Game24State &state);

// Throws PreconditionViolation if the action is not admissible.
Game24State game24_apply(const Game24Action &action, const Game24State &state);

bool game24_goal(const Game24State &state);

// has(q) for each distinct value, dup(q, i) for the i-th extra copy (i ≥ 2), count(r).
std::vector<core::Atom> game24_features(const Game24State &state);

// Depth-first exhaustive solver; the returned plan is the first found in action order.
std::optional<std::vector<Game24Action>> game24_solve(const Game24State &state);

std::vector<std::array<int, 4>> load_instances(const std::filesystem::path &path);
std::vector<std::array<int, 4>> parse_instances(std::string_view text);
std::string format_instances(const std::vector<std::array<int, 4>> &instances);

// Seeded rejection sampling of solvable puzzles with numbers in [1, 13].
std::vector<std::array<int, 4>> generate_instances(std::size_t count, std::uint64_t seed);

} // namespace noveltree::game24
