#include "noveltree/domains/game24.hpp"

#include "noveltree/domains/random.hpp"
#include "noveltree/errors.hpp"
#include "noveltree/pddl/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

namespace noveltree::game24 {

std::string to_string(const Rational &q) {
    if (q.denominator() == 1) return std::to_string(q.numerator());
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

namespace {

long long parse_integer(std::string_view text, std::string_view whole) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw Error("not a rational number: '" + std::string(whole) + "'");
    return value;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace

Rational parse_rational(std::string_view text) {
    text = trim(text);
    std::string_view num = text;
    if (!num.empty() && num.front() == '+') num.remove_prefix(1);
    auto slash = num.find('/');
    if (slash == std::string_view::npos) return Rational(parse_integer(num, text));
    long long n = parse_integer(num.substr(0, slash), text);
    long long d = parse_integer(num.substr(slash + 1), text);
    if (d == 0) throw Error("zero denominator: '" + std::string(text) + "'");
    return Rational(n, d);
}

char symbol(Op op) {
    switch (op) {
    case Op::add: return '+';
    case Op::sub: return '-';
    case Op::mul: return '*';
    case Op::div: return '/';
    }
    return '?';
}

Rational evaluate(const Rational &y1, Op op, const Rational &y2) {
    switch (op) {
    case Op::add: return y1 + y2;
    case Op::sub: return y1 - y2;
    case Op::mul: return y1 * y2;
    case Op::div:
        if (y2.numerator() == 0) throw PreconditionViolation("division by zero");
        return y1 / y2;
    }
    return 0;
}

Game24State::Game24State(std::vector<Rational> remaining) : remaining_(std::move(remaining)) {
    std::sort(remaining_.begin(), remaining_.end());
}

Game24State Game24State::from_integers(const std::array<int, 4> &numbers) {
    std::vector<Rational> values;
    for (int n : numbers) values.emplace_back(n);
    return Game24State(std::move(values));
}

std::size_t Game24State::multiplicity(const Rational &q) const {
    auto range = std::equal_range(remaining_.begin(), remaining_.end(), q);
    return static_cast<std::size_t>(range.second - range.first);
}

std::string Game24State::to_string() const {
    std::string out;
    for (const auto &q : remaining_) {
        if (!out.empty()) out += ' ';
        out += game24::to_string(q);
    }
    return out;
}

Game24State parse_state(std::string_view text) {
    std::string cleaned(text);
    for (char &c : cleaned)
        if (c == ',' || c == '{' || c == '}' || c == '[' || c == ']') c = ' ';
    std::istringstream in(cleaned);
    std::vector<Rational> values;
    std::string token;
    while (in >> token) values.push_back(parse_rational(token));
    if (values.empty()) throw Error("empty Game of 24 state");
    return Game24State(std::move(values));
}

std::string Game24Action::to_string() const {
    return game24::to_string(y1) + " " + symbol(op) + " " + game24::to_string(y2);
}

Game24Action parse_action(std::string_view text) {
    std::string s(trim(text));
    // Normalize unicode operators to ASCII.
    const std::pair<std::string, char> unicode[] = {{"\xE2\x88\x92", '-'}, {"\xC3\x97", '*'}, {"\xC3\xB7", '/'},
                                                    {"\xC2\xB7", '*'}, {"\xE2\x8B\x85", '*'}};
    for (const auto &[from, to] : unicode) {
        for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from))
            s.replace(pos, from.size(), std::string(1, to));
    }
    // Drop a trailing "= result" if present.
    if (auto eq = s.find('='); eq != std::string::npos) s.resize(eq);

    std::istringstream in(s);
    std::vector<std::string> tokens;
    std::string tok;
    while (in >> tok) tokens.push_back(tok);

    auto op_of = [](const std::string &t) -> std::optional<Op> {
        if (t == "+") return Op::add;
        if (t == "-") return Op::sub;
        if (t == "*" || t == "x" || t == "X") return Op::mul;
        if (t == "/" || t == ":") return Op::div;
        return std::nullopt;
    };

    if (tokens.size() == 3) {
        if (auto op = op_of(tokens[1]))
            return Game24Action{parse_rational(tokens[0]), parse_rational(tokens[2]), *op};
    }
    if (tokens.size() == 1) {
        // Compact forms such as "4*6" or "10-4"; a leading sign belongs to y1.
        const std::string &t = tokens[0];
        for (std::size_t i = 1; i < t.size(); ++i) {
            char c = t[i];
            if (c == '+' || c == '-' || c == '*' || c == 'x') {
                if (auto op = op_of(std::string(1, c)))
                    return Game24Action{parse_rational(t.substr(0, i)), parse_rational(t.substr(i + 1)), *op};
            }
        }
        // "/" is ambiguous with fractions; only accept "a/b" between integers as division.
        auto slash = t.find('/');
        if (slash != std::string::npos && t.find('/', slash + 1) == std::string::npos)
            return Game24Action{parse_rational(t.substr(0, slash)), parse_rational(t.substr(slash + 1)), Op::div};
    }
    throw NoMatch("not a Game of 24 action: '" + std::string(text) + "'");
}

std::vector<Game24Action> game24_actions(const Game24State &state) {
    std::vector<Game24Action> out;
    if (state.count() <= 1) return out;
    const auto &values = state.remaining();
    std::vector<Rational> distinct = values;
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (const auto &y1 : distinct) {
        for (const auto &y2 : distinct) {
            if (y1 == y2 && state.multiplicity(y1) < 2) continue;
            for (Op op : kOps) {
                if (op == Op::div && y2.numerator() == 0) continue;
                out.push_back(Game24Action{y1, y2, op});
            }
        }
    }
    return out;
}

Game24State game24_apply(const Game24Action &action, const Game24State &state) {
    if (state.count() <= 1) throw PreconditionViolation("no action applies when one number remains");
    std::vector<Rational> rest = state.remaining();
    auto take = [&](const Rational &q) {
        auto it = std::lower_bound(rest.begin(), rest.end(), q);
        if (it == rest.end() || *it != q)
            throw PreconditionViolation("'" + action.to_string() + "' uses a number not in {" + state.to_string() + "}");
        rest.erase(it);
    };
    take(action.y1);
    take(action.y2);
    if (action.op == Op::div && action.y2.numerator() == 0) throw PreconditionViolation("division by zero");
    rest.push_back(evaluate(action.y1, action.op, action.y2));
    return Game24State(std::move(rest));
}

bool game24_goal(const Game24State &state) {
    return state.count() == 1 && state.remaining().front() == Rational(24);
}

std::vector<core::Atom> game24_features(const Game24State &state) {
    std::vector<core::Atom> atoms;
    const auto &values = state.remaining();
    for (std::size_t i = 0; i < values.size();) {
        std::size_t j = i;
        while (j < values.size() && values[j] == values[i]) ++j;
        std::string q = to_string(values[i]);
        atoms.emplace_back("has", std::vector<std::string>{q});
        for (std::size_t copy = 2; copy <= j - i; ++copy)
            atoms.emplace_back("dup", std::vector<std::string>{q, std::to_string(copy)});
        i = j;
    }
    atoms.emplace_back("count", std::vector<std::string>{std::to_string(state.count())});
    core::canonicalize(atoms);
    return atoms;
}

namespace {

bool solve_rec(const Game24State &state, std::vector<Game24Action> &plan, std::set<Game24State> &dead) {
    if (game24_goal(state)) return true;
    if (dead.count(state)) return false;
    for (const auto &a : game24_actions(state)) {
        plan.push_back(a);
        if (solve_rec(game24_apply(a, state), plan, dead)) return true;
        plan.pop_back();
    }
    dead.insert(state);
    return false;
}

} // namespace

std::optional<std::vector<Game24Action>> game24_solve(const Game24State &state) {
    std::vector<Game24Action> plan;
    std::set<Game24State> dead;
    if (solve_rec(state, plan, dead)) return plan;
    return std::nullopt;
}

std::vector<std::array<int, 4>> parse_instances(std::string_view text) {
    std::vector<std::array<int, 4>> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        for (char &c : line)
            if (c == ',') c = ' ';
        std::istringstream fields(line);
        std::vector<int> nums;
        int n;
        while (fields >> n) nums.push_back(n);
        if (!fields.eof()) throw SyntaxError("bad Game of 24 instance line", lineno, 1);
        if (nums.empty()) continue;
        if (nums.size() != 4) throw SyntaxError("expected four numbers", lineno, 1);
        std::array<int, 4> inst{nums[0], nums[1], nums[2], nums[3]};
        out.push_back(inst);
    }
    return out;
}

std::vector<std::array<int, 4>> load_instances(const std::filesystem::path &path) {
    return parse_instances(pddl::read_file(path));
}

std::string format_instances(const std::vector<std::array<int, 4>> &instances) {
    std::string out;
    for (const auto &inst : instances) {
        out += std::to_string(inst[0]) + " " + std::to_string(inst[1]) + " " + std::to_string(inst[2]) + " " +
               std::to_string(inst[3]) + "\n";
    }
    return out;
}

namespace {

const std::vector<std::array<int, 4>> &solvable_multisets() {
    static const std::vector<std::array<int, 4>> all = [] {
        std::vector<std::array<int, 4>> out;
        for (int a = 1; a <= 13; ++a)
            for (int b = a; b <= 13; ++b)
                for (int c = b; c <= 13; ++c)
                    for (int d = c; d <= 13; ++d) {
                        std::array<int, 4> inst{a, b, c, d};
                        if (game24_solve(Game24State::from_integers(inst))) out.push_back(inst);
                    }
        return out;
    }();
    return all;
}

} // namespace

std::vector<std::array<int, 4>> generate_instances(std::size_t count, std::uint64_t seed) {
    const auto &pool = solvable_multisets();
    if (count > pool.size())
        throw GeneratorExhausted("only " + std::to_string(pool.size()) + " distinct solvable puzzles exist");
    std::vector<std::array<int, 4>> shuffled = pool;
    Rng rng(seed);
    rng.shuffle(shuffled);
    shuffled.resize(count);
    return shuffled;
}

} // namespace noveltree::game24
