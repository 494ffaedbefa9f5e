#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace noveltree::pddl {

// One node of a parsed s-expression. Symbols are lower-cased on read.
struct SExpr {
    bool is_list = false;
    std::string symbol;
    std::vector<SExpr> items;
    std::size_t line = 0;
    std::size_t col = 0;

    bool is_symbol() const { return !is_list; }
    bool is_symbol(std::string_view s) const { return !is_list && symbol == s; }
    // True for a list whose head is the symbol `head`.
    bool is_form(std::string_view head) const {
        return is_list && !items.empty() && items.front().is_symbol(head);
    }
};

// Parses exactly one top-level expression; `;` starts a comment. Throws SyntaxError.
SExpr parse_sexpr(std::string_view text);

} // namespace noveltree::pddl
