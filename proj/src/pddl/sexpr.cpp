#include "noveltree/pddl/sexpr.hpp"

#include "noveltree/errors.hpp"

#include <cctype>

namespace noveltree::pddl {
namespace {

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    SExpr read_top() {
        skip_space();
        if (at_end())
            throw SyntaxError("empty input", line_, col_);
        SExpr expr = read();
        skip_space();
        if (!at_end())
            throw SyntaxError("trailing input after expression", line_, col_);
        return expr;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }

    char peek() const { return text_[pos_]; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (!at_end()) {
            char c = peek();
            if (c == ';') {
                while (!at_end() && peek() != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    SExpr read() {
        skip_space();
        if (at_end())
            throw SyntaxError("unexpected end of input", line_, col_);
        SExpr node;
        node.line = line_;
        node.col = col_;
        char c = peek();
        if (c == ')')
            throw SyntaxError("unexpected ')'", line_, col_);
        if (c == '(') {
            node.is_list = true;
            advance();
            for (;;) {
                skip_space();
                if (at_end())
                    throw SyntaxError("unterminated list opened", node.line, node.col);
                if (peek() == ')') {
                    advance();
                    break;
                }
                node.items.push_back(read());
            }
            return node;
        }
        while (!at_end()) {
            char d = peek();
            if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d)))
                break;
            node.symbol += static_cast<char>(std::tolower(static_cast<unsigned char>(d)));
            advance();
        }
        return node;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

} // namespace

SExpr parse_sexpr(std::string_view text) {
    return Reader(text).read_top();
}

} // namespace noveltree::pddl
