#pragma once

#include "noveltree/core/types.hpp"
#include "noveltree/pddl/lexicon.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace noveltree::pddl {

enum class Style { pddl, natural_language };

const char *to_string(Style style);
Style style_from_string(std::string_view name);

// Renders and parses states/actions in one prompting style. The lexicon is
// only consulted in natural-language style and must outlive the codec.
class TextCodec {
public:
    TextCodec(const Lexicon &lexicon, Style style) : lex_(&lexicon), style_(style) {}

    Style style() const { return style_; }
    const Lexicon &lexicon() const { return *lex_; }

    std::string render_state(const core::State &state) const;
    std::string render_atoms(const std::vector<core::Atom> &atoms) const;
    std::string render_action(const ActionCall &action) const;
    std::string render_action(const core::GroundAction &action) const { return render_action(call_of(action)); }
    // One action per line.
    std::string render_actions(const std::vector<ActionCall> &actions) const;

    core::State parse_state(std::string_view text) const;
    ActionCall parse_action(std::string_view text) const;
    // Non-empty lines; a line that does not parse throws NoMatch.
    std::vector<ActionCall> parse_action_lines(std::string_view text) const;

private:
    const Lexicon *lex_;
    Style style_;
};

// Every parenthesized group "(head arg ...)" in the text, in order.
std::vector<std::vector<std::string>> extract_paren_groups(std::string_view text);

} // namespace noveltree::pddl
