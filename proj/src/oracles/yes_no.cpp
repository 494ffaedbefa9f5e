#include "noveltree/oracles/yes_no.hpp"

#include <cctype>
#include <string>

namespace noveltree::oracles {

tot::YesNo parse_yes_no(std::string_view text) {
    std::string s;
    for (char c : text) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return tot::YesNo::unparseable;
    const auto last = s.find_last_not_of(" \t\r\n");
    s = s.substr(first, last - first + 1);

    std::size_t word_end = 0;
    while (word_end < s.size() && std::isalpha(static_cast<unsigned char>(s[word_end]))) ++word_end;
    const std::string word = s.substr(0, word_end);
    for (std::size_t i = word_end; i < s.size(); ++i)
        if (!std::ispunct(static_cast<unsigned char>(s[i]))) return tot::YesNo::unparseable;
    if (word == "yes") return tot::YesNo::yes;
    if (word == "no") return tot::YesNo::no;
    return tot::YesNo::unparseable;
}

} // namespace noveltree::oracles
