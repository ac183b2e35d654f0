// Extended-alphabet symbols and ref-strings.
//
// A ref-string is a sequence over the alphabet of terminals, index brackets
// and number characters.  Text form is space-separated tokens:
//   a   letter
//   [i  opening bracket
//   ]i  closing bracket
//   #i  number character

#ifndef REWB_REF_STRING_HPP
#define REWB_REF_STRING_HPP

#include <compare>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rewb {

struct ExtSymbol {
    enum class Kind { letter, open, close, num };

    Kind kind;
    char letter = 0;  // letter kind only
    int index = 0;    // open/close/num kinds

    static ExtSymbol make_letter(char a) { return {Kind::letter, a, 0}; }
    static ExtSymbol make_open(int i) { return {Kind::open, 0, i}; }
    static ExtSymbol make_close(int i) { return {Kind::close, 0, i}; }
    static ExtSymbol make_num(int i) { return {Kind::num, 0, i}; }

    friend auto operator<=>(const ExtSymbol&, const ExtSymbol&) = default;
};

using RefString = std::vector<ExtSymbol>;

inline std::string to_string(const ExtSymbol& s) {
    switch (s.kind) {
        case ExtSymbol::Kind::letter: return std::string(1, s.letter);
        case ExtSymbol::Kind::open: return "[" + std::to_string(s.index);
        case ExtSymbol::Kind::close: return "]" + std::to_string(s.index);
        case ExtSymbol::Kind::num: return "#" + std::to_string(s.index);
    }
    return "?";
}

inline std::string to_string(const RefString& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += to_string(v[i]);
    }
    return out;
}

inline ExtSymbol parse_ext_symbol(const std::string& token) {
    if (token.empty()) throw std::runtime_error("empty ref-string token");
    char head = token[0];
    if (token.size() == 1 && head >= 'a' && head <= 'z') return ExtSymbol::make_letter(head);
    if (head == '[' || head == ']' || head == '#') {
        if (token.size() < 2) throw std::runtime_error("missing index in token '" + token + "'");
        int index = 0;
        for (std::size_t i = 1; i < token.size(); ++i) {
            if (token[i] < '0' || token[i] > '9')
                throw std::runtime_error("bad index in token '" + token + "'");
            index = index * 10 + (token[i] - '0');
        }
        if (index == 0) throw std::runtime_error("index 0 in token '" + token + "'");
        if (head == '[') return ExtSymbol::make_open(index);
        if (head == ']') return ExtSymbol::make_close(index);
        return ExtSymbol::make_num(index);
    }
    throw std::runtime_error("bad ref-string token '" + token + "'");
}

inline RefString parse_ref_string(const std::string& text) {
    RefString out;
    std::istringstream in(text);
    std::string token;
    while (in >> token) out.push_back(parse_ext_symbol(token));
    return out;
}

}  // namespace rewb

#endif  // REWB_REF_STRING_HPP
