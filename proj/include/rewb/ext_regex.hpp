// The regular expression over the extended alphabet whose language is the
// ref-language of a backreference expression: captures become bracket pairs
// and references become number characters.

#ifndef REWB_EXT_REGEX_HPP
#define REWB_EXT_REGEX_HPP

#include <memory>

#include "rewb/ref_string.hpp"
#include "rewb/syntax.hpp"

namespace rewb {

struct ExtRegex;
using ExtRegexPtr = std::shared_ptr<const ExtRegex>;

struct ExtRegex {
    enum class Kind { symbol, epsilon, concat, alt, star };

    Kind kind;
    ExtSymbol symbol{};  // symbol kind only
    ExtRegexPtr left, right;

    static ExtRegexPtr make_symbol(ExtSymbol s) {
        return std::make_shared<ExtRegex>(ExtRegex{Kind::symbol, s, nullptr, nullptr});
    }
    static ExtRegexPtr make_epsilon() {
        return std::make_shared<ExtRegex>(ExtRegex{Kind::epsilon, {}, nullptr, nullptr});
    }
    static ExtRegexPtr make_concat(ExtRegexPtr l, ExtRegexPtr r) {
        return std::make_shared<ExtRegex>(ExtRegex{Kind::concat, {}, std::move(l), std::move(r)});
    }
    static ExtRegexPtr make_alt(ExtRegexPtr l, ExtRegexPtr r) {
        return std::make_shared<ExtRegex>(ExtRegex{Kind::alt, {}, std::move(l), std::move(r)});
    }
    static ExtRegexPtr make_star(ExtRegexPtr body) {
        return std::make_shared<ExtRegex>(ExtRegex{Kind::star, {}, std::move(body), nullptr});
    }
};

inline ExtRegexPtr to_ext_regex(const Rewb& r) {
    switch (r.kind) {
        case Rewb::Kind::terminal:
            return ExtRegex::make_symbol(ExtSymbol::make_letter(r.letter));
        case Rewb::Kind::epsilon:
            return ExtRegex::make_epsilon();
        case Rewb::Kind::reference:
            return ExtRegex::make_symbol(ExtSymbol::make_num(r.index));
        case Rewb::Kind::concat:
            return ExtRegex::make_concat(to_ext_regex(*r.left), to_ext_regex(*r.right));
        case Rewb::Kind::alt:
            return ExtRegex::make_alt(to_ext_regex(*r.left), to_ext_regex(*r.right));
        case Rewb::Kind::star:
            return ExtRegex::make_star(to_ext_regex(*r.left));
        case Rewb::Kind::group:
            return ExtRegex::make_concat(
                ExtRegex::make_symbol(ExtSymbol::make_open(r.index)),
                ExtRegex::make_concat(to_ext_regex(*r.left),
                                      ExtRegex::make_symbol(ExtSymbol::make_close(r.index))));
    }
    throw std::logic_error("unreachable");
}

inline ExtRegexPtr to_ext_regex(const RewbPtr& r) { return to_ext_regex(*r); }

}  // namespace rewb

#endif  // REWB_EXT_REGEX_HPP
