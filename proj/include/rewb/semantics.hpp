// Ground-truth semantics for ref-strings: the bracket-erasing projection,
// the fetching function, pre-dereferencing, dereferencing, the memory-cell
// projection, the open-cell map, the matching predicate, and exact bounded
// enumeration of a ref-language.

#ifndef REWB_SEMANTICS_HPP
#define REWB_SEMANTICS_HPP

#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rewb/ext_regex.hpp"
#include "rewb/ref_string.hpp"
#include "rewb/syntax.hpp"

namespace rewb {

// Bracket-erasing projection.  Defined on number-free strings only.
inline std::string project_letters(const RefString& v) {
    std::string out;
    for (const ExtSymbol& s : v) {
        if (s.kind == ExtSymbol::Kind::letter) out += s.letter;
        else if (s.kind == ExtSymbol::Kind::num)
            throw std::logic_error("projection applied to a string with number characters");
    }
    return out;
}

// The fetching function: the letter projection of the content of the
// rightmost (possibly unclosed) i-bracket pair, or the empty word if no
// opening bracket occurs.  The argument must be number-free.
inline std::string fetch(int i, const RefString& v) {
    std::ptrdiff_t open_pos = -1;
    for (std::ptrdiff_t p = static_cast<std::ptrdiff_t>(v.size()) - 1; p >= 0; --p) {
        const ExtSymbol& s = v[static_cast<std::size_t>(p)];
        if (s.kind == ExtSymbol::Kind::num)
            throw std::logic_error("fetch applied to a string with number characters");
        if (s.kind == ExtSymbol::Kind::open && s.index == i && open_pos < 0) open_pos = p;
    }
    if (open_pos < 0) return "";
    std::string out;
    for (std::size_t p = static_cast<std::size_t>(open_pos) + 1; p < v.size(); ++p) {
        const ExtSymbol& s = v[p];
        if (s.kind == ExtSymbol::Kind::close && s.index == i) break;
        if (s.kind == ExtSymbol::Kind::letter) out += s.letter;
    }
    return out;
}

// Left-to-right replacement of each number character by the fetch of the
// already-dereferenced prefix.  The result is number-free.
inline RefString deref_pre(const RefString& v) {
    RefString out;
    out.reserve(v.size());
    for (const ExtSymbol& s : v) {
        if (s.kind == ExtSymbol::Kind::num) {
            for (char a : fetch(s.index, out)) out.push_back(ExtSymbol::make_letter(a));
        } else {
            out.push_back(s);
        }
    }
    return out;
}

inline std::string deref(const RefString& v) { return project_letters(deref_pre(v)); }

// Content of memory cell i after processing v.
inline std::string mem(int i, const RefString& v) { return fetch(i, deref_pre(v)); }

inline std::set<int> open_step(std::set<int> open, const ExtSymbol& s) {
    if (s.kind == ExtSymbol::Kind::open) open.insert(s.index);
    else if (s.kind == ExtSymbol::Kind::close) open.erase(s.index);
    return open;
}

inline std::set<int> open_set(const RefString& v) {
    std::set<int> open;
    for (const ExtSymbol& s : v) open = open_step(std::move(open), s);
    return open;
}

// A string is matching when every number character that is preceded by a
// same-indexed opening bracket has a same-indexed closing bracket in between.
inline bool is_matching(const RefString& v) {
    for (std::size_t p = 0; p < v.size(); ++p) {
        if (v[p].kind != ExtSymbol::Kind::num) continue;
        int i = v[p].index;
        std::ptrdiff_t open_pos = -1;
        for (std::ptrdiff_t q = static_cast<std::ptrdiff_t>(p) - 1; q >= 0; --q) {
            const ExtSymbol& s = v[static_cast<std::size_t>(q)];
            if (s.kind == ExtSymbol::Kind::open && s.index == i) { open_pos = q; break; }
        }
        if (open_pos < 0) continue;
        bool closed = false;
        for (std::size_t q = static_cast<std::size_t>(open_pos) + 1; q < p; ++q) {
            const ExtSymbol& s = v[q];
            if (s.kind == ExtSymbol::Kind::close && s.index == i) { closed = true; break; }
        }
        if (!closed) return false;
    }
    return true;
}

namespace detail {

inline std::size_t letter_count(const RefString& v) {
    std::size_t n = 0;
    for (const ExtSymbol& s : v)
        if (s.kind == ExtSymbol::Kind::letter) ++n;
    return n;
}

// Exact bounded enumeration of the language of an extended-alphabet regex.
// letter_cap additionally discards strings with more than letter_cap letters;
// pass SIZE_MAX for plain length-bounded enumeration.
inline std::set<RefString> enumerate_regex(const ExtRegex& e, std::size_t max_len,
                                           std::size_t letter_cap) {
    switch (e.kind) {
        case ExtRegex::Kind::symbol: {
            std::set<RefString> out;
            if (max_len >= 1 &&
                (e.symbol.kind != ExtSymbol::Kind::letter || letter_cap >= 1))
                out.insert(RefString{e.symbol});
            return out;
        }
        case ExtRegex::Kind::epsilon:
            return {RefString{}};
        case ExtRegex::Kind::alt: {
            std::set<RefString> out = enumerate_regex(*e.left, max_len, letter_cap);
            std::set<RefString> r = enumerate_regex(*e.right, max_len, letter_cap);
            out.insert(r.begin(), r.end());
            return out;
        }
        case ExtRegex::Kind::concat: {
            std::set<RefString> ls = enumerate_regex(*e.left, max_len, letter_cap);
            std::set<RefString> rs = enumerate_regex(*e.right, max_len, letter_cap);
            std::set<RefString> out;
            for (const RefString& l : ls) {
                std::size_t ll = letter_count(l);
                for (const RefString& r : rs) {
                    if (l.size() + r.size() > max_len) continue;
                    if (ll + letter_count(r) > letter_cap) continue;
                    RefString cat = l;
                    cat.insert(cat.end(), r.begin(), r.end());
                    out.insert(std::move(cat));
                }
            }
            return out;
        }
        case ExtRegex::Kind::star: {
            std::set<RefString> body = enumerate_regex(*e.left, max_len, letter_cap);
            std::set<RefString> out{RefString{}};
            std::set<RefString> frontier = out;
            while (!frontier.empty()) {
                std::set<RefString> next;
                for (const RefString& l : frontier) {
                    std::size_t ll = letter_count(l);
                    for (const RefString& r : body) {
                        if (r.empty()) continue;
                        if (l.size() + r.size() > max_len) continue;
                        if (ll + letter_count(r) > letter_cap) continue;
                        RefString cat = l;
                        cat.insert(cat.end(), r.begin(), r.end());
                        if (!out.count(cat)) next.insert(std::move(cat));
                    }
                }
                for (const RefString& s : next) out.insert(s);
                frontier = std::move(next);
            }
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace detail

// Exactly the ref-language members of length at most max_len.
inline std::set<RefString> ref_enumerate(const Rewb& r, std::size_t max_len) {
    return detail::enumerate_regex(*to_ext_regex(r), max_len,
                                   std::numeric_limits<std::size_t>::max());
}

inline std::set<RefString> ref_enumerate(const RewbPtr& r, std::size_t max_len) {
    return ref_enumerate(*r, max_len);
}

}  // namespace rewb

#endif  // REWB_SEMANTICS_HPP
