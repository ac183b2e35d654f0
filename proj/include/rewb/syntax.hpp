// Regular expressions with backreferences: AST, concrete syntax, validation.
//
// Concrete syntax:
//   terminal      [a-z]
//   epsilon       ~
//   reference     \i          (decimal i >= 1)
//   capture       (_i ... )_i (indices must match)
//   grouping      ( ... )
//   star          postfix *
//   alternation   infix +
//   concatenation juxtaposition
// Whitespace is ignored.  Precedence: star > concatenation > +.

#ifndef REWB_SYNTAX_HPP
#define REWB_SYNTAX_HPP

#include <algorithm>
#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace rewb {

struct Rewb;
using RewbPtr = std::shared_ptr<const Rewb>;

struct Rewb {
    enum class Kind { terminal, epsilon, reference, concat, alt, star, group };

    Kind kind;
    char letter = 0;   // terminal
    int index = 0;     // reference / group
    RewbPtr left;      // concat/alt left child; star/group body
    RewbPtr right;     // concat/alt right child

    static RewbPtr make_terminal(char a) {
        return std::make_shared<Rewb>(Rewb{Kind::terminal, a, 0, nullptr, nullptr});
    }
    static RewbPtr make_epsilon() {
        return std::make_shared<Rewb>(Rewb{Kind::epsilon, 0, 0, nullptr, nullptr});
    }
    static RewbPtr make_reference(int i) {
        return std::make_shared<Rewb>(Rewb{Kind::reference, 0, i, nullptr, nullptr});
    }
    static RewbPtr make_concat(RewbPtr l, RewbPtr r) {
        return std::make_shared<Rewb>(Rewb{Kind::concat, 0, 0, std::move(l), std::move(r)});
    }
    static RewbPtr make_alt(RewbPtr l, RewbPtr r) {
        return std::make_shared<Rewb>(Rewb{Kind::alt, 0, 0, std::move(l), std::move(r)});
    }
    static RewbPtr make_star(RewbPtr body) {
        return std::make_shared<Rewb>(Rewb{Kind::star, 0, 0, std::move(body), nullptr});
    }
    static RewbPtr make_group(int i, RewbPtr body) {
        return std::make_shared<Rewb>(Rewb{Kind::group, 0, i, std::move(body), nullptr});
    }
};

inline bool structurally_equal(const Rewb& a, const Rewb& b) {
    if (a.kind != b.kind || a.letter != b.letter || a.index != b.index) return false;
    if (static_cast<bool>(a.left) != static_cast<bool>(b.left)) return false;
    if (static_cast<bool>(a.right) != static_cast<bool>(b.right)) return false;
    if (a.left && !structurally_equal(*a.left, *b.left)) return false;
    if (a.right && !structurally_equal(*a.right, *b.right)) return false;
    return true;
}

inline bool structurally_equal(const RewbPtr& a, const RewbPtr& b) {
    return structurally_equal(*a, *b);
}

class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t position)
        : std::runtime_error(message + " (at position " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

namespace detail {

class RewbParser {
public:
    explicit RewbParser(std::string_view text) : text_(text) {}

    RewbPtr parse() {
        RewbPtr r = parse_alt();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return r;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                       text_[pos_] == '\n' || text_[pos_] == '\r'))
            ++pos_;
    }

    bool at_end() { skip_ws(); return pos_ == text_.size(); }
    char peek() { skip_ws(); return pos_ < text_.size() ? text_[pos_] : '\0'; }

    int read_index() {
        skip_ws();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            fail("expected a decimal index");
        std::size_t start = pos_;
        long value = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            value = value * 10 + (text_[pos_] - '0');
            if (value > 1000000) { pos_ = start; fail("index out of range"); }
            ++pos_;
        }
        if (value == 0) { pos_ = start; fail("index 0 is not allowed"); }
        return static_cast<int>(value);
    }

    // alt := cat ('+' cat)*
    RewbPtr parse_alt() {
        RewbPtr r = parse_cat();
        while (peek() == '+') {
            ++pos_;
            r = Rewb::make_alt(std::move(r), parse_cat());
        }
        return r;
    }

    // cat := star+  (left-associative)
    RewbPtr parse_cat() {
        RewbPtr r = parse_star();
        while (starts_atom()) r = Rewb::make_concat(std::move(r), parse_star());
        return r;
    }

    bool starts_atom() {
        char c = peek();
        return (c >= 'a' && c <= 'z') || c == '~' || c == '\\' || c == '(';
    }

    RewbPtr parse_star() {
        RewbPtr r = parse_atom();
        while (peek() == '*') {
            ++pos_;
            r = Rewb::make_star(std::move(r));
        }
        return r;
    }

    RewbPtr parse_atom() {
        char c = peek();
        if (c >= 'a' && c <= 'z') {
            ++pos_;
            return Rewb::make_terminal(c);
        }
        if (c == '~') {
            ++pos_;
            return Rewb::make_epsilon();
        }
        if (c == '\\') {
            ++pos_;
            return Rewb::make_reference(read_index());
        }
        if (c == '(') {
            ++pos_;
            if (pos_ < text_.size() && text_[pos_] == '_') {
                ++pos_;
                int open_index = read_index();
                RewbPtr body = parse_alt();
                expect_group_close(open_index);
                return Rewb::make_group(open_index, std::move(body));
            }
            RewbPtr body = parse_alt();
            if (peek() != ')') fail("expected ')'");
            ++pos_;
            return body;
        }
        if (c == '\0') fail("unexpected end of input");
        fail(std::string("unexpected character '") + c + "'");
    }

    void expect_group_close(int open_index) {
        if (peek() != ')') fail("expected ')_" + std::to_string(open_index) + "'");
        ++pos_;
        if (pos_ >= text_.size() || text_[pos_] != '_') fail("expected '_' after ')' closing a capture");
        ++pos_;
        int close_index = read_index();
        if (close_index != open_index)
            fail("capture index mismatch: (_" + std::to_string(open_index) + " closed by )_" +
                 std::to_string(close_index));
    }
};

}  // namespace detail

inline RewbPtr parse(std::string_view text) { return detail::RewbParser(text).parse(); }

namespace detail {

inline int precedence_of(const Rewb& r) {
    switch (r.kind) {
        case Rewb::Kind::alt: return 0;
        case Rewb::Kind::concat: return 1;
        default: return 2;  // star binds its body as an atom; atoms are maximal
    }
}

inline void print_to(const Rewb& r, std::string& out) {
    auto child = [&out](const Rewb& c, int min_prec) {
        if (precedence_of(c) < min_prec) {
            out += '(';
            print_to(c, out);
            out += ')';
        } else {
            print_to(c, out);
        }
    };
    switch (r.kind) {
        case Rewb::Kind::terminal: out += r.letter; break;
        case Rewb::Kind::epsilon: out += '~'; break;
        case Rewb::Kind::reference: out += '\\'; out += std::to_string(r.index); break;
        case Rewb::Kind::concat: child(*r.left, 1); child(*r.right, 2); break;
        case Rewb::Kind::alt: child(*r.left, 0); out += '+'; child(*r.right, 1); break;
        case Rewb::Kind::star:
            // a starred star needs explicit grouping to round-trip
            if (r.left->kind == Rewb::Kind::star) { out += '('; print_to(*r.left, out); out += ')'; }
            else child(*r.left, 2);
            out += '*';
            break;
        case Rewb::Kind::group:
            out += "(_";
            out += std::to_string(r.index);
            print_to(*r.left, out);
            out += ")_";
            out += std::to_string(r.index);
            break;
    }
}

}  // namespace detail

inline std::string to_string(const Rewb& r) {
    std::string out;
    detail::print_to(r, out);
    return out;
}

inline std::string to_string(const RewbPtr& r) { return to_string(*r); }

// A violation of the capture side condition: a capture body may contain
// neither a same-indexed capture nor a same-indexed reference.
struct Violation {
    std::string path;    // slash-separated child steps from the root
    int index = 0;       // the offending capture/reference index
    std::string reason;  // "nested capture" or "captured self-reference"
};

namespace detail {

inline void validate_walk(const Rewb& r, std::set<int>& enclosing, std::string& path,
                          std::vector<Violation>& out) {
    auto descend = [&](const Rewb& child, const char* step) {
        std::size_t mark = path.size();
        path += '/';
        path += step;
        validate_walk(child, enclosing, path, out);
        path.resize(mark);
    };
    switch (r.kind) {
        case Rewb::Kind::terminal:
        case Rewb::Kind::epsilon:
            break;
        case Rewb::Kind::reference:
            if (enclosing.count(r.index))
                out.push_back({path.empty() ? "/" : path, r.index, "captured self-reference"});
            break;
        case Rewb::Kind::concat:
        case Rewb::Kind::alt:
            descend(*r.left, "L");
            descend(*r.right, "R");
            break;
        case Rewb::Kind::star:
            descend(*r.left, "B");
            break;
        case Rewb::Kind::group: {
            if (enclosing.count(r.index)) {
                out.push_back({path.empty() ? "/" : path, r.index, "nested capture"});
            }
            bool inserted = enclosing.insert(r.index).second;
            descend(*r.left, "B");
            if (inserted) enclosing.erase(r.index);
            break;
        }
    }
}

}  // namespace detail

inline std::vector<Violation> validate(const Rewb& r) {
    std::vector<Violation> out;
    std::set<int> enclosing;
    std::string path;
    detail::validate_walk(r, enclosing, path, out);
    return out;
}

inline std::vector<Violation> validate(const RewbPtr& r) { return validate(*r); }

inline bool is_valid(const Rewb& r) { return validate(r).empty(); }

// Largest capture/reference index occurring anywhere; 0 when there is none.
inline int max_group_index(const Rewb& r) {
    int m = 0;
    if (r.kind == Rewb::Kind::reference || r.kind == Rewb::Kind::group) m = r.index;
    if (r.left) m = std::max(m, max_group_index(*r.left));
    if (r.right) m = std::max(m, max_group_index(*r.right));
    return m;
}

inline int max_group_index(const RewbPtr& r) { return max_group_index(*r); }

// Letters occurring in the expression.
inline void collect_letters(const Rewb& r, std::set<char>& out) {
    if (r.kind == Rewb::Kind::terminal) out.insert(r.letter);
    if (r.left) collect_letters(*r.left, out);
    if (r.right) collect_letters(*r.right, out);
}

inline std::set<char> letters_of(const Rewb& r) {
    std::set<char> out;
    collect_letters(r, out);
    return out;
}

}  // namespace rewb

#endif  // REWB_SYNTAX_HPP
