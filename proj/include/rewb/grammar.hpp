// Generic (parallel) multiple context-free grammar model: dimensioned
// nonterminals, concatenation functions given as patterns, rule application,
// well-formedness checks, a bounded derivation engine and a line-based text
// format.
//
// Text format:
//   pmcfg | mcfg                      header
//   start S
//   nonterm A dim d
//   fun name : d1,...,dl -> d = <pattern ; pattern ; ...>
//   rule A -> name[A1,...,Al]
// Pattern items are quoted terminal words ("ab", "" for the empty word) and
// argument component references $i.j (1-based).  Comments start with '#'.

#ifndef REWB_GRAMMAR_HPP
#define REWB_GRAMMAR_HPP

#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rewb {

struct PatternItem {
    bool is_ref = false;
    std::string word;  // terminal item
    int arg = 0;       // 1-based argument position
    int comp = 0;      // 1-based component within the argument

    static PatternItem terminal(std::string w) { return {false, std::move(w), 0, 0}; }
    static PatternItem ref(int arg, int comp) { return {true, "", arg, comp}; }

    friend bool operator==(const PatternItem&, const PatternItem&) = default;
};

using Pattern = std::vector<PatternItem>;

struct ConcatFunction {
    std::string name;
    std::vector<int> arg_dims;       // one entry per argument
    int out_dim = 0;
    std::vector<Pattern> body;       // one pattern per output component

    int arity() const { return static_cast<int>(arg_dims.size()); }

    friend bool operator==(const ConcatFunction&, const ConcatFunction&) = default;
};

struct GrammarRule {
    int lhs = 0;               // nonterminal id
    int fun = 0;               // function id
    std::vector<int> rhs;      // nonterminal ids, one per argument

    friend bool operator==(const GrammarRule&, const GrammarRule&) = default;
};

struct Grammar {
    bool is_mcfg_header = false;  // printed header: mcfg when set, pmcfg otherwise
    std::vector<std::string> nonterm_names;
    std::vector<int> dims;
    int start = 0;
    std::vector<ConcatFunction> functions;
    std::vector<GrammarRule> rules;
    std::set<char> sigma;

    int nonterm_count() const { return static_cast<int>(nonterm_names.size()); }

    int add_nonterm(const std::string& name, int dim) {
        nonterm_names.push_back(name);
        dims.push_back(dim);
        return nonterm_count() - 1;
    }

    int add_function(ConcatFunction f) {
        functions.push_back(std::move(f));
        return static_cast<int>(functions.size()) - 1;
    }

    int find_nonterm(const std::string& name) const {
        for (int i = 0; i < nonterm_count(); ++i)
            if (nonterm_names[i] == name) return i;
        return -1;
    }

    int find_function(const std::string& name) const {
        for (std::size_t i = 0; i < functions.size(); ++i)
            if (functions[i].name == name) return static_cast<int>(i);
        return -1;
    }
};

class GrammarError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Well-formedness: dimensions are positive, the start symbol has dimension 1,
// every pattern reference is in range, and rule signatures match.
inline void validate_grammar(const Grammar& g) {
    if (g.start < 0 || g.start >= g.nonterm_count()) throw GrammarError("missing start symbol");
    if (g.dims[g.start] != 1) throw GrammarError("start symbol must have dimension 1");
    for (int d : g.dims)
        if (d < 1) throw GrammarError("nonterminal dimension must be at least 1");
    for (const ConcatFunction& f : g.functions) {
        if (f.out_dim < 1) throw GrammarError("function " + f.name + ": output dimension must be at least 1");
        if (static_cast<int>(f.body.size()) != f.out_dim)
            throw GrammarError("function " + f.name + ": body/output dimension mismatch");
        for (const Pattern& pattern : f.body)
            for (const PatternItem& item : pattern) {
                if (!item.is_ref) continue;
                if (item.arg < 1 || item.arg > f.arity())
                    throw GrammarError("function " + f.name + ": argument reference out of range");
                if (item.comp < 1 || item.comp > f.arg_dims[item.arg - 1])
                    throw GrammarError("function " + f.name + ": component reference out of range");
            }
    }
    for (const GrammarRule& rule : g.rules) {
        const ConcatFunction& f = g.functions[rule.fun];
        if (g.dims[rule.lhs] != f.out_dim)
            throw GrammarError("rule for " + g.nonterm_names[rule.lhs] + ": dimension mismatch with " + f.name);
        if (static_cast<int>(rule.rhs.size()) != f.arity())
            throw GrammarError("rule for " + g.nonterm_names[rule.lhs] + ": arity mismatch with " + f.name);
        for (int i = 0; i < f.arity(); ++i)
            if (g.dims[rule.rhs[i]] != f.arg_dims[i])
                throw GrammarError("rule for " + g.nonterm_names[rule.lhs] + ": argument " +
                                   std::to_string(i + 1) + " dimension mismatch");
    }
}

using StringTuple = std::vector<std::string>;

inline StringTuple eval(const ConcatFunction& f, const std::vector<StringTuple>& args) {
    if (static_cast<int>(args.size()) != f.arity())
        throw GrammarError("function " + f.name + ": expected " + std::to_string(f.arity()) +
                           " arguments, got " + std::to_string(args.size()));
    for (int i = 0; i < f.arity(); ++i)
        if (static_cast<int>(args[i].size()) != f.arg_dims[i])
            throw GrammarError("function " + f.name + ": argument " + std::to_string(i + 1) +
                               " has wrong dimension");
    StringTuple out(f.out_dim);
    for (int k = 0; k < f.out_dim; ++k) {
        std::string& component = out[k];
        for (const PatternItem& item : f.body[k]) {
            if (item.is_ref) component += args[item.arg - 1][item.comp - 1];
            else component += item.word;
        }
    }
    return out;
}

// True when no function uses the same argument component twice; such a
// grammar is an MCFG.
inline bool is_nonduplicating(const Grammar& g) {
    for (const ConcatFunction& f : g.functions) {
        std::set<std::pair<int, int>> used;
        for (const Pattern& pattern : f.body)
            for (const PatternItem& item : pattern)
                if (item.is_ref && !used.insert({item.arg, item.comp}).second) return false;
    }
    return true;
}

inline bool is_unary(const Grammar& g) {
    for (const ConcatFunction& f : g.functions)
        if (f.arity() > 1) return false;
    return true;
}

// Structural certificate that the first output component of every
// non-nullary function extends the first component of its first argument.
// It justifies discarding tuples whose first component is already too long.
inline bool first_component_monotone(const Grammar& g) {
    for (const ConcatFunction& f : g.functions) {
        if (f.arity() == 0) continue;
        if (f.body.empty() || f.body[0].empty()) return false;
        const PatternItem& head = f.body[0][0];
        if (!head.is_ref || head.arg != 1 || head.comp != 1) return false;
    }
    return true;
}

struct BoundedLanguageResult {
    std::set<std::string> words;
    bool complete = true;          // false when pruning lacked the certificate or the budget ran out
    bool budget_exceeded = false;
    std::size_t tuples = 0;        // distinct derived tuples
};

// All words of length at most max_len derivable from the start symbol,
// found by forward chaining from the nullary rules with exact tuple
// deduplication.  Tuples whose first component exceeds max_len are dropped;
// with the monotonicity certificate this cannot lose words.
inline BoundedLanguageResult bounded_language(const Grammar& g, std::size_t max_len,
                                              std::size_t budget = 10'000'000) {
    validate_grammar(g);
    bool certificate = first_component_monotone(g);

    BoundedLanguageResult result;
    std::vector<std::set<StringTuple>> derived(g.nonterm_count());
    std::deque<std::pair<int, StringTuple>> worklist;

    // rules indexed by each rhs nonterminal
    std::vector<std::vector<std::size_t>> rules_using(g.nonterm_count());
    for (std::size_t ri = 0; ri < g.rules.size(); ++ri)
        for (int b : g.rules[ri].rhs) rules_using[b].push_back(ri);

    auto submit = [&](int nonterm, StringTuple tuple) -> bool {
        if (tuple[0].size() > max_len) {
            if (!certificate) result.complete = false;
            return true;
        }
        if (!derived[nonterm].insert(tuple).second) return true;
        ++result.tuples;
        if (result.tuples > budget) {
            result.budget_exceeded = true;
            result.complete = false;
            return false;
        }
        worklist.push_back({nonterm, std::move(tuple)});
        return true;
    };

    for (const GrammarRule& rule : g.rules)
        if (rule.rhs.empty())
            if (!submit(rule.lhs, eval(g.functions[rule.fun], {}))) break;

    while (!worklist.empty() && !result.budget_exceeded) {
        auto [nonterm, tuple] = std::move(worklist.front());
        worklist.pop_front();
        for (std::size_t ri : rules_using[nonterm]) {
            const GrammarRule& rule = g.rules[ri];
            const ConcatFunction& f = g.functions[rule.fun];
            // combine the new tuple at every position it can fill; other
            // positions range over everything already derived
            std::vector<StringTuple> args(rule.rhs.size());
            std::function<bool(std::size_t, bool)> fill = [&](std::size_t pos, bool used_new) -> bool {
                if (pos == rule.rhs.size()) {
                    if (!used_new) return true;
                    return submit(rule.lhs, eval(f, args));
                }
                if (rule.rhs[pos] == nonterm) {
                    args[pos] = tuple;
                    if (!fill(pos + 1, true)) return false;
                }
                for (const StringTuple& other : derived[rule.rhs[pos]]) {
                    if (rule.rhs[pos] == nonterm && other == tuple) continue;
                    args[pos] = other;
                    if (!fill(pos + 1, used_new)) return false;
                }
                return true;
            };
            if (!fill(0, false)) break;
        }
    }

    for (const StringTuple& tuple : derived[g.start])
        if (tuple[0].size() <= max_len) result.words.insert(tuple[0]);
    return result;
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

namespace detail {

inline std::string quote_word(const std::string& w) { return "\"" + w + "\""; }

}  // namespace detail

inline std::string serialize(const Grammar& g) {
    std::string out;
    out += g.is_mcfg_header ? "mcfg\n" : "pmcfg\n";
    out += "start " + g.nonterm_names[g.start] + "\n";
    for (int i = 0; i < g.nonterm_count(); ++i)
        out += "nonterm " + g.nonterm_names[i] + " dim " + std::to_string(g.dims[i]) + "\n";
    for (const ConcatFunction& f : g.functions) {
        out += "fun " + f.name + " : ";
        for (std::size_t i = 0; i < f.arg_dims.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(f.arg_dims[i]);
        }
        out += " -> " + std::to_string(f.out_dim) + " = <";
        for (int k = 0; k < f.out_dim; ++k) {
            if (k) out += " ; ";
            if (f.body[k].empty()) out += detail::quote_word("");
            for (std::size_t i = 0; i < f.body[k].size(); ++i) {
                if (i) out += ' ';
                const PatternItem& item = f.body[k][i];
                if (item.is_ref)
                    out += "$" + std::to_string(item.arg) + "." + std::to_string(item.comp);
                else
                    out += detail::quote_word(item.word);
            }
        }
        out += ">\n";
    }
    for (const GrammarRule& rule : g.rules) {
        out += "rule " + g.nonterm_names[rule.lhs] + " -> " + g.functions[rule.fun].name + "[";
        for (std::size_t i = 0; i < rule.rhs.size(); ++i) {
            if (i) out += ",";
            out += g.nonterm_names[rule.rhs[i]];
        }
        out += "]\n";
    }
    return out;
}

namespace detail {

class GrammarParser {
public:
    explicit GrammarParser(const std::string& text) : in_(text) {}

    Grammar parse() {
        std::string line;
        bool saw_header = false;
        std::string start_name;
        struct PendingRule { std::string lhs, fun; std::vector<std::string> rhs; int line; };
        std::vector<PendingRule> pending;

        while (std::getline(in_, line)) {
            ++line_no_;
            strip_comment(line);
            std::istringstream ls(line);
            std::string word;
            if (!(ls >> word)) continue;
            if (!saw_header) {
                if (word != "pmcfg" && word != "mcfg") fail("expected 'pmcfg' or 'mcfg' header");
                g_.is_mcfg_header = (word == "mcfg");
                saw_header = true;
                continue;
            }
            if (word == "start") {
                if (!(ls >> start_name)) fail("missing start symbol name");
            } else if (word == "nonterm") {
                std::string name, dim_kw;
                int dim = 0;
                if (!(ls >> name >> dim_kw >> dim) || dim_kw != "dim") fail("bad nonterm line");
                if (g_.find_nonterm(name) >= 0) fail("duplicate nonterminal " + name);
                g_.add_nonterm(name, dim);
            } else if (word == "fun") {
                parse_fun(line);
            } else if (word == "rule") {
                PendingRule r;
                r.line = line_no_;
                std::string arrow;
                if (!(ls >> r.lhs >> arrow) || arrow != "->") fail("bad rule line");
                std::string rest;
                std::getline(ls, rest);
                parse_rule_rhs(rest, r.fun, r.rhs);
                pending.push_back(std::move(r));
            } else {
                fail("unknown directive '" + word + "'");
            }
        }
        if (!saw_header) fail("empty grammar");
        if (start_name.empty()) fail("missing start line");
        g_.start = g_.find_nonterm(start_name);
        if (g_.start < 0) fail("undeclared start symbol " + start_name);
        for (const auto& r : pending) {
            line_no_ = r.line;
            GrammarRule rule;
            rule.lhs = g_.find_nonterm(r.lhs);
            if (rule.lhs < 0) fail("undeclared nonterminal " + r.lhs);
            rule.fun = g_.find_function(r.fun);
            if (rule.fun < 0) fail("undeclared function " + r.fun);
            for (const std::string& name : r.rhs) {
                int id = g_.find_nonterm(name);
                if (id < 0) fail("undeclared nonterminal " + name);
                rule.rhs.push_back(id);
            }
            g_.rules.push_back(std::move(rule));
        }
        for (const ConcatFunction& f : g_.functions)
            for (const Pattern& pattern : f.body)
                for (const PatternItem& item : pattern)
                    if (!item.is_ref)
                        for (char a : item.word) g_.sigma.insert(a);
        try {
            validate_grammar(g_);
        } catch (const GrammarError& e) {
            throw GrammarError(std::string(e.what()) + " (grammar file)");
        }
        return std::move(g_);
    }

private:
    std::istringstream in_;
    Grammar g_;
    int line_no_ = 0;

    [[noreturn]] void fail(const std::string& message) const {
        throw GrammarError("line " + std::to_string(line_no_) + ": " + message);
    }

    static void strip_comment(std::string& line) {
        std::size_t pos = line.find('#');
        if (pos != std::string::npos) line.resize(pos);
    }

    void parse_fun(const std::string& line) {
        // fun NAME : d1,...,dl -> d = <...>
        std::size_t colon = line.find(" : ");
        if (colon == std::string::npos) fail("bad fun line (missing ' : ')");
        std::istringstream head(line.substr(0, colon));
        std::string kw;
        ConcatFunction f;
        if (!(head >> kw >> f.name)) fail("bad fun line");
        std::size_t arrow = line.find("->", colon);
        if (arrow == std::string::npos) fail("bad fun line (missing '->')");
        std::string dims_text = line.substr(colon + 3, arrow - colon - 3);
        {
            std::string token;
            std::istringstream ds(dims_text);
            std::string all;
            ds >> all;
            if (!all.empty()) {
                std::istringstream cs(all);
                while (std::getline(cs, token, ','))
                    f.arg_dims.push_back(parse_int(token, "argument dimension"));
            }
        }
        std::size_t eq = line.find('=', arrow);
        if (eq == std::string::npos) fail("bad fun line (missing '=')");
        f.out_dim = parse_int(trim(line.substr(arrow + 2, eq - arrow - 2)), "output dimension");
        std::size_t open = line.find('<', eq);
        std::size_t close = line.rfind('>');
        if (open == std::string::npos || close == std::string::npos || close < open)
            fail("bad fun line (missing <...> body)");
        std::string body = line.substr(open + 1, close - open - 1);
        std::vector<std::string> parts;
        {
            std::string part;
            std::istringstream bs(body);
            while (std::getline(bs, part, ';')) parts.push_back(part);
            if (body.empty()) parts.clear();
        }
        for (const std::string& part : parts) f.body.push_back(parse_pattern(part));
        if (g_.find_function(f.name) >= 0) fail("duplicate function " + f.name);
        g_.functions.push_back(std::move(f));
    }

    Pattern parse_pattern(const std::string& text) {
        Pattern out;
        std::istringstream ps(text);
        std::string token;
        while (ps >> token) {
            if (token[0] == '$') {
                std::size_t dot = token.find('.');
                if (dot == std::string::npos) fail("bad reference '" + token + "'");
                int arg = parse_int(token.substr(1, dot - 1), "argument index");
                int comp = parse_int(token.substr(dot + 1), "component index");
                out.push_back(PatternItem::ref(arg, comp));
            } else if (token[0] == '"') {
                if (token.size() < 2 || token.back() != '"') fail("bad terminal '" + token + "'");
                std::string word = token.substr(1, token.size() - 2);
                // "" contributes the empty word, so it can simply be dropped
                if (!word.empty()) out.push_back(PatternItem::terminal(word));
            } else {
                fail("bad pattern item '" + token + "'");
            }
        }
        return out;
    }

    void parse_rule_rhs(const std::string& text, std::string& fun, std::vector<std::string>& rhs) {
        std::string t = trim(text);
        std::size_t open = t.find('[');
        if (open == std::string::npos || t.back() != ']') fail("bad rule right-hand side '" + t + "'");
        fun = trim(t.substr(0, open));
        if (fun.empty()) fail("missing function name in rule");
        std::string args = t.substr(open + 1, t.size() - open - 2);
        std::string token;
        std::istringstream as(args);
        while (std::getline(as, token, ',')) {
            token = trim(token);
            if (token.empty()) fail("empty nonterminal name in rule argument list");
            rhs.push_back(token);
        }
    }

    static std::string trim(const std::string& s) {
        std::size_t a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return "";
        std::size_t b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }

    int parse_int(const std::string& s, const std::string& what) {
        std::string t = trim(s);
        if (t.empty()) fail("missing " + what);
        int value = 0;
        for (char c : t) {
            if (c < '0' || c > '9') fail("bad " + what + " '" + t + "'");
            value = value * 10 + (c - '0');
        }
        return value;
    }
};

}  // namespace detail

inline Grammar parse_grammar(const std::string& text) { return detail::GrammarParser(text).parse(); }

}  // namespace rewb

#endif  // REWB_GRAMMAR_HPP
