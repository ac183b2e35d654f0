// Construction of the unary parallel grammar equivalent to an arbitrary
// backreference expression.  One nonterminal per NFA state plus a start
// symbol; tuples carry the generated word in the first component and one
// memory cell per capture index in the rest.  Each NFA transition becomes a
// rule whose function is selected by the transition label:
//   letter a  append a to the word and to every open cell      (input)
//   number k  append cell k to the word and to every open cell (paste)
//   [k        empty cell k                                     (reset)
//   ]k        identity
// Paste keeps the pasted cell, which makes it the only duplicating function.

#ifndef REWB_PMCFG_HPP
#define REWB_PMCFG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rewb/ext_nfa.hpp"
#include "rewb/grammar.hpp"
#include "rewb/semantics.hpp"
#include "rewb/syntax.hpp"

namespace rewb {

struct PmcfgConstruction {
    Grammar grammar;
    ExtNfa nfa;
    OpenSetTable open;
    int kappa = 0;
    // function id per (symbol, target-state open set), as generated
    std::map<std::pair<ExtSymbol, std::set<int>>, int> fun_of_edge;
    std::vector<int> nonterm_of_state;  // state -> nonterminal id
};

namespace detail {

inline std::string index_set_suffix(const std::set<int>& m) {
    std::string out = "^{";
    bool first = true;
    for (int i : m) {
        if (!first) out += ',';
        first = false;
        out += std::to_string(i);
    }
    out += '}';
    return out;
}

}  // namespace detail

inline PmcfgConstruction build_pmcfg(const Rewb& r) {
    PmcfgConstruction c;
    c.nfa = build_nfa(r);
    c.open = open_sets(c.nfa);
    c.kappa = c.nfa.kappa;
    const int dim = c.kappa + 1;

    Grammar& g = c.grammar;
    g.is_mcfg_header = false;
    g.sigma = c.nfa.letters;
    g.start = g.add_nonterm("S", 1);
    c.nonterm_of_state.resize(c.nfa.num_states);
    for (int q = 0; q < c.nfa.num_states; ++q)
        c.nonterm_of_state[q] = g.add_nonterm("A" + std::to_string(q), dim);

    auto passthrough = [&](int k) { return Pattern{PatternItem::ref(1, k)}; };

    // output: first component only
    ConcatFunction output;
    output.name = "o";
    output.arg_dims = {dim};
    output.out_dim = 1;
    output.body = {passthrough(1)};
    int output_id = g.add_function(std::move(output));

    // nullary all-empty tuple
    ConcatFunction empty;
    empty.name = "e";
    empty.out_dim = dim;
    empty.body.assign(dim, Pattern{});
    int empty_id = g.add_function(std::move(empty));

    std::optional<int> identity_id;
    auto function_for = [&](const ExtSymbol& symbol, const std::set<int>& m) -> int {
        auto key = std::make_pair(symbol, m);
        auto it = c.fun_of_edge.find(key);
        if (it != c.fun_of_edge.end()) return it->second;
        ConcatFunction f;
        f.arg_dims = {dim};
        f.out_dim = dim;
        switch (symbol.kind) {
            case ExtSymbol::Kind::letter: {
                f.name = std::string("i_") + symbol.letter + detail::index_set_suffix(m);
                f.body.push_back({PatternItem::ref(1, 1), PatternItem::terminal(std::string(1, symbol.letter))});
                for (int j = 1; j <= c.kappa; ++j) {
                    if (m.count(j))
                        f.body.push_back({PatternItem::ref(1, 1 + j),
                                          PatternItem::terminal(std::string(1, symbol.letter))});
                    else
                        f.body.push_back(passthrough(1 + j));
                }
                break;
            }
            case ExtSymbol::Kind::num: {
                int k = symbol.index;
                if (m.count(k))
                    throw std::logic_error("paste with its own cell open: malformed automaton");
                f.name = "p_" + std::to_string(k) + detail::index_set_suffix(m);
                f.body.push_back({PatternItem::ref(1, 1), PatternItem::ref(1, 1 + k)});
                for (int j = 1; j <= c.kappa; ++j) {
                    if (m.count(j))
                        f.body.push_back({PatternItem::ref(1, 1 + j), PatternItem::ref(1, 1 + k)});
                    else
                        f.body.push_back(passthrough(1 + j));
                }
                break;
            }
            case ExtSymbol::Kind::open: {
                int k = symbol.index;
                f.name = "r_" + std::to_string(k);
                f.body.push_back(passthrough(1));
                for (int j = 1; j <= c.kappa; ++j)
                    f.body.push_back(j == k ? Pattern{} : passthrough(1 + j));
                break;
            }
            case ExtSymbol::Kind::close: {
                if (identity_id) {
                    c.fun_of_edge[key] = *identity_id;
                    return *identity_id;
                }
                f.name = "id";
                for (int k = 1; k <= dim; ++k) f.body.push_back(passthrough(k));
                break;
            }
        }
        int id = g.add_function(std::move(f));
        if (symbol.kind == ExtSymbol::Kind::close) identity_id = id;
        c.fun_of_edge[key] = id;
        return id;
    };

    for (int f : c.nfa.finals)
        g.rules.push_back({g.start, output_id, {c.nonterm_of_state[f]}});
    for (int q = 0; q < c.nfa.num_states; ++q)
        for (const auto& [symbol, target] : c.nfa.edges[q]) {
            int fun = function_for(symbol, c.open[target]);
            g.rules.push_back({c.nonterm_of_state[target], fun, {c.nonterm_of_state[q]}});
        }
    g.rules.push_back({c.nonterm_of_state[c.nfa.start], empty_id, {}});

    validate_grammar(g);
    return c;
}

inline PmcfgConstruction build_pmcfg(const RewbPtr& r) { return build_pmcfg(*r); }

// An accepting state sequence for v: run[0] = start, run[i] reached after
// v[0..i).  Found by breadth-first search over the product of positions and
// states.
inline std::optional<std::vector<int>> find_run(const ExtNfa& n, const RefString& v) {
    std::vector<std::vector<int>> layers{{n.start}};
    std::map<std::pair<std::size_t, int>, std::pair<std::size_t, int>> back;
    std::vector<std::set<int>> seen(v.size() + 1);
    seen[0].insert(n.start);
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (int q : layers[i]) {
            for (const auto& [symbol, target] : n.edges[q]) {
                if (!(symbol == v[i])) continue;
                if (!seen[i + 1].insert(target).second) continue;
                back[{i + 1, target}] = {i, q};
            }
        }
        layers.push_back(std::vector<int>(seen[i + 1].begin(), seen[i + 1].end()));
        if (layers[i + 1].empty()) return std::nullopt;
    }
    for (int q : layers[v.size()]) {
        if (!n.is_final(q)) continue;
        std::vector<int> run(v.size() + 1);
        run[v.size()] = q;
        for (std::size_t i = v.size(); i > 0; --i) run[i - 1] = back.at({i, run[i]}).second;
        return run;
    }
    return std::nullopt;
}

// The tuple sequence of the functional dereferencing phase: applies the
// functions selected by the run, in input order, to the all-empty tuple.
// Position i of the result equals (deref(v1..vi), mem_1(v1..vi), ...).
inline std::vector<StringTuple> functional_deref_trace(const PmcfgConstruction& c, const RefString& v,
                                                       const std::vector<int>& run) {
    if (run.size() != v.size() + 1 || run[0] != c.nfa.start)
        throw std::invalid_argument("run does not match the string");
    std::vector<StringTuple> out;
    StringTuple tuple(static_cast<std::size_t>(c.kappa) + 1);
    out.push_back(tuple);
    for (std::size_t i = 0; i < v.size(); ++i) {
        bool edge_exists = false;
        for (const auto& [symbol, target] : c.nfa.edges[run[i]])
            if (symbol == v[i] && target == run[i + 1]) { edge_exists = true; break; }
        if (!edge_exists) throw std::invalid_argument("run does not match the string");
        int fun = c.fun_of_edge.at({v[i], c.open[run[i + 1]]});
        tuple = eval(c.grammar.functions[fun], {tuple});
        out.push_back(tuple);
    }
    return out;
}

inline std::vector<StringTuple> functional_deref_trace(const PmcfgConstruction& c, const RefString& v) {
    auto run = find_run(c.nfa, v);
    if (!run) throw std::invalid_argument("string is not accepted by the automaton");
    return functional_deref_trace(c, v, *run);
}

}  // namespace rewb

#endif  // REWB_PMCFG_HPP
