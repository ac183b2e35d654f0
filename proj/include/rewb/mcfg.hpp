// Construction of the unary non-duplicating grammar for closed-star
// expressions.  Each memory cell of the parallel construction is replaced by
// a block of rho copies; nonterminals carry the backward counter tuples, and
// paste consumes one sub-block of valid copies instead of re-using a cell.
//
// Block layout (cell k, function annotated with source counters tau, sigma):
// the first depth[sigma_k] components split into theta groups of size
// 1 + kappa*depth[sigma_k - 1]; psi(k,0) is the first component of group
// tau_k and psi(k,j) closes the j-th sub-block inside that group.  Paste
// appends component psi(k,0) to the word, feeds sub-block j to every open
// cell j, and empties the group so no component is used twice.

#ifndef REWB_MCFG_HPP
#define REWB_MCFG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rewb/analysis.hpp"
#include "rewb/ext_nfa.hpp"
#include "rewb/grammar.hpp"
#include "rewb/pmcfg.hpp"

namespace rewb {

class NotClosedStar : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct McfgConstruction {
    Grammar grammar;
    ExtNfa nfa;
    OpenSetTable open;
    Bounds bounds;
    int kappa = 0;
    long long rho = 0;
    std::map<std::pair<int, TsTuple>, int> nonterm_of;  // (state, counters) -> nonterminal
    std::map<std::string, int> fun_by_name;
};

namespace detail {

inline std::string counters_suffix(const std::vector<int>& t, const std::vector<int>& s) {
    if (t.empty()) return "";
    std::string out = "^t";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(t[i]);
    }
    out += "^s";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(s[i]);
    }
    return out;
}

}  // namespace detail

namespace mcfg_detail {

struct Builder {
    McfgConstruction& c;
    Grammar& g;
    int kappa;
    long long rho;
    int dim;

    // component index of block k (1-based), copy r (1-based, r <= rho)
    int pos(int k, long long r) const {
        return static_cast<int>(1 + static_cast<long long>(k - 1) * rho + r);
    }

    Pattern passthrough(int component) const { return Pattern{PatternItem::ref(1, component)}; }

    int intern(ConcatFunction f) {
        auto it = c.fun_by_name.find(f.name);
        if (it != c.fun_by_name.end()) return it->second;
        int id = g.add_function(f);
        c.fun_by_name[f.name] = id;
        return id;
    }

    int input_fun(char a, const std::set<int>& m) {
        ConcatFunction f;
        f.name = name_for(ExtSymbol::make_letter(a), m, {});
        f.arg_dims = {dim};
        f.out_dim = dim;
        f.body.push_back({PatternItem::ref(1, 1), PatternItem::terminal(std::string(1, a))});
        for (int j = 1; j <= kappa; ++j)
            for (long long r = 1; r <= rho; ++r) {
                if (m.count(j))
                    f.body.push_back({PatternItem::ref(1, pos(j, r)), PatternItem::terminal(std::string(1, a))});
                else
                    f.body.push_back(passthrough(pos(j, r)));
            }
        return intern(std::move(f));
    }

    int reset_fun(int k) {
        ConcatFunction f;
        f.name = "r_" + std::to_string(k);
        f.arg_dims = {dim};
        f.out_dim = dim;
        f.body.push_back(passthrough(1));
        for (int j = 1; j <= kappa; ++j)
            for (long long r = 1; r <= rho; ++r)
                f.body.push_back(j == k ? Pattern{} : passthrough(pos(j, r)));
        return intern(std::move(f));
    }

    int identity_fun() {
        ConcatFunction f;
        f.name = "id";
        f.arg_dims = {dim};
        f.out_dim = dim;
        for (int k = 1; k <= dim; ++k) f.body.push_back(passthrough(k));
        return intern(std::move(f));
    }

    int paste_fun(int k, const std::set<int>& m, const TsTuple& ts) {
        int tau_k = ts.t[k - 1];
        int sigma_k = ts.s[k - 1];
        if (tau_k < 1 || sigma_k < 1)
            throw std::logic_error("paste requires positive counters for its own cell");
        if (m.count(k))
            throw std::logic_error("paste with its own cell open: malformed automaton");
        const int theta = c.bounds.theta;
        long long depth_sk = c.bounds.depth[sigma_k];
        long long depth_sk1 = c.bounds.depth[sigma_k - 1];
        if ((static_cast<long long>(tau_k - 1) * depth_sk) % theta != 0)
            throw std::logic_error("paste offset is not divisible by theta: bounds bug");
        long long psi0 = (static_cast<long long>(tau_k - 1) * depth_sk) / theta + 1;
        auto psi = [&](int j) { return psi0 + j * depth_sk1; };

        ConcatFunction f;
        f.name = name_for(ExtSymbol::make_num(k), m, ts);
        f.arg_dims = {dim};
        f.out_dim = dim;
        f.body.push_back({PatternItem::ref(1, 1), PatternItem::ref(1, pos(k, psi0))});
        for (int j = 1; j <= kappa; ++j) {
            if (j == k) {
                for (long long r = 1; r <= rho; ++r)
                    f.body.push_back(r < psi0 ? passthrough(pos(k, r)) : Pattern{});
            } else if (m.count(j)) {
                for (long long r = 1; r <= rho; ++r) {
                    if (r <= depth_sk1)
                        f.body.push_back({PatternItem::ref(1, pos(j, r)),
                                          PatternItem::ref(1, pos(k, psi(j - 1) + r))});
                    else
                        f.body.push_back(Pattern{});
                }
            } else {
                for (long long r = 1; r <= rho; ++r) f.body.push_back(passthrough(pos(j, r)));
            }
        }
        return intern(std::move(f));
    }

    int fun_for(const ExtSymbol& symbol, const std::set<int>& m, const TsTuple& source_ts) {
        switch (symbol.kind) {
            case ExtSymbol::Kind::letter: return input_fun(symbol.letter, m);
            case ExtSymbol::Kind::num: return paste_fun(symbol.index, m, source_ts);
            case ExtSymbol::Kind::open: return reset_fun(symbol.index);
            case ExtSymbol::Kind::close: return identity_fun();
        }
        throw std::logic_error("unreachable");
    }

    static std::string name_for(const ExtSymbol& symbol, const std::set<int>& m,
                                const TsTuple& source_ts) {
        switch (symbol.kind) {
            case ExtSymbol::Kind::letter:
                return std::string("i_") + symbol.letter + detail::index_set_suffix(m);
            case ExtSymbol::Kind::num:
                return "p_" + std::to_string(symbol.index) + detail::index_set_suffix(m) + "^t" +
                       std::to_string(source_ts.t[symbol.index - 1]) + "^s" +
                       std::to_string(source_ts.s[symbol.index - 1]);
            case ExtSymbol::Kind::open:
                return "r_" + std::to_string(symbol.index);
            case ExtSymbol::Kind::close:
                return "id";
        }
        throw std::logic_error("unreachable");
    }
};

}  // namespace mcfg_detail

inline McfgConstruction build_mcfg(const Rewb& r, int cap = 64) {
    if (!is_closed_star(r))
        throw NotClosedStar("expression is not closed-star: " + to_string(r));

    McfgConstruction c;
    c.nfa = build_nfa(r);
    c.open = open_sets(c.nfa);
    c.bounds = compute_bounds(c.nfa, c.open, cap);
    c.kappa = c.nfa.kappa;
    c.rho = c.bounds.rho;
    const int dim = static_cast<int>(static_cast<long long>(c.kappa) * c.rho + 1);

    Grammar& g = c.grammar;
    g.is_mcfg_header = true;
    g.sigma = c.nfa.letters;
    g.start = g.add_nonterm("S", 1);
    for (const auto& [state, tuples] : c.bounds.reachable)
        for (const TsTuple& ts : tuples) {
            std::string name = "A" + std::to_string(state) + detail::counters_suffix(ts.t, ts.s);
            c.nonterm_of[{state, ts}] = g.add_nonterm(name, dim);
        }

    mcfg_detail::Builder builder{c, g, c.kappa, c.rho, dim};

    // output and the nullary all-empty tuple
    ConcatFunction output;
    output.name = "o";
    output.arg_dims = {dim};
    output.out_dim = 1;
    output.body = {Pattern{PatternItem::ref(1, 1)}};
    int output_id = g.add_function(std::move(output));
    c.fun_by_name["o"] = output_id;

    ConcatFunction empty;
    empty.name = "e";
    empty.out_dim = dim;
    empty.body.assign(dim, Pattern{});
    int empty_id = g.add_function(std::move(empty));
    c.fun_by_name["e"] = empty_id;

    TsTuple zero{std::vector<int>(c.kappa, 0), std::vector<int>(c.kappa, 0)};
    for (int f : c.nfa.finals)
        g.rules.push_back({g.start, output_id, {c.nonterm_of.at({f, zero})}});

    for (int q = 0; q < c.nfa.num_states; ++q) {
        for (const auto& [symbol, target] : c.nfa.edges[q]) {
            auto target_it = c.bounds.reachable.find(target);
            if (target_it == c.bounds.reachable.end()) continue;
            for (const TsTuple& target_ts : target_it->second) {
                TsTuple source_ts;
                source_ts.t = t_backstep(symbol, target_ts.t);
                source_ts.s = s_backstep(symbol, target_ts.s, c.open[target]);
                auto source = c.nonterm_of.find({q, source_ts});
                if (source == c.nonterm_of.end())
                    throw std::logic_error("backward step left the reachable annotation set");
                int fun = builder.fun_for(symbol, c.open[target], source_ts);
                g.rules.push_back({c.nonterm_of.at({target, target_ts}), fun, {source->second}});
            }
        }
    }

    auto start_it = c.bounds.reachable.find(c.nfa.start);
    if (start_it == c.bounds.reachable.end())
        throw std::logic_error("start state is not backward-reachable: malformed automaton");
    for (const TsTuple& ts : start_it->second)
        g.rules.push_back({c.nonterm_of.at({c.nfa.start, ts}), empty_id, {}});

    validate_grammar(g);
    return c;
}

inline McfgConstruction build_mcfg(const RewbPtr& r, int cap = 64) { return build_mcfg(*r, cap); }

struct McfgTraceStep {
    StringTuple tuple;                     // after applying the i-th function
    TsTuple counters;                      // counters at this position
    std::vector<long long> valid_copies;   // per cell: number of leading components equal to mem
};

// The tuple sequence of the functional dereferencing phase together with the
// valid-copies watermark of every block at every position.
inline std::vector<McfgTraceStep> mcfg_block_trace(const McfgConstruction& c, const RefString& v,
                                                   const std::vector<int>& run) {
    if (run.size() != v.size() + 1 || run[0] != c.nfa.start)
        throw std::invalid_argument("run does not match the string");
    std::vector<TsTuple> ts = ts_sequence(v, c.kappa);

    auto watermark = [&](const TsTuple& here) {
        std::vector<long long> marks(c.kappa);
        for (int k = 0; k < c.kappa; ++k) {
            long long numerator = static_cast<long long>(here.t[k]) * c.bounds.depth[here.s[k]];
            if (c.bounds.theta == 0) { marks[k] = 0; continue; }
            if (numerator % c.bounds.theta != 0)
                throw std::logic_error("valid-copies watermark is not integral: bounds bug");
            marks[k] = numerator / c.bounds.theta;
        }
        return marks;
    };

    std::vector<McfgTraceStep> out;
    const int dim = static_cast<int>(static_cast<long long>(c.kappa) * c.rho + 1);
    StringTuple tuple(static_cast<std::size_t>(dim));
    out.push_back({tuple, ts[0], watermark(ts[0])});
    for (std::size_t i = 0; i < v.size(); ++i) {
        bool edge_exists = false;
        for (const auto& [symbol, target] : c.nfa.edges[run[i]])
            if (symbol == v[i] && target == run[i + 1]) { edge_exists = true; break; }
        if (!edge_exists) throw std::invalid_argument("run does not match the string");
        std::string name = mcfg_detail::Builder::name_for(v[i], c.open[run[i + 1]], ts[i]);
        auto fun = c.fun_by_name.find(name);
        if (fun == c.fun_by_name.end())
            throw std::logic_error("trace needs function " + name + " that the construction never generated");
        tuple = eval(c.grammar.functions[fun->second], {tuple});
        out.push_back({tuple, ts[i + 1], watermark(ts[i + 1])});
    }
    return out;
}

inline std::vector<McfgTraceStep> mcfg_block_trace(const McfgConstruction& c, const RefString& v) {
    auto run = find_run(c.nfa, v);
    if (!run) throw std::invalid_argument("string is not accepted by the automaton");
    return mcfg_block_trace(c, v, *run);
}

}  // namespace rewb

#endif  // REWB_MCFG_HPP
