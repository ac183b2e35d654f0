// NFA over the extended alphabet recognizing the ref-language of an
// expression.  The automaton has no epsilon transitions and satisfies two
// structural conditions:
//   (a) every state is reachable from the start and co-reachable to a final;
//   (b) a bracket-labeled transition is never parallel to another transition
//       between the same pair of states.
// Per-state open-cell sets are well defined on such automata and are computed
// by a forward fixpoint.
//
// Construction: position automaton (first/last/follow over the extended
// regex), then a forward-bisimulation quotient to merge equal-future states,
// then a split pass restoring condition (b) where the quotient broke it, and
// a breadth-first renumbering for deterministic output.

#ifndef REWB_EXT_NFA_HPP
#define REWB_EXT_NFA_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rewb/ext_regex.hpp"
#include "rewb/semantics.hpp"

namespace rewb {

struct ExtNfa {
    int num_states = 0;
    int start = 0;
    std::set<int> finals;
    // edges[q] sorted by (symbol, target); set semantics
    std::vector<std::vector<std::pair<ExtSymbol, int>>> edges;
    int kappa = 0;
    std::set<char> letters;

    bool is_final(int q) const { return finals.count(q) != 0; }
};

using OpenSetTable = std::vector<std::set<int>>;

class OpenSetInconsistency : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

struct GlushkovSets {
    bool nullable = false;
    std::set<int> first, last;
};

struct GlushkovBuild {
    std::vector<ExtSymbol> position_symbol;  // 1-based positions; index 0 unused
    std::vector<std::set<int>> follow;       // same indexing

    GlushkovSets walk(const ExtRegex& e) {
        switch (e.kind) {
            case ExtRegex::Kind::symbol: {
                int p = static_cast<int>(position_symbol.size());
                position_symbol.push_back(e.symbol);
                follow.emplace_back();
                return {false, {p}, {p}};
            }
            case ExtRegex::Kind::epsilon:
                return {true, {}, {}};
            case ExtRegex::Kind::alt: {
                GlushkovSets l = walk(*e.left), r = walk(*e.right);
                GlushkovSets out;
                out.nullable = l.nullable || r.nullable;
                out.first = l.first;
                out.first.insert(r.first.begin(), r.first.end());
                out.last = l.last;
                out.last.insert(r.last.begin(), r.last.end());
                return out;
            }
            case ExtRegex::Kind::concat: {
                GlushkovSets l = walk(*e.left), r = walk(*e.right);
                for (int p : l.last) follow[p].insert(r.first.begin(), r.first.end());
                GlushkovSets out;
                out.nullable = l.nullable && r.nullable;
                out.first = l.first;
                if (l.nullable) out.first.insert(r.first.begin(), r.first.end());
                out.last = r.last;
                if (r.nullable) out.last.insert(l.last.begin(), l.last.end());
                return out;
            }
            case ExtRegex::Kind::star: {
                GlushkovSets b = walk(*e.left);
                for (int p : b.last) follow[p].insert(b.first.begin(), b.first.end());
                return {true, b.first, b.last};
            }
        }
        throw std::logic_error("unreachable");
    }
};

inline void sort_edges(ExtNfa& n) {
    for (auto& out : n.edges) {
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
}

// Coarsest partition in which merged states agree on finality and on their
// outgoing (symbol, class) signatures.  Merging such states preserves the
// language.
inline std::vector<int> bisimulation_classes(const ExtNfa& n) {
    std::vector<int> cls(n.num_states);
    for (int q = 0; q < n.num_states; ++q) cls[q] = n.is_final(q) ? 1 : 0;
    for (;;) {
        std::map<std::pair<int, std::set<std::pair<ExtSymbol, int>>>, int> seen;
        std::vector<int> next(n.num_states);
        for (int q = 0; q < n.num_states; ++q) {
            std::set<std::pair<ExtSymbol, int>> signature;
            for (const auto& [symbol, target] : n.edges[q]) signature.insert({symbol, cls[target]});
            auto key = std::make_pair(cls[q], std::move(signature));
            auto [it, inserted] = seen.insert({std::move(key), static_cast<int>(seen.size())});
            next[q] = it->second;
        }
        if (next == cls) return cls;
        cls = std::move(next);
    }
}

inline ExtNfa quotient(const ExtNfa& n, const std::vector<int>& cls) {
    int count = 0;
    for (int c : cls) count = std::max(count, c + 1);
    ExtNfa out;
    out.num_states = count;
    out.start = cls[n.start];
    out.kappa = n.kappa;
    out.letters = n.letters;
    out.edges.resize(count);
    for (int f : n.finals) out.finals.insert(cls[f]);
    for (int q = 0; q < n.num_states; ++q)
        for (const auto& [symbol, target] : n.edges[q])
            out.edges[cls[q]].push_back({symbol, cls[target]});
    sort_edges(out);
    return out;
}

inline bool is_bracket(const ExtSymbol& s) {
    return s.kind == ExtSymbol::Kind::open || s.kind == ExtSymbol::Kind::close;
}

// Restore condition (b): whenever a bracket edge q -b-> q' is parallel to any
// other edge between q and q', retarget the bracket edge to a fresh copy of
// q'.  The copy keeps q''s outgoing edges and finality, so the language is
// unchanged.
inline void repair_bracket_parallels(ExtNfa& n) {
    for (int round = 0; round < 1000; ++round) {
        bool changed = false;
        for (int q = 0; q < n.num_states && !changed; ++q) {
            std::map<int, int> edges_to;  // target -> edge count
            for (const auto& [symbol, target] : n.edges[q]) edges_to[target]++;
            for (std::size_t e = 0; e < n.edges[q].size(); ++e) {
                auto [symbol, target] = n.edges[q][e];
                if (!is_bracket(symbol) || edges_to[target] < 2) continue;
                int copy = n.num_states++;
                n.edges.push_back(n.edges[target]);
                if (n.is_final(target)) n.finals.insert(copy);
                n.edges[q][e].second = copy;
                changed = true;
                break;
            }
        }
        if (!changed) return;
    }
    throw std::logic_error("bracket-parallel repair did not converge");
}

inline ExtNfa renumber_bfs(const ExtNfa& n) {
    std::vector<int> order(n.num_states, -1);
    int next = 0;
    std::queue<int> queue;
    order[n.start] = next++;
    queue.push(n.start);
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop();
        for (const auto& [symbol, target] : n.edges[q]) {
            if (order[target] < 0) {
                order[target] = next++;
                queue.push(target);
            }
        }
    }
    ExtNfa out;
    out.num_states = next;
    out.start = 0;
    out.kappa = n.kappa;
    out.letters = n.letters;
    out.edges.resize(next);
    for (int q = 0; q < n.num_states; ++q) {
        if (order[q] < 0) continue;  // unreachable (dropped)
        for (const auto& [symbol, target] : n.edges[q])
            if (order[target] >= 0) out.edges[order[q]].push_back({symbol, order[target]});
        if (n.is_final(q)) out.finals.insert(order[q]);
    }
    sort_edges(out);
    return out;
}

inline ExtNfa trim(const ExtNfa& n) {
    std::vector<char> reach(n.num_states, 0), coreach(n.num_states, 0);
    std::queue<int> queue;
    reach[n.start] = 1;
    queue.push(n.start);
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop();
        for (const auto& [symbol, target] : n.edges[q])
            if (!reach[target]) { reach[target] = 1; queue.push(target); }
    }
    std::vector<std::vector<int>> rev(n.num_states);
    for (int q = 0; q < n.num_states; ++q)
        for (const auto& [symbol, target] : n.edges[q]) rev[target].push_back(q);
    for (int f : n.finals)
        if (!coreach[f]) { coreach[f] = 1; queue.push(f); }
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop();
        for (int p : rev[q])
            if (!coreach[p]) { coreach[p] = 1; queue.push(p); }
    }
    std::vector<int> remap(n.num_states, -1);
    int next = 0;
    for (int q = 0; q < n.num_states; ++q)
        if (reach[q] && coreach[q]) remap[q] = next++;
    if (remap[n.start] < 0)
        throw std::logic_error("trim removed the start state (empty ref-language)");
    ExtNfa out;
    out.num_states = next;
    out.start = remap[n.start];
    out.kappa = n.kappa;
    out.letters = n.letters;
    out.edges.resize(next);
    for (int q = 0; q < n.num_states; ++q) {
        if (remap[q] < 0) continue;
        for (const auto& [symbol, target] : n.edges[q])
            if (remap[target] >= 0) out.edges[remap[q]].push_back({symbol, remap[target]});
        if (n.is_final(q)) out.finals.insert(remap[q]);
    }
    sort_edges(out);
    return out;
}

}  // namespace detail

inline ExtNfa build_nfa(const Rewb& r) {
    if (!is_valid(r)) throw std::invalid_argument("expression violates the capture side condition");
    ExtRegexPtr regex = to_ext_regex(r);

    detail::GlushkovBuild build;
    build.position_symbol.push_back(ExtSymbol{});  // index 0 unused
    build.follow.emplace_back();
    detail::GlushkovSets top = build.walk(*regex);

    int positions = static_cast<int>(build.position_symbol.size()) - 1;
    ExtNfa n;
    n.num_states = positions + 1;
    n.start = 0;
    n.kappa = max_group_index(r);
    n.letters = letters_of(r);
    n.edges.resize(n.num_states);
    for (int p : top.first) n.edges[0].push_back({build.position_symbol[p], p});
    for (int p = 1; p <= positions; ++p)
        for (int q : build.follow[p]) n.edges[p].push_back({build.position_symbol[q], q});
    for (int p : top.last) n.finals.insert(p);
    if (top.nullable) n.finals.insert(0);
    detail::sort_edges(n);

    n = detail::trim(n);
    n = detail::quotient(n, detail::bisimulation_classes(n));
    detail::repair_bracket_parallels(n);
    return detail::renumber_bfs(n);
}

inline ExtNfa build_nfa(const RewbPtr& r) { return build_nfa(*r); }

// Structural checks for the two conditions.  Returns human-readable problem
// descriptions; empty means the automaton conforms.
inline std::vector<std::string> check_structure(const ExtNfa& n) {
    std::vector<std::string> problems;
    // (a) reachability and co-reachability
    {
        std::vector<char> reach(n.num_states, 0);
        std::queue<int> queue;
        reach[n.start] = 1;
        queue.push(n.start);
        while (!queue.empty()) {
            int q = queue.front();
            queue.pop();
            for (const auto& [symbol, target] : n.edges[q])
                if (!reach[target]) { reach[target] = 1; queue.push(target); }
        }
        std::vector<std::vector<int>> rev(n.num_states);
        for (int q = 0; q < n.num_states; ++q)
            for (const auto& [symbol, target] : n.edges[q]) rev[target].push_back(q);
        std::vector<char> coreach(n.num_states, 0);
        for (int f : n.finals)
            if (!coreach[f]) { coreach[f] = 1; queue.push(f); }
        while (!queue.empty()) {
            int q = queue.front();
            queue.pop();
            for (int p : rev[q])
                if (!coreach[p]) { coreach[p] = 1; queue.push(p); }
        }
        for (int q = 0; q < n.num_states; ++q) {
            if (!reach[q]) problems.push_back("state " + std::to_string(q) + " unreachable");
            if (!coreach[q]) problems.push_back("state " + std::to_string(q) + " cannot reach a final state");
        }
    }
    // (b) bracket edges are never parallel to another edge
    for (int q = 0; q < n.num_states; ++q) {
        std::map<int, int> edges_to;
        bool bracket_to = false;
        for (const auto& [symbol, target] : n.edges[q]) edges_to[target]++;
        for (const auto& [symbol, target] : n.edges[q]) {
            if (detail::is_bracket(symbol) && edges_to[target] >= 2)
                problems.push_back("bracket edge " + std::to_string(q) + " -" + to_string(symbol) +
                                   "-> " + std::to_string(target) + " has a parallel edge");
        }
        (void)bracket_to;
    }
    return problems;
}

// Per-state open-cell sets via forward propagation from the start state.
// Signals an inconsistency if two paths disagree, which conforming automata
// never exhibit.
inline OpenSetTable open_sets(const ExtNfa& n) {
    OpenSetTable table(n.num_states);
    std::vector<char> known(n.num_states, 0);
    known[n.start] = 1;
    std::queue<int> queue;
    queue.push(n.start);
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop();
        for (const auto& [symbol, target] : n.edges[q]) {
            std::set<int> next = open_step(table[q], symbol);
            if (!known[target]) {
                known[target] = 1;
                table[target] = std::move(next);
                queue.push(target);
            } else if (table[target] != next) {
                throw OpenSetInconsistency("open sets disagree at state " + std::to_string(target) +
                                           " via edge from state " + std::to_string(q));
            }
        }
    }
    for (int f : n.finals) {
        if (known[f] && !table[f].empty())
            throw OpenSetInconsistency("final state " + std::to_string(f) +
                                       " has a nonempty open set");
    }
    return table;
}

// Exactly the accepted strings of length at most max_len.
inline std::set<RefString> nfa_enumerate(const ExtNfa& n, std::size_t max_len) {
    std::set<RefString> out;
    std::vector<std::pair<int, RefString>> frontier{{n.start, {}}};
    if (n.is_final(n.start)) out.insert(RefString{});
    for (std::size_t len = 0; len < max_len && !frontier.empty(); ++len) {
        std::vector<std::pair<int, RefString>> next;
        for (const auto& [q, v] : frontier) {
            for (const auto& [symbol, target] : n.edges[q]) {
                RefString extended = v;
                extended.push_back(symbol);
                if (n.is_final(target)) out.insert(extended);
                next.push_back({target, std::move(extended)});
            }
        }
        frontier = std::move(next);
    }
    return out;
}

inline std::string dump(const ExtNfa& n, const OpenSetTable* table = nullptr) {
    std::string out;
    out += "states " + std::to_string(n.num_states) + "\n";
    out += "start " + std::to_string(n.start) + "\n";
    out += "finals";
    for (int f : n.finals) out += " " + std::to_string(f);
    out += "\n";
    if (table) {
        for (int q = 0; q < n.num_states; ++q) {
            out += "open " + std::to_string(q) + " :";
            for (int i : (*table)[q]) out += " " + std::to_string(i);
            out += "\n";
        }
    }
    for (int q = 0; q < n.num_states; ++q)
        for (const auto& [symbol, target] : n.edges[q])
            out += std::to_string(q) + " -" + to_string(symbol) + "-> " + std::to_string(target) + "\n";
    return out;
}

}  // namespace rewb

#endif  // REWB_EXT_NFA_HPP
