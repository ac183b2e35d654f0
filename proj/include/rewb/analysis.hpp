// Closedness and closed-star classification, the backward t/s counter
// sequences on ref-strings, and the bound computation (theta, sigma, depth
// vector, rho) as a backward reachability fixpoint over the NFA.
//
// t counts how many times the current content of a memory cell will still be
// directly referenced; s bounds the depth to which it will be passed on to
// other cells.  Both are computed right to left.  For closed-star
// expressions all components stay bounded; the fixpoint finds the suprema
// and, along the way, exactly the annotated states the grammar construction
// for closed-star expressions needs.

#ifndef REWB_ANALYSIS_HPP
#define REWB_ANALYSIS_HPP

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rewb/ext_nfa.hpp"
#include "rewb/semantics.hpp"
#include "rewb/syntax.hpp"

namespace rewb {

// Indices guaranteed to be captured on every path through the expression.
inline std::set<int> capt(const Rewb& r) {
    switch (r.kind) {
        case Rewb::Kind::terminal:
        case Rewb::Kind::epsilon:
        case Rewb::Kind::reference:
            return {};
        case Rewb::Kind::star:
            return capt(*r.left);
        case Rewb::Kind::concat: {
            std::set<int> out = capt(*r.left);
            std::set<int> rhs = capt(*r.right);
            out.insert(rhs.begin(), rhs.end());
            return out;
        }
        case Rewb::Kind::alt: {
            std::set<int> l = capt(*r.left), rgt = capt(*r.right), out;
            std::set_intersection(l.begin(), l.end(), rgt.begin(), rgt.end(),
                                  std::inserter(out, out.begin()));
            return out;
        }
        case Rewb::Kind::group: {
            std::set<int> out = capt(*r.left);
            out.insert(r.index);
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

inline std::set<int> capt(const RewbPtr& r) { return capt(*r); }

// Derivability of S |- r: S must contain every index the expression
// references without a preceding same-indexed capture on the same path.
inline bool is_closed(const Rewb& r, const std::set<int>& bound) {
    switch (r.kind) {
        case Rewb::Kind::terminal:
        case Rewb::Kind::epsilon:
            return true;
        case Rewb::Kind::reference:
            return bound.count(r.index) != 0;
        case Rewb::Kind::star:
            return is_closed(*r.left, bound);
        case Rewb::Kind::concat: {
            if (!is_closed(*r.left, bound)) return false;
            std::set<int> extended = bound;
            std::set<int> captured = capt(*r.left);
            extended.insert(captured.begin(), captured.end());
            return is_closed(*r.right, extended);
        }
        case Rewb::Kind::alt:
            return is_closed(*r.left, bound) && is_closed(*r.right, bound);
        case Rewb::Kind::group:
            return is_closed(*r.left, bound);
    }
    throw std::logic_error("unreachable");
}

inline bool is_closed(const Rewb& r) { return is_closed(r, {}); }
inline bool is_closed(const RewbPtr& r) { return is_closed(*r, {}); }

// Every starred subexpression must be closed on its own.
inline bool is_closed_star(const Rewb& r) {
    if (r.kind == Rewb::Kind::star && !is_closed(*r.left, {})) return false;
    if (r.left && !is_closed_star(*r.left)) return false;
    if (r.right && !is_closed_star(*r.right)) return false;
    return true;
}

inline bool is_closed_star(const RewbPtr& r) { return is_closed_star(*r); }

struct TsTuple {
    std::vector<int> t, s;

    friend auto operator<=>(const TsTuple&, const TsTuple&) = default;
};

// Backward steps: given the tuple to the right of a symbol, the tuple to its
// left.  The s-step at a number character consults the open set holding at
// that point.
inline std::vector<int> t_backstep(const ExtSymbol& c, std::vector<int> right) {
    switch (c.kind) {
        case ExtSymbol::Kind::letter:
        case ExtSymbol::Kind::close:
            return right;
        case ExtSymbol::Kind::open:
            right[c.index - 1] = 0;
            return right;
        case ExtSymbol::Kind::num:
            right[c.index - 1] += 1;
            return right;
    }
    throw std::logic_error("unreachable");
}

inline std::vector<int> s_backstep(const ExtSymbol& c, std::vector<int> right,
                                   const std::set<int>& open_here) {
    switch (c.kind) {
        case ExtSymbol::Kind::letter:
        case ExtSymbol::Kind::close:
            return right;
        case ExtSymbol::Kind::open:
            right[c.index - 1] = 0;
            return right;
        case ExtSymbol::Kind::num: {
            int j = c.index - 1;
            int value = std::max(1, right[j]);
            for (int l : open_here) value = std::max(value, right[l - 1] + 1);
            right[j] = value;
            return right;
        }
    }
    throw std::logic_error("unreachable");
}

// The per-position t/s tuples of a string; entry i describes the point after
// the first i symbols (i = 0 .. |v|).
inline std::vector<TsTuple> ts_sequence(const RefString& v, int kappa) {
    std::vector<std::set<int>> open_at(v.size() + 1);
    for (std::size_t i = 0; i < v.size(); ++i) open_at[i + 1] = open_step(open_at[i], v[i]);

    std::vector<TsTuple> out(v.size() + 1);
    out[v.size()] = {std::vector<int>(kappa, 0), std::vector<int>(kappa, 0)};
    for (std::size_t i = v.size(); i > 0; --i) {
        out[i - 1].t = t_backstep(v[i - 1], out[i].t);
        out[i - 1].s = s_backstep(v[i - 1], out[i].s, open_at[i]);
    }
    return out;
}

struct Bounds {
    int kappa = 0;
    int theta = 0;
    int sigma = 0;
    long long rho = 0;
    std::vector<long long> depth;                 // depth[0..sigma]
    std::map<int, std::set<TsTuple>> reachable;   // state -> annotations
    std::size_t reachable_count = 0;
};

struct DivergenceReport {
    int exceeded_cap = 0;
    std::string component;            // "t" or "s"
    int cell = 0;                     // 1-based memory cell
    std::vector<int> cycle_states;
    std::vector<ExtSymbol> cycle_labels;

    std::string describe() const {
        std::string out = component + "-counter of cell " + std::to_string(cell) +
                          " exceeds cap " + std::to_string(exceeded_cap) + " around cycle";
        for (std::size_t i = 0; i < cycle_states.size(); ++i) {
            out += " " + std::to_string(cycle_states[i]);
            if (i < cycle_labels.size()) out += " <-" + to_string(cycle_labels[i]) + "-";
        }
        return out;
    }
};

class BoundsDiverged : public std::runtime_error {
public:
    explicit BoundsDiverged(DivergenceReport report)
        : std::runtime_error(report.describe()), report_(std::move(report)) {}
    const DivergenceReport& report() const { return report_; }

private:
    DivergenceReport report_;
};

namespace detail {

struct BoundsNode {
    int state;
    TsTuple ts;
};

}  // namespace detail

// Backward reachability from the final states with zero counters, stepping
// every transition in reverse.  Throws BoundsDiverged when a counter
// component exceeds cap, naming a cycle responsible.
inline Bounds compute_bounds(const ExtNfa& n, const OpenSetTable& table, int cap) {
    if (cap < 1) throw std::invalid_argument("cap must be at least 1");
    int kappa = n.kappa;

    // reverse adjacency: target -> (symbol, source)
    std::vector<std::vector<std::pair<ExtSymbol, int>>> rev(n.num_states);
    for (int q = 0; q < n.num_states; ++q)
        for (const auto& [symbol, target] : n.edges[q]) rev[target].push_back({symbol, q});

    Bounds bounds;
    bounds.kappa = kappa;

    std::map<std::pair<int, TsTuple>, std::pair<int, TsTuple>> parent;  // node -> predecessor in the walk
    std::map<std::pair<int, TsTuple>, ExtSymbol> parent_label;
    std::deque<std::pair<int, TsTuple>> worklist;

    TsTuple zero{std::vector<int>(kappa, 0), std::vector<int>(kappa, 0)};
    for (int f : n.finals) {
        auto node = std::make_pair(f, zero);
        if (bounds.reachable[f].insert(zero).second) worklist.push_back(node);
    }

    auto report_divergence = [&](const std::pair<int, TsTuple>& from, int state, const ExtSymbol& label,
                                 const char* component, int cell) -> void {
        DivergenceReport report;
        report.exceeded_cap = cap;
        report.component = component;
        report.cell = cell;
        report.cycle_states.push_back(state);
        report.cycle_labels.push_back(label);
        std::pair<int, TsTuple> cursor = from;
        for (;;) {
            report.cycle_states.push_back(cursor.first);
            if (cursor.first == state) break;  // closed a cycle through the offending state
            auto it = parent.find(cursor);
            if (it == parent.end()) break;
            report.cycle_labels.push_back(parent_label.at(cursor));
            cursor = it->second;
        }
        throw BoundsDiverged(std::move(report));
    };

    while (!worklist.empty()) {
        auto node = worklist.front();
        worklist.pop_front();
        const auto& [state, ts] = node;
        for (const auto& [label, source] : rev[state]) {
            TsTuple stepped;
            stepped.t = t_backstep(label, ts.t);
            stepped.s = s_backstep(label, ts.s, table[state]);
            for (int k = 0; k < kappa; ++k) {
                if (stepped.t[k] > cap) report_divergence(node, source, label, "t", k + 1);
                if (stepped.s[k] > cap) report_divergence(node, source, label, "s", k + 1);
            }
            auto next = std::make_pair(source, stepped);
            if (bounds.reachable[source].insert(stepped).second) {
                parent[next] = node;
                parent_label[next] = label;
                worklist.push_back(next);
            }
        }
    }

    for (const auto& [state, tuples] : bounds.reachable) {
        bounds.reachable_count += tuples.size();
        for (const TsTuple& ts : tuples) {
            for (int k = 0; k < kappa; ++k) {
                bounds.theta = std::max(bounds.theta, ts.t[k]);
                bounds.sigma = std::max(bounds.sigma, ts.s[k]);
            }
        }
    }

    bounds.depth.assign(static_cast<std::size_t>(bounds.sigma) + 1, 0);
    for (int l = 1; l <= bounds.sigma; ++l)
        bounds.depth[l] = static_cast<long long>(bounds.theta) * (1 + kappa * bounds.depth[l - 1]);
    bounds.rho = bounds.depth[bounds.sigma];
    return bounds;
}

}  // namespace rewb

#endif  // REWB_ANALYSIS_HPP
