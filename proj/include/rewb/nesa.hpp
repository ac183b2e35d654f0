// Nonerasing stack automaton for closed-star expressions.  The automaton
// guesses a ref-language member symbol by symbol, pushing it onto the stack:
// a letter push consumes that letter from the input, a bracket push consumes
// nothing, and a number push triggers a cascade that walks the stack
// interior and consumes exactly the referenced memory content.
//
// States pair an NFA state with a command string (a bounded call stack) over
// call/exec/ret commands.  The cascade for number i:
//   call_i^x  walk down to the nearest same-indexed opening bracket (or the
//             stack bottom), counting the occurrences of i on the way in x;
//   exec_i^x  walk up through the bracket content, matching letters against
//             the input and recursing on nested numbers;
//   ret_i^x   walk up, counting i occurrences down again; when the count
//             hits zero the walk is back at the number that started it.
// Within a cascade at most one move is ever applicable, so nondeterminism
// lives only in the choice of NFA edges.

#ifndef REWB_NESA_HPP
#define REWB_NESA_HPP

#include <compare>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rewb/analysis.hpp"
#include "rewb/ext_nfa.hpp"
#include "rewb/mcfg.hpp"
#include "rewb/semantics.hpp"

namespace rewb {

struct Cmd {
    enum class Kind { call, exec, ret };
    Kind kind;
    int index = 0;  // memory cell
    int sup = 0;    // bookmark counter, 0..theta

    friend auto operator<=>(const Cmd&, const Cmd&) = default;
};

inline std::string to_string(const Cmd& c) {
    const char* k = c.kind == Cmd::Kind::call ? "call" : c.kind == Cmd::Kind::exec ? "exec" : "ret";
    return std::string(k) + "_" + std::to_string(c.index) + "^" + std::to_string(c.sup);
}

struct NesaState {
    int base = 0;
    std::vector<Cmd> cmds;

    bool is_base() const { return cmds.empty(); }
    friend auto operator<=>(const NesaState&, const NesaState&) = default;
};

inline std::string to_string(const NesaState& s) {
    std::string out = "q" + std::to_string(s.base);
    for (const Cmd& c : s.cmds) out += "." + to_string(c);
    return out;
}

// Stack pointer: -1 points at the bottom symbol Z0, otherwise an index into
// the pushed content.
struct InstDesc {
    NesaState state;
    std::size_t input_pos = 0;
    RefString stack;
    std::ptrdiff_t pointer = -1;

    bool pointer_at_top() const { return pointer == static_cast<std::ptrdiff_t>(stack.size()) - 1; }
    friend auto operator<=>(const InstDesc&, const InstDesc&) = default;
};

inline std::string render_stack(const RefString& stack, std::ptrdiff_t pointer) {
    std::string out = "Z0";
    if (pointer == -1) out = "{Z0}";
    for (std::size_t i = 0; i < stack.size(); ++i) {
        out += ' ';
        if (static_cast<std::ptrdiff_t>(i) == pointer) out += "{" + to_string(stack[i]) + "}";
        else out += to_string(stack[i]);
    }
    return out;
}

inline std::string to_string(const InstDesc& id, const std::string& input) {
    return "(" + to_string(id.state) + ", " + input.substr(id.input_pos) + "<|, " +
           render_stack(id.stack, id.pointer) + " $)";
}

struct Nesa {
    ExtNfa nfa;
    int kappa = 0;
    int theta = 0;
    int sigma = 0;
};

inline Nesa build_nesa(const Rewb& r, int cap = 64) {
    if (!is_closed_star(r))
        throw NotClosedStar("expression is not closed-star: " + to_string(r));
    Nesa n;
    n.nfa = build_nfa(r);
    OpenSetTable table = open_sets(n.nfa);
    Bounds bounds = compute_bounds(n.nfa, table, cap);
    n.kappa = n.nfa.kappa;
    n.theta = bounds.theta;
    n.sigma = bounds.sigma;
    return n;
}

inline Nesa build_nesa(const RewbPtr& r, int cap = 64) { return build_nesa(*r, cap); }

// All one-step successors of an instantaneous description on input w.
// Boundary guards: no left move below the bottom, no right move past the
// top, pushdown moves only with the pointer at the top, and the input head
// never moves at the endmarker.
inline std::vector<InstDesc> step(const Nesa& n, const InstDesc& id, const std::string& w) {
    std::vector<InstDesc> out;
    const bool at_top = id.pointer_at_top();
    const bool at_end = id.input_pos >= w.size();
    const std::ptrdiff_t top = static_cast<std::ptrdiff_t>(id.stack.size()) - 1;

    auto pointed_z0 = id.pointer < 0;
    const ExtSymbol* pointed = pointed_z0 ? nullptr : &id.stack[static_cast<std::size_t>(id.pointer)];

    if (id.state.is_base()) {
        if (!at_top) return out;  // pushdown mode requires the pointer at the top
        for (const auto& [symbol, target] : n.nfa.edges[id.state.base]) {
            switch (symbol.kind) {
                case ExtSymbol::Kind::letter: {
                    if (at_end || w[id.input_pos] != symbol.letter) break;
                    InstDesc next = id;
                    next.state.base = target;
                    next.input_pos += 1;
                    next.stack.push_back(symbol);
                    next.pointer = top + 1;
                    out.push_back(std::move(next));
                    break;
                }
                case ExtSymbol::Kind::open:
                case ExtSymbol::Kind::close: {
                    InstDesc next = id;
                    next.state.base = target;
                    next.stack.push_back(symbol);
                    next.pointer = top + 1;
                    out.push_back(std::move(next));
                    break;
                }
                case ExtSymbol::Kind::num: {
                    InstDesc next = id;
                    next.state.base = target;
                    next.state.cmds.push_back({Cmd::Kind::call, symbol.index, 0});
                    next.stack.push_back(symbol);
                    next.pointer = top + 1;
                    out.push_back(std::move(next));
                    break;
                }
            }
        }
        return out;
    }

    const Cmd cmd = id.state.cmds.back();
    auto with_cmd = [&](Cmd replacement, int input_move, int pointer_move) {
        InstDesc next = id;
        next.state.cmds.back() = replacement;
        next.input_pos += static_cast<std::size_t>(input_move);
        next.pointer += pointer_move;
        out.push_back(std::move(next));
    };

    switch (cmd.kind) {
        case Cmd::Kind::call: {
            if (!pointed_z0 && pointed->kind == ExtSymbol::Kind::num && pointed->index == cmd.index &&
                cmd.sup < n.theta) {
                if (id.pointer >= 0) with_cmd({Cmd::Kind::call, cmd.index, cmd.sup + 1}, 0, -1);
            } else if (!pointed_z0 && pointed->kind == ExtSymbol::Kind::open &&
                       pointed->index == cmd.index) {
                if (!at_top) with_cmd({Cmd::Kind::exec, cmd.index, cmd.sup}, 0, +1);
            } else if (pointed_z0) {
                if (!at_top) with_cmd({Cmd::Kind::ret, cmd.index, cmd.sup}, 0, +1);
            } else {
                if (id.pointer >= 0) with_cmd(cmd, 0, -1);
            }
            break;
        }
        case Cmd::Kind::exec: {
            if (pointed_z0) break;  // never defined at the bottom
            switch (pointed->kind) {
                case ExtSymbol::Kind::letter:
                    if (!at_end && w[id.input_pos] == pointed->letter && !at_top)
                        with_cmd(cmd, 1, +1);
                    break;
                case ExtSymbol::Kind::open:
                    if (pointed->index != cmd.index && !at_top) with_cmd(cmd, 0, +1);
                    break;
                case ExtSymbol::Kind::close:
                    if (pointed->index == cmd.index) {
                        if (!at_top) with_cmd({Cmd::Kind::ret, cmd.index, cmd.sup}, 0, +1);
                    } else if (!at_top) {
                        with_cmd(cmd, 0, +1);
                    }
                    break;
                case ExtSymbol::Kind::num:
                    if (pointed->index != cmd.index &&
                        static_cast<int>(id.state.cmds.size()) + 1 <= n.sigma) {
                        InstDesc next = id;
                        next.state.cmds.push_back({Cmd::Kind::call, pointed->index, 0});
                        out.push_back(std::move(next));
                    }
                    break;
            }
            break;
        }
        case Cmd::Kind::ret: {
            if (cmd.sup == 0) {
                InstDesc next = id;
                next.state.cmds.pop_back();
                out.push_back(std::move(next));
                break;
            }
            if (!pointed_z0 && pointed->kind == ExtSymbol::Kind::num && pointed->index == cmd.index) {
                if (at_top) with_cmd({Cmd::Kind::ret, cmd.index, cmd.sup - 1}, 0, 0);
                else with_cmd({Cmd::Kind::ret, cmd.index, cmd.sup - 1}, 0, +1);
            } else if (!at_top) {
                with_cmd(cmd, 0, +1);
            }
            break;
        }
    }
    return out;
}

class CascadeViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CascadeResult {
    bool dead_end = false;
    InstDesc id;
    std::size_t steps = 0;
};

// Runs the deterministic cascade after a number guess until the command
// string empties.  Asserts the unique-next-move contract at every
// intermediate description and that no intermediate description has a base
// state.
inline CascadeResult run_cascade(const Nesa& n, InstDesc id, const std::string& w,
                                 std::size_t step_limit = 1'000'000) {
    CascadeResult result;
    while (!id.state.is_base()) {
        std::vector<InstDesc> successors = step(n, id, w);
        if (successors.size() > 1)
            throw CascadeViolation("cascade is not deterministic at " + to_string(id, w));
        if (successors.empty()) {
            result.dead_end = true;
            result.id = std::move(id);
            return result;
        }
        id = std::move(successors[0]);
        if (++result.steps > step_limit)
            throw CascadeViolation("cascade did not terminate within " + std::to_string(step_limit) +
                                   " steps");
    }
    if (!id.pointer_at_top())
        throw CascadeViolation("cascade finished away from the stack top: " + to_string(id, w));
    result.id = std::move(id);
    return result;
}

// The big step for a guessed number: push the number for the given NFA edge
// and run the cascade.  On success the input has advanced by exactly the
// referenced memory content and the pointer is back at the top.
inline CascadeResult istep_bigstep(const Nesa& n, const InstDesc& id, int num_index, int target_state,
                                   const std::string& w) {
    if (!id.state.is_base() || !id.pointer_at_top())
        throw std::invalid_argument("big step requires a base state with the pointer at the top");
    InstDesc pushed = id;
    pushed.state.base = target_state;
    pushed.state.cmds.push_back({Cmd::Kind::call, num_index, 0});
    pushed.stack.push_back(ExtSymbol::make_num(num_index));
    pushed.pointer += 1;
    return run_cascade(n, pushed, w);
}

struct AcceptResult {
    enum class Verdict { accepted, rejected, budget_exceeded };
    Verdict verdict = Verdict::rejected;
    bool stack_capped = false;  // a branch was cut by the ref-length bound
    std::size_t steps = 0;

    bool accepted() const { return verdict == Verdict::accepted; }
};

// Guided acceptance: nondeterminism only at the choice of NFA edges; number
// guesses run the deterministic cascade.  max_stack bounds the guessed
// member length (0 = unbounded); rejection is exhaustive within that bound.
inline AcceptResult accepts(const Nesa& n, const std::string& w, std::size_t budget = 5'000'000,
                            std::size_t max_stack = 0) {
    AcceptResult result;
    struct Node {
        int state;
        std::size_t pos;
        RefString stack;
    };
    std::set<std::tuple<int, std::size_t, RefString>> visited;
    std::deque<Node> frontier;

    auto consider = [&](int state, std::size_t pos, RefString stack) {
        if (!visited.insert({state, pos, stack}).second) return;
        frontier.push_back({state, pos, std::move(stack)});
    };
    consider(n.nfa.start, 0, {});

    while (!frontier.empty()) {
        Node node = std::move(frontier.front());
        frontier.pop_front();
        if (++result.steps > budget) {
            result.verdict = AcceptResult::Verdict::budget_exceeded;
            return result;
        }
        if (node.pos == w.size() && n.nfa.is_final(node.state)) {
            result.verdict = AcceptResult::Verdict::accepted;
            return result;
        }
        for (const auto& [symbol, target] : n.nfa.edges[node.state]) {
            if (max_stack && node.stack.size() + 1 > max_stack) {
                result.stack_capped = true;
                continue;
            }
            switch (symbol.kind) {
                case ExtSymbol::Kind::letter: {
                    if (node.pos >= w.size() || w[node.pos] != symbol.letter) break;
                    RefString stack = node.stack;
                    stack.push_back(symbol);
                    consider(target, node.pos + 1, std::move(stack));
                    break;
                }
                case ExtSymbol::Kind::open:
                case ExtSymbol::Kind::close: {
                    RefString stack = node.stack;
                    stack.push_back(symbol);
                    consider(target, node.pos, std::move(stack));
                    break;
                }
                case ExtSymbol::Kind::num: {
                    InstDesc id;
                    id.state = {node.state, {}};
                    id.input_pos = node.pos;
                    id.stack = node.stack;
                    id.pointer = static_cast<std::ptrdiff_t>(node.stack.size()) - 1;
                    CascadeResult cascade = istep_bigstep(n, id, symbol.index, target, w);
                    result.steps += cascade.steps;
                    if (result.steps > budget) {
                        result.verdict = AcceptResult::Verdict::budget_exceeded;
                        return result;
                    }
                    if (cascade.dead_end) break;
                    consider(cascade.id.state.base, cascade.id.input_pos, std::move(cascade.id.stack));
                    break;
                }
            }
        }
    }
    result.verdict = AcceptResult::Verdict::rejected;
    return result;
}

// The full ID sequence of one accepting computation, cascade interiors
// included, or nothing when the word is rejected within the bounds.
inline std::optional<std::vector<InstDesc>> trace_accepting_run(const Nesa& n, const std::string& w,
                                                                std::size_t budget = 5'000'000,
                                                                std::size_t max_stack = 0) {
    using Key = std::tuple<int, std::size_t, RefString>;
    std::map<Key, Key> parent;
    std::set<Key> visited;
    std::deque<Key> frontier;
    std::optional<Key> accept;

    Key start{n.nfa.start, 0, {}};
    visited.insert(start);
    frontier.push_back(start);
    std::size_t steps = 0;
    while (!frontier.empty() && !accept) {
        Key node = std::move(frontier.front());
        frontier.pop_front();
        const auto& [state, pos, stack] = node;
        if (++steps > budget) return std::nullopt;
        if (pos == w.size() && n.nfa.is_final(state)) { accept = node; break; }
        for (const auto& [symbol, target] : n.nfa.edges[state]) {
            if (max_stack && stack.size() + 1 > max_stack) continue;
            std::optional<Key> next;
            if (symbol.kind == ExtSymbol::Kind::letter) {
                if (pos < w.size() && w[pos] == symbol.letter) {
                    RefString s = stack;
                    s.push_back(symbol);
                    next = Key{target, pos + 1, std::move(s)};
                }
            } else if (symbol.kind != ExtSymbol::Kind::num) {
                RefString s = stack;
                s.push_back(symbol);
                next = Key{target, pos, std::move(s)};
            } else {
                InstDesc id{{state, {}}, pos, stack, static_cast<std::ptrdiff_t>(stack.size()) - 1};
                CascadeResult cascade = istep_bigstep(n, id, symbol.index, target, w);
                steps += cascade.steps;
                if (!cascade.dead_end)
                    next = Key{cascade.id.state.base, cascade.id.input_pos, std::move(cascade.id.stack)};
            }
            if (next && visited.insert(*next).second) {
                parent[*next] = node;
                frontier.push_back(std::move(*next));
            }
        }
    }
    if (!accept) return std::nullopt;

    std::vector<Key> chain{*accept};
    while (!(chain.back() == start)) chain.push_back(parent.at(chain.back()));
    std::reverse(chain.begin(), chain.end());

    std::vector<InstDesc> ids;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const auto& [state, pos, stack] = chain[i];
        InstDesc id{{state, {}}, pos, stack, static_cast<std::ptrdiff_t>(stack.size()) - 1};
        if (i == 0) { ids.push_back(id); continue; }
        const auto& [pstate, ppos, pstack] = chain[i - 1];
        const ExtSymbol& guessed = stack.back();
        if (guessed.kind == ExtSymbol::Kind::num) {
            // replay the cascade to recover the interior descriptions
            InstDesc from{{pstate, {}}, ppos, pstack, static_cast<std::ptrdiff_t>(pstack.size()) - 1};
            InstDesc pushed = from;
            pushed.state.base = state;
            pushed.state.cmds.push_back({Cmd::Kind::call, guessed.index, 0});
            pushed.stack.push_back(guessed);
            pushed.pointer += 1;
            while (!pushed.state.is_base()) {
                ids.push_back(pushed);
                std::vector<InstDesc> successors = step(n, pushed, w);
                if (successors.size() != 1)
                    throw CascadeViolation("cascade replay lost determinism");
                pushed = std::move(successors[0]);
            }
            ids.push_back(pushed);
        } else {
            ids.push_back(id);
        }
    }
    return ids;
}

// Every pushdown-mode transition instance replaces the top symbol Z by the
// nonempty string Z followed by the guessed symbol, so the stack strictly
// grows.  Returns the number of instances checked.
inline std::size_t audit_nonerasing(const Nesa& n) {
    std::vector<std::optional<ExtSymbol>> tops;  // nullopt stands for Z0
    tops.push_back(std::nullopt);
    for (char a : n.nfa.letters) tops.push_back(ExtSymbol::make_letter(a));
    for (int i = 1; i <= n.kappa; ++i) {
        tops.push_back(ExtSymbol::make_open(i));
        tops.push_back(ExtSymbol::make_close(i));
        tops.push_back(ExtSymbol::make_num(i));
    }
    std::size_t instances = 0;
    for (int q = 0; q < n.nfa.num_states; ++q)
        for (const auto& [symbol, target] : n.nfa.edges[q]) {
            for (const auto& top : tops) {
                std::vector<std::optional<ExtSymbol>> pushed{top, symbol};
                if (pushed.empty()) throw std::logic_error("erasing pushdown transition");
                if (pushed.size() < 2) throw std::logic_error("pushdown transition shrinks the stack");
                ++instances;
            }
        }
    return instances;
}

inline std::string dump(const Nesa& n) {
    std::string out = "nesa\n";
    out += "kappa " + std::to_string(n.kappa) + "\n";
    out += "theta " + std::to_string(n.theta) + "\n";
    out += "sigma " + std::to_string(n.sigma) + "\n";
    out += "input-alphabet";
    for (char a : n.nfa.letters) out += std::string(" ") + a;
    out += "\nstack-alphabet Z0";
    for (char a : n.nfa.letters) out += std::string(" ") + a;
    for (int i = 1; i <= n.kappa; ++i)
        out += " [" + std::to_string(i) + " ]" + std::to_string(i) + " #" + std::to_string(i);
    out += "\nstart q" + std::to_string(n.nfa.start) + "\nfinals";
    for (int f : n.nfa.finals) out += " q" + std::to_string(f);
    out += "\n";

    out += "# pushdown mode: state , input , top -> state' , input-move , push (top kept)\n";
    for (int q = 0; q < n.nfa.num_states; ++q)
        for (const auto& [symbol, target] : n.nfa.edges[q]) {
            std::string row = "q" + std::to_string(q) + " , ";
            switch (symbol.kind) {
                case ExtSymbol::Kind::letter:
                    row += std::string(1, symbol.letter) + " , * -> q" + std::to_string(target) +
                           " , +1 , push " + to_string(symbol);
                    break;
                case ExtSymbol::Kind::open:
                case ExtSymbol::Kind::close:
                    row += "* , * -> q" + std::to_string(target) + " , 0 , push " + to_string(symbol);
                    break;
                case ExtSymbol::Kind::num:
                    row += "* , * -> q" + std::to_string(target) + ".call_" +
                           std::to_string(symbol.index) + "^0 , 0 , push " + to_string(symbol);
                    break;
            }
            out += row + "\n";
        }

    out += "# stack reading mode: command , input , pointed -> command' , input-move , pointer-move\n";
    for (int i = 1; i <= n.kappa; ++i) {
        for (int x = 0; x <= n.theta; ++x) {
            std::string call = "call_" + std::to_string(i) + "^" + std::to_string(x);
            if (x < n.theta)
                out += call + " , * , #" + std::to_string(i) + " -> call_" + std::to_string(i) + "^" +
                       std::to_string(x + 1) + " , 0 , -1\n";
            out += call + " , * , [" + std::to_string(i) + " -> exec_" + std::to_string(i) + "^" +
                   std::to_string(x) + " , 0 , +1\n";
            out += call + " , * , Z0 -> ret_" + std::to_string(i) + "^" + std::to_string(x) +
                   " , 0 , +1\n";
            out += call + " , * , other -> " + call + " , 0 , -1\n";

            std::string exec = "exec_" + std::to_string(i) + "^" + std::to_string(x);
            for (char a : n.nfa.letters)
                out += exec + " , " + a + " , " + a + " -> " + exec + " , +1 , +1\n";
            for (int j = 1; j <= n.kappa; ++j) {
                if (j == i) continue;
                out += exec + " , * , [" + std::to_string(j) + " -> " + exec + " , 0 , +1\n";
                out += exec + " , * , ]" + std::to_string(j) + " -> " + exec + " , 0 , +1\n";
                out += exec + " , * , #" + std::to_string(j) + " -> " + exec + ".call_" +
                       std::to_string(j) + "^0 , 0 , 0\n";
            }
            out += exec + " , * , ]" + std::to_string(i) + " -> ret_" + std::to_string(i) + "^" +
                   std::to_string(x) + " , 0 , +1\n";

            std::string ret = "ret_" + std::to_string(i) + "^" + std::to_string(x);
            if (x > 0) {
                out += ret + " , * , #" + std::to_string(i) + "@top -> ret_" + std::to_string(i) + "^" +
                       std::to_string(x - 1) + " , 0 , 0\n";
                out += ret + " , * , #" + std::to_string(i) + " -> ret_" + std::to_string(i) + "^" +
                       std::to_string(x - 1) + " , 0 , +1\n";
                out += ret + " , * , other -> " + ret + " , 0 , +1\n";
            } else {
                out += ret + " , * , * -> pop , 0 , 0\n";
            }
        }
    }
    return out;
}

}  // namespace rewb

#endif  // REWB_NESA_HPP
