// Acceptance suite: one criterion per section, one pass/fail line each, with
// the stated tolerance and time budget enforced.  Exit code is the number of
// failed criteria.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <vector>

#include "rewb/harness.hpp"

using namespace rewb;

namespace {

struct Outcome {
    std::vector<std::string> failures;

    void expect(bool condition, const std::string& message) {
        if (!condition) failures.push_back(message);
    }
};

struct Criterion {
    int id;
    std::string name;
    double limit_ms;
    std::function<void(Outcome&)> body;
};

RefString rs(const std::string& text) { return parse_ref_string(text); }

std::set<std::string> words_upto(const std::string& letters, std::size_t max_len) {
    std::set<std::string> out{""};
    std::vector<std::string> frontier{""};
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<std::string> next;
        for (const std::string& w : frontier)
            for (char a : letters) {
                next.push_back(w + a);
                out.insert(w + a);
            }
        frontier = std::move(next);
    }
    return out;
}

std::vector<CorpusEntry> load_corpus() {
    std::ifstream in(REWB_CORPUS_FILE);
    if (!in) throw std::runtime_error("cannot open corpus file " REWB_CORPUS_FILE);
    return parse_corpus(in);
}

RefString random_ref_string(std::mt19937& rng, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len_dist(0, max_len);
    std::uniform_int_distribution<int> kind_dist(0, 5);
    std::uniform_int_distribution<int> index_dist(1, 3);
    std::uniform_int_distribution<int> letter_dist(0, 1);
    RefString v;
    std::size_t len = len_dist(rng);
    for (std::size_t i = 0; i < len; ++i) {
        switch (kind_dist(rng)) {
            case 0: v.push_back(ExtSymbol::make_open(index_dist(rng))); break;
            case 1: v.push_back(ExtSymbol::make_close(index_dist(rng))); break;
            case 2: v.push_back(ExtSymbol::make_num(index_dist(rng))); break;
            default: v.push_back(ExtSymbol::make_letter(letter_dist(rng) ? 'a' : 'b')); break;
        }
    }
    return v;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria;

    criteria.push_back({1, "worked dereferencing examples", 1.0, [](Outcome& out) {
        out.expect(deref(rs("[1 a [2 b ]2 #2 ]1 #1")) == "abbabb", "nested-capture example");
        out.expect(deref(rs("[1 a ]1 #1 [1 b b ]1 #1")) == "aabbbb", "rightmost-capture example");
        out.expect(deref(rs("a b c #1 #2")) == "abc", "unbound-reference example");
    }});

    criteria.push_back({2, "copy language via oracle and parallel grammar", 1000.0, [](Outcome& out) {
        std::set<std::string> expected;
        for (const std::string& w : words_upto("ab", 3)) expected.insert(w + w);
        out.expect(expected.size() == 15, "expected-set size");
        RewbPtr r = parse("(_1(a+b)*)_1\\1");
        OracleResult oracle = lang_oracle(r, 6);
        out.expect(oracle.saturated, "oracle saturation");
        out.expect(oracle.words == expected, "oracle word set");
        BoundedLanguageResult lang = bounded_language(build_pmcfg(r).grammar, 6);
        out.expect(lang.complete, "grammar enumeration completeness");
        out.expect(lang.words == expected, "grammar word set");
    }});

    criteria.push_back({3, "published parallel-grammar construction", 1000.0, [](Outcome& out) {
        PmcfgConstruction c = build_pmcfg(parse("(_1a*)_1(c\\1)*"));
        std::multiset<std::string> shape;
        for (const GrammarRule& rule : c.grammar.rules) {
            std::string row = c.grammar.nonterm_names[rule.lhs] + "->" +
                              c.grammar.functions[rule.fun].name;
            for (int b : rule.rhs) row += "[" + c.grammar.nonterm_names[b] + "]";
            shape.insert(row);
        }
        std::multiset<std::string> expected{"S->o[A2]",         "A1->r_1[A0]",    "A1->i_a^{1}[A1]",
                                            "A2->id[A1]",       "A3->i_c^{}[A2]", "A2->p_1^{}[A3]",
                                            "A0->e"};
        out.expect(shape == expected, "rule shape");
        auto trace = functional_deref_trace(c, rs("[1 a ]1 c #1"));
        out.expect(trace.back() == StringTuple{"aca", "a"}, "functional dereferencing trace");
    }});

    criteria.push_back({4, "language identity for the star-referencing expression", 30000.0,
                        [](Outcome& out) {
        RewbPtr r = parse("(_1a*)_1(c\\1)*");
        std::set<std::string> expected;
        for (std::size_t n = 0; n <= 9; ++n)
            for (std::size_t k = 0;; ++k) {
                std::size_t len = n + k * (n + 1);
                if (len > 9) break;
                std::string w(n, 'a'), word = w;
                for (std::size_t rep = 0; rep < k; ++rep) word += "c" + w;
                expected.insert(word);
            }
        OracleResult oracle = lang_oracle(r, 9);
        out.expect(oracle.saturated, "oracle saturation");
        out.expect(oracle.words == expected, "oracle equals the closed form");
        BoundedLanguageResult lang = bounded_language(build_pmcfg(r).grammar, 9);
        out.expect(lang.complete && lang.words == expected, "parallel grammar agrees");
        ExtNfa n = build_nfa(r);
        bool diverged = false;
        try {
            compute_bounds(n, open_sets(n), 64);
        } catch (const BoundsDiverged&) {
            diverged = true;
        }
        out.expect(diverged, "counter fixpoint reports divergence");
    }});

    criteria.push_back({5, "worked backward-counter example", 1000.0, [](Outcome& out) {
        auto ts = ts_sequence(rs("[1 a a ]1 [2 #1 #1 ]2 [1 #2 ]1 #1"), 2);
        out.expect(ts[5].t[0] == 2, "reference counter at position 5");
        out.expect(ts[5].s[0] == 3, "dependency depth at position 5");
    }});

    criteria.push_back({6, "double-capture loop: bounds, grammar, language", 30000.0, [](Outcome& out) {
        RewbPtr r = parse("((_1a*)_1(_2\\1)_2\\2\\2)*");
        McfgConstruction c = build_mcfg(r);
        out.expect(c.bounds.theta == 2, "theta");
        out.expect(c.bounds.sigma == 2, "sigma");
        out.expect(c.bounds.rho == 10, "rho");
        out.expect(is_nonduplicating(c.grammar), "no duplication");
        out.expect(is_unary(c.grammar), "unary");
        BoundedLanguageResult lang = bounded_language(c.grammar, 8);
        out.expect(lang.complete, "enumeration completeness");
        out.expect(lang.words.count("aaaa") == 1, "derives the fourth power");
        OracleResult oracle = lang_oracle(r, 8);
        out.expect(oracle.saturated && lang.words == oracle.words, "agrees with the oracle");
    }});

    criteria.push_back({7, "classification table", 1000.0, [](Outcome& out) {
        out.expect(is_closed_star(parse("(_1a*)_1c\\1")), "sequential reference is closed-star");
        out.expect(is_closed_star(parse("((_1a*)_1c\\1)*")), "closed loop is closed-star");
        out.expect(is_closed_star(parse("\\1+(_1a*)_1c\\1")), "open alternative is closed-star");
        out.expect(!is_closed_star(parse("(_1a*)_1(c\\1)*")), "loop reference is not closed-star");
        out.expect(is_closed(parse("(_1a*)_1\\1")), "bound reference is closed");
        out.expect(!is_closed(parse("(_1a*)_1\\2")), "unbound index is not closed");
        out.expect(!is_closed(parse("\\1")), "bare reference is not closed");
    }});

    criteria.push_back({8, "cross-engine corpus", 300000.0, [](Outcome& out) {
        std::vector<CorpusEntry> entries = load_corpus();
        out.expect(entries.size() >= 20, "at least 20 corpus entries");
        CheckOptions options;
        options.max_len = 7;
        CorpusReport report = run_corpus(entries, options);
        for (const CorpusEntryResult& e : report.entries) {
            std::string label = e.entry.text;
            out.expect(e.ok, "entry '" + label + "'" + (e.error.empty() ? "" : " (" + e.error + ")"));
            if (!e.check) continue;
            bool closed_star = e.classify && e.classify->closed_star;
            std::size_t engines_expected = closed_star ? 4 : 2;
            out.expect(e.check->engines.size() == engines_expected,
                       "engine count for '" + label + "'");
            for (const PairDiff& d : e.check->diffs)
                out.expect(d.only_left.empty() && d.only_right.empty(),
                           "difference " + d.left + "/" + d.right + " for '" + label + "'");
        }
    }});

    criteria.push_back({9, "invariant suite", 120000.0, [](Outcome& out) {
        // incremental memory laws on 1000 random strings
        std::mt19937 rng(20250810);
        for (int i = 0; i < 1000; ++i) {
            RefString v = random_ref_string(rng, 24);
            std::map<int, std::string> mems;
            for (int j = 1; j <= 3; ++j) mems[j] = "";
            std::set<int> open;
            for (const ExtSymbol& s : v) {
                switch (s.kind) {
                    case ExtSymbol::Kind::letter:
                        for (int j : open) mems[j] += s.letter;
                        break;
                    case ExtSymbol::Kind::num: {
                        std::string pasted = mems[s.index];
                        for (int j : open) mems[j] += pasted;
                        break;
                    }
                    case ExtSymbol::Kind::open:
                        mems[s.index] = "";
                        break;
                    case ExtSymbol::Kind::close:
                        break;
                }
                open = open_step(std::move(open), s);
            }
            for (int j = 1; j <= 3; ++j)
                if (mems[j] != mem(j, v)) {
                    out.expect(false, "incremental law on " + to_string(v));
                    return;
                }
        }

        std::vector<CorpusEntry> entries = load_corpus();
        std::vector<RewbPtr> parsed;
        for (const CorpusEntry& e : entries) parsed.push_back(parse(e.text));

        // enumerated members: empty open map and the matching property
        for (const RewbPtr& r : parsed)
            for (const RefString& v : ref_enumerate(r, 8)) {
                if (!open_set(v).empty()) out.expect(false, "open map nonempty on " + to_string(v));
                if (!is_matching(v)) out.expect(false, "member not matching: " + to_string(v));
            }

        // prefix tuples of the parallel construction equal the semantics
        for (const RewbPtr& r : parsed) {
            PmcfgConstruction c = build_pmcfg(r);
            for (const RefString& v : ref_enumerate(r, 10)) {
                auto trace = functional_deref_trace(c, v);
                for (std::size_t i = 0; i <= v.size(); ++i) {
                    RefString prefix(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(i));
                    if (trace[i][0] != deref(prefix))
                        out.expect(false, "trace word mismatch on " + to_string(v));
                    for (int k = 1; k <= c.kappa; ++k)
                        if (trace[i][static_cast<std::size_t>(k)] != mem(k, prefix))
                            out.expect(false, "trace cell mismatch on " + to_string(v));
                }
            }
        }

        // valid-copies region of the block construction equals the memory
        for (const RewbPtr& r : parsed) {
            if (!is_closed_star(r)) continue;
            McfgConstruction c = build_mcfg(r);
            for (const RefString& v : ref_enumerate(r, 10)) {
                auto trace = mcfg_block_trace(c, v);
                for (std::size_t i = 0; i <= v.size(); ++i) {
                    RefString prefix(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(i));
                    for (int k = 1; k <= c.kappa; ++k) {
                        std::string cell = mem(k, prefix);
                        for (long long copy = 1; copy <= trace[i].valid_copies[k - 1]; ++copy)
                            if (trace[i].tuple[static_cast<std::size_t>(1 + (k - 1) * c.rho + copy - 1)] !=
                                cell)
                                out.expect(false, "valid-copies mismatch on " + to_string(v));
                    }
                }
            }
        }

        // stack automaton: structural audit plus cascade determinism, which
        // run_cascade asserts on every accepted word
        for (const RewbPtr& r : parsed) {
            if (!is_closed_star(r)) continue;
            Nesa n = build_nesa(r);
            std::size_t edge_count = 0;
            for (int q = 0; q < n.nfa.num_states; ++q) edge_count += n.nfa.edges[q].size();
            if (edge_count > 0 && audit_nonerasing(n) == 0)
                out.expect(false, "empty nonerasing audit");
            OracleResult oracle = lang_oracle(r, 6);
            if (!oracle.saturated) {
                out.expect(false, "oracle not saturated for " + to_string(r));
                continue;
            }
            for (const std::string& w : oracle.words) {
                try {
                    AcceptResult a = accepts(n, w, 5'000'000, oracle.required_ref_len);
                    if (!a.accepted()) out.expect(false, "rejected word '" + w + "' of " + to_string(r));
                } catch (const CascadeViolation& e) {
                    out.expect(false, std::string("cascade violation: ") + e.what());
                }
            }
        }
    }});

    int failed = 0;
    for (const Criterion& criterion : criteria) {
        Outcome outcome;
        auto start = std::chrono::steady_clock::now();
        try {
            criterion.body(outcome);
        } catch (const std::exception& e) {
            outcome.failures.push_back(std::string("exception: ") + e.what());
        }
        double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        if (ms > criterion.limit_ms)
            outcome.failures.push_back("time budget exceeded: " + std::to_string(ms) + " ms > " +
                                       std::to_string(criterion.limit_ms) + " ms");
        if (outcome.failures.empty()) {
            std::printf("[PASS] criterion %d: %s (%.2f ms)\n", criterion.id, criterion.name.c_str(), ms);
        } else {
            ++failed;
            std::printf("[FAIL] criterion %d: %s (%.2f ms)\n", criterion.id, criterion.name.c_str(), ms);
            for (const std::string& failure : outcome.failures)
                std::printf("       - %s\n", failure.c_str());
        }
    }
    if (failed == 0) std::printf("all %zu criteria passed\n", criteria.size());
    else std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed;
}
