// Cross-engine equivalence harness: classification reports, the four word
// engines (oracle, parallel grammar, non-duplicating grammar, stack
// automaton), pairwise comparison, and corpus runs.

#ifndef REWB_HARNESS_HPP
#define REWB_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <future>
#include <optional>
#include <set>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rewb/analysis.hpp"
#include "rewb/mcfg.hpp"
#include "rewb/nesa.hpp"
#include "rewb/oracle.hpp"
#include "rewb/pmcfg.hpp"
#include "rewb/semantics.hpp"
#include "rewb/syntax.hpp"

namespace rewb {

struct ClassifyReport {
    std::string text;
    int kappa = 0;
    bool closed = false;
    bool closed_star = false;
    std::optional<Bounds> bounds;                 // closed-star only
    std::optional<DivergenceReport> divergence;   // when the bound fixpoint blew the cap
};

inline ClassifyReport classify(const Rewb& r, int cap = 64) {
    ClassifyReport report;
    report.text = to_string(r);
    report.kappa = max_group_index(r);
    report.closed = is_closed(r);
    report.closed_star = is_closed_star(r);
    if (report.closed_star) {
        ExtNfa nfa = build_nfa(r);
        try {
            report.bounds = compute_bounds(nfa, open_sets(nfa), cap);
        } catch (const BoundsDiverged& e) {
            report.divergence = e.report();
        }
    }
    return report;
}

struct CheckOptions {
    std::size_t max_len = 8;
    std::vector<std::string> engines{"oracle", "pmcfg"};
    std::size_t budget = 10'000'000;
    int cap = 64;
    std::size_t config_budget = 2'000'000;
};

struct EngineReport {
    std::string name;
    bool ran = false;
    bool exact = true;         // enumeration was complete
    std::string error;
    std::set<std::string> words;
    double millis = 0.0;
};

struct PairDiff {
    std::string left, right;
    std::vector<std::string> only_left, only_right;
};

struct CheckReport {
    std::string text;
    std::size_t max_len = 0;
    bool oracle_saturated = true;
    std::size_t required_ref_len = 0;
    std::vector<EngineReport> engines;
    std::vector<PairDiff> diffs;
    bool ok = false;
};

namespace detail {

inline std::vector<std::string> all_words_upto(const std::set<char>& letters, std::size_t max_len) {
    std::vector<std::string> words{""};
    std::size_t begin = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::size_t end = words.size();
        for (std::size_t i = begin; i < end; ++i)
            for (char a : letters) words.push_back(words[i] + a);
        begin = end;
    }
    return words;
}

}  // namespace detail

inline CheckReport check(const Rewb& r, const CheckOptions& options) {
    CheckReport report;
    report.text = to_string(r);
    report.max_len = options.max_len;

    std::optional<OracleResult> oracle_result;
    auto timed = [](EngineReport& e, auto&& body) {
        auto start = std::chrono::steady_clock::now();
        try {
            body();
            e.ran = true;
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
        e.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                       .count();
    };

    for (const std::string& name : options.engines) {
        EngineReport engine;
        engine.name = name;
        if (name == "oracle") {
            timed(engine, [&] {
                oracle_result = lang_oracle(r, options.max_len, 0, options.config_budget);
                engine.words = oracle_result->words;
                engine.exact = oracle_result->saturated;
                report.oracle_saturated = oracle_result->saturated;
                report.required_ref_len = oracle_result->required_ref_len;
            });
        } else if (name == "pmcfg") {
            timed(engine, [&] {
                PmcfgConstruction c = build_pmcfg(r);
                BoundedLanguageResult lang = bounded_language(c.grammar, options.max_len, options.budget);
                engine.words = std::move(lang.words);
                engine.exact = lang.complete;
                if (lang.budget_exceeded) throw std::runtime_error("derivation budget exceeded");
            });
        } else if (name == "mcfg") {
            timed(engine, [&] {
                McfgConstruction c = build_mcfg(r, options.cap);
                BoundedLanguageResult lang = bounded_language(c.grammar, options.max_len, options.budget);
                engine.words = std::move(lang.words);
                engine.exact = lang.complete;
                if (lang.budget_exceeded) throw std::runtime_error("derivation budget exceeded");
            });
        } else if (name == "nesa") {
            timed(engine, [&] {
                Nesa n = build_nesa(r, options.cap);
                // the oracle's certified member length bounds the guesses;
                // compute it here when the oracle engine was not requested
                std::size_t max_stack = 0;
                if (oracle_result) {
                    if (!oracle_result->saturated)
                        throw std::runtime_error("no certified member-length bound available");
                    max_stack = oracle_result->required_ref_len;
                } else {
                    OracleResult bound = lang_oracle(r, options.max_len, 0, options.config_budget);
                    if (!bound.saturated)
                        throw std::runtime_error("no certified member-length bound available");
                    max_stack = bound.required_ref_len;
                }
                for (const std::string& w : detail::all_words_upto(n.nfa.letters, options.max_len)) {
                    AcceptResult a = accepts(n, w, options.budget, max_stack);
                    if (a.verdict == AcceptResult::Verdict::budget_exceeded)
                        throw std::runtime_error("acceptance budget exceeded on word '" + w + "'");
                    if (a.accepted()) engine.words.insert(w);
                }
            });
        } else {
            engine.error = "unknown engine";
        }
        report.engines.push_back(std::move(engine));
    }

    report.ok = true;
    for (const EngineReport& engine : report.engines)
        if (!engine.ran || !engine.exact) report.ok = false;
    for (std::size_t i = 0; i < report.engines.size(); ++i) {
        for (std::size_t j = i + 1; j < report.engines.size(); ++j) {
            const EngineReport& a = report.engines[i];
            const EngineReport& b = report.engines[j];
            if (!a.ran || !b.ran) continue;
            PairDiff diff;
            diff.left = a.name;
            diff.right = b.name;
            std::set_difference(a.words.begin(), a.words.end(), b.words.begin(), b.words.end(),
                                std::back_inserter(diff.only_left));
            std::set_difference(b.words.begin(), b.words.end(), a.words.begin(), a.words.end(),
                                std::back_inserter(diff.only_right));
            if (!diff.only_left.empty() || !diff.only_right.empty()) report.ok = false;
            report.diffs.push_back(std::move(diff));
        }
    }
    if (!report.oracle_saturated) report.ok = false;
    return report;
}

// ---------------------------------------------------------------------------
// Corpus runs
// ---------------------------------------------------------------------------

struct CorpusEntry {
    std::string text;
    int line = 0;
    std::map<std::string, std::string> expect;
};

struct CorpusEntryResult {
    CorpusEntry entry;
    bool parse_ok = false;
    std::string error;
    std::optional<ClassifyReport> classify;
    std::vector<std::pair<std::string, std::string>> expectation_failures;  // key, detail
    std::optional<CheckReport> check;
    bool ok = false;
};

struct CorpusReport {
    std::vector<CorpusEntryResult> entries;
    bool ok = true;
    std::size_t passed = 0;
};

inline std::vector<CorpusEntry> parse_corpus(std::istream& in) {
    std::vector<CorpusEntry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string body = line;
        std::string annotation;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            body = line.substr(0, hash);
            annotation = line.substr(hash + 1);
        }
        while (!body.empty() && (body.back() == ' ' || body.back() == '\t')) body.pop_back();
        std::size_t first = body.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        CorpusEntry entry;
        entry.text = body.substr(first);
        entry.line = line_no;
        std::istringstream as(annotation);
        std::string word;
        if (as >> word && word == "expect:") {
            while (as >> word) {
                std::size_t eq = word.find('=');
                if (eq == std::string::npos) continue;
                entry.expect[word.substr(0, eq)] = word.substr(eq + 1);
            }
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

inline CorpusEntryResult run_corpus_entry(const CorpusEntry& entry, const CheckOptions& base_options) {
    CorpusEntryResult result;
    result.entry = entry;
    RewbPtr r;
    try {
        r = parse(entry.text);
        auto violations = validate(r);
        if (!violations.empty())
            throw std::runtime_error("invalid expression: " + violations.front().reason + " at " +
                                     violations.front().path);
        result.parse_ok = true;
    } catch (const std::exception& e) {
        result.error = e.what();
        return result;
    }

    result.classify = classify(*r, base_options.cap);
    auto expect_bool = [&](const std::string& key, bool actual) {
        auto it = entry.expect.find(key);
        if (it == entry.expect.end()) return;
        bool expected = it->second == "yes" || it->second == "true";
        if (expected != actual)
            result.expectation_failures.push_back({key, "expected " + it->second});
    };
    expect_bool("closed-star", result.classify->closed_star);
    expect_bool("closed", result.classify->closed);
    if (auto it = entry.expect.find("kappa"); it != entry.expect.end()) {
        if (std::to_string(result.classify->kappa) != it->second)
            result.expectation_failures.push_back({"kappa", "expected " + it->second});
    }

    CheckOptions options = base_options;
    options.engines = {"oracle", "pmcfg"};
    if (result.classify->closed_star && result.classify->bounds) {
        options.engines.push_back("mcfg");
        options.engines.push_back("nesa");
    }
    try {
        result.check = check(*r, options);
    } catch (const std::exception& e) {
        result.error = e.what();
        return result;
    }
    result.ok = result.expectation_failures.empty() && result.check->ok;
    return result;
}

inline CorpusReport run_corpus(const std::vector<CorpusEntry>& entries, const CheckOptions& options,
                               unsigned jobs = 0) {
    CorpusReport report;
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    report.entries.resize(entries.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= entries.size()) return;
            report.entries[i] = run_corpus_entry(entries[i], options);
        }
    };
    std::vector<std::thread> threads;
    for (unsigned t = 1; t < jobs; ++t) threads.emplace_back(worker);
    worker();
    for (std::thread& t : threads) t.join();
    for (const CorpusEntryResult& entry : report.entries) {
        if (entry.ok) ++report.passed;
        else report.ok = false;
    }
    return report;
}

}  // namespace rewb

#endif  // REWB_HARNESS_HPP
