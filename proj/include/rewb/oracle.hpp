// Brute-force language oracle: the word set is obtained by enumerating
// ref-language members and pushing each through the definitional
// dereferencing pipeline.  A configuration analysis decides how long the
// enumerated members must be for the bounded word set to be complete
// ("saturated"): prefixes are explored breadth-first, each one evaluated
// definitionally, and two prefixes are interchangeable once they reach the
// same state with the same dereferenced word and the same memory contents.
// Dereferenced length never shrinks under extension, so prefixes whose word
// already exceeds the bound are discarded.
//
// The saturated member-based word set must coincide with the words seen at
// final configurations; the oracle checks this and refuses to return an
// inconsistent ground truth.

#ifndef REWB_ORACLE_HPP
#define REWB_ORACLE_HPP

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rewb/ext_nfa.hpp"
#include "rewb/semantics.hpp"
#include "rewb/syntax.hpp"

namespace rewb {

struct OracleResult {
    std::set<std::string> words;
    bool saturated = false;
    std::size_t required_ref_len = 0;  // member length that certifies completeness
    std::size_t used_ref_len = 0;
    bool closure_complete = false;     // configuration analysis finished within budget
    std::size_t configs = 0;
};

class OracleBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

struct ConfigAnalysis {
    bool complete = false;
    std::size_t required_ref_len = 0;
    std::size_t configs = 0;
    std::set<std::string> final_words;
};

inline std::string config_key(int state, const std::string& word,
                              const std::vector<std::string>& mems) {
    std::string key = std::to_string(state);
    key += '|';
    key += word;
    for (const std::string& m : mems) {
        key += '|';
        key += m;
    }
    return key;
}

inline ConfigAnalysis analyze_configs(const ExtNfa& n, std::size_t max_word_len,
                                      std::size_t config_budget) {
    ConfigAnalysis out;
    struct Node {
        int state;
        std::size_t depth;
        RefString pre;  // dereferenced prefix, number-free
    };

    std::set<std::string> seen;
    std::deque<Node> frontier;

    auto consider = [&](int state, std::size_t depth, RefString pre) -> bool {
        std::string word = project_letters(pre);
        if (word.size() > max_word_len) return true;  // extensions only grow the word
        std::vector<std::string> mems(static_cast<std::size_t>(n.kappa));
        for (int k = 1; k <= n.kappa; ++k) mems[static_cast<std::size_t>(k - 1)] = fetch(k, pre);
        if (!seen.insert(config_key(state, word, mems)).second) return true;
        if (seen.size() > config_budget) return false;
        if (n.is_final(state)) {
            out.final_words.insert(word);
            out.required_ref_len = std::max(out.required_ref_len, depth);
        }
        frontier.push_back({state, depth, std::move(pre)});
        return true;
    };

    bool within_budget = consider(n.start, 0, {});
    while (within_budget && !frontier.empty()) {
        Node node = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& [symbol, target] : n.edges[node.state]) {
            RefString pre = node.pre;
            if (symbol.kind == ExtSymbol::Kind::num) {
                for (char a : fetch(symbol.index, pre)) pre.push_back(ExtSymbol::make_letter(a));
            } else {
                pre.push_back(symbol);
            }
            if (!consider(target, node.depth + 1, std::move(pre))) { within_budget = false; break; }
        }
    }
    out.complete = within_budget;
    out.configs = seen.size();
    return out;
}

}  // namespace detail

// Bounded language of an expression with an explicit member-length bound; a
// bound of 0 means "choose the smallest certified one".
inline OracleResult lang_oracle(const Rewb& r, std::size_t max_word_len, std::size_t max_ref_len = 0,
                                std::size_t config_budget = 2'000'000) {
    ExtNfa nfa = build_nfa(r);
    detail::ConfigAnalysis analysis = detail::analyze_configs(nfa, max_word_len, config_budget);

    OracleResult result;
    result.closure_complete = analysis.complete;
    result.required_ref_len = analysis.required_ref_len;
    result.configs = analysis.configs;
    result.used_ref_len = max_ref_len ? max_ref_len : analysis.required_ref_len;
    result.saturated = analysis.complete && result.used_ref_len >= analysis.required_ref_len;

    std::set<RefString> members =
        detail::enumerate_regex(*to_ext_regex(r), result.used_ref_len, max_word_len);
    for (const RefString& v : members) {
        std::string word = deref(v);
        if (word.size() <= max_word_len) result.words.insert(std::move(word));
    }

    if (result.saturated && result.words != analysis.final_words)
        throw std::logic_error(
            "oracle self-check failed: definitional word set disagrees with the configuration analysis");
    return result;
}

inline OracleResult lang_oracle(const RewbPtr& r, std::size_t max_word_len, std::size_t max_ref_len = 0,
                                std::size_t config_budget = 2'000'000) {
    return lang_oracle(*r, max_word_len, max_ref_len, config_budget);
}

}  // namespace rewb

#endif  // REWB_ORACLE_HPP
