// Shared test utilities: seeded random generators for valid expressions and
// for arbitrary extended-alphabet strings, plus small brute-force helpers
// that serve as independent oracles.

#ifndef REWB_TESTS_HELPERS_HPP
#define REWB_TESTS_HELPERS_HPP

#include <random>
#include <set>
#include <string>
#include <vector>

#include "rewb/ref_string.hpp"
#include "rewb/syntax.hpp"

namespace rewb::testing {

// Valid expression generator: capture indices never repeat along a path, so
// the capture side condition holds by construction.
class RewbGen {
public:
    RewbGen(unsigned seed, int max_index = 2, std::string letters = "ab")
        : rng_(seed), max_index_(max_index), letters_(std::move(letters)) {}

    RewbPtr operator()(int size_budget = 8) {
        std::set<int> enclosing;
        return gen(size_budget, enclosing);
    }

    std::mt19937& rng() { return rng_; }

private:
    std::mt19937 rng_;
    int max_index_;
    std::string letters_;

    int rand_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    RewbPtr gen(int budget, std::set<int>& enclosing) {
        if (budget <= 1) {
            switch (rand_int(0, 3)) {
                case 0: return Rewb::make_epsilon();
                case 1: return Rewb::make_reference(rand_reference(enclosing));
                default: return Rewb::make_terminal(letters_[static_cast<std::size_t>(
                             rand_int(0, static_cast<int>(letters_.size()) - 1))]);
            }
        }
        switch (rand_int(0, 9)) {
            case 0:
            case 1:
            case 2: {
                int left = rand_int(1, budget - 1);
                return Rewb::make_concat(gen(left, enclosing), gen(budget - left, enclosing));
            }
            case 3:
            case 4: {
                int left = rand_int(1, budget - 1);
                return Rewb::make_alt(gen(left, enclosing), gen(budget - left, enclosing));
            }
            case 5:
            case 6:
                return Rewb::make_star(gen(budget - 1, enclosing));
            case 7:
            case 8: {
                std::vector<int> free_indices;
                for (int i = 1; i <= max_index_; ++i)
                    if (!enclosing.count(i)) free_indices.push_back(i);
                if (free_indices.empty()) return gen(budget - 1, enclosing);
                int index = free_indices[static_cast<std::size_t>(
                    rand_int(0, static_cast<int>(free_indices.size()) - 1))];
                enclosing.insert(index);
                RewbPtr body = gen(budget - 1, enclosing);
                enclosing.erase(index);
                return Rewb::make_group(index, std::move(body));
            }
            default:
                return gen(1, enclosing);
        }
    }

    int rand_reference(const std::set<int>& enclosing) {
        for (int attempt = 0; attempt < 16; ++attempt) {
            int index = rand_int(1, max_index_);
            if (!enclosing.count(index)) return index;
        }
        return max_index_ + 1;  // all small indices enclosed; still valid
    }
};

inline RefString random_ref_string(std::mt19937& rng, std::size_t max_len, int max_index = 3,
                                   const std::string& letters = "ab") {
    std::uniform_int_distribution<std::size_t> len_dist(0, max_len);
    std::uniform_int_distribution<int> kind_dist(0, 5);
    std::uniform_int_distribution<int> index_dist(1, max_index);
    std::uniform_int_distribution<std::size_t> letter_dist(0, letters.size() - 1);
    RefString v;
    std::size_t len = len_dist(rng);
    for (std::size_t i = 0; i < len; ++i) {
        switch (kind_dist(rng)) {
            case 0: v.push_back(ExtSymbol::make_open(index_dist(rng))); break;
            case 1: v.push_back(ExtSymbol::make_close(index_dist(rng))); break;
            case 2: v.push_back(ExtSymbol::make_num(index_dist(rng))); break;
            default: v.push_back(ExtSymbol::make_letter(letters[letter_dist(rng)])); break;
        }
    }
    return v;
}

inline std::set<std::string> words_upto(const std::string& letters, std::size_t max_len) {
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

}  // namespace rewb::testing

#endif  // REWB_TESTS_HELPERS_HPP
