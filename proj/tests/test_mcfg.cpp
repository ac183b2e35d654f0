#include <catch_amalgamated.hpp>

#include "helpers.hpp"
#include "rewb/mcfg.hpp"
#include "rewb/nesa.hpp"
#include "rewb/oracle.hpp"

using namespace rewb;

TEST_CASE("double-capture loop construction") {
    RewbPtr r = parse("((_1a*)_1(_2\\1)_2\\2\\2)*");
    McfgConstruction c = build_mcfg(r);
    CHECK(c.bounds.theta == 2);
    CHECK(c.bounds.sigma == 2);
    CHECK(c.rho == 10);
    CHECK(c.grammar.dims[c.grammar.start] == 1);
    for (int i = 0; i < c.grammar.nonterm_count(); ++i)
        if (i != c.grammar.start) CHECK(c.grammar.dims[i] == 21);

    CHECK(is_nonduplicating(c.grammar));
    CHECK(is_unary(c.grammar));
    CHECK(first_component_monotone(c.grammar));

    SECTION("language at word length 8 contains the fourth power and matches the oracle") {
        BoundedLanguageResult lang = bounded_language(c.grammar, 8);
        REQUIRE(lang.complete);
        CHECK(lang.words.count("aaaa") == 1);
        OracleResult oracle = lang_oracle(r, 8);
        REQUIRE(oracle.saturated);
        CHECK(lang.words == oracle.words);
    }
    SECTION("the expected paste functions are generated") {
        CHECK(c.fun_by_name.count("p_1^{2}^t1^s2"));
        CHECK(c.fun_by_name.count("p_2^{}^t2^s1"));
        CHECK(c.fun_by_name.count("p_2^{}^t1^s1"));
    }
    SECTION("the generated text round-trips") {
        Grammar reparsed = parse_grammar(serialize(c.grammar));
        CHECK(serialize(reparsed) == serialize(c.grammar));
    }
}

TEST_CASE("construction is refused off its domain") {
    CHECK_THROWS_AS(build_mcfg(parse("(_1a*)_1(c\\1)*")), NotClosedStar);
    CHECK_THROWS_AS(build_nesa(parse("(_1a*)_1(c\\1)*")), NotClosedStar);
}

TEST_CASE("pure-regular expressions degenerate to one-track grammars") {
    RewbPtr r = parse("(a+b)*abb");
    McfgConstruction c = build_mcfg(r);
    CHECK(c.rho == 0);
    for (int d : c.grammar.dims) CHECK(d == 1);
    std::set<std::string> expected;
    for (const std::string& w : testing::words_upto("ab", 6))
        if (w.size() >= 3 && w.substr(w.size() - 3) == "abb") expected.insert(w);
    CHECK(bounded_language(c.grammar, 6).words == expected);
}

TEST_CASE("valid-copies region tracks the memory contents on every prefix") {
    for (const char* text : {"(_1(a+b)*)_1\\1", "((_1a*)_1c\\1)*", "((_1a*)_1(_2\\1)_2\\2\\2)*",
                             "(_1a*)_1\\1\\1"}) {
        RewbPtr r = parse(text);
        McfgConstruction c = build_mcfg(r);
        for (const RefString& v : ref_enumerate(r, 10)) {
            auto trace = mcfg_block_trace(c, v);
            REQUIRE(trace.size() == v.size() + 1);
            for (std::size_t i = 0; i <= v.size(); ++i) {
                RefString prefix(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(i));
                INFO(text << " member " << to_string(v) << " position " << i);
                REQUIRE(trace[i].tuple[0] == deref(prefix));
                for (int k = 1; k <= c.kappa; ++k) {
                    std::string cell = mem(k, prefix);
                    for (long long copy = 1; copy <= trace[i].valid_copies[k - 1]; ++copy) {
                        std::size_t component =
                            static_cast<std::size_t>(1 + (k - 1) * c.rho + copy - 1);
                        REQUIRE(trace[i].tuple[component] == cell);
                    }
                }
            }
        }
    }
}

TEST_CASE("published derivation of the fourth power") {
    RewbPtr r = parse("((_1a*)_1(_2\\1)_2\\2\\2)*");
    McfgConstruction c = build_mcfg(r);
    auto trace = mcfg_block_trace(c, parse_ref_string("[1 a ]1 [2 #1 ]2 #2 #2"));
    REQUIRE(trace.size() == 9);
    CHECK(trace[0].tuple[0] == "");
    CHECK(trace[5].tuple[0] == "aa");   // after the first reference is pasted
    CHECK(trace[7].tuple[0] == "aaa");  // after the first outer reference
    CHECK(trace[8].tuple[0] == "aaaa");
    // block 2 after the paste of cell 1 holds two valid copies
    CHECK(trace[5].valid_copies[1] == 2);
    CHECK(trace[5].tuple[11] == "a");
    CHECK(trace[5].tuple[12] == "a");
}

TEST_CASE("both grammar constructions define the same bounded language") {
    testing::RewbGen gen(1717, 2, "ab");
    std::vector<RewbPtr> sample{parse("(_1(a+b)*)_1\\1"), parse("((_1a*)_1c\\1)*"),
                                parse("(_1a(_2b)_2)_1\\2\\1")};
    for (int i = 0; i < 30; ++i) {
        RewbPtr r = gen(1 + i % 8);
        if (is_closed_star(r)) sample.push_back(r);
    }
    for (const RewbPtr& r : sample) {
        INFO(to_string(r));
        BoundedLanguageResult parallel = bounded_language(build_pmcfg(r).grammar, 6);
        BoundedLanguageResult blocked = bounded_language(build_mcfg(r).grammar, 6);
        REQUIRE(parallel.complete);
        REQUIRE(blocked.complete);
        REQUIRE(parallel.words == blocked.words);
    }
}
