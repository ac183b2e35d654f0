#include <catch_amalgamated.hpp>

#include <sstream>

#include "helpers.hpp"
#include "rewb/harness.hpp"

using namespace rewb;

TEST_CASE("classification reports") {
    SECTION("closed-star with bounds") {
        ClassifyReport report = classify(*parse("((_1a*)_1c\\1)*"));
        CHECK(report.closed_star);
        CHECK(report.kappa == 1);
        REQUIRE(report.bounds);
        CHECK(report.bounds->theta >= 1);
    }
    SECTION("not closed-star") {
        ClassifyReport report = classify(*parse("(_1a*)_1(c\\1)*"));
        CHECK(report.closed);
        CHECK_FALSE(report.closed_star);
        CHECK_FALSE(report.bounds);
    }
    SECTION("pure-regular is closed-star with zero kappa") {
        ClassifyReport report = classify(*parse("a*"));
        CHECK(report.closed_star);
        CHECK(report.kappa == 0);
        REQUIRE(report.bounds);
        CHECK(report.bounds->rho == 0);
    }
}

TEST_CASE("cross-engine check") {
    SECTION("copy expression across all four engines") {
        CheckOptions options;
        options.max_len = 6;
        options.engines = {"oracle", "pmcfg", "mcfg", "nesa"};
        CheckReport report = check(*parse("(_1(a+b)*)_1\\1"), options);
        REQUIRE(report.ok);
        for (const EngineReport& e : report.engines) {
            CHECK(e.ran);
            CHECK(e.words.size() == 15);
        }
        for (const PairDiff& d : report.diffs) {
            CHECK(d.only_left.empty());
            CHECK(d.only_right.empty());
        }
    }
    SECTION("grammar engines demand the closed-star condition") {
        CheckOptions options;
        options.max_len = 5;
        options.engines = {"oracle", "mcfg"};
        CheckReport report = check(*parse("(_1a*)_1(c\\1)*"), options);
        CHECK_FALSE(report.ok);
        CHECK_FALSE(report.engines[1].ran);
        CHECK(report.engines[1].error.find("closed-star") != std::string::npos);
    }
    SECTION("reports are deterministic") {
        CheckOptions options;
        options.max_len = 6;
        options.engines = {"oracle", "pmcfg"};
        CheckReport a = check(*parse("(_1a*)_1(c\\1)*"), options);
        CheckReport b = check(*parse("(_1a*)_1(c\\1)*"), options);
        CHECK(a.ok == b.ok);
        REQUIRE(a.engines.size() == b.engines.size());
        for (std::size_t i = 0; i < a.engines.size(); ++i)
            CHECK(a.engines[i].words == b.engines[i].words);
        CHECK(a.required_ref_len == b.required_ref_len);
    }
}

TEST_CASE("corpus parsing and runs") {
    SECTION("annotations") {
        std::istringstream in("# a comment\n"
                              "(_1a*)_1\\1   # expect: closed=yes closed-star=yes kappa=1\n"
                              "\n"
                              "abc\n");
        std::vector<CorpusEntry> entries = parse_corpus(in);
        REQUIRE(entries.size() == 2);
        CHECK(entries[0].text == "(_1a*)_1\\1");
        CHECK(entries[0].expect.at("closed") == "yes");
        CHECK(entries[0].expect.at("kappa") == "1");
        CHECK(entries[1].text == "abc");
        CHECK(entries[1].expect.empty());
    }
    SECTION("empty corpus") {
        std::istringstream in("# nothing here\n");
        CorpusReport report = run_corpus(parse_corpus(in), CheckOptions{});
        CHECK(report.ok);
        CHECK(report.entries.empty());
    }
    SECTION("wrong expectation turns the entry red") {
        std::istringstream in("(_1a*)_1(c\\1)*  # expect: closed-star=yes\n");
        CheckOptions options;
        options.max_len = 5;
        CorpusReport report = run_corpus(parse_corpus(in), options);
        REQUIRE(report.entries.size() == 1);
        CHECK_FALSE(report.ok);
        CHECK_FALSE(report.entries[0].ok);
        REQUIRE_FALSE(report.entries[0].expectation_failures.empty());
        CHECK(report.entries[0].expectation_failures[0].first == "closed-star");
    }
    SECTION("a malformed expression is reported, not thrown") {
        std::istringstream in("(_1a*\\1)_1\n");
        CorpusReport report = run_corpus(parse_corpus(in), CheckOptions{});
        REQUIRE(report.entries.size() == 1);
        CHECK_FALSE(report.entries[0].parse_ok);
        CHECK_FALSE(report.ok);
    }
    SECTION("a small green corpus") {
        std::istringstream in("(_1(a+b)*)_1\\1 # expect: closed-star=yes\n"
                              "abc # expect: kappa=0\n");
        CheckOptions options;
        options.max_len = 5;
        CorpusReport report = run_corpus(parse_corpus(in), options);
        CHECK(report.ok);
        CHECK(report.passed == 2);
    }
}
