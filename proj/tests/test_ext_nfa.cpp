#include <catch_amalgamated.hpp>

#include "helpers.hpp"
#include "rewb/ext_nfa.hpp"

using namespace rewb;

namespace {

std::multiset<std::tuple<int, std::string, int>> edge_multiset(const ExtNfa& n) {
    std::multiset<std::tuple<int, std::string, int>> out;
    for (int q = 0; q < n.num_states; ++q)
        for (const auto& [symbol, target] : n.edges[q]) out.insert({q, to_string(symbol), target});
    return out;
}

}  // namespace

TEST_CASE("star-referencing example automaton") {
    ExtNfa n = build_nfa(parse("(_1a*)_1(c\\1)*"));
    REQUIRE(n.num_states == 4);
    CHECK(n.start == 0);
    CHECK(n.finals == std::set<int>{2});
    CHECK(edge_multiset(n) == std::multiset<std::tuple<int, std::string, int>>{
                                  {0, "[1", 1}, {1, "a", 1}, {1, "]1", 2}, {2, "c", 3}, {3, "#1", 2}});
    SECTION("per-state open sets") {
        OpenSetTable table = open_sets(n);
        CHECK(table[0] == std::set<int>{});
        CHECK(table[1] == std::set<int>{1});
        CHECK(table[2] == std::set<int>{});
        CHECK(table[3] == std::set<int>{});
    }
}

TEST_CASE("epsilon expression automaton") {
    ExtNfa n = build_nfa(parse("~"));
    REQUIRE(n.num_states == 1);
    CHECK(n.start == 0);
    CHECK(n.finals == std::set<int>{0});
    CHECK(n.edges[0].empty());
    CHECK(open_sets(n)[0].empty());
}

TEST_CASE("double-capture loop example automaton") {
    ExtNfa n = build_nfa(parse("((_1a*)_1(_2\\1)_2\\2\\2)*"));
    REQUIRE(n.num_states == 7);
    CHECK(n.start == 0);
    CHECK(n.finals == std::set<int>{0});
    CHECK(edge_multiset(n) ==
          std::multiset<std::tuple<int, std::string, int>>{{0, "[1", 1},
                                                           {1, "a", 1},
                                                           {1, "]1", 2},
                                                           {2, "[2", 3},
                                                           {3, "#1", 4},
                                                           {4, "]2", 5},
                                                           {5, "#2", 6},
                                                           {6, "#2", 0}});
    SECTION("open sets along the loop") {
        OpenSetTable table = open_sets(n);
        CHECK(table[3] == std::set<int>{2});
        CHECK(table[5] == std::set<int>{});
        // any accepting prefix reaching a state yields the same open set
        CHECK(table[3] == open_set(parse_ref_string("[1 a ]1 [2")));
        CHECK(table[5] == open_set(parse_ref_string("[1 a ]1 [2 #1 ]2")));
    }
}

TEST_CASE("structural conditions hold on generated automata") {
    testing::RewbGen gen(31415, 2, "ab");
    std::vector<RewbPtr> sample{parse("(_1(a+b)*)_1\\1"), parse("(_1a*)_1(c\\1)*"),
                                parse("((_1a*)_1(_2\\1)_2\\2\\2)*"), parse("(_1a*)_1(\\1(_1b*)_1)*")};
    for (int i = 0; i < 60; ++i) sample.push_back(gen(1 + i % 10));
    for (const RewbPtr& r : sample) {
        INFO(to_string(r));
        ExtNfa n = build_nfa(r);
        CHECK(check_structure(n).empty());
        CHECK_NOTHROW(open_sets(n));
    }
}

TEST_CASE("bounded acceptance agrees with the ref-language") {
    testing::RewbGen gen(99, 2, "ab");
    std::vector<RewbPtr> sample{parse("(_1(a+b)*)_1\\1"), parse("(_1a*)_1(c\\1)*"),
                                parse("((_1a*)_1(_2\\1)_2\\2\\2)*")};
    for (int i = 0; i < 40; ++i) sample.push_back(gen(1 + i % 8));
    for (const RewbPtr& r : sample) {
        INFO(to_string(r));
        ExtNfa n = build_nfa(r);
        REQUIRE(nfa_enumerate(n, 6) == ref_enumerate(r, 6));
    }
}

TEST_CASE("zero-length acceptance is the nullability of the expression") {
    CHECK(nfa_enumerate(build_nfa(parse("a*")), 0) == std::set<RefString>{{}});
    CHECK(nfa_enumerate(build_nfa(parse("a")), 0).empty());
}

TEST_CASE("the automaton dump is deterministic and self-consistent") {
    ExtNfa n = build_nfa(parse("(_1a*)_1(c\\1)*"));
    OpenSetTable table = open_sets(n);
    std::string first = dump(n, &table);
    std::string second = dump(build_nfa(parse("(_1a*)_1(c\\1)*")), &table);
    CHECK(first == second);
    CHECK(first.find("0 -[1-> 1") != std::string::npos);
    CHECK(first.find("open 1 : 1") != std::string::npos);
}
