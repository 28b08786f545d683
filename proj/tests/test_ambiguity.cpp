#include <doctest.h>

#include "support.hpp"
#include "wfokit/ambiguity.hpp"

using namespace wfo;
using namespace wfo::test;

namespace {

const PartAmbiguity& part_named(const AmbiguityReport& r, const std::string& name) {
    for (const auto& p : r.parts) {
        if (p.name == name) return p;
    }
    throw std::runtime_error("no part " + name);
}

// Exhaustive path count for call-free parts when the configuration graph restricted to useful
// configurations is acyclic; bounded depth keeps it finite (cycles give counts above the bound).
Count path_count(const Part& p, const Word& framed, int pos, StateId q, int budget) {
    Count total = p.is_final(q) ? 1 : 0;
    if (budget == 0) return total;
    for (const auto& t : p.transitions) {
        if (t.src != q || t.letter != framed[static_cast<std::size_t>(pos)]) continue;
        const int np = pos + (t.dir == Dir::Right ? 1 : -1);
        if (np < 0 || np >= static_cast<int>(framed.size())) continue;
        total += path_count(p, framed, np, t.dst, budget - 1);
    }
    return total;
}

} // namespace

TEST_CASE("two-way example is unambiguous") {
    const auto aex = load_nwa("aex.nwa");
    for (const auto& u : words_up_to(aex.alphabet, 6)) CHECK(count_accepting_runs(aex, u) == Count(1));
    const auto r = classify_ambiguity(aex, 6);
    CHECK(r.verdict == Verdict::Unambiguous);
    CHECK(verdict_name(r.verdict, r.degree) == "unambiguous");
}

TEST_CASE("a back-and-forth cycle is infinite") {
    Nwa A;
    A.alphabet = {"a"};
    Part p;
    p.name = "root";
    p.add_state("s");
    p.add_state("t");
    p.initial = {0};
    p.final = {1};
    p.transitions.push_back({0, Letter::plain("a"), Weight::one(), Dir::Right, 1});
    p.transitions.push_back({1, Letter::plain("a"), Weight::one(), Dir::Left, 0});
    A.set_root(A.add_part(p));
    CHECK_FALSE(count_accepting_runs(A, plain_word({"a", "a"})).has_value());
    CHECK(classify_ambiguity(A, 4).verdict == Verdict::Infinite);
}

TEST_CASE("fig1 nest: linear, linear, unambiguous") {
    const auto fig1 = load_nwa("fig1.nwa");
    for (std::size_t n = 0; n <= 5; ++n) {
        for (const auto& u : all_words(fig1.alphabet, n)) CHECK(count_accepting_runs(fig1.root_part(), u) == Count(n));
    }
    const auto r = classify_ambiguity(fig1, 6);
    CHECK(verdict_name(part_named(r, "root").verdict, part_named(r, "root").degree) == "linear");
    CHECK(verdict_name(part_named(r, "ax").verdict, part_named(r, "ax").degree) == "linear");
    CHECK(part_named(r, "axy").verdict == Verdict::Unambiguous);
    CHECK(linear_or_better(r.verdict, r.degree));
}

TEST_CASE("two disjoint copies are finitely ambiguous") {
    const auto aex = load_nwa("aex.nwa");
    Nwa twice = aex;
    Part& p = twice.part(twice.root());
    const Part& orig = aex.root_part();
    const int n = static_cast<int>(orig.states.size());
    for (const auto& s : orig.states) p.add_state(s + "'");
    for (StateId q : orig.initial) p.initial.push_back(q + n);
    for (StateId q : orig.final) p.final.push_back(q + n);
    for (auto t : orig.transitions) {
        t.src += n;
        t.dst += n;
        p.transitions.push_back(t);
    }
    for (const auto& u : words_up_to(aex.alphabet, 4)) CHECK(count_accepting_runs(twice, u) == Count(2));
    const auto r = classify_ambiguity(twice, 6);
    CHECK(verdict_name(r.verdict, r.degree) == "polynomial(0)");
}

TEST_CASE("counts agree with bounded path enumeration") {
    Gen g(41);
    for (int i = 0; i < 100; ++i) {
        const auto A = g.two_way(3, 7);
        const auto& p = A.root_part();
        for (const auto& u : words_up_to(A.alphabet, 3)) {
            const Word framed = frame(u);
            const int configs = static_cast<int>(framed.size() * p.states.size());
            Count bounded = 0, longer = 0;
            for (StateId q : p.initial) {
                for (int pos = 0; pos < static_cast<int>(framed.size()); ++pos) {
                    bounded += path_count(p, framed, pos, q, configs);
                    longer += path_count(p, framed, pos, q, configs + 3);
                }
            }
            const auto c = count_accepting_runs(A, u);
            if (c) {
                CHECK(*c == bounded);
                CHECK(*c == longer);
            } else {
                CHECK(longer > bounded);  // some run can be pumped
            }
        }
    }
}

TEST_CASE("counts are monotone in the transitions") {
    Gen g(43);
    for (int i = 0; i < 60; ++i) {
        auto A = g.two_way(3, 6);
        auto B = A;
        const auto extra = g.two_way(3, 3);
        for (const auto& t : extra.root_part().transitions) B.part(B.root()).transitions.push_back(t);
        for (const auto& u : words_up_to(A.alphabet, 3)) {
            const auto a = count_accepting_runs(A, u), b = count_accepting_runs(B, u);
            if (!b) continue;
            REQUIRE(a.has_value());
            CHECK(*a <= *b);
        }
    }
}
