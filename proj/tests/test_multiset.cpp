#include <doctest.h>

#include "support.hpp"

using namespace wfo;
using namespace wfo::test;

namespace {

MultisetSeries seqs(std::initializer_list<WeightSeq> list) { return collect(list); }

// Pairwise concatenation over flat lists, independent of ms_product.
MultisetSeries naive_product(const MultisetSeries& a, const MultisetSeries& b) {
    std::vector<WeightSeq> out;
    for (const auto& x : expand(a)) {
        for (const auto& y : expand(b)) {
            WeightSeq s = x;
            s.insert(s.end(), y.begin(), y.end());
            out.push_back(s);
        }
    }
    return collect(out);
}

} // namespace

TEST_CASE("union examples") {
    const auto k = seqs({{"k"}});
    CHECK(ms_union(k, MultisetSeries::empty()) == k);
    const auto kk = ms_union(k, k);
    CHECK(kk.count({"k"}) == 2);
    CHECK(kk.support_size() == 1);
    const auto both = ms_union(seqs({{"a", "b"}}), seqs({{"b", "a"}}));
    CHECK(both.support_size() == 2);
    CHECK(both.count({"a", "b"}) == 1);
    CHECK(both.count({"b", "a"}) == 1);
}

TEST_CASE("product examples") {
    Gen g(7);
    for (int i = 0; i < 20; ++i) {
        const auto s = g.series({"f", "g"});
        CHECK(ms_product(MultisetSeries::unit(), s) == s);
        CHECK(ms_product(s, MultisetSeries::unit()) == s);
        CHECK(ms_product(MultisetSeries::empty(), s).is_empty());
    }
    const auto fg = ms_product(seqs({{"f"}}), seqs({{"g"}, {"g"}}));
    CHECK(fg.count({"f", "g"}) == 2);
    CHECK(fg.support_size() == 1);
}

TEST_CASE("product agrees with pairwise concatenation") {
    Gen g(11);
    for (int i = 0; i < 200; ++i) {
        const auto a = g.series({"f", "g"}), b = g.series({"f", "g"});
        CHECK(ms_product(a, b) == naive_product(a, b));
    }
}

TEST_CASE("semiring laws on random triples") {
    Gen g(3);
    for (int i = 0; i < 300; ++i) {
        const auto a = g.series({"f", "g"}), b = g.series({"f", "g"}), c = g.series({"f", "g"});
        CHECK(ms_union(ms_union(a, b), c) == ms_union(a, ms_union(b, c)));
        CHECK(ms_union(a, b) == ms_union(b, a));
        CHECK(ms_product(ms_product(a, b), c) == ms_product(a, ms_product(b, c)));
        CHECK(ms_product(a, ms_union(b, c)) == ms_union(ms_product(a, b), ms_product(a, c)));
        CHECK(ms_product(ms_union(a, b), c) == ms_union(ms_product(a, c), ms_product(b, c)));
    }
}

TEST_CASE("exact counts beyond 64 bits") {
    // (3 copies of eps)^50 has a single entry with count 3^50.
    MultisetSeries three;
    three.add({}, 3);
    MultisetSeries acc = MultisetSeries::unit();
    for (int i = 0; i < 50; ++i) acc = ms_product(acc, three);
    Count expected = 1;
    for (int i = 0; i < 50; ++i) expected *= 3;
    CHECK(acc.count({}) == expected);
    CHECK(expected > Count(std::numeric_limits<std::uint64_t>::max()));
}

TEST_CASE("no zero counts are stored") {
    MultisetSeries s;
    s.add({"f"}, 0);
    CHECK(s.is_empty());
}

TEST_CASE("serialization is canonical and round-trips") {
    MultisetSeries s;
    s.add({"b"}, 1);
    s.add({}, 2);
    s.add({"a", "a"}, 1);
    s.add({"a"}, 4);
    CHECK(serialize(s) == "2\t<eps>\n4\ta\n1\tb\n1\ta a\n");
    CHECK(parse_series(serialize(s)) == s);
    Gen g(5);
    for (int i = 0; i < 50; ++i) {
        const auto r = g.series({"f", "g"});
        CHECK(parse_series(serialize(r)) == r);
    }
}

TEST_CASE("natural aggregator") {
    const auto nat = NaturalAggregator::numeric_literals({"1", "2"});
    MultisetSeries nine;
    nine.add({"1", "1"}, 9);
    CHECK(nat(nine) == 9);
    CHECK(nat(MultisetSeries::empty()) == 0);
    CHECK(nat(MultisetSeries::unit()) == 1);
    CHECK(nat(MultisetSeries::singleton({"2", "2", "1"})) == 4);

    NaturalAggregator custom({{"f", 2}, {"g", 5}});
    Gen g(9);
    for (int i = 0; i < 100; ++i) {
        const auto a = g.series({"f", "g"}), b = g.series({"f", "g"});
        CHECK(custom(ms_union(a, b)) == custom(a) + custom(b));
        CHECK(custom(ms_product(a, b)) == custom(a) * custom(b));
    }
    CHECK_THROWS_AS(custom(MultisetSeries::singleton({"h"})), DomainError);
}

TEST_CASE("language aggregator") {
    const auto lang = LanguageAggregator::singleton_words({"a", "b"});
    const auto s = seqs({{"a", "a"}, {"a", "a"}, {"a", "a", "a", "a"}});
    CHECK(format_language(lang(s)) == "{aa, aaaa}");
    CHECK(format_language(lang(MultisetSeries::empty())) == "{}");
    CHECK(lang(MultisetSeries::unit()) == Language{""});
}
