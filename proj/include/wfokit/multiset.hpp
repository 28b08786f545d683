#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace wfo {

using Count = boost::multiprecision::cpp_int;

/// A weight symbol is an opaque token drawn from a declared weight alphabet.
using WeightSymbol = std::string;
using WeightSeq = std::vector<WeightSymbol>;

/// Length-lexicographic order: shorter sequences first, ties broken lexicographically.
struct LengthLex {
    bool operator()(const WeightSeq& a, const WeightSeq& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

/// Finite multiset of weight sequences with exact multiplicities.
class MultisetSeries {
public:
    using Map = std::map<WeightSeq, Count, LengthLex>;

    MultisetSeries() = default;

    static MultisetSeries empty() { return {}; }
    static MultisetSeries unit() { return singleton({}); }
    static MultisetSeries singleton(WeightSeq seq, Count count = 1);

    void add(const WeightSeq& seq, const Count& count);

    bool is_empty() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }
    Count total_count() const;
    Count count(const WeightSeq& seq) const;
    const Map& entries() const { return entries_; }

    friend bool operator==(const MultisetSeries&, const MultisetSeries&) = default;

private:
    Map entries_;
};

MultisetSeries ms_union(const MultisetSeries& s1, const MultisetSeries& s2);
MultisetSeries ms_product(const MultisetSeries& s1, const MultisetSeries& s2);

/// One line per entry, `count TAB sym sym ...`, with `<eps>` for the empty sequence.
std::string serialize(const MultisetSeries& s);
MultisetSeries parse_series(const std::string& text);

/// Short single-line rendering used in diagnostics, e.g. `{aa x2, aaaa}`.
std::string to_brief(const MultisetSeries& s);

class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Natural semiring (N, +, x): every symbol maps to a natural number.
class NaturalAggregator {
public:
    explicit NaturalAggregator(std::map<WeightSymbol, Count> interpretation)
        : interp_(std::move(interpretation)) {}

    /// Symbols whose name is a decimal literal are read as that number.
    static NaturalAggregator numeric_literals(const std::vector<WeightSymbol>& alphabet);

    Count operator()(const MultisetSeries& s) const;

private:
    std::map<WeightSymbol, Count> interp_;
};

using Language = std::set<std::string>;

/// Language semiring (2^{B*}, union, concatenation); duplicates collapse.
class LanguageAggregator {
public:
    explicit LanguageAggregator(std::map<WeightSymbol, Language> interpretation)
        : interp_(std::move(interpretation)) {}

    /// Each symbol denotes the singleton language containing its own name.
    static LanguageAggregator singleton_words(const std::vector<WeightSymbol>& alphabet);

    Language operator()(const MultisetSeries& s) const;

private:
    std::map<WeightSymbol, Language> interp_;
};

/// `{w1, w2, ...}` in length-lexicographic order, `{}` when empty.
std::string format_language(const Language& lang);

} // namespace wfo
