#include "wfokit/multiset.hpp"

#include <algorithm>
#include <sstream>

namespace wfo {

MultisetSeries MultisetSeries::singleton(WeightSeq seq, Count count) {
    MultisetSeries s;
    s.add(seq, count);
    return s;
}

void MultisetSeries::add(const WeightSeq& seq, const Count& count) {
    if (count == 0) return;
    auto [it, inserted] = entries_.try_emplace(seq, count);
    if (!inserted) it->second += count;
}

Count MultisetSeries::total_count() const {
    Count total = 0;
    for (const auto& [seq, c] : entries_) total += c;
    return total;
}

Count MultisetSeries::count(const WeightSeq& seq) const {
    auto it = entries_.find(seq);
    return it == entries_.end() ? Count{0} : it->second;
}

MultisetSeries ms_union(const MultisetSeries& s1, const MultisetSeries& s2) {
    MultisetSeries out = s1;
    for (const auto& [seq, c] : s2.entries()) out.add(seq, c);
    return out;
}

MultisetSeries ms_product(const MultisetSeries& s1, const MultisetSeries& s2) {
    MultisetSeries out;
    for (const auto& [a, ca] : s1.entries()) {
        for (const auto& [b, cb] : s2.entries()) {
            WeightSeq joined = a;
            joined.insert(joined.end(), b.begin(), b.end());
            out.add(joined, ca * cb);
        }
    }
    return out;
}

std::string serialize(const MultisetSeries& s) {
    std::ostringstream out;
    for (const auto& [seq, c] : s.entries()) {
        out << c << '\t';
        if (seq.empty()) {
            out << "<eps>";
        } else {
            for (std::size_t i = 0; i < seq.size(); ++i) out << (i ? " " : "") << seq[i];
        }
        out << '\n';
    }
    return out.str();
}

MultisetSeries parse_series(const std::string& text) {
    MultisetSeries s;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error("series line " + std::to_string(lineno) + ": missing TAB");
        Count c(line.substr(0, tab));
        std::istringstream rest(line.substr(tab + 1));
        WeightSeq seq;
        std::string tok;
        while (rest >> tok) seq.push_back(tok);
        if (seq.size() == 1 && seq[0] == "<eps>") seq.clear();
        s.add(seq, c);
    }
    return s;
}

std::string to_brief(const MultisetSeries& s) {
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (const auto& [seq, c] : s.entries()) {
        if (!first) out << ", ";
        first = false;
        if (seq.empty()) out << "<eps>";
        for (const auto& sym : seq) out << sym;
        if (c != 1) out << " x" << c;
    }
    out << '}';
    return out.str();
}

NaturalAggregator NaturalAggregator::numeric_literals(const std::vector<WeightSymbol>& alphabet) {
    std::map<WeightSymbol, Count> interp;
    for (const auto& sym : alphabet) {
        if (!sym.empty() && std::all_of(sym.begin(), sym.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
            interp.emplace(sym, Count(sym));
    }
    return NaturalAggregator(std::move(interp));
}

Count NaturalAggregator::operator()(const MultisetSeries& s) const {
    Count total = 0;
    for (const auto& [seq, c] : s.entries()) {
        Count term = c;
        for (const auto& sym : seq) {
            auto it = interp_.find(sym);
            if (it == interp_.end())
                throw DomainError("weight symbol '" + sym + "' has no natural-number interpretation");
            term *= it->second;
        }
        total += term;
    }
    return total;
}

LanguageAggregator LanguageAggregator::singleton_words(const std::vector<WeightSymbol>& alphabet) {
    std::map<WeightSymbol, Language> interp;
    for (const auto& sym : alphabet) interp.emplace(sym, Language{sym});
    return LanguageAggregator(std::move(interp));
}

Language LanguageAggregator::operator()(const MultisetSeries& s) const {
    Language out;
    for (const auto& [seq, c] : s.entries()) {
        Language acc{""};
        for (const auto& sym : seq) {
            auto it = interp_.find(sym);
            if (it == interp_.end())
                throw DomainError("weight symbol '" + sym + "' has no language interpretation");
            Language next;
            for (const auto& left : acc)
                for (const auto& right : it->second) next.insert(left + right);
            acc = std::move(next);
        }
        out.insert(acc.begin(), acc.end());
    }
    return out;
}

std::string format_language(const Language& lang) {
    std::vector<std::string> words(lang.begin(), lang.end());
    std::sort(words.begin(), words.end(), [](const std::string& a, const std::string& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    std::string out = "{";
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out += ", ";
        out += words[i].empty() ? "<eps>" : words[i];
    }
    return out + "}";
}

} // namespace wfo
