// Acceptance run: one PASS/FAIL line per criterion, exit code 0 iff all pass.

#include "fixtures.hpp"
#include "wfokit/ambiguity.hpp"
#include "wfokit/monoid.hpp"
#include "wfokit/translate.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>

using namespace wfo;
using namespace wfo::test;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

struct Criterion {
    int id;
    std::string name;
    double limit_s;  // wall clock, 0 = none
    std::function<Outcome()> run;
};

bool all_length(const MultisetSeries& s, std::size_t n) {
    return std::all_of(s.entries().begin(), s.entries().end(), [n](const auto& e) { return e.first.size() == n; });
}

Count power(Count base, std::size_t exp) {
    Count r = 1;
    for (std::size_t i = 0; i < exp; ++i) r *= base;
    return r;
}

// finitely many runs from every state pair on words up to max_len
bool finitely_ambiguous(const Nwa& A, std::size_t max_len) {
    Part all = A.root_part();
    all.initial.clear();
    all.final.clear();
    for (StateId q = 0; q < static_cast<StateId>(all.states.size()); ++q) {
        all.initial.push_back(q);
        all.final.push_back(q);
    }
    for (const auto& u : words_up_to(A.alphabet, max_len))
        if (!count_accepting_runs(all, u)) return false;
    return true;
}

std::vector<WfoDocument> corpus() {
    std::vector<WfoDocument> docs{load_wfo("ex1.wfo"), load_wfo("ex2.wfo")};
    std::vector<std::string> files;
    for (const auto& e : std::filesystem::directory_iterator(data_path("corpus"))) files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) docs.push_back(parse_wfo_document(slurp(f)));
    return docs;
}

Outcome ex1_exact() {
    Outcome o;
    const auto doc = load_wfo("ex1.wfo");
    const auto aa = wfo_eval(doc.formula, {"a", "a"});
    MultisetSeries want = MultisetSeries::singleton({"a", "a"}, 2);
    want.add({"a", "a", "a", "a"}, 1);
    o.require(aa == want, "value on aa: " + to_brief(aa));
    o.require(serialize(aa) == slurp(golden_path("ex1_aa.txt")), "serialization differs from golden");
    const auto lang = LanguageAggregator::singleton_words(doc.weights)(wfo_eval(doc.formula, {"a", "b", "b"}));
    o.require(format_language(lang) + "\n" == slurp(golden_path("abb_lang.txt")), "language on abb: " + format_language(lang));
    return o;
}

Outcome ex2_law() {
    Outcome o;
    const auto doc = load_wfo("ex2.wfo");
    const auto nat = NaturalAggregator::numeric_literals(doc.weights);
    std::size_t n = 0;
    for (const auto& w : words_up_to(doc.alphabet, 8)) {
        const auto u = symbols_of(w);
        const auto a = static_cast<std::size_t>(std::count(u.begin(), u.end(), "a"));
        o.require(nat(wfo_eval(doc.formula, u)) == power(Count(a), u.size() - a), "law fails on " + format_word(w));
        ++n;
    }
    o.detail = o.ok ? std::to_string(n) + " words" : o.detail;
    return o;
}

Outcome fig1_matches_ex1() {
    Outcome o;
    const auto doc = load_wfo("ex1.wfo");
    const Nwa F = load_nwa("fig1.nwa");
    for (const auto& w : words_up_to(doc.alphabet, 5))
        o.require(nwa_eval(F, w) == wfo_eval(doc.formula, symbols_of(w)), "differs on " + format_word(w));
    return o;
}

Outcome aex_suite() {
    Outcome o;
    const Nwa A = load_nwa("aex.nwa");
    for (const auto& w : words_up_to(A.alphabet, 8)) {
        o.require(nwa_eval(A, w) == aex_oracle(symbols_of(w)), "closed form fails on " + format_word(w));
        o.require(count_accepting_runs(A, w) == Count(1), "run count != 1 on " + format_word(w));
    }
    const auto rep = is_aperiodic(A);
    o.require(rep.aperiodic && !rep.budget_exceeded && rep.index > 0, "not aperiodic");
    if (o.ok) o.detail = "index " + std::to_string(rep.index);
    return o;
}

Outcome wfo_pipeline() {
    Outcome o;
    const auto docs = corpus();
    o.require(docs.size() >= 10, "corpus has fewer than 10 sentences");
    for (const auto& doc : docs) {
        const std::string f = format_formula(doc.formula);
        const Nwa A = wfo_to_sweeping(doc.formula, doc.alphabet, doc.weights);
        for (const auto& w : words_up_to(doc.alphabet, 5))
            o.require(nwa_eval(A, w) == wfo_eval(doc.formula, symbols_of(w)), f + ": differs on " + format_word(w));
        o.require(is_sweeping(A).has_value(), f + ": not sweeping");
        o.require(is_aperiodic(A).aperiodic, f + ": not aperiodic");
        const auto amb = classify_ambiguity(A, 6);
        for (const auto& p : amb.parts)
            o.require(linear_or_better(p.verdict, p.degree), f + ": part " + p.name + " is " + verdict_name(p.verdict, p.degree));
    }
    if (o.ok) o.detail = std::to_string(docs.size()) + " sentences";
    return o;
}

Outcome sweep_pipeline() {
    Outcome o;
    const Nwa A = load_nwa("aex.nwa");
    SwOptions opt;
    opt.annotated = true;
    const auto r = sw_transform(A, opt);
    for (const auto& w : words_up_to(A.alphabet, 7))
        o.require(nwa_eval(r.nest, w) == nwa_eval(A, w), "differs on " + format_word(w));
    o.require(is_sweeping(r.nest).has_value(), "not sweeping");
    o.require(is_aperiodic(r.nest).aperiodic, "not aperiodic");
    const int depth = nesting_depth(r.nest);
    o.require(depth <= 4, "depth " + std::to_string(depth));
    const Word w = plain_word({"a", "b", "b", "a", "a", "b", "a"});
    const auto base = enumerate_simple_runs(r.base, w);
    bool found = false;
    for (const auto& t : enumerate_simple_runs(r.nest, w))
        if (base.size() == 1 && flatten(t, r.provenance, r.base, r.base.root()) == base[0]) found = true;
    o.require(found, "no run on abbaaba flattens to the base run");
    if (o.ok) o.detail = "depth " + std::to_string(depth) + ", " + std::to_string(r.components) + " components";
    return o;
}

Outcome behaviour_oracle() {
    Outcome o;
    Gen g(7001);
    std::vector<Nwa> autos{load_nwa("aex.nwa")};
    for (int i = 0; i < 100; ++i) autos.push_back(g.two_way(3, 9));
    std::size_t checks = 0;
    for (const auto& A : autos) {
        const Part& p = A.root_part();
        for (const auto& u : words_up_to(A.alphabet, 5)) {
            for (const Word& w : {u, frame(u)}) {
                const auto whole = behaviour_bruteforce(p, w);
                o.require(behaviour_of(p, w) == whole, "behaviour_of differs on " + format_word(w));
                for (std::size_t k = 0; k <= w.size(); ++k) {
                    const Word x(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
                    const Word y(w.begin() + static_cast<std::ptrdiff_t>(k), w.end());
                    o.require(behaviour_compose(behaviour_bruteforce(p, x), behaviour_bruteforce(p, y)) == whole,
                              "split mismatch on " + format_word(w));
                    ++checks;
                }
            }
        }
    }
    if (o.ok) o.detail = std::to_string(checks) + " splits";
    return o;
}

Outcome projections_aperiodic() {
    Outcome o;
    Gen g(7002);
    int tested = 0;
    for (int i = 0; i < 2000 && tested < 50; ++i) {
        const Nwa A = g.sweeping(3, 9);
        if (!is_sweeping(A) || !is_aperiodic(A).aperiodic) continue;
        ++tested;
        o.require(is_aperiodic(projection_lr(A)).aperiodic, "left-to-right projection periodic:\n" + format_nwa(A));
        o.require(is_aperiodic(projection_rl(A)).aperiodic, "right-to-left projection periodic:\n" + format_nwa(A));
    }
    o.require(tested == 50, "only " + std::to_string(tested) + " aperiodic samples");
    if (o.ok) o.detail = "50 automata";
    return o;
}

Outcome decomposition_identity() {
    Outcome o;
    Gen g(7003);
    int tested = 0;
    while (tested < 100) {
        const Nwa A = g.sweeping(3, 6 + g.below(5));
        if (!is_sweeping(A) || !finitely_ambiguous(A, 4)) continue;
        ++tested;
        for (StateId p = 0; p < 3; ++p)
            for (StateId q = 0; q < 3; ++q)
                for (const auto& w : words_up_to(A.alphabet, 4))
                    o.require(sweep_decomposition_check(A, p, q, w).equal, "identity fails on " + format_word(w));
    }
    if (o.ok) o.detail = "100 automata";
    return o;
}

Outcome semiring_laws() {
    Outcome o;
    Gen g(7004);
    const std::vector<std::string> weights{"f", "g", "h"};
    const auto zero = MultisetSeries::empty(), one = MultisetSeries::unit();
    for (int i = 0; i < 1000; ++i) {
        const auto a = g.series(weights), b = g.series(weights), c = g.series(weights);
        o.require(ms_union(ms_union(a, b), c) == ms_union(a, ms_union(b, c)), "union associativity");
        o.require(ms_union(a, b) == ms_union(b, a), "union commutativity");
        o.require(ms_product(ms_product(a, b), c) == ms_product(a, ms_product(b, c)), "product associativity");
        o.require(ms_product(a, ms_union(b, c)) == ms_union(ms_product(a, b), ms_product(a, c)), "left distributivity");
        o.require(ms_product(ms_union(a, b), c) == ms_union(ms_product(a, c), ms_product(b, c)), "right distributivity");
        o.require(ms_product(a, one) == a && ms_product(one, a) == a && ms_union(a, zero) == a, "units");
        o.require(ms_product(a, zero) == zero && ms_product(zero, a) == zero, "annihilator");
    }
    if (o.ok) o.detail = "1000 triples";
    return o;
}

Outcome rone_length_law() {
    Outcome o;
    Gen g(7005);
    for (int i = 0; i < 200; ++i) {
        const Wfo phi = g.rone_formula({}, 2);
        o.require(classify_fragment(phi).contains(Fragment::RoneWFO), "generator left the fragment: " + format_formula(phi));
        for (const auto& w : words_up_to({"a", "b"}, 5))
            o.require(all_length(wfo_eval(phi, symbols_of(w)), w.size()), format_formula(phi) + " on " + format_word(w));
    }
    if (o.ok) o.detail = "200 formulas";
    return o;
}

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "ex1 exact values", 1, ex1_exact},
        {2, "ex2 counting law |u|<=8", 30, ex2_law},
        {3, "fig1 nest equals ex1 |u|<=5", 60, fig1_matches_ex1},
        {4, "aex: closed form, unambiguous, aperiodic", 60, aex_suite},
        {5, "WFO pipeline on the corpus", 600, wfo_pipeline},
        {6, "sweeping transformation of aex", 600, sweep_pipeline},
        {7, "behaviour composition vs brute force", 300, behaviour_oracle},
        {8, "projections keep aperiodicity", 0, projections_aperiodic},
        {9, "sweep decomposition identity", 300, decomposition_identity},
        {10, "multiset semiring laws", 0, semiring_laws},
        {11, "RoneWFO length law", 0, rone_length_law},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit_s > 0 && s > c.limit_s) o.require(false, "time limit exceeded");
        if (!o.ok) ++failed;
        char timing[64];
        std::snprintf(timing, sizeof timing, "%.2fs", s);
        std::cout << (o.ok ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << "  [" << timing;
        if (c.limit_s > 0) std::cout << " / " << c.limit_s << "s";
        std::cout << "]";
        if (!o.detail.empty()) std::cout << "  " << o.detail;
        std::cout << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
