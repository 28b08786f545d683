#include <doctest.h>

#include "support.hpp"
#include "wfokit/ambiguity.hpp"
#include "wfokit/monoid.hpp"
#include "wfokit/translate.hpp"

#include <cstdlib>
#include <filesystem>
#include <set>

using namespace wfo;
using namespace wfo::test;

namespace {

// Every (word, valuation) pair for the given variables, as the marked word the DFA reads.
struct Encoded {
    PlainWord word;
    Valuation sigma;
    Word marked;
};

std::vector<Encoded> encodings(const std::vector<std::string>& vars, std::size_t max_len) {
    std::vector<Encoded> out;
    for (const auto& u : words_up_to({"a", "b"}, max_len)) {
        std::vector<Encoded> cur{{symbols_of(u), {}, u}};
        for (const auto& v : vars) {
            std::vector<Encoded> next;
            for (const auto& e : cur) {
                for (std::size_t i = 1; i <= u.size(); ++i) {
                    auto f = e;
                    f.sigma[v] = static_cast<int>(i);
                    f.marked = mark_position(e.marked, i);
                    next.push_back(std::move(f));
                }
            }
            cur = std::move(next);
        }
        out.insert(out.end(), cur.begin(), cur.end());
    }
    return out;
}

std::vector<std::string> corpus_files() {
    std::vector<std::string> out;
    for (const auto& e : std::filesystem::directory_iterator(data_path("corpus"))) out.push_back(e.path().string());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

// ---------------------------------------------------------------- FO

TEST_CASE("FO: constant true is a one-state scanner") {
    const auto d = fo_to_dfa(fo::top(), {}, {"a", "b"});
    CHECK(d.size() == 1);
    CHECK(d.accepting[0]);
    const auto A = dfa_to_nwa(d, {"a", "b"});
    CHECK(is_one_way(A) == OneWay::LeftToRight);
    for (const auto& u : words_up_to({"a", "b"}, 4)) CHECK(nwa_eval(A, u) == MultisetSeries::unit());
}

TEST_CASE("FO: letter atom agrees with fo_eval") {
    const auto phi = fo::letter("a", "x");
    const auto d = fo_to_dfa(phi, {"x"}, {"a", "b"});
    const auto A = fo_to_automaton(phi, {"x"}, {"a", "b"});
    for (const auto& e : encodings({"x"}, 5)) {
        const bool truth = fo_eval(phi, e.word, e.sigma);
        CHECK(d.accepts(e.marked) == truth);
        CHECK(count_accepting_runs(A, e.marked) == Count(truth ? 1 : 0));
    }
}

TEST_CASE("FO: all-a words") {
    const auto d = fo_to_dfa(parse_fo("forall x . Pa(x)"), {}, {"a", "b"});
    for (const auto& u : words_up_to({"a", "b"}, 6)) {
        const auto s = symbols_of(u);
        CHECK(d.accepts(u) == std::all_of(s.begin(), s.end(), [](const std::string& c) { return c == "a"; }));
    }
    const auto rep = is_aperiodic(dfa_to_nwa(d, {"a", "b"}));
    CHECK(rep.aperiodic);
    CHECK(rep.index == 1);
}

TEST_CASE("FO: random formulas agree with fo_eval and compile to aperiodic deterministic automata") {
    Gen g(101);
    for (int i = 0; i < 80; ++i) {
        std::vector<std::string> vars;
        if (g.coin()) vars.push_back("x");
        if (g.coin()) vars.push_back("y");
        const auto phi = g.fo_formula(vars, 3);
        CAPTURE(format_fo(phi));
        const auto d = fo_to_dfa(phi, vars, {"a", "b"});
        const auto A = dfa_to_nwa(d, {"a", "b"});
        for (const auto& e : encodings(vars, 4)) {
            const bool truth = fo_eval(phi, e.word, e.sigma);
            CHECK(d.accepts(e.marked) == truth);
            CHECK(count_accepting_runs(A, e.marked) == Count(truth ? 1 : 0));
        }
        CHECK(is_aperiodic(A).aperiodic);
    }
}

TEST_CASE("FO: minimal size on a known language") {
    // true only on the empty word: an accepting start and a rejecting sink
    const auto d = fo_to_dfa(parse_fo("forall x . (Pa(x) & !(x <= x))"), {}, {"a", "b"});
    CHECK(d.size() == 2);
    const auto e = fo_to_dfa(parse_fo("forall x . Pb(x)"), {}, {"a", "b"});
    CHECK(e.size() == 2);
}

// ---------------------------------------------------------------- WFO

TEST_CASE("WFO: a constant compiles to one weighted transition") {
    const auto A = wfo_to_sweeping(wf::weight("k"), {"a", "b"}, {"k"});
    for (const auto& u : words_up_to({"a", "b"}, 4)) CHECK(nwa_eval(A, u) == MultisetSeries::singleton({"k"}));
    CHECK_THROWS_AS(wfo_to_sweeping(parse_formula("Pa(x) ? k : zero"), {"a", "b"}, {"k"}), TranslateError);
}

TEST_CASE("WFO: ex2 counts a^b through the automaton") {
    const auto doc = load_wfo("ex2.wfo");
    const auto nat = NaturalAggregator::numeric_literals(doc.weights);
    for (Mode mode : {Mode::TwoWay, Mode::OneWay}) {
        const auto A = wfo_to_sweeping(doc.formula, doc.alphabet, doc.weights, mode);
        CHECK(is_sweeping(A).has_value());
        if (mode == Mode::OneWay) CHECK(is_one_way(A) == OneWay::LeftToRight);
        for (const auto& u : words_up_to(doc.alphabet, 6)) {
            const auto s = symbols_of(u);
            const auto na = static_cast<std::size_t>(std::count(s.begin(), s.end(), "a"));
            Count expected = 1;
            for (std::size_t k = na; k < s.size(); ++k) expected *= na;
            CHECK(nat(nwa_eval(A, u)) == expected);
        }
    }
}

TEST_CASE("WFO: ex1 automaton matches the fig1 nest") {
    const auto doc = load_wfo("ex1.wfo");
    const auto A = wfo_to_sweeping(doc.formula, doc.alphabet, doc.weights);
    const auto fig1 = load_nwa("fig1.nwa");
    for (const auto& u : words_up_to(doc.alphabet, 5)) CHECK(nwa_eval(A, u) == nwa_eval(fig1, u));
    CHECK_THROWS_AS(wfo_to_sweeping(doc.formula, doc.alphabet, doc.weights, Mode::OneWay), TranslateError);
}

TEST_CASE("WFO: corpus preservation suite") {
    std::vector<WfoDocument> docs{load_wfo("ex1.wfo"), load_wfo("ex2.wfo")};
    for (const auto& f : corpus_files()) docs.push_back(parse_wfo_document(slurp(f)));
    REQUIRE(docs.size() >= 10);
    for (const auto& doc : docs) {
        CAPTURE(format_formula(doc.formula));
        const auto A = wfo_to_sweeping(doc.formula, doc.alphabet, doc.weights);
        CHECK(validate(A).empty());
        CHECK(is_sweeping(A).has_value());
        CHECK(is_aperiodic(A).aperiodic);
        const auto amb = classify_ambiguity(A, 6);
        CHECK(linear_or_better(amb.verdict, amb.degree));
        for (const auto& u : words_up_to(doc.alphabet, 5)) CHECK(nwa_eval(A, u) == wfo_eval(doc.formula, symbols_of(u)));
        if (classify_fragment(doc.formula).contains(Fragment::lrWFO)) {
            const auto B = wfo_to_sweeping(doc.formula, doc.alphabet, doc.weights, Mode::OneWay);
            CHECK(is_one_way(B) == OneWay::LeftToRight);
            for (const auto& u : words_up_to(doc.alphabet, 4)) CHECK(nwa_eval(B, u) == wfo_eval(doc.formula, symbols_of(u)));
        }
    }
}

TEST_CASE("WFO: random sentences") {
    Gen g(202);
    for (int i = 0; i < 60; ++i) {
        const auto phi = g.wfo_formula({}, 3);
        CAPTURE(format_formula(phi));
        const auto A = wfo_to_sweeping(phi, {"a", "b"}, {"f", "g"});
        CHECK(is_sweeping(A).has_value());
        for (const auto& u : words_up_to({"a", "b"}, 3)) CHECK(nwa_eval(A, u) == wfo_eval(phi, symbols_of(u)));
    }
}

// ---------------------------------------------------------------- sweeping construction

namespace {

int find_transition(const Part& p, const std::string& src, const std::string& letter, Dir dir, const std::string& dst) {
    for (std::size_t i = 0; i < p.transitions.size(); ++i) {
        const auto& t = p.transitions[i];
        if (p.states[static_cast<std::size_t>(t.src)] == src && format_letter(t.letter) == letter && t.dir == dir &&
            p.states[static_cast<std::size_t>(t.dst)] == dst)
            return static_cast<int>(i);
    }
    FAIL("no transition " << src << " " << letter << " " << dst);
    return -1;
}

// Window closed on the right by a marked b: re-read the preceding a-block backwards, then return.
ComponentSpec back_window(const Nwa& base) {
    const Part& B = base.root_part();
    ComponentSpec s;
    s.base_part = base.root();
    s.depth = 1;
    s.right = Wall{0, {0}};
    s.start = Side::Right;
    s.start_set = {find_transition(B, "p", "b", Dir::Left, "q")};
    s.exit = Side::Right;
    s.exit_set = {find_transition(B, "r", "b", Dir::Right, "p")};
    s.level = 1;
    return s;
}

void collect_parts(const RunTree& t, std::set<PartId>& out) {
    out.insert(t.part);
    for (const auto& c : t.children) collect_parts(c, out);
}

std::string canonical_sweep(const Nwa& A) { return format_nwa(canonicalize(sw_transform(A).nest)); }

} // namespace

TEST_CASE("component: the back window of aex") {
    const Nwa base = anchor(load_nwa("aex.nwa"));
    const auto spec = back_window(base);
    const Nwa C = build_component(base, spec);
    const Part& P = C.root_part();
    CHECK(P.depth == 1);
    CHECK(validate(C).empty());

    // dangling shape: enter leftwards on the marked b, leave rightwards on the marked b
    const Letter wall{LetterKind::Symbol, "b", {1}};
    for (const auto& t : P.transitions) {
        if (std::ranges::count(P.initial, t.src)) {
            CHECK(t.letter == wall);
            CHECK(t.dir == Dir::Left);
        }
        if (std::ranges::count(P.final, t.dst)) {
            CHECK(t.letter == wall);
            CHECK(t.dir == Dir::Right);
        }
    }

    // value: g^m for the a-block right before the marked b
    Evaluator ev(C);
    for (const auto& u : words_up_to({"a", "b"}, 6)) {
        const auto s = symbols_of(u);
        for (const auto& m : markings(u, 1)) {
            std::size_t j = 0;
            while (m[j].marks[0] == 0) ++j;
            MultisetSeries expected;
            if (s[j] == "b") {
                std::size_t k = j;
                while (k > 0 && s[k - 1] == "a") --k;
                expected = MultisetSeries::singleton(std::vector<std::string>(j - k, "g"));
            }
            CHECK(ev.eval_part(C.root(), m) == expected);
        }
    }
}

TEST_CASE("component: sweepified window agrees with the two-way window") {
    const Nwa base = anchor(load_nwa("aex.nwa"));
    const auto spec = back_window(base);
    const Nwa two_way = build_component(base, spec);
    for (bool annotated : {true, false}) {
        SwOptions o;
        o.annotated = annotated;
        const auto r = sweepify_component(base, spec, o);
        CHECK(validate(r.nest).empty());
        CHECK(sweep_phases(r.nest.root_part()).has_value());
        Evaluator a(two_way), b(r.nest);
        for (const auto& u : words_up_to({"a", "b"}, 5))
            for (const auto& m : markings(u, 1)) CHECK(a.eval_part(two_way.root(), m) == b.eval_part(r.nest.root(), m));
    }
}

TEST_CASE("component: top window is the whole part") {
    const Nwa base = anchor(load_nwa("aex.nwa"));
    const Nwa C = build_component(base, top_component(base.root_part(), base.root()));
    for (const auto& u : words_up_to({"a", "b"}, 6)) CHECK(nwa_eval(C, u) == nwa_eval(base, u));
}

TEST_CASE("sw_transform: aex") {
    const Nwa A = load_nwa("aex.nwa");
    for (bool annotated : {true, false}) {
        SwOptions o;
        o.annotated = annotated;
        const auto r = sw_transform(A, o);
        CHECK(validate(r.nest).empty());
        CHECK(is_sweeping(r.nest).has_value());
        CHECK(nesting_depth(r.nest) <= default_depth_cap(A.root_part()));
        if (annotated) CHECK(is_aperiodic(r.nest).aperiodic);
        for (const auto& u : words_up_to({"a", "b"}, 7)) {
            CHECK(nwa_eval(r.nest, u) == nwa_eval(A, u));
            CHECK(nwa_eval(r.nest, u) == aex_oracle(symbols_of(u)));
        }
    }
}

TEST_CASE("sw_transform: the run on abbaaba") {
    const Nwa A = load_nwa("aex.nwa");
    const auto r = sw_transform(A);
    const Word w = plain_word({"a", "b", "b", "a", "a", "b", "a"});
    const auto base_runs = enumerate_simple_runs(r.base, w);
    REQUIRE(base_runs.size() == 1);
    const auto trees = enumerate_simple_runs(r.nest, w);
    REQUIRE(trees.size() == 1);
    CHECK(flatten(trees[0], r.provenance, r.base, r.base.root()) == base_runs[0]);

    // the sub-nest this run uses: root plus two nested levels, the root calling on b
    std::set<PartId> used;
    collect_parts(trees[0], used);
    std::set<int> levels;
    for (PartId id : used) levels.insert(r.nest.part(id).depth);
    CHECK(levels == std::set<int>{0, 1, 2});
    bool root_calls_on_b = false;
    for (const auto& c : trees[0].children)
        if (c.weight == "call" && c.letter.symbol == "b") root_calls_on_b = true;
    CHECK(root_calls_on_b);
    CHECK(sweep_phases(r.nest.root_part()).has_value());
}

TEST_CASE("sw_transform: hand-written fig5 nest agrees") {
    const Nwa F = load_nwa("fig5.nwa");
    CHECK(validate(F).empty());
    CHECK(is_sweeping(F).has_value());
    CHECK(nesting_depth(F) == 2);
    CHECK(is_aperiodic(F).aperiodic);
    const Nwa A = load_nwa("aex.nwa");
    const Nwa S = sw_transform(A).nest;
    for (const auto& u : words_up_to({"a", "b"}, 7)) {
        CHECK(nwa_eval(F, u) == nwa_eval(A, u));
        CHECK(nwa_eval(F, u) == nwa_eval(S, u));
    }
}

TEST_CASE("sw_transform: flattened runs visit positions between marks twice") {
    const Nwa A = load_nwa("aex.nwa");
    const auto r = sw_transform(A);
    // every flattened run equals a base run, and base runs of aex read each block twice
    for (const auto& u : words_up_to({"a", "b"}, 6)) {
        const auto base_runs = enumerate_simple_runs(r.base, u);
        for (const auto& t : enumerate_simple_runs(r.nest, u)) {
            const auto flat = flatten(t, r.provenance, r.base, r.base.root());
            CHECK(std::find(base_runs.begin(), base_runs.end(), flat) != base_runs.end());
        }
    }
}

TEST_CASE("sw_transform: already sweeping input keeps its semantics and shape") {
    const auto doc = load_wfo("ex2.wfo");
    const Nwa A = wfo_to_sweeping(doc.formula, doc.alphabet, doc.weights);
    const auto r = sw_transform(A);
    CHECK(is_sweeping(r.nest).has_value());
    CHECK(nesting_depth(r.nest) == nesting_depth(A));
    for (const auto& u : words_up_to(doc.alphabet, 5)) CHECK(nwa_eval(r.nest, u) == nwa_eval(A, u));
}

TEST_CASE("sw_transform: random small two-way automata") {
    Gen g(303);
    int tried = 0;
    for (int i = 0; i < 60; ++i) {
        const Nwa A = g.two_way(2 + static_cast<int>(g.below(2)), 5 + static_cast<int>(g.below(4)));
        if (classify_ambiguity(A, 5).verdict == Verdict::Infinite) {
            CHECK_THROWS_AS(sw_transform(A), TranslateError);
            continue;
        }
        ++tried;
        CAPTURE(format_nwa(A));
        for (bool annotated : {true, false}) {
            SwOptions o;
            o.annotated = annotated;
            const auto r = sw_transform(A, o);
            CHECK(is_sweeping(r.nest).has_value());
            for (const auto& u : words_up_to(A.alphabet, 5)) CHECK(nwa_eval(r.nest, u) == nwa_eval(A, u));
        }
    }
    CHECK(tried >= 20);
}

TEST_CASE("sw_transform: refuses pumpable runs") {
    const Nwa A = parse_nwa(
        "alphabet: a\nweights: f\nlevel: 0\nstates: p q\ninitial: p\nfinal: q\n"
        "p -> p : a , k:f , R\np -> p : a , one , L\np -> q : -| , one , L\n");
    CHECK_THROWS_AS(sw_transform(A), TranslateError);
}

TEST_CASE("sw_transform: canonical output on aex is pinned") {
    const std::string got = canonical_sweep(load_nwa("aex.nwa"));
    const std::string path = golden_path("aex_sweep.nwa");
    if (std::getenv("WFOKIT_UPDATE_GOLDEN")) std::ofstream(path) << got;
    CHECK(got == slurp(path));
}
