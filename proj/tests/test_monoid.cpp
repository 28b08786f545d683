#include <doctest.h>

#include "support.hpp"
#include "wfokit/monoid.hpp"

using namespace wfo;
using namespace wfo::test;

namespace {

// Test-side crossing oracle: depth-first reachability over positions of w.
Behaviour crossing_oracle(const Part& p, const Word& w) {
    const int n = static_cast<int>(p.states.size());
    if (w.empty()) return Behaviour::unit(n);
    Behaviour b{Relation(n), Relation(n), Relation(n), Relation(n), false};
    const int len = static_cast<int>(w.size());
    for (int side = 0; side < 2; ++side) {
        for (StateId q0 = 0; q0 < n; ++q0) {
            std::vector<std::vector<bool>> seen(static_cast<std::size_t>(len), std::vector<bool>(static_cast<std::size_t>(n)));
            std::vector<std::pair<int, StateId>> stack{{side == 0 ? 0 : len - 1, q0}};
            seen[static_cast<std::size_t>(stack[0].first)][static_cast<std::size_t>(q0)] = true;
            while (!stack.empty()) {
                auto [pos, q] = stack.back();
                stack.pop_back();
                for (const auto& t : p.transitions) {
                    if (t.src != q || t.letter != w[static_cast<std::size_t>(pos)]) continue;
                    const int np = pos + (t.dir == Dir::Right ? 1 : -1);
                    if (np < 0) (side == 0 ? b.ll : b.rl).set(q0, t.dst);
                    else if (np >= len) (side == 0 ? b.lr : b.rr).set(q0, t.dst);
                    else if (!seen[static_cast<std::size_t>(np)][static_cast<std::size_t>(t.dst)]) {
                        seen[static_cast<std::size_t>(np)][static_cast<std::size_t>(t.dst)] = true;
                        stack.emplace_back(np, t.dst);
                    }
                }
            }
        }
    }
    return b;
}

// Subwords of framed words: optional left marker, letters, optional right marker.
std::vector<Word> framed_pieces(const std::vector<std::string>& alphabet, std::size_t max_letters) {
    std::vector<Word> out;
    for (const auto& u : words_up_to(alphabet, max_letters)) {
        for (int l = 0; l < 2; ++l) {
            for (int r = 0; r < 2; ++r) {
                Word w;
                if (l) w.push_back(Letter::left_marker());
                w.insert(w.end(), u.begin(), u.end());
                if (r) w.push_back(Letter::right_marker());
                out.push_back(w);
            }
        }
    }
    return out;
}

Word slice(const Word& w, std::size_t from, std::size_t to) { return Word(w.begin() + static_cast<std::ptrdiff_t>(from), w.begin() + static_cast<std::ptrdiff_t>(to)); }

Relation random_relation(Gen& g, int n) {
    Relation r(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (g.coin(0.3)) r.set(i, j);
        }
    }
    return r;
}

int index_of(const Part& p, const std::string& s) { return p.state_id(s); }

} // namespace

TEST_CASE("unit behaviour") {
    const auto aex = load_nwa("aex.nwa");
    const auto u = behaviour_bruteforce(aex.root_part(), {});
    CHECK(u.is_unit);
    CHECK(u == Behaviour::unit(5));
    CHECK(u.ll == Relation::identity(5));
    const auto a = behaviour_of(aex.root_part(), plain_word({"a"}));
    CHECK(behaviour_compose(a, u) == a);
    CHECK(behaviour_compose(u, a) == a);
}

TEST_CASE("single-letter behaviour of the two-way example") {
    const auto aex = load_nwa("aex.nwa");
    const auto& p = aex.root_part();
    const auto a = behaviour_bruteforce(p, plain_word({"a"}));
    CHECK(a.lr.test(index_of(p, "p"), index_of(p, "p")));
    CHECK(a.lr.test(index_of(p, "r"), index_of(p, "r")));
    CHECK(a.rl.test(index_of(p, "q"), index_of(p, "q")));
}

TEST_CASE("one-way roots have no left exits") {
    Gen g(4);
    for (int i = 0; i < 30; ++i) {
        const auto A = projection_lr(g.sweeping(3, 9));
        for (const auto& u : words_up_to(A.alphabet, 4)) {
            if (u.empty()) continue;
            const auto b = behaviour_bruteforce(A.root_part(), u);
            CHECK(b.ll.empty());
            CHECK(b.rl.empty());
            // right-to-right is read off the transitions on the last letter
            Relation expected(3);
            for (const auto& t : A.root_part().transitions) {
                if (t.letter == u.back() && t.dir == Dir::Right) expected.set(t.src, t.dst);
            }
            CHECK(b.rr == expected);
        }
    }
}

TEST_CASE("brute force agrees with the test oracle") {
    Gen g(8);
    std::vector<Nwa> corpus{load_nwa("aex.nwa")};
    for (int i = 0; i < 30; ++i) corpus.push_back(g.two_way(3, 9));
    for (const auto& A : corpus) {
        for (const auto& w : framed_pieces(A.alphabet, 4)) CHECK(behaviour_bruteforce(A.root_part(), w) == crossing_oracle(A.root_part(), w));
    }
}

TEST_CASE("composition matches brute force on all splits") {
    Gen g(13);
    std::vector<Nwa> corpus{load_nwa("aex.nwa")};
    for (int i = 0; i < 30; ++i) corpus.push_back(g.two_way(3, 9));
    for (const auto& A : corpus) {
        const auto& p = A.root_part();
        for (const auto& w : framed_pieces(A.alphabet, 3)) {
            const auto whole = crossing_oracle(p, w);
            CHECK(behaviour_of(p, w) == whole);
            for (std::size_t k = 0; k <= w.size(); ++k) {
                CHECK(behaviour_compose(crossing_oracle(p, slice(w, 0, k)), crossing_oracle(p, slice(w, k, w.size()))) == whole);
            }
        }
    }
}

TEST_CASE("composition is associative on random relations") {
    Gen g(17);
    for (int i = 0; i < 300; ++i) {
        Behaviour b[3];
        for (auto& x : b) x = {random_relation(g, 3), random_relation(g, 3), random_relation(g, 3), random_relation(g, 3), false};
        CHECK(behaviour_compose(behaviour_compose(b[0], b[1]), b[2]) == behaviour_compose(b[0], behaviour_compose(b[1], b[2])));
    }
}

TEST_CASE("transition monoid construction") {
    Nwa one;
    one.alphabet = {"a", "b"};
    Part p;
    p.name = "root";
    p.add_state("s");
    p.initial = p.final = {0};
    p.transitions.push_back({0, Letter::plain("a"), Weight::one(), Dir::Right, 0});
    p.transitions.push_back({0, Letter::plain("b"), Weight::one(), Dir::Right, 0});
    one.set_root(one.add_part(p));
    const auto m1 = build_transition_monoid(one.root_part(), one.alphabet);
    // the empty word is its own class; every nonempty word lands in one class
    CHECK(m1.elements.size() == 2);
    CHECK(m1.elements[0].is_unit);

    const auto aex = load_nwa("aex.nwa");
    const auto m = build_transition_monoid(aex.root_part(), aex.alphabet);
    CHECK_FALSE(m.budget_exceeded);
    REQUIRE(m.right_action.size() == m.elements.size());
    for (std::size_t e = 0; e < m.elements.size(); ++e) {
        CHECK(behaviour_of(aex.root_part(), m.witness[e]) == m.elements[e]);
        for (std::size_t gi = 0; gi < m.generators.size(); ++gi) {
            const int to = m.right_action[e][gi];
            REQUIRE(to >= 0);
            CHECK(m.elements[static_cast<std::size_t>(to)] ==
                  behaviour_compose(m.elements[e], m.elements[static_cast<std::size_t>(m.generator_element[gi])]));
        }
    }
    // every word of length <= 5 lands on some element
    for (const auto& u : words_up_to(aex.alphabet, 5)) CHECK(m.find(behaviour_of(aex.root_part(), u)) >= 0);
}

TEST_CASE("aperiodicity") {
    const auto aex = load_nwa("aex.nwa");
    const auto r = is_aperiodic(aex);
    CHECK(r.aperiodic);
    CHECK(r.index >= 1);

    const auto fig1 = is_aperiodic(load_nwa("fig1.nwa"));
    CHECK(fig1.aperiodic);
    CHECK(fig1.parts.size() == 3);
    for (const auto& part : fig1.parts) CHECK(part.aperiodic);

    Nwa parity;
    parity.alphabet = {"a"};
    Part p;
    p.name = "root";
    p.add_state("even");
    p.add_state("odd");
    p.initial = {0};
    p.final = {0};
    p.transitions.push_back({0, Letter::plain("a"), Weight::one(), Dir::Right, 1});
    p.transitions.push_back({1, Letter::plain("a"), Weight::one(), Dir::Right, 0});
    parity.set_root(parity.add_part(p));
    const auto pr = is_aperiodic(parity);
    CHECK_FALSE(pr.aperiodic);
    REQUIRE(pr.parts.size() == 1);
    REQUIRE(pr.parts[0].witness.has_value());
    CHECK(*pr.parts[0].witness == plain_word({"a"}));
    CHECK(pr.parts[0].period == 2);
}

TEST_CASE("index is the least uniform exponent") {
    Gen g(23);
    for (int i = 0; i < 20; ++i) {
        const auto A = g.two_way(3, 8);
        const auto m = build_transition_monoid(A.root_part(), A.alphabet);
        const auto rep = part_aperiodicity(A.root_part(), A.alphabet);
        if (!rep.aperiodic) continue;
        int least = 1;
        for (const auto& x : m.elements) {
            Behaviour power = x;
            int k = 1;
            while (behaviour_compose(power, x) != power) {
                power = behaviour_compose(power, x);
                ++k;
            }
            least = std::max(least, k);
        }
        CHECK(rep.index == least);
    }
}

TEST_CASE("projections of aperiodic sweeping automata stay aperiodic") {
    Gen g(29);
    int tested = 0;
    for (int i = 0; i < 400 && tested < 50; ++i) {
        const auto A = g.sweeping(3, 9);
        if (!is_aperiodic(A).aperiodic) continue;
        ++tested;
        CHECK(is_aperiodic(projection_lr(A)).aperiodic);
        CHECK(is_aperiodic(projection_rl(A)).aperiodic);
    }
    CHECK(tested == 50);
}
