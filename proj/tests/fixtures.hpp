#pragma once
// Data files, seeded generators and brute-force oracles shared by the tests and the acceptance run.

#include "wfokit/logic.hpp"
#include "wfokit/multiset.hpp"
#include "wfokit/nwa.hpp"
#include "wfokit/runs.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace wfo::test {

inline std::string data_path(const std::string& name) { return std::string(WFOKIT_DATA_DIR) + "/" + name; }
inline std::string golden_path(const std::string& name) { return std::string(WFOKIT_GOLDEN_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Nwa load_nwa(const std::string& name) { return parse_nwa(slurp(data_path(name))); }
inline WfoDocument load_wfo(const std::string& name) { return parse_wfo_document(slurp(data_path(name))); }

inline PlainWord symbols_of(const Word& w) {
    PlainWord out;
    for (const Letter& l : w) out.push_back(l.symbol);
    return out;
}

inline std::vector<Word> words_up_to(const std::vector<std::string>& alphabet, std::size_t max_len) {
    std::vector<Word> out;
    for (std::size_t n = 0; n <= max_len; ++n) {
        for (auto& w : all_words(alphabet, n)) out.push_back(std::move(w));
    }
    return out;
}

/// Every valid marking of `u` with `depth` tracks.
inline std::vector<Word> markings(const Word& u, int depth) {
    std::vector<Word> cur{u};
    for (int d = 0; d < depth; ++d) {
        std::vector<Word> next;
        for (const Word& w : cur) {
            for (std::size_t i = 1; i <= w.size(); ++i) next.push_back(mark_position(w, i));
        }
        cur = std::move(next);
    }
    return cur;
}

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
    template <class T> const T& pick(const std::vector<T>& v) { return v[static_cast<std::size_t>(below(static_cast<int>(v.size())))]; }

    WeightSeq sequence(const std::vector<std::string>& weights, int max_len) {
        WeightSeq s;
        const int n = below(max_len + 1);
        for (int i = 0; i < n; ++i) s.push_back(pick(weights));
        return s;
    }

    MultisetSeries series(const std::vector<std::string>& weights, int max_entries = 4, int max_len = 3) {
        MultisetSeries s;
        const int n = below(max_entries + 1);
        for (int i = 0; i < n; ++i) s.add(sequence(weights, max_len), 1 + below(3));
        return s;
    }

    Weight weight(const std::vector<std::string>& weights) {
        return coin(0.4) ? Weight::one() : Weight::constant(pick(weights));
    }

    /// Level-0 automaton over plain letters with arbitrary directions on letters.
    Nwa two_way(int states, int transitions, const std::vector<std::string>& alphabet = {"a", "b"},
                const std::vector<std::string>& weights = {"f", "g"}) {
        Nwa A = shell(states, alphabet, weights);
        Part& p = A.part(A.root());
        for (int i = 0; i < transitions; ++i) {
            Transition t;
            t.src = below(states);
            t.dst = below(states);
            t.weight = weight(weights);
            const int kind = below(static_cast<int>(alphabet.size()) + 2);
            if (kind == 0) {
                t.letter = Letter::left_marker();
                t.dir = Dir::Right;
            } else if (kind == 1) {
                t.letter = Letter::right_marker();
                t.dir = Dir::Left;
            } else {
                t.letter = Letter::plain(alphabet[static_cast<std::size_t>(kind - 2)]);
                t.dir = coin() ? Dir::Right : Dir::Left;
            }
            p.transitions.push_back(t);
        }
        dedupe(p);
        return A;
    }

    /// Level-0 sweeping automaton: states get a phase, letter moves stay inside a phase,
    /// marker moves switch into the phase their direction requires.
    Nwa sweeping(int states, int transitions, const std::vector<std::string>& alphabet = {"a", "b"},
                 const std::vector<std::string>& weights = {"f", "g"}) {
        Nwa A = shell(states, alphabet, weights);
        Part& p = A.part(A.root());
        std::vector<Dir> phase(static_cast<std::size_t>(states));
        for (auto& d : phase) d = coin() ? Dir::Right : Dir::Left;
        phase[0] = Dir::Left;  // the start state leaves on the left marker
        auto in_phase = [&](Dir d) {
            std::vector<int> v;
            for (int q = 0; q < states; ++q) {
                if (phase[static_cast<std::size_t>(q)] == d) v.push_back(q);
            }
            return v;
        };
        const auto rights = in_phase(Dir::Right), lefts = in_phase(Dir::Left);
        for (int i = 0; i < transitions; ++i) {
            Transition t;
            t.weight = weight(weights);
            const int kind = below(static_cast<int>(alphabet.size()) + 2);
            if (kind == 0) {
                if (rights.empty()) continue;
                t.letter = Letter::left_marker();
                t.dir = Dir::Right;
                t.src = below(states);
                t.dst = pick(rights);
            } else if (kind == 1) {
                t.letter = Letter::right_marker();
                t.dir = Dir::Left;
                t.src = below(states);
                t.dst = pick(lefts);
            } else {
                t.letter = Letter::plain(alphabet[static_cast<std::size_t>(kind - 2)]);
                t.dir = coin() ? Dir::Right : Dir::Left;
                const auto& pool = t.dir == Dir::Right ? rights : lefts;
                if (pool.empty()) continue;
                t.src = pick(pool);
                t.dst = pick(pool);
            }
            p.transitions.push_back(t);
        }
        dedupe(p);
        return A;
    }

    // ---- formulas

    Fo fo_formula(const std::vector<std::string>& vars, int depth, const std::vector<std::string>& alphabet = {"a", "b"}) {
        const int choice = depth <= 0 ? below(3) : below(7);
        switch (choice) {
        case 0: return vars.empty() ? fo::top() : fo::letter(pick(alphabet), pick(vars));
        case 1: return vars.empty() ? fo::neg(fo::top()) : fo::leq(pick(vars), pick(vars));
        case 2: return vars.empty() ? fo::top() : fo::lt(pick(vars), pick(vars));
        case 3: return fo::neg(fo_formula(vars, depth - 1, alphabet));
        case 4: return fo::conj(fo_formula(vars, depth - 1, alphabet), fo_formula(vars, depth - 1, alphabet));
        case 5: return fo::disj(fo_formula(vars, depth - 1, alphabet), fo_formula(vars, depth - 1, alphabet));
        default: {
            const std::string x = fresh_or_reuse(vars);
            auto inner = vars;
            inner.push_back(x);
            auto body = fo_formula(inner, depth - 1, alphabet);
            return coin() ? fo::forall(x, body) : fo::exists(x, body);
        }
        }
    }

    /// Closed WFO sentence over the given bound variables (pass {} for a sentence).
    Wfo wfo_formula(const std::vector<std::string>& vars, int depth, const std::vector<std::string>& weights = {"f", "g"}) {
        const int choice = depth <= 0 ? below(3) : below(9);
        switch (choice) {
        case 0: return wf::weight(pick(weights));
        case 1: return coin() ? wf::one() : wf::weight(pick(weights));
        case 2: return coin(0.2) ? wf::zero() : wf::weight(pick(weights));
        case 3: return wf::plus(wfo_formula(vars, depth - 1, weights), wfo_formula(vars, depth - 1, weights));
        case 4: return wf::times(wfo_formula(vars, depth - 1, weights), wfo_formula(vars, depth - 1, weights));
        case 5: return wf::cond(fo_formula(vars, 1), wfo_formula(vars, depth - 1, weights), wfo_formula(vars, depth - 1, weights));
        default: {
            const std::string x = fresh_or_reuse(vars);
            auto inner = vars;
            inner.push_back(x);
            auto body = wfo_formula(inner, depth - 1, weights);
            if (choice == 6) return wf::sum(x, body);
            if (choice == 7) return wf::prod_lr(x, body);
            return wf::prod_rl(x, body);
        }
        }
    }

    /// step-wFO: constants under conditionals.
    Wfo step_formula(const std::vector<std::string>& vars, int depth, const std::vector<std::string>& weights = {"f", "g"}) {
        if (depth <= 0 || coin(0.4)) return wf::weight(pick(weights));
        return wf::cond(fo_formula(vars, 1), step_formula(vars, depth - 1, weights), step_formula(vars, depth - 1, weights));
    }

    /// RoneWFO: 0, conditionals, sums, Sum x, and left-to-right products of step formulas.
    Wfo rone_formula(const std::vector<std::string>& vars, int depth, const std::vector<std::string>& weights = {"f", "g"}) {
        const int choice = depth <= 0 ? below(2) : below(5);
        const std::string x = fresh_or_reuse(vars);
        auto inner = vars;
        inner.push_back(x);
        switch (choice) {
        case 0: return wf::prod_lr(x, step_formula(inner, 2, weights));
        case 1: return coin(0.15) ? wf::zero() : wf::prod_lr(x, step_formula(inner, 1, weights));
        case 2: return wf::plus(rone_formula(vars, depth - 1, weights), rone_formula(vars, depth - 1, weights));
        case 3: return wf::cond(fo_formula(vars, 1), rone_formula(vars, depth - 1, weights), rone_formula(vars, depth - 1, weights));
        default: return wf::sum(x, rone_formula(inner, depth - 1, weights));
        }
    }

private:
    static Nwa shell(int states, const std::vector<std::string>& alphabet, const std::vector<std::string>& weights) {
        Nwa A;
        A.alphabet = alphabet;
        A.weights = weights;
        Part p;
        p.name = "root";
        for (int q = 0; q < states; ++q) p.add_state("q" + std::to_string(q));
        p.initial = {0};
        p.final = {states - 1};
        A.set_root(A.add_part(std::move(p)));
        return A;
    }

    static void dedupe(Part& p) {
        std::sort(p.transitions.begin(), p.transitions.end());
        p.transitions.erase(std::unique(p.transitions.begin(), p.transitions.end()), p.transitions.end());
    }

    std::string fresh_or_reuse(const std::vector<std::string>& vars) {
        static const std::vector<std::string> pool{"x", "y", "z"};
        if (!vars.empty() && coin(0.2)) return pick(vars);  // shadowing
        for (const auto& v : pool) {
            if (std::find(vars.begin(), vars.end(), v) == vars.end()) return v;
        }
        return pick(pool);
    }

    std::mt19937_64 rng_;
};

// ---- independent oracles

/// Multiset as a flat list of sequences; union is concatenation of lists, product all pairs.
inline std::vector<WeightSeq> expand(const MultisetSeries& s) {
    std::vector<WeightSeq> out;
    for (const auto& [seq, count] : s.entries()) {
        for (Count c = 0; c < count; ++c) out.push_back(seq);
    }
    return out;
}

inline MultisetSeries collect(const std::vector<WeightSeq>& list) {
    MultisetSeries s;
    for (const auto& seq : list) s.add(seq, 1);
    return s;
}

/// ex1.wfo by direct enumeration of factors: mirror(u[x..y]) twice, as language words.
inline MultisetSeries example1_oracle(const PlainWord& u) {
    std::vector<WeightSeq> out;
    for (std::size_t x = 0; x < u.size(); ++x) {
        for (std::size_t y = x; y < u.size(); ++y) {
            WeightSeq m;
            for (std::size_t z = y + 1; z-- > x;) m.push_back(u[z]);
            WeightSeq twice = m;
            twice.insert(twice.end(), m.begin(), m.end());
            out.push_back(twice);
        }
    }
    return collect(out);
}

/// aex.nwa: a^{m1} b a^{m2} b ... a^{mn} -> f^{m1} g^{m1} ... f^{mn} (last block has no b).
inline MultisetSeries aex_oracle(const PlainWord& u) {
    WeightSeq out;
    std::size_t run = 0;
    for (const auto& c : u) {
        if (c == "a") {
            ++run;
        } else {
            for (std::size_t i = 0; i < run; ++i) out.push_back("f");
            for (std::size_t i = 0; i < run; ++i) out.push_back("g");
            run = 0;
        }
    }
    for (std::size_t i = 0; i < run; ++i) out.push_back("f");
    return MultisetSeries::singleton(out);
}

} // namespace wfo::test
