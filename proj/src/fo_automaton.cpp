#include "wfokit/translate.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace wfo {

int Dfa::letter_id(const Letter& l) const {
    auto it = std::lower_bound(letters.begin(), letters.end(), l);
    if (it == letters.end() || *it != l) throw TranslateError("letter '" + format_letter(l) + "' not in the automaton alphabet");
    return static_cast<int>(it - letters.begin());
}

bool Dfa::accepts(const Word& w) const {
    int q = start;
    for (const auto& l : w) q = next[static_cast<std::size_t>(q)][static_cast<std::size_t>(letter_id(l))];
    return accepting[static_cast<std::size_t>(q)];
}

namespace {

struct Builder {
    const std::vector<std::string>& alphabet;

    Dfa blank(int tracks) const {
        Dfa d;
        d.tracks = tracks;
        d.letters = letters_of_depth(alphabet, tracks);
        std::sort(d.letters.begin(), d.letters.end());
        return d;
    }

    static int add_state(Dfa& d, bool acc) {
        d.next.emplace_back(d.letters.size(), 0);
        d.accepting.push_back(acc);
        return d.size() - 1;
    }

    /// Single-state automaton accepting everything (or nothing).
    Dfa constant(int tracks, bool value) const {
        Dfa d = blank(tracks);
        add_state(d, value);
        return d;
    }

    /// Every track carries exactly one mark.
    Dfa valid(int tracks) const {
        Dfa d = blank(tracks);
        // State = bitset of tracks already marked; one sink.
        const int full = (1 << tracks) - 1;
        for (int s = 0; s <= full; ++s) add_state(d, s == full);
        const int sink = add_state(d, false);
        for (int s = 0; s <= full; ++s) {
            for (std::size_t li = 0; li < d.letters.size(); ++li) {
                int seen = s;
                bool clash = false;
                for (int t = 0; t < tracks; ++t) {
                    if (!d.letters[li].marks[static_cast<std::size_t>(t)]) continue;
                    if (seen & (1 << t)) clash = true;
                    seen |= 1 << t;
                }
                d.next[static_cast<std::size_t>(s)][li] = clash ? sink : seen;
            }
        }
        for (std::size_t li = 0; li < d.letters.size(); ++li) d.next[static_cast<std::size_t>(sink)][li] = sink;
        return d;
    }

    Dfa letter_atom(int tracks, int track, const std::string& a) const {
        Dfa d = blank(tracks);
        const int wait = add_state(d, false), hit = add_state(d, true), sink = add_state(d, false);
        for (std::size_t li = 0; li < d.letters.size(); ++li) {
            const Letter& l = d.letters[li];
            const bool marked = l.marks[static_cast<std::size_t>(track)];
            d.next[static_cast<std::size_t>(wait)][li] = marked ? (l.symbol == a ? hit : sink) : wait;
            d.next[static_cast<std::size_t>(hit)][li] = marked ? sink : hit;
            d.next[static_cast<std::size_t>(sink)][li] = sink;
        }
        return d;
    }

    Dfa leq_atom(int tracks, int tx, int ty) const {
        Dfa d = blank(tracks);
        const int none = add_state(d, false), after_x = add_state(d, false), done = add_state(d, true),
                  sink = add_state(d, false);
        for (std::size_t li = 0; li < d.letters.size(); ++li) {
            const Letter& l = d.letters[li];
            const bool mx = l.marks[static_cast<std::size_t>(tx)], my = l.marks[static_cast<std::size_t>(ty)];
            auto& n0 = d.next[static_cast<std::size_t>(none)][li];
            if (tx == ty) n0 = mx ? done : none;
            else if (mx && my) n0 = done;
            else if (mx) n0 = after_x;
            else if (my) n0 = sink;
            else n0 = none;
            auto& n1 = d.next[static_cast<std::size_t>(after_x)][li];
            n1 = mx ? sink : (my ? done : after_x);
            d.next[static_cast<std::size_t>(done)][li] = (mx || my) ? sink : done;
            d.next[static_cast<std::size_t>(sink)][li] = sink;
        }
        return d;
    }

    static Dfa product(const Dfa& a, const Dfa& b, bool conj) {
        Dfa d;
        d.tracks = a.tracks;
        d.letters = a.letters;
        std::map<std::pair<int, int>, int> id;
        std::deque<std::pair<int, int>> todo;
        auto get = [&](int x, int y) {
            auto [it, fresh] = id.try_emplace({x, y}, d.size());
            if (fresh) {
                const bool ax = a.accepting[static_cast<std::size_t>(x)], by = b.accepting[static_cast<std::size_t>(y)];
                add_state(d, conj ? (ax && by) : (ax || by));
                todo.emplace_back(x, y);
            }
            return it->second;
        };
        d.start = get(a.start, b.start);
        while (!todo.empty()) {
            auto [x, y] = todo.front();
            todo.pop_front();
            const int s = id.at({x, y});
            for (std::size_t li = 0; li < d.letters.size(); ++li) {
                const int t = get(a.next[static_cast<std::size_t>(x)][li], b.next[static_cast<std::size_t>(y)][li]);
                d.next[static_cast<std::size_t>(s)][li] = t;
            }
        }
        return d;
    }

    static Dfa complement(Dfa d) {
        for (std::size_t i = 0; i < d.accepting.size(); ++i) d.accepting[i] = !d.accepting[i];
        return d;
    }

    /// Existential projection of the last track, by subset construction.
    Dfa project_last(const Dfa& a) const {
        Dfa d = blank(a.tracks - 1);
        std::vector<std::pair<int, int>> ext(d.letters.size());
        for (std::size_t li = 0; li < d.letters.size(); ++li) {
            Letter l0 = d.letters[li], l1 = d.letters[li];
            l0.marks.push_back(0);
            l1.marks.push_back(1);
            ext[li] = {a.letter_id(l0), a.letter_id(l1)};
        }
        std::map<std::set<int>, int> id;
        std::deque<std::set<int>> todo;
        auto get = [&](const std::set<int>& s) {
            auto [it, fresh] = id.try_emplace(s, d.size());
            if (fresh) {
                bool acc = false;
                for (int q : s) acc = acc || a.accepting[static_cast<std::size_t>(q)];
                add_state(d, acc);
                todo.push_back(s);
            }
            return it->second;
        };
        d.start = get({a.start});
        while (!todo.empty()) {
            std::set<int> s = todo.front();
            todo.pop_front();
            const int sid = id.at(s);
            for (std::size_t li = 0; li < d.letters.size(); ++li) {
                std::set<int> t;
                for (int q : s) {
                    t.insert(a.next[static_cast<std::size_t>(q)][static_cast<std::size_t>(ext[li].first)]);
                    t.insert(a.next[static_cast<std::size_t>(q)][static_cast<std::size_t>(ext[li].second)]);
                }
                const int tid = get(t);
                d.next[static_cast<std::size_t>(sid)][li] = tid;
            }
        }
        return d;
    }

    /// Moore refinement on the reachable part.
    static Dfa minimize(const Dfa& a) {
        std::vector<int> order;
        std::vector<char> seen(static_cast<std::size_t>(a.size()), 0);
        std::deque<int> todo{a.start};
        seen[static_cast<std::size_t>(a.start)] = 1;
        while (!todo.empty()) {
            int q = todo.front();
            todo.pop_front();
            order.push_back(q);
            for (int t : a.next[static_cast<std::size_t>(q)])
                if (!seen[static_cast<std::size_t>(t)]) {
                    seen[static_cast<std::size_t>(t)] = 1;
                    todo.push_back(t);
                }
        }
        std::map<int, int> cls;
        for (int q : order) cls[q] = a.accepting[static_cast<std::size_t>(q)] ? 1 : 0;
        std::size_t classes = 0;
        while (true) {
            std::map<std::vector<int>, int> sig_id;
            std::map<int, int> next_cls;
            for (int q : order) {
                std::vector<int> sig{cls[q]};
                for (int t : a.next[static_cast<std::size_t>(q)]) sig.push_back(cls[t]);
                auto [it, fresh] = sig_id.try_emplace(sig, static_cast<int>(sig_id.size()));
                next_cls[q] = it->second;
            }
            const bool stable = sig_id.size() == classes;
            classes = sig_id.size();
            cls = std::move(next_cls);
            if (stable) break;
        }
        // Renumber classes in discovery order so the start state is 0.
        std::map<int, int> renum;
        for (int q : order) renum.try_emplace(cls[q], static_cast<int>(renum.size()));
        Dfa d;
        d.tracks = a.tracks;
        d.letters = a.letters;
        d.next.assign(renum.size(), std::vector<int>(a.letters.size(), 0));
        d.accepting.assign(renum.size(), false);
        for (int q : order) {
            const int c = renum[cls[q]];
            d.accepting[static_cast<std::size_t>(c)] = a.accepting[static_cast<std::size_t>(q)];
            for (std::size_t li = 0; li < a.letters.size(); ++li)
                d.next[static_cast<std::size_t>(c)][li] = renum[cls[a.next[static_cast<std::size_t>(q)][li]]];
        }
        d.start = 0;
        return d;
    }

    static int track_of(const std::vector<std::string>& vars, const std::string& x) {
        for (int i = static_cast<int>(vars.size()) - 1; i >= 0; --i)
            if (vars[static_cast<std::size_t>(i)] == x) return i;
        throw TranslateError("variable '" + x + "' is free but not declared");
    }

    /// Result may accept invalid encodings; callers intersect with `valid`.
    Dfa compile(const Fo& phi, std::vector<std::string>& vars) const {
        const int d = static_cast<int>(vars.size());
        using K = FoNode::Kind;
        switch (phi->kind) {
        case K::True: return constant(d, true);
        case K::Letter: return letter_atom(d, track_of(vars, phi->var), phi->letter);
        case K::Leq: return leq_atom(d, track_of(vars, phi->var), track_of(vars, phi->var2));
        case K::Not: return minimize(product(complement(compile(phi->left, vars)), valid(d), true));
        case K::And: return minimize(product(compile(phi->left, vars), compile(phi->right, vars), true));
        case K::Forall: {
            // forall x. f  ==  not exists x. not f
            vars.push_back(phi->var);
            Dfa body = product(complement(compile(phi->left, vars)), valid(d + 1), true);
            vars.pop_back();
            Dfa ex = minimize(project_last(minimize(body)));
            return minimize(product(complement(ex), valid(d), true));
        }
        }
        throw TranslateError("unknown formula node");
    }
};

} // namespace

Dfa fo_to_dfa(const Fo& phi, const std::vector<std::string>& vars, const std::vector<std::string>& alphabet) {
    std::set<std::string> declared(vars.begin(), vars.end());
    if (declared.size() != vars.size()) throw TranslateError("free variables must be distinct");
    for (const auto& x : free_vars(phi))
        if (!declared.count(x)) throw TranslateError("variable '" + x + "' is free but not declared");
    Builder b{alphabet};
    std::vector<std::string> scope = vars;
    const int d = static_cast<int>(vars.size());
    return Builder::minimize(Builder::product(b.compile(phi, scope), b.valid(d), true));
}

Nwa dfa_to_nwa(const Dfa& d, const std::vector<std::string>& alphabet) {
    Part p;
    p.name = "dfa";
    p.depth = d.tracks;
    const StateId in = p.add_state("in");
    std::vector<StateId> st;
    for (int q = 0; q < d.size(); ++q) st.push_back(p.add_state("q" + std::to_string(q)));
    const StateId out = p.add_state("out");
    p.initial = {in};
    p.final = {out};
    p.transitions.push_back({in, Letter::left_marker(), Weight::one(), Dir::Right, st[static_cast<std::size_t>(d.start)]});
    for (int q = 0; q < d.size(); ++q) {
        for (std::size_t li = 0; li < d.letters.size(); ++li)
            p.transitions.push_back({st[static_cast<std::size_t>(q)], d.letters[li], Weight::one(), Dir::Right,
                                     st[static_cast<std::size_t>(d.next[static_cast<std::size_t>(q)][li])]});
        if (d.accepting[static_cast<std::size_t>(q)])
            p.transitions.push_back({st[static_cast<std::size_t>(q)], Letter::right_marker(), Weight::one(), Dir::Left, out});
    }
    Nwa A;
    A.alphabet = alphabet;
    A.set_root(A.add_part(std::move(p)));
    return A;
}

Nwa fo_to_automaton(const Fo& phi, const std::vector<std::string>& free_vars, const std::vector<std::string>& alphabet) {
    return dfa_to_nwa(fo_to_dfa(phi, free_vars, alphabet), alphabet);
}

} // namespace wfo
