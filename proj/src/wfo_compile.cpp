#include "wfokit/translate.hpp"

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <tuple>

namespace wfo {

namespace {

/// Keeps states that are reachable from an initial state and co-reachable to a final one.
Part trim(const Part& p) {
    const std::size_t n = p.states.size();
    std::vector<char> fwd(n, 0), bwd(n, 0);
    std::deque<StateId> todo;
    for (StateId q : p.initial) {
        fwd[static_cast<std::size_t>(q)] = 1;
        todo.push_back(q);
    }
    while (!todo.empty()) {
        StateId q = todo.front();
        todo.pop_front();
        for (const auto& t : p.transitions)
            if (t.src == q && !fwd[static_cast<std::size_t>(t.dst)]) {
                fwd[static_cast<std::size_t>(t.dst)] = 1;
                todo.push_back(t.dst);
            }
    }
    for (StateId q : p.final) {
        bwd[static_cast<std::size_t>(q)] = 1;
        todo.push_back(q);
    }
    while (!todo.empty()) {
        StateId q = todo.front();
        todo.pop_front();
        for (const auto& t : p.transitions)
            if (t.dst == q && !bwd[static_cast<std::size_t>(t.src)]) {
                bwd[static_cast<std::size_t>(t.src)] = 1;
                todo.push_back(t.src);
            }
    }
    Part out;
    out.name = p.name;
    out.level = p.level;
    out.depth = p.depth;
    std::vector<StateId> id(n, -1);
    for (std::size_t q = 0; q < n; ++q)
        if (fwd[q] && bwd[q]) id[q] = out.add_state(p.states[q]);
    // An anchored part with no run still keeps its entry and exit states.
    auto keep = [&](StateId q) {
        if (id[static_cast<std::size_t>(q)] < 0) id[static_cast<std::size_t>(q)] = out.add_state(p.states[static_cast<std::size_t>(q)]);
        return id[static_cast<std::size_t>(q)];
    };
    for (StateId q : p.initial) out.initial.push_back(keep(q));
    for (StateId q : p.final) out.final.push_back(keep(q));
    for (const auto& t : p.transitions) {
        if (!(fwd[static_cast<std::size_t>(t.src)] && bwd[static_cast<std::size_t>(t.src)])) continue;
        if (!(fwd[static_cast<std::size_t>(t.dst)] && bwd[static_cast<std::size_t>(t.dst)])) continue;
        out.transitions.push_back({id[static_cast<std::size_t>(t.src)], t.letter, t.weight, t.dir, id[static_cast<std::size_t>(t.dst)]});
    }
    return out;
}

/// A compiled subformula: anchored root over the current tracks, plus its ambiguity degree
/// (0: bounded number of root runs, 1: linearly many).
struct Frag {
    Nwa nest;
    int degree = 0;
};

class Compiler {
public:
    Compiler(const std::vector<std::string>& alphabet, const std::vector<std::string>& weights, Mode mode)
        : alphabet_(alphabet), weights_(weights), mode_(mode) {}

    Frag compile(const Wfo& Phi, std::vector<std::string>& vars) {
        using K = WfoNode::Kind;
        const int d = static_cast<int>(vars.size());
        switch (Phi->kind) {
        case K::Zero: return constant(d, std::nullopt, true);
        case K::One: return constant(d, Weight::one(), false);
        case K::Const: return constant(d, Weight::constant(Phi->weight), false);
        case K::Sum: return sum(compile(Phi->left, vars), compile(Phi->right, vars), d);
        case K::Cond:
            return mode_ == Mode::OneWay ? cond_one_way(Phi->guard, compile(Phi->left, vars), compile(Phi->right, vars), vars)
                                         : cond(Phi->guard, compile(Phi->left, vars), compile(Phi->right, vars), vars);
        case K::Prod:
            if (mode_ == Mode::OneWay) throw TranslateError("binary product is outside lrWFO");
            return product(compile(Phi->left, vars), compile(Phi->right, vars), d);
        case K::SumVar:
        case K::ProdLR:
        case K::ProdRL: {
            if (Phi->kind == K::ProdRL && mode_ == Mode::OneWay)
                throw TranslateError("right-to-left product is outside lrWFO");
            vars.push_back(Phi->var);
            Frag body = compile(Phi->left, vars);
            vars.pop_back();
            return binder(Phi->kind, std::move(body), d);
        }
        }
        throw TranslateError("unknown formula node");
    }

private:
    Nwa fresh() const {
        Nwa A;
        A.alphabet = alphabet_;
        A.weights = weights_;
        return A;
    }

    std::vector<Letter> letters(int d) const { return letters_of_depth(alphabet_, d); }

    static Frag finish(Nwa A, Part p, int degree) {
        A.set_root(A.add_part(trim(p)));
        return {std::move(A), degree};
    }

    /// Copies the root states and transitions of `src` into `p` (names prefixed); callees are
    /// imported into `into`. Returns the state mapping.
    static std::vector<StateId> embed(Nwa& into, Part& p, const Nwa& src, const std::string& prefix) {
        const Part& r = src.root_part();
        std::vector<StateId> map;
        for (const auto& s : r.states) map.push_back(p.add_state(prefix + s));
        std::map<PartId, PartId> imported;
        for (const auto& t : r.transitions) {
            Weight w = t.weight;
            if (w.is_call()) {
                auto it = imported.find(w.child);
                if (it == imported.end()) it = imported.emplace(w.child, into.import_part(src, w.child)).first;
                w.child = it->second;
            }
            p.transitions.push_back({map[static_cast<std::size_t>(t.src)], t.letter, w, t.dir, map[static_cast<std::size_t>(t.dst)]});
        }
        return map;
    }

    static Part blank(const std::string& name, int d) {
        Part p;
        p.name = name;
        p.depth = d;
        return p;
    }

    Frag constant(int d, std::optional<Weight> w, bool zero) {
        Part p = blank(zero ? "zero" : "const", d);
        const StateId in = p.add_state("in"), s = p.add_state("s"), out = p.add_state("out");
        p.initial = {in};
        p.final = {out};
        if (!zero) {
            p.transitions.push_back({in, Letter::left_marker(), *w, Dir::Right, s});
            for (const auto& l : letters(d)) p.transitions.push_back({s, l, Weight::one(), Dir::Right, s});
            p.transitions.push_back({s, Letter::right_marker(), Weight::one(), Dir::Left, out});
        }
        return finish(fresh(), std::move(p), 0);
    }

    Frag sum(const Frag& a, const Frag& b, int d) {
        Nwa A = fresh();
        Part p = blank("sum", d);
        auto ma = embed(A, p, a.nest, "l.");
        auto mb = embed(A, p, b.nest, "r.");
        for (StateId q : a.nest.root_part().initial) p.initial.push_back(ma[static_cast<std::size_t>(q)]);
        for (StateId q : b.nest.root_part().initial) p.initial.push_back(mb[static_cast<std::size_t>(q)]);
        for (StateId q : a.nest.root_part().final) p.final.push_back(ma[static_cast<std::size_t>(q)]);
        for (StateId q : b.nest.root_part().final) p.final.push_back(mb[static_cast<std::size_t>(q)]);
        return finish(std::move(A), std::move(p), std::max(a.degree, b.degree));
    }

    /// Copies of the left-marker entry moves of `f` (already embedded via `map`) from state `from`.
    static void entries(Part& p, StateId from, const Nwa& f, const std::vector<StateId>& map, std::size_t first_transition) {
        const Part& r = f.root_part();
        for (std::size_t i = 0; i < r.transitions.size(); ++i) {
            const auto& t = r.transitions[i];
            if (!r.is_initial(t.src)) continue;
            const Transition copy = p.transitions[first_transition + i];
            p.transitions.push_back({from, copy.letter, copy.weight, copy.dir, map[static_cast<std::size_t>(t.dst)]});
        }
    }

    /// Track names for the guard automaton; shadowed entries get unreachable names.
    static std::vector<std::string> guard_vars(const std::vector<std::string>& vars) {
        std::vector<std::string> out = vars;
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t j = i + 1; j < out.size(); ++j)
                if (vars[i] == vars[j]) out[i] = "#shadowed" + std::to_string(i);
        return out;
    }

    Frag cond(const Fo& guard, const Frag& yes, const Frag& no, const std::vector<std::string>& vars) {
        const int d = static_cast<int>(vars.size());
        const Dfa D = fo_to_dfa(guard, guard_vars(vars), alphabet_);
        Nwa A = fresh();
        Part p = blank("cond", d);
        const StateId in = p.add_state("in");
        std::vector<StateId> scan;
        for (int q = 0; q < D.size(); ++q) scan.push_back(p.add_state("c" + std::to_string(q)));
        const StateId rewind_yes = p.add_state("ryes"), rewind_no = p.add_state("rno");
        p.initial = {in};
        p.transitions.push_back({in, Letter::left_marker(), Weight::one(), Dir::Right, scan[static_cast<std::size_t>(D.start)]});
        for (int q = 0; q < D.size(); ++q) {
            for (std::size_t li = 0; li < D.letters.size(); ++li)
                p.transitions.push_back({scan[static_cast<std::size_t>(q)], D.letters[li], Weight::one(), Dir::Right,
                                         scan[static_cast<std::size_t>(D.next[static_cast<std::size_t>(q)][li])]});
            p.transitions.push_back({scan[static_cast<std::size_t>(q)], Letter::right_marker(), Weight::one(), Dir::Left,
                                     D.accepting[static_cast<std::size_t>(q)] ? rewind_yes : rewind_no});
        }
        for (const auto& l : letters(d)) {
            p.transitions.push_back({rewind_yes, l, Weight::one(), Dir::Left, rewind_yes});
            p.transitions.push_back({rewind_no, l, Weight::one(), Dir::Left, rewind_no});
        }
        const std::size_t first_yes = p.transitions.size();
        auto my = embed(A, p, yes.nest, "t.");
        const std::size_t first_no = p.transitions.size();
        auto mn = embed(A, p, no.nest, "e.");
        entries(p, rewind_yes, yes.nest, my, first_yes);
        entries(p, rewind_no, no.nest, mn, first_no);
        for (StateId q : yes.nest.root_part().final) p.final.push_back(my[static_cast<std::size_t>(q)]);
        for (StateId q : no.nest.root_part().final) p.final.push_back(mn[static_cast<std::size_t>(q)]);
        return finish(std::move(A), std::move(p), std::max(yes.degree, no.degree));
    }

    /// One-way conditional: the guard automaton runs alongside the chosen branch.
    Frag cond_one_way(const Fo& guard, const Frag& yes, const Frag& no, const std::vector<std::string>& vars) {
        const int d = static_cast<int>(vars.size());
        const Dfa D = fo_to_dfa(guard, guard_vars(vars), alphabet_);
        Nwa A = fresh();
        Part p = blank("cond", d);
        const StateId in = p.add_state("in"), out = p.add_state("out");
        p.initial = {in};
        p.final = {out};
        const Frag* branch[2] = {&yes, &no};
        std::map<PartId, PartId> imported[2];
        auto callee = [&](int b, Weight w) {
            if (!w.is_call()) return w;
            auto& memo = imported[b];
            auto it = memo.find(w.child);
            if (it == memo.end()) it = memo.emplace(w.child, A.import_part(branch[b]->nest, w.child)).first;
            w.child = it->second;
            return w;
        };
        std::map<std::tuple<int, int, StateId>, StateId> id;
        std::deque<std::tuple<int, int, StateId>> todo;
        auto get = [&](int b, int q, StateId s) {
            auto key = std::make_tuple(b, q, s);
            auto [it, fresh_state] = id.try_emplace(key, -1);
            if (fresh_state) {
                it->second = p.add_state((b == 0 ? "t" : "e") + std::to_string(q) + "." +
                                         branch[b]->nest.root_part().states[static_cast<std::size_t>(s)]);
                todo.push_back(key);
            }
            return it->second;
        };
        for (int b = 0; b < 2; ++b) {
            const Part& r = branch[b]->nest.root_part();
            for (const auto& t : r.transitions)
                if (r.is_initial(t.src)) p.transitions.push_back({in, t.letter, callee(b, t.weight), Dir::Right, get(b, D.start, t.dst)});
        }
        while (!todo.empty()) {
            auto [b, q, s] = todo.front();
            todo.pop_front();
            const StateId from = id.at({b, q, s});
            const Part& r = branch[b]->nest.root_part();
            for (const auto& t : r.transitions) {
                if (t.src != s) continue;
                if (t.letter.kind == LetterKind::RightMarker) {
                    if (!r.is_final(t.dst)) throw TranslateError("one-way branch leaves the right marker");
                    if (D.accepting[static_cast<std::size_t>(q)] == (b == 0))
                        p.transitions.push_back({from, t.letter, callee(b, t.weight), t.dir, out});
                    continue;
                }
                if (t.letter.is_marker() || t.dir != Dir::Right) throw TranslateError("branch is not one-way");
                const int nq = D.next[static_cast<std::size_t>(q)][static_cast<std::size_t>(D.letter_id(t.letter))];
                p.transitions.push_back({from, t.letter, callee(b, t.weight), Dir::Right, get(b, nq, t.dst)});
            }
        }
        return finish(std::move(A), std::move(p), std::max(yes.degree, no.degree));
    }

    /// Unambiguous root with the same semantics: the empty word is handled by a marker-only copy,
    /// longer words by a call at the first position to `f` reading one extra, ignored track.
    Frag wrap(const Frag& f, int d) {
        Nwa A = fresh();
        Part p = blank("wrap", d);
        auto m = embed(A, p, f.nest, "e.");
        std::erase_if(p.transitions, [](const Transition& t) { return !t.letter.is_marker(); });
        for (StateId q : f.nest.root_part().initial) p.initial.push_back(m[static_cast<std::size_t>(q)]);
        for (StateId q : f.nest.root_part().final) p.final.push_back(m[static_cast<std::size_t>(q)]);

        Nwa lifted = f.nest;
        lifted.set_root(insert_track(lifted, lifted.root(), static_cast<std::size_t>(d)));
        const PartId child = A.import(lifted);
        const StateId in = p.add_state("in"), first = p.add_state("first"), rest = p.add_state("rest"),
                      out = p.add_state("out");
        p.initial.push_back(in);
        p.final.push_back(out);
        p.transitions.push_back({in, Letter::left_marker(), Weight::one(), Dir::Right, first});
        for (const auto& l : letters(d)) {
            p.transitions.push_back({first, l, Weight::call(child), Dir::Right, rest});
            p.transitions.push_back({rest, l, Weight::one(), Dir::Right, rest});
        }
        p.transitions.push_back({rest, Letter::right_marker(), Weight::one(), Dir::Left, out});
        return finish(std::move(A), std::move(p), 0);
    }

    Frag product(Frag a, Frag b, int d) {
        if (a.degree + b.degree >= 2) {
            if (a.degree >= 1) a = wrap(a, d);
            if (b.degree >= 1) b = wrap(b, d);
        }
        Nwa A = fresh();
        Part p = blank("prod", d);
        auto ma = embed(A, p, a.nest, "l.");
        const std::size_t first_b = p.transitions.size();
        auto mb = embed(A, p, b.nest, "r.");
        const StateId rewind = p.add_state("rewind");
        const Part& ra = a.nest.root_part();
        std::set<StateId> a_final;
        for (StateId q : ra.final) a_final.insert(ma[static_cast<std::size_t>(q)]);
        for (std::size_t i = 0; i < first_b; ++i)
            if (a_final.count(p.transitions[i].dst)) p.transitions[i].dst = rewind;
        for (const auto& l : letters(d)) p.transitions.push_back({rewind, l, Weight::one(), Dir::Left, rewind});
        entries(p, rewind, b.nest, mb, first_b);
        for (StateId q : ra.initial) p.initial.push_back(ma[static_cast<std::size_t>(q)]);
        for (StateId q : b.nest.root_part().final) p.final.push_back(mb[static_cast<std::size_t>(q)]);
        return finish(std::move(A), std::move(p), a.degree + b.degree);
    }

    Frag binder(WfoNode::Kind kind, Frag body, int d) {
        using K = WfoNode::Kind;
        Nwa A = fresh();
        const PartId child = A.import(body.nest);
        Part p = blank(kind == K::SumVar ? "sum_var" : kind == K::ProdLR ? "prod_lr" : "prod_rl", d);
        const StateId in = p.add_state("in"), s = p.add_state("s"), out = p.add_state("out");
        p.initial = {in};
        p.final = {out};
        p.transitions.push_back({in, Letter::left_marker(), Weight::one(), Dir::Right, s});
        const auto ls = letters(d);
        if (kind == K::SumVar) {
            const StateId t = p.add_state("t");
            for (const auto& l : ls) {
                p.transitions.push_back({s, l, Weight::one(), Dir::Right, s});
                p.transitions.push_back({s, l, Weight::call(child), Dir::Right, t});
                p.transitions.push_back({t, l, Weight::one(), Dir::Right, t});
            }
            p.transitions.push_back({t, Letter::right_marker(), Weight::one(), Dir::Left, out});
            return finish(std::move(A), std::move(p), 1);
        }
        if (kind == K::ProdLR) {
            for (const auto& l : ls) p.transitions.push_back({s, l, Weight::call(child), Dir::Right, s});
            p.transitions.push_back({s, Letter::right_marker(), Weight::one(), Dir::Left, out});
            return finish(std::move(A), std::move(p), 0);
        }
        // Scan to the right marker, call right to left, then scan out again.
        const StateId back = p.add_state("m"), again = p.add_state("t");
        for (const auto& l : ls) {
            p.transitions.push_back({s, l, Weight::one(), Dir::Right, s});
            p.transitions.push_back({back, l, Weight::call(child), Dir::Left, back});
            p.transitions.push_back({again, l, Weight::one(), Dir::Right, again});
        }
        p.transitions.push_back({s, Letter::right_marker(), Weight::one(), Dir::Left, back});
        p.transitions.push_back({back, Letter::left_marker(), Weight::one(), Dir::Right, again});
        p.transitions.push_back({again, Letter::right_marker(), Weight::one(), Dir::Left, out});
        return finish(std::move(A), std::move(p), 0);
    }

    const std::vector<std::string>& alphabet_;
    const std::vector<std::string>& weights_;
    Mode mode_;
};

} // namespace

Nwa wfo_to_sweeping(const Wfo& Phi, const std::vector<std::string>& alphabet, const std::vector<std::string>& weights,
                    Mode mode) {
    if (auto fv = free_vars(Phi); !fv.empty()) throw TranslateError("formula has free variable '" + *fv.begin() + "'");
    Compiler c(alphabet, weights, mode);
    std::vector<std::string> vars;
    Frag f = c.compile(Phi, vars);
    Nwa out = assign_levels(f.nest);
    out.part(out.root()).name = "root";
    return out;
}

} // namespace wfo
