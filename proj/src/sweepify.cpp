#include "wfokit/translate.hpp"

#include "wfokit/ambiguity.hpp"
#include "wfokit/monoid.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace wfo {

int default_depth_cap(const Part& p) {
    const int q = static_cast<int>(p.states.size());
    return std::max(0, 2 * ((q + 1) / 2) - 2);
}

ComponentSpec top_component(const Part& base, PartId id) {
    if (!is_anchored(base)) throw TranslateError("part '" + base.name + "' is not anchored");
    ComponentSpec s;
    s.base_part = id;
    s.depth = base.depth;
    s.start = Side::Left;
    s.exit = Side::Right;
    for (std::size_t i = 0; i < base.transitions.size(); ++i) {
        const auto& t = base.transitions[i];
        if (base.is_initial(t.src)) s.start_set.push_back(static_cast<int>(i));
        if (base.is_final(t.dst)) s.exit_set.push_back(static_cast<int>(i));
    }
    return s;
}

std::string format_spec(const ComponentSpec& s, const Part& base) {
    std::ostringstream out;
    auto wall = [&](const Wall& w, const char* marker) {
        if (w.is_marker()) out << marker;
        else out << "#" << w.track + 1;
    };
    auto set = [&](const std::vector<int>& ts) {
        out << '{';
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const auto& t = base.transitions[static_cast<std::size_t>(ts[i])];
            out << (i ? " " : "") << '(' << base.states[static_cast<std::size_t>(t.src)] << ',' << format_letter(t.letter)
                << ',' << (t.dir == Dir::Left ? 'L' : 'R') << ',' << base.states[static_cast<std::size_t>(t.dst)] << ')';
        }
        out << '}';
    };
    out << "[";
    wall(s.left, "|-");
    out << ", ";
    wall(s.right, "-|");
    out << "] start " << (s.start == Side::Left ? "L" : "R") << ' ';
    set(s.start_set);
    out << " exit " << (s.exit == Side::Left ? "L" : "R") << ' ';
    set(s.exit_set);
    return out.str();
}

namespace {

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

Letter place(const Letter& l, int depth, const std::vector<int>& ones) {
    if (l.is_marker()) return l;
    Letter x = l;
    x.marks.resize(static_cast<std::size_t>(depth), 0);
    for (int o : ones) x.marks[static_cast<std::size_t>(o)] = 1;
    return x;
}

/// Whether `t` may be taken on wall `side`; exits are flagged. Inward moves are allowed,
/// outward moves only when they are exits.
enum class WallMove { Drop, Inward, Exit };

WallMove wall_move(const ComponentSpec& s, Side side, const Transition& t, int index) {
    if (s.exit == side && contains(s.exit_set, index)) return WallMove::Exit;
    const Dir inward = side == Side::Left ? Dir::Right : Dir::Left;
    return t.dir == inward ? WallMove::Inward : WallMove::Drop;
}

std::size_t component_budget(std::size_t requested) {
    if (requested) return requested;
    if (const char* env = std::getenv("WFOKIT_BUDGET")) {
        try {
            auto v = std::stoull(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return 20000;
}

class SweepBuilder {
public:
    SweepBuilder(const Nwa& base, const SwOptions& opt) : base_(base), opt_(opt), budget_(component_budget(opt.budget)) {
        out_.alphabet = base.alphabet;
        out_.weights = base.weights;
    }

    PartId component(const ComponentSpec& s);
    PartId swept(PartId base_part) {
        if (auto it = swept_.find(base_part); it != swept_.end()) return it->second;
        PartId id = component(top_component(base_.part(base_part), base_part));
        swept_[base_part] = id;
        return id;
    }

    SwResult finish(PartId root);

private:
    int cap(const Part& p) const { return opt_.depth_cap >= 0 ? opt_.depth_cap : default_depth_cap(p); }

    int intern(const Behaviour& b) {
        auto [it, fresh] = bh_ids_.try_emplace(b, static_cast<int>(bhs_.size()));
        if (fresh) bhs_.push_back(b);
        return it->second;
    }

    PartId lift_part(PartId id, int index, int count);
    /// Swept callee of a base call made from a component of the given depth.
    PartId callee(PartId base_caller, PartId base_child, int depth) {
        const PartId sw = swept(base_child);
        const int extra = depth - base_.part(base_caller).depth;
        return extra == 0 ? sw : lift_part(sw, base_.part(base_caller).depth, extra);
    }

    void prune();
    Nwa snapshot(int level) const;

    const Nwa& base_;
    SwOptions opt_;
    std::size_t budget_;
    Nwa out_;
    ProvenanceMap prov_;
    std::map<ComponentSpec, PartId> made_;
    std::map<PartId, ComponentSpec> spec_of_;
    std::map<PartId, PartId> swept_;
    std::map<std::tuple<PartId, int, int>, PartId> lifted_;
    std::map<Behaviour, int> bh_ids_;
    std::vector<Behaviour> bhs_;
};

PartId SweepBuilder::lift_part(PartId id, int index, int count) {
    const auto key = std::make_tuple(id, index, count);
    if (auto it = lifted_.find(key); it != lifted_.end()) return it->second;
    Part src = out_.part(id);
    Part dst = src;
    dst.depth = src.depth + count;
    dst.transitions.clear();
    std::vector<Origin> origins;
    for (std::size_t i = 0; i < src.transitions.size(); ++i) {
        const auto& t = src.transitions[i];
        Weight w = t.weight;
        if (w.is_call()) w.child = lift_part(w.child, index, count);
        const Origin o = prov_.at({id, static_cast<int>(i)});
        if (t.letter.is_marker()) {
            dst.transitions.push_back({t.src, t.letter, w, t.dir, t.dst});
            origins.push_back(o);
            continue;
        }
        for (int bits = 0; bits < (1 << count); ++bits) {
            Letter l = t.letter;
            for (int k = 0; k < count; ++k)
                l.marks.insert(l.marks.begin() + index + k, static_cast<std::uint8_t>((bits >> k) & 1));
            dst.transitions.push_back({t.src, l, w, t.dir, t.dst});
            origins.push_back(o);
        }
    }
    const PartId nid = out_.add_part(std::move(dst));
    for (std::size_t i = 0; i < origins.size(); ++i) prov_[{nid, static_cast<int>(i)}] = origins[i];
    lifted_[key] = nid;
    return nid;
}

PartId SweepBuilder::component(const ComponentSpec& s) {
    if (auto it = made_.find(s); it != made_.end()) return it->second;
    if (made_.size() >= budget_) throw TranslateError("component budget of " + std::to_string(budget_) + " exceeded");
    const Part& B = base_.part(s.base_part);
    const int D = s.depth;
    const int n = static_cast<int>(B.states.size());
    const bool deeper = s.level < cap(B);

    std::vector<Letter> symbols;
    for (const auto& t : B.transitions)
        if (!t.letter.is_marker()) symbols.push_back(t.letter);
    std::sort(symbols.begin(), symbols.end());
    symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());

    auto on = [&](const Letter& l) {
        std::vector<int> ids;
        for (std::size_t i = 0; i < B.transitions.size(); ++i)
            if (B.transitions[i].letter == l) ids.push_back(static_cast<int>(i));
        return ids;
    };
    auto moves = [&](const Letter& l, Dir d) {
        Relation r(n);
        for (int i : on(l)) {
            const auto& t = B.transitions[static_cast<std::size_t>(i)];
            if (t.dir == d) r.set(t.src, t.dst);
        }
        return r;
    };
    std::map<Letter, Behaviour> letter_cache;
    auto letter_bh = [&](const Letter& l) -> const Behaviour& {
        auto it = letter_cache.find(l);
        if (it == letter_cache.end()) it = letter_cache.emplace(l, letter_behaviour(B, l)).first;
        return it->second;
    };
    // Wall letter as seen from inside the window: inward moves, plus exits pointing outward.
    auto wall_bh = [&](Side side, const Letter& l) {
        Behaviour b{Relation(n), Relation(n), Relation(n), Relation(n), false};
        for (int i : on(l)) {
            const auto& t = B.transitions[static_cast<std::size_t>(i)];
            const WallMove m = wall_move(s, side, t, i);
            if (m == WallMove::Drop) continue;
            const Dir d = m == WallMove::Inward ? t.dir : (side == Side::Left ? Dir::Left : Dir::Right);
            if (d == Dir::Left) {
                b.ll.set(t.src, t.dst);
                b.rl.set(t.src, t.dst);
            } else {
                b.lr.set(t.src, t.dst);
                b.rr.set(t.src, t.dst);
            }
        }
        return b;
    };
    auto weight = [&](const Weight& w) { return w.is_call() ? Weight::call(callee(s.base_part, w.child, D)) : w; };
    auto row_nonempty = [&](const Relation& r, int i) {
        for (int j = 0; j < n; ++j)
            if (r.test(i, j)) return true;
        return false;
    };

    Part p;
    p.name = B.name;
    p.depth = D;
    const StateId in = p.add_state("@in"), out_right = p.add_state("@out>"), out_left = p.add_state("@out<");
    p.initial = {in};
    p.final = {out_right, out_left};
    std::vector<Origin> origins;
    auto add = [&](StateId src, Letter l, Weight w, Dir d, StateId dst, Origin o) {
        p.transitions.push_back({src, std::move(l), std::move(w), d, dst});
        origins.push_back(o);
    };
    auto copy = [](int i) { return Origin{Origin::Kind::Copy, i}; };
    const Origin call_origin{Origin::Kind::Call, -1};

    // Phase states: (base state, phase, behaviour of the part of the window already crossed).
    std::map<std::tuple<StateId, Side, int>, StateId> ids;
    std::deque<std::tuple<StateId, Side, int>> todo;
    auto get = [&](StateId q, Side phase, const Behaviour& b) {
        const int bid = opt_.annotated ? intern(b) : -1;
        const auto key = std::make_tuple(q, phase, intern(b));
        auto [it, fresh] = ids.try_emplace(key, -1);
        if (fresh) {
            std::string name = B.states[static_cast<std::size_t>(q)] + (phase == Side::Right ? ">" : "<");
            if (bid >= 0) name += std::to_string(bid);
            it->second = p.add_state(name);
            todo.push_back(key);
        }
        return it->second;
    };
    auto child = [&](Wall left, Wall right, Side start, int first, Side exit, std::vector<int> exits) {
        ComponentSpec c;
        c.base_part = s.base_part;
        c.depth = D + 1;
        c.left = std::move(left);
        c.right = std::move(right);
        c.start = start;
        c.start_set = {first};
        c.exit = exit;
        c.exit_set = std::move(exits);
        c.level = s.level + 1;
        return Weight::call(component(c));
    };
    const Wall fresh_wall{D, {D}};
    auto extended = [&](const Wall& w) {
        Wall x = w;
        x.track = D;
        x.ones.push_back(D);
        return x;
    };
    auto exits_on = [&](const Letter& l) {
        std::vector<int> ids_on;
        for (int i : s.exit_set)
            if (B.transitions[static_cast<std::size_t>(i)].letter == l) ids_on.push_back(i);
        return ids_on;
    };

    // Start moves.
    for (int i : s.start_set) {
        const auto& t = B.transitions[static_cast<std::size_t>(i)];
        if (s.start == Side::Left) {
            if (t.dir != Dir::Right) throw TranslateError("start move does not enter the window");
            add(in, place(t.letter, D, s.left.ones), weight(t.weight), Dir::Right,
                get(t.dst, Side::Right, wall_bh(Side::Left, t.letter)), copy(i));
        } else {
            if (t.dir != Dir::Left) throw TranslateError("start move does not enter the window");
            add(in, place(t.letter, D, s.right.ones), weight(t.weight), Dir::Left,
                get(t.dst, Side::Left, wall_bh(Side::Right, t.letter)), copy(i));
        }
    }

    while (!todo.empty()) {
        const auto key = todo.front();
        todo.pop_front();
        const auto [q, phase, bid] = key;
        const StateId st = ids.at(key);
        const Behaviour crossed = bhs_[static_cast<std::size_t>(bid)];

        if (phase == Side::Right) {
            const Behaviour& P = crossed;  // window prefix up to the previous position
            for (const auto& l : symbols) {
                const Letter inner = place(l, D, {});
                const Behaviour next = behaviour_compose(P, letter_bh(l));
                const Relation bounce = moves(l, Dir::Left);
                const Relation back = P.rr.then(bounce.then(P.rr).star());
                const Relation leave = P.rr.then(bounce).star().then(P.rl);
                for (int i : on(l)) {
                    const auto& t = B.transitions[static_cast<std::size_t>(i)];
                    if (t.src != q) continue;
                    if (t.dir == Dir::Right) {
                        add(st, inner, weight(t.weight), Dir::Right, get(t.dst, Side::Right, next), copy(i));
                        continue;
                    }
                    if (!deeper) continue;
                    for (int k : on(l)) {
                        const auto& t2 = B.transitions[static_cast<std::size_t>(k)];
                        if (t2.dir != Dir::Right || !back.test(t.dst, t2.src)) continue;
                        add(st, inner, child(s.left, fresh_wall, Side::Right, i, Side::Right, {k}), Dir::Right,
                            get(t2.dst, Side::Right, next), call_origin);
                    }
                    if (s.exit == Side::Left && row_nonempty(leave, t.dst))
                        add(st, inner, child(s.left, fresh_wall, Side::Right, i, Side::Left, s.exit_set), Dir::Right,
                            out_right, call_origin);
                }
            }
            // Right wall.
            if (s.right.is_marker()) {
                for (int i : on(Letter::right_marker())) {
                    const auto& t = B.transitions[static_cast<std::size_t>(i)];
                    if (t.src != q) continue;
                    if (wall_move(s, Side::Right, t, i) == WallMove::Exit)
                        add(st, t.letter, weight(t.weight), Dir::Left, out_left, copy(i));
                    else
                        add(st, t.letter, weight(t.weight), Dir::Left,
                            get(t.dst, Side::Left, wall_bh(Side::Right, t.letter)), copy(i));
                }
            } else {
                for (const auto& l : symbols) {
                    const Letter at = place(l, D, s.right.ones);
                    const Relation bounce = moves(l, Dir::Left);
                    const Relation back = P.rr.then(bounce.then(P.rr).star());
                    const Relation leave = P.rr.then(bounce).star().then(P.rl);
                    for (int i : on(l)) {
                        const auto& t = B.transitions[static_cast<std::size_t>(i)];
                        if (t.src != q) continue;
                        const WallMove m = wall_move(s, Side::Right, t, i);
                        if (m == WallMove::Exit) {
                            add(st, at, weight(t.weight), Dir::Right, out_right, copy(i));
                            continue;
                        }
                        if (m != WallMove::Inward || !deeper) continue;
                        bool licensed = false;
                        if (s.exit == Side::Right) {
                            for (int k : exits_on(l))
                                licensed = licensed || back.test(t.dst, B.transitions[static_cast<std::size_t>(k)].src);
                        } else {
                            licensed = row_nonempty(leave, t.dst);
                        }
                        if (licensed)
                            add(st, at, child(s.left, extended(s.right), Side::Right, i, s.exit, s.exit_set), Dir::Right,
                                out_right, call_origin);
                    }
                }
            }
            continue;
        }

        const Behaviour& S = crossed;  // window suffix from the next position on
        for (const auto& l : symbols) {
            const Letter inner = place(l, D, {});
            const Behaviour next = behaviour_compose(letter_bh(l), S);
            const Relation bounce = moves(l, Dir::Right);
            const Relation back = S.ll.then(bounce.then(S.ll).star());
            const Relation leave = S.ll.then(bounce).star().then(S.lr);
            for (int i : on(l)) {
                const auto& t = B.transitions[static_cast<std::size_t>(i)];
                if (t.src != q) continue;
                if (t.dir == Dir::Left) {
                    add(st, inner, weight(t.weight), Dir::Left, get(t.dst, Side::Left, next), copy(i));
                    continue;
                }
                if (!deeper) continue;
                for (int k : on(l)) {
                    const auto& t2 = B.transitions[static_cast<std::size_t>(k)];
                    if (t2.dir != Dir::Left || !back.test(t.dst, t2.src)) continue;
                    add(st, inner, child(fresh_wall, s.right, Side::Left, i, Side::Left, {k}), Dir::Left,
                        get(t2.dst, Side::Left, next), call_origin);
                }
                if (s.exit == Side::Right && row_nonempty(leave, t.dst))
                    add(st, inner, child(fresh_wall, s.right, Side::Left, i, Side::Right, s.exit_set), Dir::Left, out_left,
                        call_origin);
            }
        }
        // Left wall.
        if (s.left.is_marker()) {
            for (int i : on(Letter::left_marker())) {
                const auto& t = B.transitions[static_cast<std::size_t>(i)];
                if (t.src != q) continue;
                if (wall_move(s, Side::Left, t, i) == WallMove::Exit)
                    add(st, t.letter, weight(t.weight), Dir::Right, out_right, copy(i));
                else
                    add(st, t.letter, weight(t.weight), Dir::Right, get(t.dst, Side::Right, wall_bh(Side::Left, t.letter)),
                        copy(i));
            }
        } else {
            for (const auto& l : symbols) {
                const Letter at = place(l, D, s.left.ones);
                const Relation bounce = moves(l, Dir::Right);
                const Relation back = S.ll.then(bounce.then(S.ll).star());
                const Relation leave = S.ll.then(bounce).star().then(S.lr);
                for (int i : on(l)) {
                    const auto& t = B.transitions[static_cast<std::size_t>(i)];
                    if (t.src != q) continue;
                    const WallMove m = wall_move(s, Side::Left, t, i);
                    if (m == WallMove::Exit) {
                        add(st, at, weight(t.weight), Dir::Left, out_left, copy(i));
                        continue;
                    }
                    if (m != WallMove::Inward || !deeper) continue;
                    bool licensed = false;
                    if (s.exit == Side::Left) {
                        for (int k : exits_on(l))
                            licensed = licensed || back.test(t.dst, B.transitions[static_cast<std::size_t>(k)].src);
                    } else {
                        licensed = row_nonempty(leave, t.dst);
                    }
                    if (licensed)
                        add(st, at, child(extended(s.left), s.right, Side::Left, i, s.exit, s.exit_set), Dir::Left, out_left,
                            call_origin);
                }
            }
        }
    }

    if (!opt_.annotated) {
        // Erase annotations: merge phase states that share base state and phase.
        Part plain;
        plain.name = p.name;
        plain.depth = p.depth;
        std::map<std::string, StateId> by_name;
        std::vector<StateId> map;
        for (const auto& name : p.states) {
            std::string key = name;
            if (name[0] != '@') key = name.substr(0, name.find_last_of("<>") + 1);
            auto [it, fresh] = by_name.try_emplace(key, -1);
            if (fresh) it->second = plain.add_state(key);
            map.push_back(it->second);
        }
        for (StateId q : p.initial) plain.initial.push_back(map[static_cast<std::size_t>(q)]);
        for (StateId q : p.final) plain.final.push_back(map[static_cast<std::size_t>(q)]);
        std::set<Transition> seen;
        std::vector<Origin> kept;
        for (std::size_t i = 0; i < p.transitions.size(); ++i) {
            Transition t = p.transitions[i];
            t.src = map[static_cast<std::size_t>(t.src)];
            t.dst = map[static_cast<std::size_t>(t.dst)];
            if (!seen.insert(t).second) continue;
            plain.transitions.push_back(t);
            kept.push_back(origins[i]);
        }
        p = std::move(plain);
        origins = std::move(kept);
    }

    const PartId id = out_.add_part(std::move(p));
    for (std::size_t i = 0; i < origins.size(); ++i) prov_[{id, static_cast<int>(i)}] = origins[i];
    made_[s] = id;
    spec_of_[id] = s;
    return id;
}

/// Keeps the transitions whose callees can accept, then the useful states.
void SweepBuilder::prune() {
    const std::size_t count = out_.part_count();
    std::vector<char> alive(count, 0);
    auto usable = [&](const Transition& t) { return !t.weight.is_call() || alive[static_cast<std::size_t>(t.weight.child)]; };
    auto useful_states = [&](const Part& p) {
        const std::size_t n = p.states.size();
        std::vector<char> fwd(n, 0), bwd(n, 0);
        std::deque<StateId> todo(p.initial.begin(), p.initial.end());
        for (StateId q : p.initial) fwd[static_cast<std::size_t>(q)] = 1;
        while (!todo.empty()) {
            StateId q = todo.front();
            todo.pop_front();
            for (const auto& t : p.transitions)
                if (t.src == q && usable(t) && !fwd[static_cast<std::size_t>(t.dst)]) {
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
                if (t.dst == q && usable(t) && !bwd[static_cast<std::size_t>(t.src)]) {
                    bwd[static_cast<std::size_t>(t.src)] = 1;
                    todo.push_back(t.src);
                }
        }
        std::vector<char> keep(n, 0);
        for (std::size_t q = 0; q < n; ++q) keep[q] = fwd[q] && bwd[q];
        return keep;
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t id = 0; id < count; ++id) {
            if (alive[id]) continue;
            const Part& p = out_.part(static_cast<PartId>(id));
            const auto keep = useful_states(p);
            bool any = false;
            for (StateId q : p.initial) any = any || keep[static_cast<std::size_t>(q)];
            if (any) {
                alive[id] = 1;
                changed = true;
            }
        }
    }
    for (std::size_t id = 0; id < count; ++id) {
        Part& p = out_.part(static_cast<PartId>(id));
        const auto keep = useful_states(p);
        Part q;
        q.name = p.name;
        q.level = p.level;
        q.depth = p.depth;
        std::vector<StateId> map(p.states.size(), -1);
        for (std::size_t s = 0; s < p.states.size(); ++s)
            if (keep[s] || p.is_initial(static_cast<StateId>(s)) || p.is_final(static_cast<StateId>(s)))
                map[s] = q.add_state(p.states[s]);
        for (StateId s : p.initial) q.initial.push_back(map[static_cast<std::size_t>(s)]);
        for (StateId s : p.final) q.final.push_back(map[static_cast<std::size_t>(s)]);
        std::vector<Origin> origins;
        for (std::size_t i = 0; i < p.transitions.size(); ++i) {
            const auto& t = p.transitions[i];
            if (!usable(t) || !keep[static_cast<std::size_t>(t.src)] || !keep[static_cast<std::size_t>(t.dst)]) continue;
            q.transitions.push_back({map[static_cast<std::size_t>(t.src)], t.letter, t.weight, t.dir, map[static_cast<std::size_t>(t.dst)]});
            origins.push_back(prov_.at({static_cast<PartId>(id), static_cast<int>(i)}));
        }
        for (std::size_t i = 0; i < p.transitions.size(); ++i) prov_.erase({static_cast<PartId>(id), static_cast<int>(i)});
        for (std::size_t i = 0; i < origins.size(); ++i) prov_[{static_cast<PartId>(id), static_cast<int>(i)}] = origins[i];
        p = std::move(q);
    }
}

Nwa SweepBuilder::snapshot(int level) const {
    Nwa A = out_;
    for (const auto& [id, spec] : spec_of_) {
        if (spec.level < level) continue;
        const PartId two_way = A.import(build_component(base_, spec));
        A.part(id) = A.part(two_way);
    }
    return assign_levels(A);
}

SwResult SweepBuilder::finish(PartId root) {
    prune();
    out_.set_root(root);
    SwResult r;
    r.base = base_;
    r.components = made_.size();
    if (opt_.keep_iterations) {
        int top = 0;
        for (const auto& [id, spec] : spec_of_) top = std::max(top, spec.level);
        for (int i = 0; i <= top + 1; ++i) r.iterations.push_back(snapshot(i));
    }
    std::map<PartId, PartId> origin;
    r.nest = assign_levels(out_, &origin);
    for (const auto& [nid, old] : origin) {
        const std::size_t m = r.nest.part(nid).transitions.size();
        for (std::size_t i = 0; i < m; ++i) r.provenance[{nid, static_cast<int>(i)}] = prov_.at({old, static_cast<int>(i)});
    }
    return r;
}

} // namespace

Nwa build_component(const Nwa& base, const ComponentSpec& s) {
    const Part& B = base.part(s.base_part);
    const int D = s.depth;
    const int extra = D - B.depth;
    if (extra < 0) throw TranslateError("component depth below the base depth");
    Nwa A = base;
    std::map<PartId, PartId> callees;
    auto weight = [&](const Weight& w) {
        if (!w.is_call()) return w;
        auto it = callees.find(w.child);
        if (it == callees.end()) {
            PartId id = w.child;
            for (int k = 0; k < extra; ++k) id = insert_track(A, id, static_cast<std::size_t>(B.depth));
            it = callees.emplace(w.child, id).first;
        }
        return Weight::call(it->second);
    };
    Part p;
    p.name = B.name;
    p.depth = D;
    const StateId in = p.add_state("@in");
    std::vector<StateId> st;
    for (const auto& q : B.states) st.push_back(p.add_state(q));
    const StateId out = p.add_state("@out");
    p.initial = {in};
    p.final = {out};
    for (int i : s.start_set) {
        const auto& t = B.transitions[static_cast<std::size_t>(i)];
        const Wall& w = s.start == Side::Left ? s.left : s.right;
        p.transitions.push_back({in, place(t.letter, D, w.ones), weight(t.weight), t.dir, st[static_cast<std::size_t>(t.dst)]});
    }
    for (std::size_t i = 0; i < B.transitions.size(); ++i) {
        const auto& t = B.transitions[i];
        const int idx = static_cast<int>(i);
        auto emit = [&](Letter l, WallMove m) {
            if (m == WallMove::Drop) return;
            p.transitions.push_back({st[static_cast<std::size_t>(t.src)], std::move(l), weight(t.weight), t.dir,
                                     m == WallMove::Exit ? out : st[static_cast<std::size_t>(t.dst)]});
        };
        if (t.letter.kind == LetterKind::LeftMarker) {
            if (s.left.is_marker()) emit(t.letter, wall_move(s, Side::Left, t, idx));
            continue;
        }
        if (t.letter.kind == LetterKind::RightMarker) {
            if (s.right.is_marker()) emit(t.letter, wall_move(s, Side::Right, t, idx));
            continue;
        }
        emit(place(t.letter, D, {}), WallMove::Inward);
        if (!s.left.is_marker()) emit(place(t.letter, D, s.left.ones), wall_move(s, Side::Left, t, idx));
        if (!s.right.is_marker()) emit(place(t.letter, D, s.right.ones), wall_move(s, Side::Right, t, idx));
    }
    A.set_root(A.add_part(std::move(p)));
    return assign_levels(A);
}

SwResult sweepify_component(const Nwa& base, const ComponentSpec& spec, const SwOptions& options) {
    SweepBuilder b(base, options);
    const PartId root = b.component(spec);
    return b.finish(root);
}

SwResult sw_transform(const Nwa& A, const SwOptions& options) {
    if (options.ambiguity_horizon > 0) {
        const auto rep = classify_ambiguity(A, options.ambiguity_horizon);
        if (rep.verdict == Verdict::Infinite)
            throw TranslateError("input is not polynomially ambiguous (accepting run through a cycle)");
    }
    const Nwa base = anchor(A);
    SweepBuilder b(base, options);
    const PartId root = b.swept(base.root());
    return b.finish(root);
}

} // namespace wfo
