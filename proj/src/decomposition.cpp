#include "wfokit/translate.hpp"

namespace wfo {

namespace {

MultisetSeries step_weight(const Transition& t) {
    if (t.weight.kind == Weight::Kind::Const) return MultisetSeries::singleton({t.weight.symbol});
    return MultisetSeries::unit();
}

using SeriesMatrix = std::vector<std::vector<MultisetSeries>>;

// sweep[a][b]: one-way runs over the whole word in direction `dir`, entering the first letter
// in state a and leaving the last one in state b. For the empty word this is the identity.
SeriesMatrix one_way_sweeps(const Part& p, const Word& u, Dir dir) {
    const std::size_t n = p.states.size();
    SeriesMatrix out(n, std::vector<MultisetSeries>(n));
    for (std::size_t a = 0; a < n; ++a) {
        std::vector<MultisetSeries> cur(n);
        cur[a] = MultisetSeries::unit();
        for (std::size_t k = 0; k < u.size(); ++k) {
            const Letter& l = dir == Dir::Right ? u[k] : u[u.size() - 1 - k];
            std::vector<MultisetSeries> nxt(n);
            for (const Transition& t : p.transitions) {
                if (t.dir != dir || t.letter != l) continue;
                const auto& from = cur[static_cast<std::size_t>(t.src)];
                if (from.is_empty()) continue;
                auto& to = nxt[static_cast<std::size_t>(t.dst)];
                to = ms_union(to, ms_product(from, step_weight(t)));
            }
            cur = std::move(nxt);
        }
        out[a] = std::move(cur);
    }
    return out;
}

} // namespace

DecompositionCheck sweep_decomposition_check(const Nwa& A, StateId p, StateId q, const Word& w) {
    const Part& part = A.root_part();
    if (part.has_calls() || part.depth != 0) throw TranslateError("decomposition check needs a level-0 part over plain letters");
    if (!sweep_phases(part)) throw TranslateError("decomposition check needs a sweeping automaton");
    const auto n = static_cast<StateId>(part.states.size());
    if (p < 0 || p >= n || q < 0 || q >= n) throw TranslateError("state out of range");
    for (const Letter& l : w) {
        if (l.is_marker() || !l.marks.empty()) throw TranslateError("word must be plain: " + format_word(w));
    }

    DecompositionCheck out;
    const Word framed = frame(w);
    const int last = static_cast<int>(framed.size()) - 1;

    // lhs: simple runs from (p, left marker) whose final move is a right-marker move into q.
    Part pq = part;
    pq.initial = {p};
    pq.final = {q};
    for_each_simple_run(pq, framed, [&](const FlatRun& run) {
        if (run.start_position != 0 || run.steps.empty()) return true;
        const RunStep& end = run.steps.back();
        const Transition& t = pq.transitions[static_cast<std::size_t>(end.transition)];
        if (end.position != last || t.letter.kind != LetterKind::RightMarker) return true;
        MultisetSeries s = MultisetSeries::unit();
        for (const RunStep& st : run.steps) s = ms_product(s, step_weight(pq.transitions[static_cast<std::size_t>(st.transition)]));
        out.lhs = ms_union(out.lhs, s);
        return true;
    });

    // rhs: chains of marker transitions with one-way sweeps in between, at most |Q| return sweeps.
    const SeriesMatrix right = one_way_sweeps(part, w, Dir::Right);
    const SeriesMatrix left = one_way_sweeps(part, w, Dir::Left);
    auto marker_moves = [&](LetterKind kind) {
        std::vector<const Transition*> v;
        for (const Transition& t : part.transitions) {
            if (t.letter.kind == kind) v.push_back(&t);
        }
        return v;
    };
    const auto lefts = marker_moves(LetterKind::LeftMarker);
    const auto rights = marker_moves(LetterKind::RightMarker);

    // at_left[s]: weight of chain prefixes standing on the left marker in state s, about to move.
    std::vector<MultisetSeries> at_left(static_cast<std::size_t>(n));
    at_left[static_cast<std::size_t>(p)] = MultisetSeries::unit();
    for (StateId round = 0; round <= n; ++round) {
        std::vector<MultisetSeries> after_right(static_cast<std::size_t>(n));
        for (const Transition* t : lefts) {
            const auto& pre = at_left[static_cast<std::size_t>(t->src)];
            if (pre.is_empty()) continue;
            const MultisetSeries entered = ms_product(pre, step_weight(*t));
            for (StateId b = 0; b < n; ++b) {
                const auto& sweep = right[static_cast<std::size_t>(t->dst)][static_cast<std::size_t>(b)];
                if (sweep.is_empty()) continue;
                after_right[static_cast<std::size_t>(b)] = ms_union(after_right[static_cast<std::size_t>(b)], ms_product(entered, sweep));
            }
        }
        std::vector<MultisetSeries> next_left(static_cast<std::size_t>(n));
        for (const Transition* t : rights) {
            const auto& pre = after_right[static_cast<std::size_t>(t->src)];
            if (pre.is_empty()) continue;
            const MultisetSeries turned = ms_product(pre, step_weight(*t));
            if (t->dst == q) out.rhs = ms_union(out.rhs, turned);
            for (StateId b = 0; b < n; ++b) {
                const auto& sweep = left[static_cast<std::size_t>(t->dst)][static_cast<std::size_t>(b)];
                if (sweep.is_empty()) continue;
                next_left[static_cast<std::size_t>(b)] = ms_union(next_left[static_cast<std::size_t>(b)], ms_product(turned, sweep));
            }
        }
        at_left = std::move(next_left);
    }

    out.equal = out.lhs == out.rhs;
    return out;
}

} // namespace wfo
