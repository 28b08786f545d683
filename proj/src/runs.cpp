#include "wfokit/runs.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace wfo {

bool RunTree::same_label(const RunTree& o) const {
    return part == o.part && transition == o.transition && src == o.src && dst == o.dst && letter == o.letter &&
           weight == o.weight && dir == o.dir && position == o.position;
}

Word frame(const Word& u) {
    Word out;
    out.reserve(u.size() + 2);
    out.push_back(Letter::left_marker());
    out.insert(out.end(), u.begin(), u.end());
    out.push_back(Letter::right_marker());
    return out;
}

void check_marked_word(const Word& u, int depth) {
    std::vector<int> ones(static_cast<std::size_t>(std::max(depth, 0)), 0);
    for (const auto& l : u) {
        if (l.is_marker()) throw NwaError("input words must not contain end markers");
        if (static_cast<int>(l.depth()) != depth)
            throw NwaError("letter " + format_letter(l) + " has " + std::to_string(l.depth()) + " marking tracks, expected " +
                           std::to_string(depth));
        for (std::size_t i = 0; i < l.marks.size(); ++i) ones[i] += l.marks[i];
    }
    for (std::size_t i = 0; i < ones.size(); ++i) {
        if (ones[i] != 1)
            throw NwaError("marking track " + std::to_string(i + 1) + " must hold exactly one 1, found " +
                           std::to_string(ones[i]));
    }
}

namespace {

std::vector<std::vector<int>> outgoing(const Part& p) {
    std::vector<std::vector<int>> out(p.states.size());
    for (std::size_t i = 0; i < p.transitions.size(); ++i)
        out[static_cast<std::size_t>(p.transitions[i].src)].push_back(static_cast<int>(i));
    return out;
}

std::string weight_label(const Weight& w) {
    switch (w.kind) {
    case Weight::Kind::One: return "one";
    case Weight::Kind::Const: return "k:" + w.symbol;
    case Weight::Kind::Call: return "call";
    }
    return "?";
}

} // namespace

void for_each_simple_run(const Part& p, const Word& framed, const std::function<bool(const FlatRun&)>& visit) {
    const int N = static_cast<int>(framed.size());
    const int Q = static_cast<int>(p.states.size());
    const auto out = outgoing(p);
    std::vector<char> on_path(static_cast<std::size_t>(N * Q), 0);
    auto cell = [&](int pos, StateId q) -> char& { return on_path[static_cast<std::size_t>(pos * Q + q)]; };
    FlatRun run;
    bool stop = false;

    std::function<void(int, StateId)> dfs = [&](int pos, StateId q) {
        if (p.is_final(q) && !visit(run)) {
            stop = true;
            return;
        }
        for (int ti : out[static_cast<std::size_t>(q)]) {
            const Transition& t = p.transitions[static_cast<std::size_t>(ti)];
            if (t.letter != framed[static_cast<std::size_t>(pos)]) continue;
            const int np = t.dir == Dir::Right ? pos + 1 : pos - 1;
            run.steps.push_back({ti, pos});
            if (np < 0 || np >= N) {
                // Leaving an unframed word: the run must stop here.
                if (p.is_final(t.dst) && !visit(run)) stop = true;
            } else if (!cell(np, t.dst)) {
                cell(np, t.dst) = 1;
                dfs(np, t.dst);
                cell(np, t.dst) = 0;
            }
            run.steps.pop_back();
            if (stop) return;
        }
    };

    for (StateId q0 : p.initial) {
        for (int pos = 0; pos < N; ++pos) {
            run = FlatRun{q0, pos, {}};
            cell(pos, q0) = 1;
            dfs(pos, q0);
            cell(pos, q0) = 0;
            if (stop) return;
        }
    }
}

MultisetSeries Evaluator::eval_part(PartId id, const Word& u) {
    auto key = std::make_pair(id, u);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const Part& p = nest_->part(id);
    check_marked_word(u, p.depth);
    const Word framed = frame(u);
    const int N = static_cast<int>(framed.size());
    const int Q = static_cast<int>(p.states.size());
    const auto out = outgoing(p);

    // Step weights depend only on (transition, position); compute them lazily.
    std::map<std::pair<int, int>, MultisetSeries> step_weight;
    auto weight_at = [&](int ti, int pos) -> const MultisetSeries& {
        auto k = std::make_pair(ti, pos);
        if (auto it = step_weight.find(k); it != step_weight.end()) return it->second;
        const Weight& w = p.transitions[static_cast<std::size_t>(ti)].weight;
        MultisetSeries s;
        switch (w.kind) {
        case Weight::Kind::One: s = MultisetSeries::unit(); break;
        case Weight::Kind::Const: s = MultisetSeries::singleton({w.symbol}); break;
        case Weight::Kind::Call: s = eval_part(w.child, mark_position(u, static_cast<std::size_t>(pos))); break;
        }
        return step_weight.emplace(k, std::move(s)).first->second;
    };

    MultisetSeries total;
    std::vector<char> on_path(static_cast<std::size_t>(N * Q), 0);
    auto cell = [&](int pos, StateId q) -> char& { return on_path[static_cast<std::size_t>(pos * Q + q)]; };
    std::function<void(int, StateId, const MultisetSeries&)> dfs = [&](int pos, StateId q, const MultisetSeries& acc) {
        if (p.is_final(q)) total = ms_union(total, acc);
        for (int ti : out[static_cast<std::size_t>(q)]) {
            const Transition& t = p.transitions[static_cast<std::size_t>(ti)];
            if (t.letter != framed[static_cast<std::size_t>(pos)]) continue;
            const int np = t.dir == Dir::Right ? pos + 1 : pos - 1;
            const bool exits = np < 0 || np >= N;
            if (!exits && cell(np, t.dst)) continue;
            MultisetSeries next = ms_product(acc, weight_at(ti, pos));
            if (next.is_empty()) continue;
            if (exits) {
                if (p.is_final(t.dst)) total = ms_union(total, next);
                continue;
            }
            cell(np, t.dst) = 1;
            dfs(np, t.dst, next);
            cell(np, t.dst) = 0;
        }
    };
    const MultisetSeries unit = MultisetSeries::unit();
    for (StateId q0 : p.initial) {
        for (int pos = 0; pos < N; ++pos) {
            cell(pos, q0) = 1;
            dfs(pos, q0, unit);
            cell(pos, q0) = 0;
        }
    }
    return memo_.emplace(std::move(key), std::move(total)).first->second;
}

std::vector<FlatRun> Evaluator::flat_runs(PartId id, const Word& u) const {
    const Part& p = nest_->part(id);
    check_marked_word(u, p.depth);
    std::vector<FlatRun> runs;
    for_each_simple_run(p, frame(u), [&](const FlatRun& r) {
        runs.push_back(r);
        return true;
    });
    return runs;
}

std::vector<RunTree> Evaluator::run_trees(PartId id, const Word& u) {
    auto key = std::make_pair(id, u);
    if (auto it = tree_memo_.find(key); it != tree_memo_.end()) return it->second;
    const Part& p = nest_->part(id);
    const Word framed = frame(u);
    std::vector<RunTree> result;
    for (const FlatRun& fr : flat_runs(id, u)) {
        // Expand calls one step at a time: partial trees times the callee's runs.
        std::vector<RunTree> partial(1);
        for (const RunStep& st : fr.steps) {
            const Transition& t = p.transitions[static_cast<std::size_t>(st.transition)];
            RunTree node;
            node.part = id;
            node.transition = st.transition;
            node.src = p.states[static_cast<std::size_t>(t.src)];
            node.dst = p.states[static_cast<std::size_t>(t.dst)];
            node.letter = framed[static_cast<std::size_t>(st.position)];
            node.weight = weight_label(t.weight);
            node.dir = t.dir;
            node.position = st.position;
            std::vector<RunTree> options;
            if (t.weight.is_call()) {
                for (const RunTree& sub : run_trees(t.weight.child, mark_position(u, static_cast<std::size_t>(st.position)))) {
                    RunTree n = node;
                    n.children = sub.children;
                    options.push_back(std::move(n));
                }
            } else {
                options.push_back(node);
            }
            std::vector<RunTree> next;
            next.reserve(partial.size() * options.size());
            for (const auto& base : partial) {
                for (const auto& opt : options) {
                    RunTree ext = base;
                    ext.children.push_back(opt);
                    next.push_back(std::move(ext));
                }
            }
            partial = std::move(next);
            if (partial.empty()) break;
        }
        for (auto& t : partial) {
            t.part = id;
            result.push_back(std::move(t));
        }
    }
    return tree_memo_.emplace(std::move(key), std::move(result)).first->second;
}

MultisetSeries nwa_eval(const Nwa& A, const Word& u) {
    Evaluator ev(A);
    return ev.eval(u);
}

std::vector<RunTree> enumerate_simple_runs(const Nwa& A, const Word& u) {
    Evaluator ev(A);
    return ev.run_trees(A.root(), u);
}

// ---------------------------------------------------------------- run-tree algebra

RunTree tree_concat(const RunTree& t1, const RunTree& t2) {
    if (!t1.same_label(t2)) throw std::invalid_argument("tree_concat: roots differ");
    RunTree out = t1;
    out.children.insert(out.children.end(), t2.children.begin(), t2.children.end());
    return out;
}

namespace {

void drop_track(RunTree& t, std::size_t track) {
    if (!t.letter.is_marker() && track < t.letter.marks.size())
        t.letter.marks.erase(t.letter.marks.begin() + static_cast<std::ptrdiff_t>(track));
    for (auto& c : t.children) drop_track(c, track);
}

} // namespace

RunTree lift(const RunTree& t, std::size_t track) {
    RunTree out = t;
    drop_track(out, track);
    out.part = -1;
    out.transition = -1;
    out.src.clear();
    out.dst.clear();
    out.letter = Letter{};
    out.weight.clear();
    out.dir = Dir::Right;
    out.position = 0;
    return out;
}

RunTree lift(const RunTree& t) {
    for (const auto& c : t.children) {
        if (!c.letter.is_marker()) {
            if (c.letter.marks.empty()) throw std::invalid_argument("lift: letters carry no marking track");
            return lift(t, c.letter.marks.size() - 1);
        }
    }
    return lift(t, 0);
}

namespace {

void flatten_into(const RunTree& node, const ProvenanceMap& prov, const Nwa& base, PartId base_part,
                  std::vector<RunTree>& out) {
    auto it = prov.find({node.part, node.transition});
    if (it == prov.end())
        throw std::invalid_argument("flatten: missing provenance for transition " + std::to_string(node.transition) +
                                    " of part " + std::to_string(node.part));
    if (it->second.kind == Origin::Kind::Call) {
        for (const auto& c : node.children) flatten_into(c, prov, base, base_part, out);
        return;
    }
    const Part& bp = base.part(base_part);
    const int bi = it->second.base_transition;
    const Transition& bt = bp.transitions.at(static_cast<std::size_t>(bi));
    RunTree n;
    n.part = base_part;
    n.transition = bi;
    n.src = bp.states[static_cast<std::size_t>(bt.src)];
    n.dst = bp.states[static_cast<std::size_t>(bt.dst)];
    n.letter = bt.letter;
    n.weight = weight_label(bt.weight);
    n.dir = bt.dir;
    n.position = node.position;
    if (bt.weight.is_call()) {
        for (const auto& c : node.children) flatten_into(c, prov, base, bt.weight.child, n.children);
    }
    out.push_back(std::move(n));
}

} // namespace

RunTree flatten(const RunTree& t, const ProvenanceMap& provenance, const Nwa& base, PartId base_part) {
    RunTree out;
    out.part = base_part;
    for (const auto& c : t.children) flatten_into(c, provenance, base, base_part, out.children);
    return out;
}

std::string format_run_tree(const RunTree& t, const std::function<std::string(const RunTree&)>& tag) {
    std::ostringstream out;
    std::function<void(const RunTree&, int)> go = [&](const RunTree& n, int indent) {
        out << std::string(static_cast<std::size_t>(indent) * 2, ' ');
        if (n.is_orphan_root()) {
            out << "•";
        } else {
            out << n.src << " -> " << n.dst << " : " << format_letter(n.letter) << " , " << n.weight << " , "
                << (n.dir == Dir::Left ? 'L' : 'R') << " @" << n.position;
        }
        if (tag) {
            std::string s = tag(n);
            if (!s.empty()) out << " [" << s << "]";
        }
        out << '\n';
        for (const auto& c : n.children) go(c, indent + 1);
    };
    go(t, 0);
    return out.str();
}

// ---------------------------------------------------------------- anchoring

bool is_anchored(const Part& p) {
    for (const auto& t : p.transitions) {
        if (p.is_initial(t.dst)) return false;
        if (p.is_initial(t.src) && t.letter.kind != LetterKind::LeftMarker) return false;
        if (p.is_final(t.src)) return false;
        if (p.is_final(t.dst) && t.letter.kind != LetterKind::RightMarker) return false;
    }
    for (StateId q : p.initial)
        if (p.is_final(q)) return false;
    return true;
}

namespace {

std::string fresh_name(const Part& p, std::string base) {
    while (std::find(p.states.begin(), p.states.end(), base) != p.states.end()) base += "'";
    return base;
}

} // namespace

Part anchor_part(const Part& p, const std::vector<std::string>& alphabet) {
    if (is_anchored(p)) return p;
    Part out = p;
    out.initial.clear();
    out.final.clear();
    const StateId init = out.add_state(fresh_name(out, "in"));
    const StateId scan_in = out.add_state(fresh_name(out, "seek"));
    const StateId scan_out = out.add_state(fresh_name(out, "drain"));
    const StateId fin = out.add_state(fresh_name(out, "out"));
    out.initial = {init};
    out.final = {fin};
    const auto letters = letters_of_depth(alphabet, p.depth);
    auto add = [&](StateId s, Letter l, Weight w, Dir d, StateId t) { out.transitions.push_back({s, std::move(l), std::move(w), d, t}); };

    add(init, Letter::left_marker(), Weight::one(), Dir::Right, scan_in);
    for (const auto& l : letters) add(scan_in, l, Weight::one(), Dir::Right, scan_in);
    add(scan_out, Letter::left_marker(), Weight::one(), Dir::Right, scan_out);  // a run may end on the left marker
    for (const auto& l : letters) add(scan_out, l, Weight::one(), Dir::Right, scan_out);
    add(scan_out, Letter::right_marker(), Weight::one(), Dir::Left, fin);

    for (const auto& t : p.transitions) {
        const bool first = p.is_initial(t.src);
        const bool last = p.is_final(t.dst);
        const StateId from = t.letter.kind == LetterKind::LeftMarker ? init : scan_in;
        if (first) add(from, t.letter, t.weight, t.dir, t.dst);
        if (last) add(t.src, t.letter, t.weight, t.dir, scan_out);
        if (first && last) add(from, t.letter, t.weight, t.dir, scan_out);
    }
    // Zero-length runs, one per framed position.
    for (StateId q : p.initial) {
        if (!p.is_final(q)) continue;
        add(init, Letter::left_marker(), Weight::one(), Dir::Right, scan_out);
        for (const auto& l : letters) add(scan_in, l, Weight::one(), Dir::Right, scan_out);
        add(scan_in, Letter::right_marker(), Weight::one(), Dir::Left, fin);
    }
    return out;
}

Nwa anchor(const Nwa& A) {
    Nwa out = A;
    for (PartId id : out.reachable()) out.part(id) = anchor_part(A.part(id), A.alphabet);
    return out;
}

} // namespace wfo
