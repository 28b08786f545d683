#include "wfokit/ambiguity.hpp"

#include "wfokit/runs.hpp"

#include <cstdlib>
#include <functional>
#include <sstream>

namespace wfo {

std::optional<Count> count_accepting_runs(const Part& p, const Word& u) {
    const Word w = frame(u);
    const int N = static_cast<int>(w.size());
    const int Q = static_cast<int>(p.states.size());
    const int V = N * Q;
    auto node = [Q](int pos, StateId q) { return pos * Q + q; };

    // succ[v]: target node, or -1 for an accepting exit, -2 for a rejecting exit.
    std::vector<std::vector<int>> succ(static_cast<std::size_t>(V));
    std::vector<std::vector<int>> pred(static_cast<std::size_t>(V));
    for (int pos = 0; pos < N; ++pos) {
        for (const auto& t : p.transitions) {
            if (t.letter != w[static_cast<std::size_t>(pos)]) continue;
            const int np = t.dir == Dir::Right ? pos + 1 : pos - 1;
            const int v = node(pos, t.src);
            if (np < 0 || np >= N) {
                succ[static_cast<std::size_t>(v)].push_back(p.is_final(t.dst) ? -1 : -2);
            } else {
                const int x = node(np, t.dst);
                succ[static_cast<std::size_t>(v)].push_back(x);
                pred[static_cast<std::size_t>(x)].push_back(v);
            }
        }
    }

    std::vector<char> reach(static_cast<std::size_t>(V), 0), coreach(static_cast<std::size_t>(V), 0);
    std::vector<int> stack;
    for (StateId q : p.initial)
        for (int pos = 0; pos < N; ++pos) {
            reach[static_cast<std::size_t>(node(pos, q))] = 1;
            stack.push_back(node(pos, q));
        }
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int x : succ[static_cast<std::size_t>(v)])
            if (x >= 0 && !reach[static_cast<std::size_t>(x)]) {
                reach[static_cast<std::size_t>(x)] = 1;
                stack.push_back(x);
            }
    }
    for (int v = 0; v < V; ++v) {
        bool acc = p.is_final(v % Q);
        for (int x : succ[static_cast<std::size_t>(v)]) acc = acc || x == -1;
        if (acc) {
            coreach[static_cast<std::size_t>(v)] = 1;
            stack.push_back(v);
        }
    }
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int x : pred[static_cast<std::size_t>(v)])
            if (!coreach[static_cast<std::size_t>(x)]) {
                coreach[static_cast<std::size_t>(x)] = 1;
                stack.push_back(x);
            }
    }
    auto useful = [&](int v) { return reach[static_cast<std::size_t>(v)] && coreach[static_cast<std::size_t>(v)]; };

    // Path counting by memoized DFS; meeting a grey node means a useful cycle.
    std::vector<int> colour(static_cast<std::size_t>(V), 0);
    std::vector<Count> paths(static_cast<std::size_t>(V));
    bool cycle = false;
    std::function<void(int)> dfs = [&](int v) {
        colour[static_cast<std::size_t>(v)] = 1;
        Count total = p.is_final(v % Q) ? 1 : 0;
        for (int x : succ[static_cast<std::size_t>(v)]) {
            if (x == -1) {
                total += 1;
                continue;
            }
            if (x < 0 || !useful(x)) continue;
            if (colour[static_cast<std::size_t>(x)] == 1) {
                cycle = true;
                continue;
            }
            if (colour[static_cast<std::size_t>(x)] == 0) dfs(x);
            total += paths[static_cast<std::size_t>(x)];
        }
        paths[static_cast<std::size_t>(v)] = total;
        colour[static_cast<std::size_t>(v)] = 2;
    };
    Count total = 0;
    for (StateId q : p.initial)
        for (int pos = 0; pos < N; ++pos) {
            const int v = node(pos, q);
            if (!useful(v)) continue;
            if (colour[static_cast<std::size_t>(v)] == 0) dfs(v);
            total += paths[static_cast<std::size_t>(v)];
        }
    if (cycle) return std::nullopt;
    return total;
}

std::optional<Count> count_accepting_runs(const Nwa& A, const Word& u) { return count_accepting_runs(A.root_part(), u); }

std::size_t ambiguity_budget() {
    if (const char* env = std::getenv("WFOKIT_BUDGET")) {
        try {
            auto v = std::stoull(env);
            if (v > 0) return static_cast<std::size_t>(v) * 20;
        } catch (const std::exception&) {
        }
    }
    return 2000000;
}

namespace {

/// Calls `visit` on every word of length n with one mark per track, for `depth` tracks.
void for_each_marked_word(const std::vector<std::string>& alphabet, int n, int depth,
                          const std::function<void(const Word&)>& visit) {
    if (depth > 0 && n == 0) return;
    for (const Word& base : all_words(alphabet, static_cast<std::size_t>(n))) {
        std::vector<int> pos(static_cast<std::size_t>(depth), 1);
        while (true) {
            Word w = base;
            for (int i = 0; i < n; ++i) {
                auto& l = w[static_cast<std::size_t>(i)];
                for (int t = 0; t < depth; ++t) l.marks.push_back(pos[static_cast<std::size_t>(t)] == i + 1);
            }
            visit(w);
            int t = depth - 1;
            while (t >= 0 && pos[static_cast<std::size_t>(t)] == n) pos[static_cast<std::size_t>(t--)] = 1;
            if (t < 0) break;
            ++pos[static_cast<std::size_t>(t)];
        }
    }
}

double word_count(std::size_t letters, int n, int depth) {
    if (depth > 0 && n == 0) return 0;
    double c = 1;
    for (int i = 0; i < n; ++i) c *= static_cast<double>(letters);
    for (int i = 0; i < depth; ++i) c *= n;
    return c;
}

} // namespace

PartAmbiguity classify_part(const Part& p, const std::vector<std::string>& alphabet, int max_len, std::size_t budget) {
    PartAmbiguity r;
    r.name = p.name;
    double total = 0;
    for (int n = 0; n <= max_len; ++n) total += word_count(alphabet.size(), n, p.depth);
    if (total > static_cast<double>(budget)) {
        r.verdict = Verdict::Inconclusive;
        r.note = "exhaustion over " + std::to_string(static_cast<long long>(total)) + " words exceeds the budget";
        return r;
    }
    r.max_runs.assign(static_cast<std::size_t>(max_len + 1), std::nullopt);
    r.sampled.assign(static_cast<std::size_t>(max_len + 1), false);
    bool infinite = false;
    for (int n = 0; n <= max_len && !infinite; ++n) {
        Count best = 0;
        Word best_word;
        bool any = false, any_best = false;
        for_each_marked_word(alphabet, n, p.depth, [&](const Word& w) {
            if (infinite) return;
            any = true;
            auto c = count_accepting_runs(p, w);
            if (!c) {
                infinite = true;
                r.witness = w;
                return;
            }
            if (*c > best || !any_best) {
                best = *c;
                best_word = w;
                any_best = true;
            }
        });
        if (infinite) break;
        if (any) {
            r.sampled[static_cast<std::size_t>(n)] = true;
            r.max_runs[static_cast<std::size_t>(n)] = best;
            if (best > 0) r.witness = best_word;
        }
    }
    if (infinite) {
        r.verdict = Verdict::Infinite;
        r.note = "accepting run through a cycle";
        return r;
    }
    bool at_most_one = true;
    for (std::size_t n = 0; n < r.max_runs.size(); ++n)
        if (r.sampled[n] && *r.max_runs[n] > 1) at_most_one = false;
    if (at_most_one) {
        r.verdict = Verdict::Unambiguous;
        return r;
    }
    std::vector<Count> s;
    for (int n = max_len / 2; n <= max_len; ++n)
        if (r.sampled[static_cast<std::size_t>(n)]) s.push_back(*r.max_runs[static_cast<std::size_t>(n)]);
    for (int d = 0; static_cast<int>(s.size()) >= 2; ++d) {
        bool constant = true;
        for (std::size_t i = 1; i < s.size(); ++i) constant = constant && s[i] == s[0];
        if (constant) {
            r.verdict = Verdict::Polynomial;
            r.degree = d;
            return r;
        }
        std::vector<Count> next;
        for (std::size_t i = 1; i < s.size(); ++i) next.push_back(s[i] - s[i - 1]);
        s = std::move(next);
    }
    r.verdict = Verdict::Inconclusive;
    r.note = "no stable finite difference within the horizon";
    return r;
}

AmbiguityReport classify_ambiguity(const Nwa& A, int max_len, std::size_t budget) {
    AmbiguityReport rep;
    rep.horizon = max_len;
    auto rank = [](Verdict v, int d) {
        switch (v) {
        case Verdict::Unambiguous: return -1;
        case Verdict::Polynomial: return d;
        case Verdict::Inconclusive: return 1000;
        case Verdict::Infinite: return 1001;
        }
        return 0;
    };
    for (PartId id : A.reachable()) {
        PartAmbiguity pa = classify_part(A.part(id), A.alphabet, max_len, budget);
        pa.part = id;
        if (rank(pa.verdict, pa.degree) > rank(rep.verdict, rep.degree)) {
            rep.verdict = pa.verdict;
            rep.degree = pa.degree;
        }
        rep.parts.push_back(std::move(pa));
    }
    return rep;
}

std::string verdict_name(Verdict v, int degree) {
    switch (v) {
    case Verdict::Unambiguous: return "unambiguous";
    case Verdict::Polynomial: return degree == 1 ? "linear" : "polynomial(" + std::to_string(degree) + ")";
    case Verdict::Infinite: return "infinite";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

bool linear_or_better(Verdict v, int degree) {
    return v == Verdict::Unambiguous || (v == Verdict::Polynomial && degree <= 1);
}

std::string format_report(const AmbiguityReport& r) {
    std::ostringstream out;
    out << verdict_name(r.verdict, r.degree) << '\n';
    for (const auto& p : r.parts) {
        out << "  part " << p.name << ": " << verdict_name(p.verdict, p.degree) << ", m(n)=[";
        for (std::size_t n = 0; n < p.max_runs.size(); ++n) {
            if (n) out << ' ';
            if (!p.sampled[n]) out << '-';
            else out << *p.max_runs[n];
        }
        out << "]";
        if (!p.witness.empty()) out << ", witness '" << format_word(p.witness) << "'";
        if (!p.note.empty()) out << ", " << p.note;
        out << '\n';
    }
    return out.str();
}

} // namespace wfo
