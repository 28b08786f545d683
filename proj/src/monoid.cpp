#include "wfokit/monoid.hpp"

#include <bit>
#include <cstdlib>
#include <deque>
#include <set>
#include <sstream>

namespace wfo {

// ---------------------------------------------------------------- relations

Relation::Relation(int n) : n_(n), words_((static_cast<std::size_t>(n) + 63) / 64), bits_(static_cast<std::size_t>(n) * words_, 0) {}

Relation Relation::identity(int n) {
    Relation r(n);
    for (int i = 0; i < n; ++i) r.set(i, i);
    return r;
}

bool Relation::test(int i, int j) const { return (row(i)[j / 64] >> (j % 64)) & 1U; }

void Relation::set(int i, int j) { row(i)[j / 64] |= std::uint64_t{1} << (j % 64); }

bool Relation::empty() const {
    for (auto w : bits_)
        if (w) return false;
    return true;
}

std::vector<std::pair<int, int>> Relation::pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (test(i, j)) out.emplace_back(i, j);
    return out;
}

Relation Relation::then(const Relation& other) const {
    if (n_ != other.n_) throw MonoidError("relation size mismatch");
    Relation out(n_);
    for (int i = 0; i < n_; ++i) {
        std::uint64_t* dst = out.row(i);
        const std::uint64_t* src = row(i);
        for (std::size_t w = 0; w < words_; ++w) {
            std::uint64_t bits = src[w];
            while (bits) {
                int j = static_cast<int>(w * 64) + std::countr_zero(bits);
                bits &= bits - 1;
                const std::uint64_t* r = other.row(j);
                for (std::size_t k = 0; k < words_; ++k) dst[k] |= r[k];
            }
        }
    }
    return out;
}

Relation Relation::star() const {
    Relation out = *this | identity(n_);
    for (int k = 0; k < n_; ++k) {
        const std::uint64_t* rk = out.row(k);
        for (int i = 0; i < n_; ++i) {
            if (!out.test(i, k)) continue;
            std::uint64_t* ri = out.row(i);
            for (std::size_t w = 0; w < words_; ++w) ri[w] |= rk[w];
        }
    }
    return out;
}

Relation Relation::operator|(const Relation& other) const {
    if (n_ != other.n_) throw MonoidError("relation size mismatch");
    Relation out = *this;
    for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] |= other.bits_[i];
    return out;
}

// ---------------------------------------------------------------- behaviours

Behaviour Behaviour::unit(int n) {
    Relation id = Relation::identity(n);
    return {id, id, id, id, true};
}

Behaviour letter_behaviour(const Part& p, const Letter& a) {
    const int n = static_cast<int>(p.states.size());
    Behaviour b{Relation(n), Relation(n), Relation(n), Relation(n), false};
    for (const auto& t : p.transitions) {
        if (t.letter != a) continue;
        if (t.dir == Dir::Left) {
            b.ll.set(t.src, t.dst);
            b.rl.set(t.src, t.dst);
        } else {
            b.lr.set(t.src, t.dst);
            b.rr.set(t.src, t.dst);
        }
    }
    return b;
}

Behaviour behaviour_compose(const Behaviour& u, const Behaviour& v) {
    if (u.is_unit) return v;
    if (v.is_unit) return u;
    if (u.ll.size() != v.ll.size()) throw MonoidError("behaviours over different state sets");
    // Zig-zag across the border between u and v.
    const Relation left_loop = v.ll.then(u.rr).star();   // bounce into v, come back through u
    const Relation right_loop = u.rr.then(v.ll).star();  // bounce into u, come back through v
    Behaviour out;
    out.lr = u.lr.then(left_loop).then(v.lr);
    out.rl = v.rl.then(u.rr.then(v.ll).star()).then(u.rl);
    out.ll = u.ll | u.lr.then(left_loop).then(v.ll).then(u.rl);
    out.rr = v.rr | v.rl.then(right_loop).then(u.rr).then(v.lr);
    return out;
}

Behaviour behaviour_of(const Part& p, const Word& w) {
    Behaviour acc = Behaviour::unit(static_cast<int>(p.states.size()));
    for (const auto& a : w) acc = behaviour_compose(acc, letter_behaviour(p, a));
    return acc;
}

Behaviour behaviour_bruteforce(const Part& p, const Word& w) {
    const int n = static_cast<int>(p.states.size());
    if (w.empty()) return Behaviour::unit(n);
    const int len = static_cast<int>(w.size());
    Behaviour b{Relation(n), Relation(n), Relation(n), Relation(n), false};
    auto explore = [&](int start_pos, StateId p0, Relation& exit_left, Relation& exit_right) {
        std::set<std::pair<int, StateId>> seen{{start_pos, p0}};
        std::deque<std::pair<int, StateId>> todo{{start_pos, p0}};
        while (!todo.empty()) {
            auto [pos, q] = todo.front();
            todo.pop_front();
            for (const auto& t : p.transitions) {
                if (t.src != q || t.letter != w[static_cast<std::size_t>(pos)]) continue;
                int np = t.dir == Dir::Right ? pos + 1 : pos - 1;
                if (np < 0) exit_left.set(p0, t.dst);
                else if (np >= len) exit_right.set(p0, t.dst);
                else if (seen.insert({np, t.dst}).second) todo.emplace_back(np, t.dst);
            }
        }
    };
    for (StateId q = 0; q < n; ++q) {
        explore(0, q, b.ll, b.lr);
        explore(len - 1, q, b.rl, b.rr);
    }
    return b;
}

std::string format_behaviour(const Behaviour& b, const Part& p) {
    if (b.is_unit) return "unit";
    std::ostringstream out;
    auto rel = [&](const char* name, const Relation& r) {
        out << name << "={";
        bool first = true;
        for (auto [i, j] : r.pairs()) {
            out << (first ? "" : ",") << '(' << p.states[static_cast<std::size_t>(i)] << ','
                << p.states[static_cast<std::size_t>(j)] << ')';
            first = false;
        }
        out << '}';
    };
    rel("ll", b.ll);
    out << ' ';
    rel("lr", b.lr);
    out << ' ';
    rel("rl", b.rl);
    out << ' ';
    rel("rr", b.rr);
    return out.str();
}

// ---------------------------------------------------------------- monoid

std::size_t monoid_budget() {
    if (const char* env = std::getenv("WFOKIT_BUDGET")) {
        try {
            auto v = std::stoull(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return 100000;
}

int TransitionMonoid::find(const Behaviour& b) const {
    auto it = index_.find(b);
    return it == index_.end() ? -1 : it->second;
}

TransitionMonoid build_transition_monoid(const Part& p, const std::vector<std::string>& alphabet, std::size_t budget) {
    TransitionMonoid m;
    const int n = static_cast<int>(p.states.size());
    m.generators = letters_of_depth(alphabet, p.depth);
    std::vector<Behaviour> gen;
    for (const auto& a : m.generators) gen.push_back(letter_behaviour(p, a));

    auto intern = [&](Behaviour b, Word w) -> int {
        auto [it, inserted] = m.index_.try_emplace(std::move(b), static_cast<int>(m.elements.size()));
        if (inserted) {
            m.elements.push_back(it->first);
            m.witness.push_back(std::move(w));
            m.right_action.emplace_back(gen.size(), -1);
        }
        return it->second;
    };
    intern(Behaviour::unit(n), {});
    // Breadth-first, so witnesses are shortest.
    for (std::size_t i = 0; i < m.elements.size(); ++i) {
        for (std::size_t g = 0; g < gen.size(); ++g) {
            Behaviour prod = behaviour_compose(m.elements[i], gen[g]);
            Word w = m.witness[i];
            w.push_back(m.generators[g]);
            int id = intern(std::move(prod), std::move(w));
            m.right_action[i][g] = id;
            if (m.elements.size() > budget) {
                m.budget_exceeded = true;
                return m;
            }
        }
    }
    for (std::size_t g = 0; g < gen.size(); ++g) m.generator_element.push_back(m.right_action[0][g]);
    return m;
}

PartAperiodicity part_aperiodicity(const Part& p, const std::vector<std::string>& alphabet, std::size_t budget) {
    PartAperiodicity r;
    r.name = p.name;
    TransitionMonoid m = build_transition_monoid(p, alphabet, budget);
    r.elements = m.elements.size();
    if (m.budget_exceeded) {
        r.budget_exceeded = true;
        return r;
    }
    r.aperiodic = true;
    r.index = 1;
    for (std::size_t i = 0; i < m.elements.size(); ++i) {
        const Behaviour& x = m.elements[i];
        // Walk x, x^2, x^3, ... until a power repeats.
        std::map<Behaviour, int> seen;
        Behaviour pw = x;
        int k = 1;
        while (true) {
            auto [it, inserted] = seen.try_emplace(pw, k);
            if (!inserted) {
                const int start = it->second;
                const int period = k - start;
                if (period == 1) {
                    r.index = std::max(r.index, start);
                } else if (r.aperiodic) {
                    r.aperiodic = false;
                    r.witness = m.witness[i];
                    r.period = period;
                }
                break;
            }
            pw = behaviour_compose(pw, x);
            ++k;
        }
    }
    if (!r.aperiodic) r.index = 0;
    return r;
}

AperiodicityReport is_aperiodic(const Nwa& A, std::size_t budget) {
    AperiodicityReport rep;
    for (PartId id : A.reachable()) {
        PartAperiodicity pa = part_aperiodicity(A.part(id), A.alphabet, budget);
        pa.part = id;
        if (pa.budget_exceeded) {
            rep.budget_exceeded = true;
            rep.aperiodic = false;
        } else if (!pa.aperiodic) {
            rep.aperiodic = false;
        } else {
            rep.index = std::max(rep.index, pa.index);
        }
        rep.parts.push_back(std::move(pa));
    }
    if (!rep.aperiodic) rep.index = 0;
    return rep;
}

std::string format_report(const AperiodicityReport& r) {
    std::ostringstream out;
    out << "aperiodic: " << (r.aperiodic ? "true" : "false");
    if (r.aperiodic) out << ", index: " << r.index;
    if (r.budget_exceeded) out << ", budget exceeded";
    out << '\n';
    for (const auto& p : r.parts) {
        out << "  part " << p.name << ": elements " << p.elements;
        if (p.budget_exceeded) {
            out << ", budget exceeded\n";
            continue;
        }
        out << ", aperiodic " << (p.aperiodic ? "true" : "false");
        if (p.aperiodic) out << ", index " << p.index;
        else out << ", witness '" << format_word(*p.witness) << "' period " << p.period;
        out << '\n';
    }
    return out.str();
}

} // namespace wfo
