#include "wfokit/nwa.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace wfo {

// ---------------------------------------------------------------- letters and words

std::string format_letter(const Letter& l) {
    switch (l.kind) {
    case LetterKind::LeftMarker: return "|-";
    case LetterKind::RightMarker: return "-|";
    case LetterKind::Symbol: break;
    }
    if (l.marks.empty()) return l.symbol;
    std::string out = "(" + l.symbol;
    for (auto m : l.marks) out += m ? ",1" : ",0";
    return out + ")";
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_top_level(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

} // namespace

Letter parse_letter(const std::string& raw) {
    std::string text = trim(raw);
    if (text == "|-") return Letter::left_marker();
    if (text == "-|") return Letter::right_marker();
    if (text.empty()) throw NwaError("empty letter");
    if (text.front() != '(') return Letter::plain(text);
    if (text.back() != ')') throw NwaError("unterminated letter '" + text + "'");
    auto fields = split_top_level(text.substr(1, text.size() - 2), ',');
    Letter l = Letter::plain(fields.at(0));
    for (std::size_t i = 1; i < fields.size(); ++i) {
        if (fields[i] != "0" && fields[i] != "1") throw NwaError("bad mark bit in letter '" + text + "'");
        l.marks.push_back(fields[i] == "1");
    }
    return l;
}

std::string format_word(const Word& w) {
    std::vector<std::string> parts;
    bool compact = true;
    for (const auto& l : w) {
        parts.push_back(format_letter(l));
        if (parts.back().size() != 1) compact = false;
    }
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i && !compact) out += ' ';
        out += parts[i];
    }
    return out;
}

Word plain_word(const std::vector<std::string>& symbols) {
    Word w;
    for (const auto& s : symbols) w.push_back(Letter::plain(s));
    return w;
}

std::vector<Word> all_words(const std::vector<std::string>& alphabet, std::size_t length) {
    std::vector<Word> out{Word{}};
    for (std::size_t i = 0; i < length; ++i) {
        std::vector<Word> next;
        next.reserve(out.size() * alphabet.size());
        for (const auto& w : out) {
            for (const auto& a : alphabet) {
                Word ext = w;
                ext.push_back(Letter::plain(a));
                next.push_back(std::move(ext));
            }
        }
        out = std::move(next);
    }
    return out;
}

std::vector<Letter> letters_of_depth(const std::vector<std::string>& alphabet, int depth) {
    std::vector<Letter> out;
    const std::size_t combos = std::size_t{1} << depth;
    for (const auto& a : alphabet) {
        for (std::size_t bits = 0; bits < combos; ++bits) {
            Letter l = Letter::plain(a);
            for (int i = 0; i < depth; ++i) l.marks.push_back(static_cast<std::uint8_t>((bits >> (depth - 1 - i)) & 1));
            out.push_back(std::move(l));
        }
    }
    return out;
}

Word mark_position(const Word& u, std::size_t i) {
    if (i < 1 || i > u.size()) throw NwaError("mark position " + std::to_string(i) + " outside the word");
    if (u[i - 1].is_marker()) throw NwaError("cannot mark an end marker");
    Word out = u;
    for (std::size_t j = 0; j < out.size(); ++j) {
        if (out[j].is_marker()) continue;
        out[j].marks.push_back(j + 1 == i ? 1 : 0);
    }
    return out;
}

Word unmark_last(const Word& u) {
    Word out = u;
    for (auto& l : out) {
        if (!l.is_marker() && !l.marks.empty()) l.marks.pop_back();
    }
    return out;
}

// ---------------------------------------------------------------- parts and nests

StateId Part::add_state(std::string state_name) {
    states.push_back(std::move(state_name));
    return static_cast<StateId>(states.size() - 1);
}

StateId Part::state_id(const std::string& state_name) const {
    auto it = std::find(states.begin(), states.end(), state_name);
    if (it == states.end()) throw NwaError("unknown state '" + state_name + "' in part '" + name + "'");
    return static_cast<StateId>(it - states.begin());
}

bool Part::is_initial(StateId q) const { return std::find(initial.begin(), initial.end(), q) != initial.end(); }
bool Part::is_final(StateId q) const { return std::find(final.begin(), final.end(), q) != final.end(); }

bool Part::has_calls() const {
    return std::any_of(transitions.begin(), transitions.end(), [](const Transition& t) { return t.weight.is_call(); });
}

std::vector<PartId> Part::children() const {
    std::vector<PartId> out;
    for (const auto& t : transitions) {
        if (t.weight.is_call() && std::find(out.begin(), out.end(), t.weight.child) == out.end())
            out.push_back(t.weight.child);
    }
    return out;
}

PartId Nwa::add_part(Part p) {
    parts_.push_back(std::move(p));
    return static_cast<PartId>(parts_.size() - 1);
}

PartId Nwa::import(const Nwa& other) { return import_part(other, other.root()); }

PartId Nwa::import_part(const Nwa& other, PartId id) {
    std::map<PartId, PartId> mapping;
    std::function<PartId(PartId)> copy = [&](PartId src) -> PartId {
        if (auto it = mapping.find(src); it != mapping.end()) return it->second;
        Part p = other.part(src);
        for (auto& t : p.transitions) {
            if (t.weight.is_call()) t.weight.child = copy(t.weight.child);
        }
        PartId nid = add_part(std::move(p));
        mapping[src] = nid;
        return nid;
    };
    return copy(id);
}

std::vector<PartId> Nwa::reachable() const {
    std::vector<PartId> order;
    if (parts_.empty()) return order;
    std::set<PartId> seen{root_};
    std::queue<PartId> todo;
    todo.push(root_);
    while (!todo.empty()) {
        PartId id = todo.front();
        todo.pop();
        order.push_back(id);
        for (PartId c : part(id).children()) {
            if (c < 0 || c >= static_cast<PartId>(parts_.size())) continue;
            if (seen.insert(c).second) todo.push(c);
        }
    }
    return order;
}

Nwa Nwa::compact() const {
    Nwa out;
    out.alphabet = alphabet;
    out.weights = weights;
    out.set_root(out.import(*this));
    return out;
}

// ---------------------------------------------------------------- validation

std::vector<std::string> validate(const Nwa& A) {
    std::vector<std::string> issues;
    if (A.part_count() == 0) {
        issues.push_back("empty nest: no root automaton");
        return issues;
    }
    const std::set<std::string> letters(A.alphabet.begin(), A.alphabet.end());
    const std::set<std::string> weights(A.weights.begin(), A.weights.end());
    const auto n_parts = static_cast<PartId>(A.part_count());

    for (PartId id = 0; id < n_parts; ++id) {
        const Part& p = A.part(id);
        const std::string where = "part '" + p.name + "': ";
        const auto n = static_cast<StateId>(p.states.size());
        if (p.level < 0) issues.push_back(where + "negative level");
        for (StateId q : p.initial)
            if (q < 0 || q >= n) issues.push_back(where + "initial state out of range");
        for (StateId q : p.final)
            if (q < 0 || q >= n) issues.push_back(where + "final state out of range");
        for (const auto& t : p.transitions) {
            const std::string tw = where + "transition on " + format_letter(t.letter) + ": ";
            if (t.src < 0 || t.src >= n || t.dst < 0 || t.dst >= n) issues.push_back(tw + "state out of range");
            if (t.letter.kind == LetterKind::LeftMarker && t.dir != Dir::Right)
                issues.push_back(tw + "marker direction (left marker needs a right move)");
            if (t.letter.kind == LetterKind::RightMarker && t.dir != Dir::Left)
                issues.push_back(tw + "marker direction (right marker needs a left move)");
            if (!t.letter.is_marker()) {
                if (!letters.count(t.letter.symbol)) issues.push_back(tw + "letter not in alphabet");
                if (static_cast<int>(t.letter.depth()) != p.depth)
                    issues.push_back(tw + "marking depth " + std::to_string(t.letter.depth()) + " differs from part depth " +
                                     std::to_string(p.depth));
            }
            switch (t.weight.kind) {
            case Weight::Kind::Const:
                if (!weights.count(t.weight.symbol)) issues.push_back(tw + "weight '" + t.weight.symbol + "' not declared");
                break;
            case Weight::Kind::One: break;
            case Weight::Kind::Call: {
                if (t.letter.is_marker()) issues.push_back(tw + "call on marker");
                if (t.weight.child < 0 || t.weight.child >= n_parts) {
                    issues.push_back(tw + "unknown child");
                    break;
                }
                const Part& c = A.part(t.weight.child);
                if (c.level != p.level - 1)
                    issues.push_back(tw + "level mismatch (child '" + c.name + "' has level " + std::to_string(c.level) +
                                     ", expected " + std::to_string(p.level - 1) + ")");
                if (c.depth != p.depth + 1)
                    issues.push_back(tw + "depth mismatch (child '" + c.name + "' reads depth " + std::to_string(c.depth) +
                                     ", expected " + std::to_string(p.depth + 1) + ")");
                break;
            }
            }
        }
    }

    // Acyclicity and a unique root.
    std::vector<int> colour(static_cast<std::size_t>(n_parts), 0);
    bool cyclic = false;
    std::function<void(PartId)> dfs = [&](PartId id) {
        colour[static_cast<std::size_t>(id)] = 1;
        for (PartId c : A.part(id).children()) {
            if (c < 0 || c >= n_parts) continue;
            if (colour[static_cast<std::size_t>(c)] == 1) cyclic = true;
            else if (colour[static_cast<std::size_t>(c)] == 0) dfs(c);
        }
        colour[static_cast<std::size_t>(id)] = 2;
    };
    if (A.root() >= 0 && A.root() < n_parts) dfs(A.root());
    else issues.push_back("root id out of range");
    if (cyclic) issues.push_back("call graph has a cycle");
    for (PartId id = 0; id < n_parts; ++id) {
        if (colour[static_cast<std::size_t>(id)] == 0)
            issues.push_back("part '" + A.part(id).name + "' is not a descendant of the root");
    }
    return issues;
}

// ---------------------------------------------------------------- navigation classes

namespace {

bool part_one_way(const Part& p, Dir d) {
    const LetterKind start = d == Dir::Right ? LetterKind::LeftMarker : LetterKind::RightMarker;
    const LetterKind end = d == Dir::Right ? LetterKind::RightMarker : LetterKind::LeftMarker;
    std::vector<bool> dead(p.states.size(), true);
    for (const auto& t : p.transitions) dead[static_cast<std::size_t>(t.src)] = false;
    for (const auto& t : p.transitions) {
        if (t.letter.kind == end) {
            // Reading the far marker only to stop.
            if (!dead[static_cast<std::size_t>(t.dst)]) return false;
        } else if (t.letter.kind == start || t.letter.kind == LetterKind::Symbol) {
            if (t.dir != d) return false;
        }
    }
    return true;
}

} // namespace

OneWay is_one_way(const Nwa& A) {
    bool lr = true, rl = true;
    for (PartId id : A.reachable()) {
        lr = lr && part_one_way(A.part(id), Dir::Right);
        rl = rl && part_one_way(A.part(id), Dir::Left);
    }
    if (lr) return OneWay::LeftToRight;
    if (rl) return OneWay::RightToLeft;
    return OneWay::No;
}

std::string one_way_name(OneWay w) {
    switch (w) {
    case OneWay::LeftToRight: return "left-to-right";
    case OneWay::RightToLeft: return "right-to-left";
    case OneWay::No: return "no";
    }
    return "?";
}

std::optional<std::vector<Dir>> sweep_phases(const Part& p) {
    std::vector<std::optional<Dir>> phase(p.states.size());
    auto force = [&](StateId q, Dir d) {
        auto& slot = phase[static_cast<std::size_t>(q)];
        if (slot && *slot != d) return false;
        slot = d;
        return true;
    };
    for (const auto& t : p.transitions) {
        bool ok = true;
        switch (t.letter.kind) {
        case LetterKind::Symbol: ok = force(t.src, t.dir) && force(t.dst, t.dir); break;
        case LetterKind::LeftMarker: ok = force(t.dst, Dir::Right); break;
        case LetterKind::RightMarker: ok = force(t.dst, Dir::Left); break;
        }
        if (!ok) return std::nullopt;
    }
    std::vector<Dir> out;
    out.reserve(phase.size());
    for (const auto& ph : phase) out.push_back(ph.value_or(Dir::Right));
    return out;
}

std::optional<SweepPartition> is_sweeping(const Nwa& A) {
    SweepPartition sp;
    sp.phase.resize(A.part_count());
    for (PartId id : A.reachable()) {
        auto ph = sweep_phases(A.part(id));
        if (!ph) return std::nullopt;
        sp.phase[static_cast<std::size_t>(id)] = std::move(*ph);
    }
    return sp;
}

namespace {

Nwa project(const Nwa& A, Dir keep) {
    Nwa out = A;
    auto& ts = out.part(out.root()).transitions;
    std::erase_if(ts, [keep](const Transition& t) { return t.dir != keep; });
    return out;
}

} // namespace

Nwa projection_lr(const Nwa& A) { return project(A, Dir::Right); }
Nwa projection_rl(const Nwa& A) { return project(A, Dir::Left); }

// ---------------------------------------------------------------- structural rewrites

PartId insert_track(Nwa& A, PartId part, std::size_t index) {
    std::map<PartId, PartId> done;
    std::function<PartId(PartId)> go = [&](PartId id) -> PartId {
        if (auto it = done.find(id); it != done.end()) return it->second;
        Part src = A.part(id);
        if (index > static_cast<std::size_t>(src.depth))
            throw NwaError("track index " + std::to_string(index) + " beyond depth of part '" + src.name + "'");
        Part dst = src;
        dst.depth = src.depth + 1;
        dst.transitions.clear();
        for (const auto& t : src.transitions) {
            Weight w = t.weight;
            if (w.is_call()) w.child = go(w.child);
            if (t.letter.is_marker()) {
                dst.transitions.push_back({t.src, t.letter, w, t.dir, t.dst});
                continue;
            }
            for (std::uint8_t bit : {std::uint8_t{0}, std::uint8_t{1}}) {
                Letter l = t.letter;
                l.marks.insert(l.marks.begin() + static_cast<std::ptrdiff_t>(index), bit);
                dst.transitions.push_back({t.src, l, w, t.dir, t.dst});
            }
        }
        PartId nid = A.add_part(std::move(dst));
        done[id] = nid;
        return nid;
    };
    return go(part);
}

Nwa demote(const Nwa& A) {
    const int d = A.root_part().depth;
    if (d < 1) throw NwaError("demotion needs a marked alphabet (depth >= 1)");
    Nwa out = A;
    out.set_root(insert_track(out, out.root(), static_cast<std::size_t>(d - 1)));
    return out.compact();
}

Nwa assign_levels(const Nwa& A, std::map<PartId, PartId>* origin) {
    std::map<PartId, int> height;
    std::function<int(PartId)> h = [&](PartId id) -> int {
        if (auto it = height.find(id); it != height.end()) return it->second;
        int best = 0;
        for (PartId c : A.part(id).children()) best = std::max(best, h(c) + 1);
        height[id] = best;
        return best;
    };
    Nwa out;
    out.alphabet = A.alphabet;
    out.weights = A.weights;
    std::map<std::pair<PartId, int>, PartId> made;
    std::function<PartId(PartId, int)> build = [&](PartId id, int level) -> PartId {
        if (auto it = made.find({id, level}); it != made.end()) return it->second;
        Part p = A.part(id);
        p.level = level;
        for (auto& t : p.transitions) {
            if (t.weight.is_call()) t.weight.child = build(t.weight.child, level - 1);
        }
        PartId nid = out.add_part(std::move(p));
        made[{id, level}] = nid;
        if (origin) (*origin)[nid] = id;
        return nid;
    };
    const int root_level = std::max(h(A.root()), A.root_part().level);
    out.set_root(build(A.root(), root_level));
    return out;
}

Nwa canonicalize(const Nwa& A) {
    Nwa out = A.compact();
    for (PartId id = 0; id < static_cast<PartId>(out.part_count()); ++id) {
        Part& p = out.part(id);
        std::vector<StateId> order(p.states.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<StateId>(i);
        std::stable_sort(order.begin(), order.end(), [&](StateId a, StateId b) {
            return p.states[static_cast<std::size_t>(a)] < p.states[static_cast<std::size_t>(b)];
        });
        std::vector<StateId> rename(order.size());
        std::vector<std::string> names(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            rename[static_cast<std::size_t>(order[i])] = static_cast<StateId>(i);
            names[i] = "s" + std::to_string(i);
        }
        p.states = names;
        for (auto& q : p.initial) q = rename[static_cast<std::size_t>(q)];
        for (auto& q : p.final) q = rename[static_cast<std::size_t>(q)];
        std::sort(p.initial.begin(), p.initial.end());
        std::sort(p.final.begin(), p.final.end());
        for (auto& t : p.transitions) {
            t.src = rename[static_cast<std::size_t>(t.src)];
            t.dst = rename[static_cast<std::size_t>(t.dst)];
        }
        std::sort(p.transitions.begin(), p.transitions.end());
    }
    return out;
}

int nesting_depth(const Nwa& A) {
    std::map<PartId, int> memo;
    std::function<int(PartId)> go = [&](PartId id) -> int {
        if (auto it = memo.find(id); it != memo.end()) return it->second;
        int best = 0;
        for (PartId c : A.part(id).children()) best = std::max(best, go(c) + 1);
        memo[id] = best;
        return best;
    };
    return go(A.root());
}

// ---------------------------------------------------------------- text format

namespace {

struct Block {
    std::string name;
    int first_line = 0;
    std::map<std::string, std::vector<std::string>> fields;
    std::vector<std::pair<int, std::string>> transitions;
};

std::vector<std::string> words_of(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

[[noreturn]] void fail_at(int line, const std::string& msg) {
    throw NwaError("line " + std::to_string(line) + ": " + msg);
}

int to_int(const std::vector<std::string>& v, int line, const char* key) {
    if (v.size() != 1) fail_at(line, std::string("expected one number after '") + key + ":'");
    try {
        return std::stoi(v[0]);
    } catch (const std::exception&) {
        fail_at(line, std::string("bad number after '") + key + ":'");
    }
}

} // namespace

Nwa parse_nwa(const std::string& text) {
    std::vector<Block> blocks(1);
    blocks[0].name = "root";
    std::vector<std::string> alphabet, weights;
    std::map<std::string, int> key_line;
    std::size_t current = 0;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        if (line.rfind("child ", 0) == 0 && line.back() == '{') {
            if (current != 0) fail_at(lineno, "child blocks cannot be nested");
            auto name = trim(line.substr(6, line.size() - 7));
            if (name.empty()) fail_at(lineno, "child block without a name");
            for (const auto& b : blocks)
                if (b.name == name) fail_at(lineno, "duplicate part name '" + name + "'");
            blocks.push_back({name, lineno, {}, {}});
            current = blocks.size() - 1;
            continue;
        }
        if (line == "}") {
            if (current == 0) fail_at(lineno, "unmatched '}'");
            current = 0;
            continue;
        }
        if (line.find("->") != std::string::npos) {
            blocks[current].transitions.emplace_back(lineno, line);
            continue;
        }
        auto colon = line.find(':');
        if (colon == std::string::npos) fail_at(lineno, "expected 'key: values' or a transition");
        std::string key = trim(line.substr(0, colon));
        auto values = words_of(line.substr(colon + 1));
        if (current == 0 && key == "alphabet") alphabet = values;
        else if (current == 0 && key == "weights") weights = values;
        else if (key == "level" || key == "depth" || key == "states" || key == "initial" || key == "final") {
            blocks[current].fields[key] = values;
            key_line[blocks[current].name + "/" + key] = lineno;
        } else {
            fail_at(lineno, "unknown key '" + key + "'");
        }
    }
    if (current != 0) fail_at(lineno, "missing '}' for child '" + blocks[current].name + "'");

    Nwa A;
    A.alphabet = alphabet;
    A.weights = weights;
    std::map<std::string, PartId> ids;
    for (const auto& b : blocks) {
        Part p;
        p.name = b.name;
        auto get = [&](const std::string& k) -> const std::vector<std::string>* {
            auto it = b.fields.find(k);
            return it == b.fields.end() ? nullptr : &it->second;
        };
        if (auto* v = get("level")) p.level = to_int(*v, key_line[b.name + "/level"], "level");
        if (auto* v = get("depth")) p.depth = to_int(*v, key_line[b.name + "/depth"], "depth");
        else p.depth = -1;  // inferred below
        if (auto* v = get("states")) p.states = *v;
        if (auto* v = get("initial"))
            for (const auto& s : *v) p.initial.push_back(p.state_id(s));
        if (auto* v = get("final"))
            for (const auto& s : *v) p.final.push_back(p.state_id(s));
        ids[b.name] = A.add_part(std::move(p));
    }
    A.set_root(0);

    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        Part& p = A.part(static_cast<PartId>(bi));
        for (const auto& [ln, line] : blocks[bi].transitions) {
            auto arrow = line.find("->");
            std::string src = trim(line.substr(0, arrow));
            std::string rest = line.substr(arrow + 2);
            auto colon = rest.find(':');
            if (colon == std::string::npos) fail_at(ln, "transition needs ':' before its label");
            std::string dst = trim(rest.substr(0, colon));
            auto fields = split_top_level(rest.substr(colon + 1), ',');
            if (fields.size() != 3) fail_at(ln, "transition label must be 'letter , weight , dir'");
            Transition t;
            try {
                t.src = p.state_id(src);
                t.dst = p.state_id(dst);
            } catch (const NwaError& e) {
                fail_at(ln, e.what());
            }
            const std::string& w = fields[1];
            if (w == "one") t.weight = Weight::one();
            else if (w.rfind("k:", 0) == 0) t.weight = Weight::constant(w.substr(2));
            else if (w.rfind("call:", 0) == 0) {
                auto it = ids.find(w.substr(5));
                if (it == ids.end()) fail_at(ln, "call to unknown child '" + w.substr(5) + "'");
                t.weight = Weight::call(it->second);
            } else {
                fail_at(ln, "weight must be one, k:<sym> or call:<id>");
            }
            if (fields[2] == "L") t.dir = Dir::Left;
            else if (fields[2] == "R") t.dir = Dir::Right;
            else fail_at(ln, "direction must be L or R");
            Letter pattern;
            try {
                pattern = parse_letter(fields[0]);
            } catch (const NwaError& e) {
                fail_at(ln, e.what());
            }
            if (!pattern.is_marker() && pattern.symbol == "*") {
                // Wildcard: one transition per alphabet symbol.
                for (const auto& a : A.alphabet) {
                    Transition c = t;
                    c.letter = pattern;
                    c.letter.symbol = a;
                    p.transitions.push_back(c);
                }
            } else {
                t.letter = pattern;
                p.transitions.push_back(t);
            }
        }
    }

    // Infer depths of children from their callers.
    if (A.part(0).depth < 0) A.part(0).depth = 0;
    for (PartId id : A.reachable()) {
        for (PartId c : A.part(id).children()) {
            Part& child = A.part(c);
            if (child.depth < 0) child.depth = A.part(id).depth + 1;
        }
    }
    for (PartId id = 0; id < static_cast<PartId>(A.part_count()); ++id)
        if (A.part(id).depth < 0) A.part(id).depth = 0;
    return A;
}

std::string format_nwa(const Nwa& A) {
    std::ostringstream out;
    out << "alphabet:";
    for (const auto& a : A.alphabet) out << ' ' << a;
    out << "\nweights:";
    for (const auto& k : A.weights) out << ' ' << k;
    out << '\n';

    const auto order = A.reachable();
    std::map<PartId, std::string> names;
    std::set<std::string> used;
    for (PartId id : order) {
        std::string base = id == A.root() ? std::string("root") : A.part(id).name;
        if (base.empty() || (id != A.root() && base == "root")) base = "part";
        std::string name = base;
        for (int k = 2; used.count(name); ++k) name = base + "_" + std::to_string(k);
        used.insert(name);
        names[id] = name;
    }

    for (PartId id : order) {
        const Part& p = A.part(id);
        const bool is_root = id == A.root();
        const std::string ind = is_root ? "" : "  ";
        if (!is_root) out << "\nchild " << names[id] << " {\n";
        out << ind << "level: " << p.level << '\n';
        if (!is_root || p.depth != 0) out << ind << "depth: " << p.depth << '\n';
        out << ind << "states:";
        for (const auto& s : p.states) out << ' ' << s;
        out << '\n' << ind << "initial:";
        for (auto q : p.initial) out << ' ' << p.states[static_cast<std::size_t>(q)];
        out << '\n' << ind << "final:";
        for (auto q : p.final) out << ' ' << p.states[static_cast<std::size_t>(q)];
        out << '\n';
        for (const auto& t : p.transitions) {
            out << ind << p.states[static_cast<std::size_t>(t.src)] << " -> " << p.states[static_cast<std::size_t>(t.dst)]
                << " : " << format_letter(t.letter) << " , ";
            switch (t.weight.kind) {
            case Weight::Kind::One: out << "one"; break;
            case Weight::Kind::Const: out << "k:" << t.weight.symbol; break;
            case Weight::Kind::Call: out << "call:" << names.at(t.weight.child); break;
            }
            out << " , " << (t.dir == Dir::Left ? 'L' : 'R') << '\n';
        }
        if (!is_root) out << "}\n";
    }
    return out.str();
}

} // namespace wfo
