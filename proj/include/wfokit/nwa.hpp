#pragma once

#include "wfokit/multiset.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wfo {

enum class LetterKind : std::uint8_t { Symbol, LeftMarker, RightMarker };

/// A letter of A x {0,1}^d, or one of the two end markers (which carry no marks).
struct Letter {
    LetterKind kind = LetterKind::Symbol;
    std::string symbol;
    std::vector<std::uint8_t> marks;  // marks[i] is marking track i+1

    static Letter left_marker() { return {LetterKind::LeftMarker, {}, {}}; }
    static Letter right_marker() { return {LetterKind::RightMarker, {}, {}}; }
    static Letter plain(std::string sym, std::vector<std::uint8_t> marks = {}) {
        return {LetterKind::Symbol, std::move(sym), std::move(marks)};
    }

    bool is_marker() const { return kind != LetterKind::Symbol; }
    std::size_t depth() const { return marks.size(); }

    auto operator<=>(const Letter&) const = default;
};

/// Unframed word, possibly over a marked alphabet.
using Word = std::vector<Letter>;

std::string format_letter(const Letter& l);
Letter parse_letter(const std::string& text);
std::string format_word(const Word& w);

/// Word of plain symbols (no marks).
Word plain_word(const std::vector<std::string>& symbols);
/// Every word of the given length over the plain alphabet, in lexicographic order.
std::vector<Word> all_words(const std::vector<std::string>& alphabet, std::size_t length);

/// All letters of A x {0,1}^depth.
std::vector<Letter> letters_of_depth(const std::vector<std::string>& alphabet, int depth);

/// Adds a new last marking track that is 1 exactly at the 1-based position `i`.
Word mark_position(const Word& u, std::size_t i);
/// Removes the last marking track.
Word unmark_last(const Word& u);

enum class Dir : std::uint8_t { Left, Right };

inline Dir opposite(Dir d) { return d == Dir::Left ? Dir::Right : Dir::Left; }

using PartId = int;
using StateId = int;

struct Weight {
    enum class Kind : std::uint8_t { Const, One, Call };
    Kind kind = Kind::One;
    std::string symbol;  // Const
    PartId child = -1;   // Call

    static Weight one() { return {}; }
    static Weight constant(std::string k) { return {Kind::Const, std::move(k), -1}; }
    static Weight call(PartId id) { return {Kind::Call, {}, id}; }

    bool is_call() const { return kind == Kind::Call; }
    auto operator<=>(const Weight&) const = default;
};

struct Transition {
    StateId src = 0;
    Letter letter;
    Weight weight;
    Dir dir = Dir::Right;
    StateId dst = 0;

    auto operator<=>(const Transition&) const = default;
};

/// One automaton of the nest. Its input alphabet is A x {0,1}^depth.
struct Part {
    std::string name;
    int level = 0;
    int depth = 0;
    std::vector<std::string> states;
    std::vector<StateId> initial;
    std::vector<StateId> final;
    std::vector<Transition> transitions;

    StateId add_state(std::string state_name);
    StateId state_id(const std::string& state_name) const;  // throws if absent
    bool is_initial(StateId q) const;
    bool is_final(StateId q) const;
    bool has_calls() const;
    std::vector<PartId> children() const;
};

/// A nest of automata: a registry of parts referenced by id, with a distinguished root.
class Nwa {
public:
    std::vector<std::string> alphabet;
    std::vector<std::string> weights;

    PartId add_part(Part p);
    const Part& part(PartId id) const { return parts_.at(static_cast<std::size_t>(id)); }
    Part& part(PartId id) { return parts_.at(static_cast<std::size_t>(id)); }
    std::size_t part_count() const { return parts_.size(); }

    PartId root() const { return root_; }
    void set_root(PartId id) { root_ = id; }
    const Part& root_part() const { return part(root_); }

    /// Copies every part of `other` into this registry; returns the new id of its root.
    PartId import(const Nwa& other);
    /// Same, starting from an arbitrary part of `other` (only its descendants are copied).
    PartId import_part(const Nwa& other, PartId id);

    /// Parts reachable from the root, root first, then in discovery order.
    std::vector<PartId> reachable() const;
    /// Drops unreachable parts and renumbers ids.
    Nwa compact() const;

private:
    std::vector<Part> parts_;
    PartId root_ = 0;
};

class NwaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Structural violations; empty means valid.
std::vector<std::string> validate(const Nwa& A);

enum class OneWay { LeftToRight, RightToLeft, No };
OneWay is_one_way(const Nwa& A);
std::string one_way_name(OneWay w);

/// Per part, per state: the phase witnessing the sweeping restriction.
struct SweepPartition {
    std::vector<std::vector<Dir>> phase;  // indexed [part][state]
};
std::optional<SweepPartition> is_sweeping(const Nwa& A);
/// Same check restricted to one part (children ignored).
std::optional<std::vector<Dir>> sweep_phases(const Part& p);

Nwa projection_lr(const Nwa& A);
Nwa projection_rl(const Nwa& A);

/// Inserts a fresh marking track at `index` into `part` and all its descendants; each letter
/// transition is duplicated for both values of the new track. Returns the new part id.
PartId insert_track(Nwa& A, PartId part, std::size_t index);
/// Demotion: inserts the ignored track second-to-last. Requires root depth >= 1.
Nwa demote(const Nwa& A);

/// Re-assigns levels so that every caller sits exactly one level above its callees,
/// cloning shared parts that are reached at different levels. Unreachable parts are dropped.
/// If `origin` is given it receives, for each new part id, the id it was copied from.
Nwa assign_levels(const Nwa& A, std::map<PartId, PartId>* origin = nullptr);

/// Sorts state names and renumbers them s0, s1, ... in every part.
Nwa canonicalize(const Nwa& A);

/// Longest call chain below the root (0 for a nest without calls).
int nesting_depth(const Nwa& A);

/// Text format: see README.
Nwa parse_nwa(const std::string& text);
std::string format_nwa(const Nwa& A);

} // namespace wfo
