#pragma once

#include "wfokit/logic.hpp"
#include "wfokit/multiset.hpp"
#include "wfokit/nwa.hpp"
#include "wfokit/runs.hpp"

#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

namespace wfo {

class TranslateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- FO -> automaton

/// Complete deterministic automaton over the letters A x {0,1}^tracks (markers not included).
struct Dfa {
    int tracks = 0;
    std::vector<Letter> letters;            // index = letter id
    std::vector<std::vector<int>> next;     // [state][letter id]
    std::vector<bool> accepting;
    int start = 0;

    int size() const { return static_cast<int>(next.size()); }
    int letter_id(const Letter& l) const;   // throws on a foreign letter
    bool accepts(const Word& w) const;
};

/// Compiles `phi` over the ordered variables `vars` (track i encodes vars[i]); accepts exactly the
/// valid encodings that satisfy phi. The result is minimal.
Dfa fo_to_dfa(const Fo& phi, const std::vector<std::string>& vars, const std::vector<std::string>& alphabet);
/// Wraps a DFA into a one-way part that starts on the left marker and ends on the right marker.
Nwa dfa_to_nwa(const Dfa& d, const std::vector<std::string>& alphabet);
/// fo_to_dfa followed by dfa_to_nwa. Requires free(phi) to be contained in `free_vars`.
Nwa fo_to_automaton(const Fo& phi, const std::vector<std::string>& free_vars, const std::vector<std::string>& alphabet);

// ---------------------------------------------------------------- WFO -> sweeping nest

enum class Mode { TwoWay, OneWay };

/// Inductive compilation of a sentence. In one-way mode the sentence must be in lrWFO and the
/// result is one-way left-to-right.
Nwa wfo_to_sweeping(const Wfo& Phi, const std::vector<std::string>& alphabet, const std::vector<std::string>& weights,
                    Mode mode = Mode::TwoWay);

// ---------------------------------------------------------------- two-way -> sweeping

enum class Side : std::uint8_t { Left, Right };

/// One end of a window. A marker wall is the left (right) end marker; otherwise the wall is the
/// position marked by `track`. `ones` lists every extra track carrying its mark on that position.
struct Wall {
    int track = -1;
    std::vector<int> ones;

    bool is_marker() const { return track < 0; }
    auto operator<=>(const Wall&) const = default;
};

/// A subproblem of the sweeping construction: the subruns of one base part that start with a
/// transition of `start_set` on the `start` wall, stay inside the window, and leave through a
/// transition of `exit_set` on the `exit` wall. Inside the window, a mark wall only admits inward
/// moves, except for the exits.
struct ComponentSpec {
    PartId base_part = 0;
    int depth = 0;  // tracks of the letters read; the first base.depth ones belong to the base part
    Wall left, right;
    Side start = Side::Left;
    std::vector<int> start_set;  // base transition indices
    Side exit = Side::Right;
    std::vector<int> exit_set;

    int level = 0;  // number of walls introduced so far

    auto operator<=>(const ComponentSpec&) const = default;
};

std::string format_spec(const ComponentSpec& s, const Part& base);

/// The top-level subproblem of an anchored part: from its left-marker entries to its right-marker exits.
ComponentSpec top_component(const Part& base, PartId id);

/// Two-way automaton computing the subruns of `spec` directly (no sweeping). Its calls point to
/// the base part's children with the window tracks inserted; the returned nest contains them.
Nwa build_component(const Nwa& base, const ComponentSpec& spec);

struct SwOptions {
    bool annotated = true;
    int depth_cap = -1;           // -1: 2*ceil(|Q|/2)-2 per base part
    std::size_t budget = 0;       // component cap; 0: WFOKIT_BUDGET or 20000
    int ambiguity_horizon = 6;    // 0 skips the precondition check
    bool keep_iterations = false;
};

struct SwResult {
    Nwa nest;
    Nwa base;                     // the anchored input the provenance refers to
    ProvenanceMap provenance;     // keyed by (part of nest, transition index)
    std::size_t components = 0;
    std::vector<Nwa> iterations;  // iterations[i]: walls of level >= i still two-way
};

/// One sweeping part for a subproblem plus the children it needs, as a standalone nest.
/// Children are sweepified as well; `annotated` chooses the state annotations.
SwResult sweepify_component(const Nwa& base, const ComponentSpec& spec, const SwOptions& options = {});

/// Replaces every part of `A` (anchored first) by an equivalent sweeping nest.
SwResult sw_transform(const Nwa& A, const SwOptions& options = {});

int default_depth_cap(const Part& p);

// ---------------------------------------------------------------- sweep decomposition

struct DecompositionCheck {
    MultisetSeries lhs, rhs;
    bool equal = false;
};

/// Compares the runs of a sweeping level-0 part from (left marker, p) that end with a right-marker
/// move into q against the sum over marker-transition chains of products of one-way sweeps.
DecompositionCheck sweep_decomposition_check(const Nwa& A, StateId p, StateId q, const Word& w);

} // namespace wfo
