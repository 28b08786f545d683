#pragma once

#include "wfokit/multiset.hpp"
#include "wfokit/nwa.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wfo {

/// One step of a flat run: the transition taken and the framed position it reads.
struct RunStep {
    int transition = 0;  // index into Part::transitions
    int position = 0;    // framed position, 0 is the left marker
};

/// A run of a single part, children not expanded.
struct FlatRun {
    StateId start_state = 0;
    int start_position = 0;
    std::vector<RunStep> steps;
};

/// Ordered tree of transitions. The orphan root (the run itself) has transition == -1.
struct RunTree {
    PartId part = -1;
    int transition = -1;
    std::string src, dst;
    Letter letter;
    std::string weight;  // "one", "k:f" or "call"
    Dir dir = Dir::Right;
    int position = 0;
    std::vector<RunTree> children;

    bool is_orphan_root() const { return transition < 0; }
    /// Compares everything but the children.
    bool same_label(const RunTree& other) const;
    friend bool operator==(const RunTree&, const RunTree&) = default;
};

/// Frames `u` and checks the exactly-one-mark rule for a part of the given depth.
Word frame(const Word& u);
void check_marked_word(const Word& u, int depth);

/// Evaluates parts of one nest, memoizing child results by (part, marked word).
class Evaluator {
public:
    explicit Evaluator(const Nwa& A) : nest_(&A) {}

    MultisetSeries eval(const Word& u) { return eval_part(nest_->root(), u); }
    MultisetSeries eval_part(PartId id, const Word& u);

    /// Accepting simple runs of one part, children not expanded.
    std::vector<FlatRun> flat_runs(PartId id, const Word& u) const;
    /// Accepting simple runs with every call expanded into one accepting run of the callee.
    std::vector<RunTree> run_trees(PartId id, const Word& u);

    const Nwa& nest() const { return *nest_; }

private:
    const Nwa* nest_;
    std::map<std::pair<PartId, Word>, MultisetSeries> memo_;
    std::map<std::pair<PartId, Word>, std::vector<RunTree>> tree_memo_;
};

MultisetSeries nwa_eval(const Nwa& A, const Word& u);
std::vector<RunTree> enumerate_simple_runs(const Nwa& A, const Word& u);

/// Visits every accepting simple run of a part on a framed word; the callback may return
/// false to stop. Used by the evaluator and by tests as the reference enumerator.
void for_each_simple_run(const Part& p, const Word& framed, const std::function<bool(const FlatRun&)>& visit);

RunTree tree_concat(const RunTree& t1, const RunTree& t2);
/// Drops marking track `track` (0-based) from every node letter and sets the root to the orphan token.
RunTree lift(const RunTree& t, std::size_t track);
/// Lift with respect to the last track of the top-level letters.
RunTree lift(const RunTree& t);

/// Where a produced transition comes from: a copy of a base transition, or an inserted call.
struct Origin {
    enum class Kind { Copy, Call };
    Kind kind = Kind::Copy;
    int base_transition = -1;  // for Copy
};
using ProvenanceMap = std::map<std::pair<PartId, int>, Origin>;

/// Replaces inserted calls by their (flattened) subruns and copies by their base transitions,
/// yielding a run of `base_part` in `base`.
RunTree flatten(const RunTree& t, const ProvenanceMap& provenance, const Nwa& base, PartId base_part);

/// Indented dump, one transition per line; `tag` may annotate nodes (printed in brackets).
std::string format_run_tree(const RunTree& t, const std::function<std::string(const RunTree&)>& tag = {});

/// A part is anchored when its initial states only leave on the left marker and have no incoming
/// transitions, and its final states are dead ends entered only by left moves on the right marker.
bool is_anchored(const Part& p);
/// Equivalent part where runs start on the left marker and end on the right marker.
/// Extra runs can appear only where the original has non-simple accepting runs.
Part anchor_part(const Part& p, const std::vector<std::string>& alphabet);
/// Anchors every part of the nest.
Nwa anchor(const Nwa& A);

} // namespace wfo
