#pragma once

#include "wfokit/multiset.hpp"
#include "wfokit/nwa.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wfo {

/// Number of accepting runs (not only simple ones) of one part on a word; nullopt means infinitely many.
std::optional<Count> count_accepting_runs(const Part& p, const Word& u);
/// Same for the root of a nest.
std::optional<Count> count_accepting_runs(const Nwa& A, const Word& u);

enum class Verdict { Unambiguous, Polynomial, Infinite, Inconclusive };

struct PartAmbiguity {
    PartId part = -1;
    std::string name;
    std::vector<std::optional<Count>> max_runs;  // [n] for n = 0..L; nullopt = infinite or no word
    std::vector<bool> sampled;                   // whether length n had any word
    Verdict verdict = Verdict::Inconclusive;
    int degree = 0;  // for Polynomial
    Word witness;
    std::string note;
};

struct AmbiguityReport {
    Verdict verdict = Verdict::Unambiguous;
    int degree = 0;
    int horizon = 0;
    std::vector<PartAmbiguity> parts;
};

/// Words examined per classification before giving up (WFOKIT_BUDGET scales it, default 2e6).
std::size_t ambiguity_budget();

/// Max run counts m(n) for n <= L over every word (and every mark placement for marked parts),
/// classified by finite differences on the upper half of the sample.
AmbiguityReport classify_ambiguity(const Nwa& A, int max_len, std::size_t budget = ambiguity_budget());
PartAmbiguity classify_part(const Part& p, const std::vector<std::string>& alphabet, int max_len,
                            std::size_t budget = ambiguity_budget());

std::string verdict_name(Verdict v, int degree);
/// True for unambiguous, bounded and linear verdicts.
bool linear_or_better(Verdict v, int degree);
std::string format_report(const AmbiguityReport& r);

} // namespace wfo
