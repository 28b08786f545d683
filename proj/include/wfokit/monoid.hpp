#pragma once

#include "wfokit/nwa.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wfo {

/// Binary relation over {0..n-1}, stored as bit rows.
class Relation {
public:
    Relation() = default;
    explicit Relation(int n);
    static Relation identity(int n);

    int size() const { return n_; }
    bool test(int i, int j) const;
    void set(int i, int j);
    bool empty() const;
    std::vector<std::pair<int, int>> pairs() const;

    /// Relational composition: (i,k) when (i,j) in this and (j,k) in other.
    Relation then(const Relation& other) const;
    /// Reflexive-transitive closure.
    Relation star() const;
    Relation operator|(const Relation& other) const;

    auto operator<=>(const Relation&) const = default;

private:
    const std::uint64_t* row(int i) const { return bits_.data() + static_cast<std::size_t>(i) * words_; }
    std::uint64_t* row(int i) { return bits_.data() + static_cast<std::size_t>(i) * words_; }

    int n_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> bits_;
};

/// The four crossing behaviours of a word. The empty word is a separate flagged element whose
/// relations read as the identity; it is the unit of composition.
struct Behaviour {
    Relation ll, lr, rl, rr;
    bool is_unit = false;

    static Behaviour unit(int n);
    auto operator<=>(const Behaviour&) const = default;
};

class MonoidError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Behaviour letter_behaviour(const Part& p, const Letter& a);
Behaviour behaviour_compose(const Behaviour& b1, const Behaviour& b2);
/// Behaviour of a word (markers allowed at its ends) built by composing letter behaviours.
Behaviour behaviour_of(const Part& p, const Word& w);
/// Reference: reachability over the configurations of `w` itself.
Behaviour behaviour_bruteforce(const Part& p, const Word& w);

std::string format_behaviour(const Behaviour& b, const Part& p);

/// Element cap for saturation: WFOKIT_BUDGET if set, else 100000.
std::size_t monoid_budget();

struct TransitionMonoid {
    std::vector<Behaviour> elements;  // elements[0] is the unit
    std::vector<Word> witness;        // a shortest word per element
    std::vector<Letter> generators;
    std::vector<int> generator_element;
    std::vector<std::vector<int>> right_action;  // [element][generator] -> element
    bool budget_exceeded = false;

    int find(const Behaviour& b) const;

private:
    friend TransitionMonoid build_transition_monoid(const Part& p, const std::vector<std::string>& alphabet,
                                                    std::size_t budget);
    std::map<Behaviour, int> index_;
};

/// Saturates letter behaviours of one part over the marker-free letters A x {0,1}^depth.
TransitionMonoid build_transition_monoid(const Part& p, const std::vector<std::string>& alphabet,
                                         std::size_t budget = monoid_budget());

struct PartAperiodicity {
    PartId part = -1;
    std::string name;
    std::size_t elements = 0;
    bool aperiodic = false;
    bool budget_exceeded = false;
    int index = 0;                 // smallest n with x^n = x^(n+1) for every element
    std::optional<Word> witness;   // word whose behaviour cycles with period > 1
    int period = 0;
};

struct AperiodicityReport {
    bool aperiodic = true;
    bool budget_exceeded = false;
    int index = 0;  // max over parts
    std::vector<PartAperiodicity> parts;
};

PartAperiodicity part_aperiodicity(const Part& p, const std::vector<std::string>& alphabet,
                                   std::size_t budget = monoid_budget());
/// Checks the root and every descendant.
AperiodicityReport is_aperiodic(const Nwa& A, std::size_t budget = monoid_budget());

std::string format_report(const AperiodicityReport& r);

} // namespace wfo
