#pragma once

#include "wfokit/multiset.hpp"

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace wfo {

/// A plain word over the base alphabet; each letter is a symbol name.
using PlainWord = std::vector<std::string>;

/// Variable assignment, positions are 1-based.
using Valuation = std::map<std::string, int>;

struct FoNode;
using Fo = std::shared_ptr<const FoNode>;

struct FoNode {
    enum class Kind { True, Letter, Leq, Not, And, Forall };
    Kind kind;
    std::string letter;  // Letter
    std::string var;     // Letter, Leq (left), Forall (bound)
    std::string var2;    // Leq (right)
    Fo left, right;      // Not/Forall use left
};

namespace fo {
Fo top();
Fo letter(std::string a, std::string x);
Fo leq(std::string x, std::string y);
Fo neg(Fo f);
Fo conj(Fo f, Fo g);
Fo forall(std::string x, Fo body);
// Derived forms, expanded into the core connectives.
Fo disj(Fo f, Fo g);
Fo exists(std::string x, Fo body);
Fo eq(std::string x, std::string y);
Fo lt(std::string x, std::string y);
} // namespace fo

struct WfoNode;
using Wfo = std::shared_ptr<const WfoNode>;

struct WfoNode {
    enum class Kind { Zero, One, Const, Cond, Sum, Prod, SumVar, ProdLR, ProdRL };
    Kind kind;
    std::string weight;  // Const
    std::string var;     // binders
    Fo guard;            // Cond
    Wfo left, right;     // Cond branches, Sum/Prod operands, binder body in left
};

namespace wf {
Wfo zero();
Wfo one();
Wfo weight(std::string k);
Wfo cond(Fo guard, Wfo then_branch, Wfo else_branch);
Wfo plus(Wfo a, Wfo b);
Wfo times(Wfo a, Wfo b);
Wfo sum(std::string x, Wfo body);
Wfo prod_lr(std::string x, Wfo body);
Wfo prod_rl(std::string x, Wfo body);
} // namespace wf

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(int line, int column, const std::string& msg);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_, column_;
};

bool fo_eval(const Fo& phi, const PlainWord& u, const Valuation& sigma);
MultisetSeries wfo_eval(const Wfo& Phi, const PlainWord& u, const Valuation& sigma = {});

std::set<std::string> free_vars(const Fo& phi);
std::set<std::string> free_vars(const Wfo& Phi);

enum class Fragment { WFO, lrWFO, rlWFO, RoneWFO, stepWFO };
std::set<Fragment> classify_fragment(const Wfo& Phi);
std::string fragment_name(Fragment f);

Wfo parse_formula(const std::string& text);
Fo parse_fo(const std::string& text);
std::string format_formula(const Wfo& Phi);
std::string format_fo(const Fo& phi);

/// Contents of a `.wfo` file: declared alphabets and one formula.
struct WfoDocument {
    std::vector<std::string> alphabet;
    std::vector<std::string> weights;
    Wfo formula;
};

/// Contents of a `.fo` file: alphabet, optional ordered free variables, one formula.
struct FoDocument {
    std::vector<std::string> alphabet;
    std::vector<std::string> free;
    Fo formula;
};

WfoDocument parse_wfo_document(const std::string& text);
FoDocument parse_fo_document(const std::string& text);
std::string format_wfo_document(const WfoDocument& doc);

/// Checks letters and weights against the declared alphabets; throws EvalError naming the offender.
void check_symbols(const WfoDocument& doc);

} // namespace wfo
