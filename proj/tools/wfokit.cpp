#include "wfokit/ambiguity.hpp"
#include "wfokit/logic.hpp"
#include "wfokit/monoid.hpp"
#include "wfokit/multiset.hpp"
#include "wfokit/nwa.hpp"
#include "wfokit/runs.hpp"
#include "wfokit/translate.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace fs = std::filesystem;
using namespace wfo;

namespace {

// Exit codes: 0 affirmative verdict, 1 negative verdict, 2 usage or input error.
constexpr int kYes = 0;
constexpr int kNo = 1;
constexpr int kError = 2;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw InputError("cannot write " + out_path);
    out << text;
}

// A loaded input file: a weighted sentence, an FO sentence or an automaton.
struct Source {
    std::variant<WfoDocument, FoDocument, Nwa> content;

    const std::vector<std::string>& alphabet() const {
        return std::visit([](const auto& c) -> const std::vector<std::string>& { return c.alphabet; }, content);
    }
    std::vector<std::string> weights() const {
        if (const auto* d = std::get_if<WfoDocument>(&content)) return d->weights;
        if (const auto* a = std::get_if<Nwa>(&content)) return a->weights;
        return {};
    }
};

Source load(const std::string& path, bool validated = true) {
    const std::string ext = fs::path(path).extension().string();
    const std::string text = slurp(path);
    if (ext == ".wfo") {
        auto doc = parse_wfo_document(text);
        check_symbols(doc);
        return {std::move(doc)};
    }
    if (ext == ".fo") return {parse_fo_document(text)};
    if (ext == ".nwa") {
        auto A = parse_nwa(text);
        const auto errors = validate(A);
        if (validated && !errors.empty()) throw InputError(path + ": " + errors.front());
        return {std::move(A)};
    }
    // anything else: sniff for a transition arrow
    if (text.find("->") != std::string::npos) return {parse_nwa(text)};
    auto doc = parse_wfo_document(text);
    check_symbols(doc);
    return {std::move(doc)};
}

Nwa fo_automaton(const FoDocument& d) {
    if (!d.free.empty()) throw InputError("FO input has free variables; only sentences can be run as automata");
    return fo_to_automaton(d.formula, {}, d.alphabet);
}

// Automaton view of any input: sentences are compiled.
Nwa as_automaton(const Source& s) {
    if (const auto* a = std::get_if<Nwa>(&s.content)) return *a;
    if (const auto* d = std::get_if<WfoDocument>(&s.content)) return wfo_to_sweeping(d->formula, d->alphabet, d->weights);
    return fo_automaton(std::get<FoDocument>(s.content));
}

MultisetSeries evaluate(const Source& s, const PlainWord& u) {
    if (const auto* d = std::get_if<WfoDocument>(&s.content)) return wfo_eval(d->formula, u);
    if (const auto* d = std::get_if<FoDocument>(&s.content)) {
        if (!d->free.empty()) throw InputError("FO input has free variables");
        return fo_eval(d->formula, u, {}) ? MultisetSeries::unit() : MultisetSeries::empty();
    }
    return nwa_eval(std::get<Nwa>(s.content), plain_word(u));
}

// Words are letter strings ("abba") or space-separated symbols ("a b b a") for longer names.
// The empty word is "" or <eps>.
PlainWord parse_word(const std::string& text, const std::vector<std::string>& alphabet) {
    PlainWord out;
    if (text == "<eps>") return out;
    if (text.find(' ') != std::string::npos) {
        std::istringstream in(text);
        for (std::string s; in >> s;) out.push_back(s);
    } else {
        for (char c : text) out.emplace_back(1, c);
    }
    for (const auto& s : out)
        if (std::find(alphabet.begin(), alphabet.end(), s) == alphabet.end())
            throw InputError("letter '" + s + "' is not in the alphabet");
    return out;
}

std::string show_word(const PlainWord& u) {
    if (u.empty()) return "<eps>";
    bool compact = std::all_of(u.begin(), u.end(), [](const std::string& s) { return s.size() == 1; });
    std::string out;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (i && !compact) out += ' ';
        out += u[i];
    }
    return out;
}

std::vector<PlainWord> words_up_to(const std::vector<std::string>& alphabet, int max_len) {
    std::vector<PlainWord> out{{}};
    std::size_t begin = 0;
    for (int n = 1; n <= max_len; ++n) {
        const std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i)
            for (const auto& a : alphabet) {
                auto w = out[i];
                w.push_back(a);
                out.push_back(std::move(w));
            }
        begin = end;
    }
    return out;
}

// ---------------------------------------------------------------- commands

struct EvalArgs {
    std::string input, word, agg = "none";
};

int cmd_eval(const EvalArgs& a) {
    const Source s = load(a.input);
    const MultisetSeries v = evaluate(s, parse_word(a.word, s.alphabet()));
    std::cout << serialize(v);
    if (a.agg == "nat") std::cout << NaturalAggregator::numeric_literals(s.weights())(v) << '\n';
    else if (a.agg == "lang") std::cout << format_language(LanguageAggregator::singleton_words(s.weights())(v)) << '\n';
    std::cerr << "eval: " << v.support_size() << " distinct sequences, " << v.total_count() << " runs\n";
    return kYes;
}

struct CheckArgs {
    std::string input, which;
    int max_len = 6;
};

std::string phase_name(Dir d) { return d == Dir::Right ? "R" : "L"; }

int cmd_check(const CheckArgs& a) {
    const Source s = load(a.input, a.which != "validate");
    const Nwa A = as_automaton(s);
    if (a.which == "aperiodic") {
        const auto r = is_aperiodic(A);
        std::cout << format_report(r);
        return r.aperiodic ? kYes : kNo;
    }
    if (a.which == "ambiguity") {
        const auto r = classify_ambiguity(A, a.max_len);
        std::cout << verdict_name(r.verdict, r.degree) << '\n';
        std::cerr << format_report(r);
        return r.verdict == Verdict::Unambiguous || r.verdict == Verdict::Polynomial ? kYes : kNo;
    }
    if (a.which == "sweeping") {
        const auto r = is_sweeping(A);
        std::cout << "sweeping: " << (r ? "true" : "false") << '\n';
        if (!r) return kNo;
        for (std::size_t i = 0; i < r->phase.size(); ++i) {
            const Part& p = A.part(static_cast<PartId>(i));
            std::cout << "  part " << (p.name.empty() ? std::to_string(i) : p.name) << ":";
            for (std::size_t q = 0; q < p.states.size(); ++q) std::cout << ' ' << p.states[q] << '=' << phase_name(r->phase[i][q]);
            std::cout << '\n';
        }
        return kYes;
    }
    if (a.which == "oneway") {
        const auto w = is_one_way(A);
        std::cout << "oneway: " << one_way_name(w) << '\n';
        return w == OneWay::No ? kNo : kYes;
    }
    if (a.which == "validate") {
        const auto errors = validate(A);
        std::cout << "valid: " << (errors.empty() ? "true" : "false") << '\n';
        for (const auto& e : errors) std::cout << "  " << e << '\n';
        return errors.empty() ? kYes : kNo;
    }
    throw InputError("unknown check '" + a.which + "'");
}

struct TranslateArgs {
    std::string input, pipeline, out;
    bool annotated = false, one_way = false, keep_names = false;
    std::string dump_dir;
};

int cmd_translate(const TranslateArgs& a) {
    const Source s = load(a.input);
    auto finish = [&](const Nwa& A) { return format_nwa(a.keep_names ? A : canonicalize(A)); };
    if (a.pipeline == "wfo2nwa") {
        const auto* d = std::get_if<WfoDocument>(&s.content);
        if (!d) throw InputError("wfo2nwa needs a .wfo input");
        emit(finish(wfo_to_sweeping(d->formula, d->alphabet, d->weights, a.one_way ? Mode::OneWay : Mode::TwoWay)), a.out);
        return kYes;
    }
    if (a.pipeline == "fo2dfa") {
        const auto* d = std::get_if<FoDocument>(&s.content);
        if (!d) throw InputError("fo2dfa needs a .fo input");
        const Dfa dfa = fo_to_dfa(d->formula, d->free, d->alphabet);
        std::cerr << "fo2dfa: " << dfa.size() << " states\n";
        emit(finish(dfa_to_nwa(dfa, d->alphabet)), a.out);
        return kYes;
    }
    if (a.pipeline == "two2sweep") {
        SwOptions o;
        o.annotated = a.annotated;
        o.keep_iterations = !a.dump_dir.empty();
        const auto r = sw_transform(as_automaton(s), o);
        if (!a.dump_dir.empty()) {
            fs::create_directories(a.dump_dir);
            for (std::size_t i = 0; i < r.iterations.size(); ++i) {
                const auto path = fs::path(a.dump_dir) / ("iteration_" + std::to_string(i) + ".nwa");
                emit(finish(r.iterations[i]), path.string());
            }
        }
        std::cerr << "two2sweep: " << r.components << " components, depth " << nesting_depth(r.nest) << '\n';
        emit(finish(r.nest), a.out);
        return kYes;
    }
    throw InputError("unknown pipeline '" + a.pipeline + "'");
}

struct EquivArgs {
    std::string left, right;
    int max_len = 5;
    std::vector<std::string> words;
};

int cmd_equiv(const EquivArgs& a) {
    const Source l = load(a.left), r = load(a.right);
    std::vector<std::string> alphabet = l.alphabet();
    for (const auto& x : r.alphabet())
        if (std::find(alphabet.begin(), alphabet.end(), x) == alphabet.end()) alphabet.push_back(x);
    std::vector<PlainWord> corpus;
    if (a.words.empty()) corpus = words_up_to(alphabet, a.max_len);
    else
        for (const auto& w : a.words) corpus.push_back(parse_word(w, alphabet));
    for (const auto& u : corpus) {
        const auto x = evaluate(l, u), y = evaluate(r, u);
        if (x == y) continue;
        std::cout << "equal: false\n"
                  << "counterexample: " << show_word(u) << '\n'
                  << "left: " << to_brief(x) << '\n'
                  << "right: " << to_brief(y) << '\n';
        return kNo;
    }
    std::cout << "equal: true\n";
    std::cerr << "equiv: " << corpus.size() << " words\n";
    return kYes;
}

int cmd_monoid_dump(const std::string& input) {
    const Nwa A = as_automaton(load(input));
    bool all_done = true;
    for (PartId id : A.reachable()) {
        const Part& p = A.part(id);
        const auto M = build_transition_monoid(p, A.alphabet);
        std::cout << "part " << (p.name.empty() ? std::to_string(id) : p.name) << ": " << M.elements.size() << " elements"
                  << (M.budget_exceeded ? " (budget exceeded)" : "") << '\n';
        all_done = all_done && !M.budget_exceeded;
        std::cout << "  generators:";
        for (std::size_t g = 0; g < M.generators.size(); ++g) std::cout << ' ' << format_letter(M.generators[g]);
        std::cout << '\n';
        for (std::size_t e = 0; e < M.elements.size(); ++e) {
            std::cout << "  e" << e << " [" << (M.witness[e].empty() ? "<eps>" : format_word(M.witness[e])) << "]";
            if (e < M.right_action.size())
                for (int next : M.right_action[e]) std::cout << " e" << next;
            std::cout << '\n';
        }
    }
    return all_done ? kYes : kNo;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"wfokit: weighted first-order logic and nested two-way weighted automata"};
    app.require_subcommand(1);

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "evaluate a formula or automaton on one word");
    eval->add_option("input", ea.input, ".wfo, .fo or .nwa file")->required();
    eval->add_option("--word", ea.word, "the word, e.g. abba (empty allowed)")->required();
    eval->add_option("--agg", ea.agg, "aggregate: nat, lang or none")->check(CLI::IsMember({"nat", "lang", "none"}));

    CheckArgs ca;
    auto* check = app.add_subcommand("check", "structural and semantic checks");
    check->add_option("input", ca.input)->required();
    check->add_option("which", ca.which)->required()->check(
        CLI::IsMember({"aperiodic", "ambiguity", "sweeping", "oneway", "validate"}));
    check->add_option("--max-len", ca.max_len, "word length horizon for ambiguity");

    TranslateArgs ta;
    auto* translate = app.add_subcommand("translate", "run a construction and print the automaton");
    translate->add_option("input", ta.input)->required();
    translate->add_option("pipeline", ta.pipeline)->required()->check(CLI::IsMember({"wfo2nwa", "fo2dfa", "two2sweep"}));
    translate->add_option("-o,--output", ta.out, "output file (default stdout)");
    translate->add_flag("--annotated", ta.annotated, "two2sweep: keep behaviour annotations in states");
    translate->add_flag("--one-way", ta.one_way, "wfo2nwa: one-way construction (lrWFO only)");
    translate->add_option("--dump-iterations", ta.dump_dir, "two2sweep: write one .nwa per iteration into this directory");
    translate->add_flag("--keep-names", ta.keep_names, "do not rename states");

    EquivArgs qa;
    auto* equiv = app.add_subcommand("equiv", "compare two inputs on a word corpus");
    equiv->add_option("left", qa.left)->required();
    equiv->add_option("right", qa.right)->required();
    equiv->add_option("--max-len", qa.max_len, "all words up to this length");
    equiv->add_option("--words", qa.words, "explicit words instead of the exhaustive corpus");

    std::string monoid_input;
    auto* monoid = app.add_subcommand("monoid-dump", "print the transition monoid of every part");
    monoid->add_option("input", monoid_input)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kYes : kError;
    }

    try {
        if (*eval) return cmd_eval(ea);
        if (*check) return cmd_check(ca);
        if (*translate) return cmd_translate(ta);
        if (*equiv) return cmd_equiv(qa);
        if (*monoid) return cmd_monoid_dump(monoid_input);
    } catch (const std::exception& e) {
        std::cerr << "wfokit: " << e.what() << '\n';
        return kError;
    }
    return kError;
}
