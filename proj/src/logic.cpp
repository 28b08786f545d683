#include "wfokit/logic.hpp"

#include <cctype>
#include <sstream>

namespace wfo {

namespace fo {
Fo top() { return std::make_shared<FoNode>(FoNode{FoNode::Kind::True, {}, {}, {}, {}, {}}); }
Fo letter(std::string a, std::string x) {
    return std::make_shared<FoNode>(FoNode{FoNode::Kind::Letter, std::move(a), std::move(x), {}, {}, {}});
}
Fo leq(std::string x, std::string y) {
    return std::make_shared<FoNode>(FoNode{FoNode::Kind::Leq, {}, std::move(x), std::move(y), {}, {}});
}
Fo neg(Fo f) { return std::make_shared<FoNode>(FoNode{FoNode::Kind::Not, {}, {}, {}, std::move(f), {}}); }
Fo conj(Fo f, Fo g) {
    return std::make_shared<FoNode>(FoNode{FoNode::Kind::And, {}, {}, {}, std::move(f), std::move(g)});
}
Fo forall(std::string x, Fo body) {
    return std::make_shared<FoNode>(FoNode{FoNode::Kind::Forall, {}, std::move(x), {}, std::move(body), {}});
}
Fo disj(Fo f, Fo g) { return neg(conj(neg(std::move(f)), neg(std::move(g)))); }
Fo exists(std::string x, Fo body) { return neg(forall(std::move(x), neg(std::move(body)))); }
Fo eq(std::string x, std::string y) { return conj(leq(x, y), leq(y, x)); }
Fo lt(std::string x, std::string y) { return conj(leq(x, y), neg(leq(y, x))); }
} // namespace fo

namespace wf {
namespace {
Wfo make(WfoNode::Kind k, std::string weight = {}, std::string var = {}, Fo guard = {}, Wfo l = {}, Wfo r = {}) {
    return std::make_shared<WfoNode>(WfoNode{k, std::move(weight), std::move(var), std::move(guard), std::move(l), std::move(r)});
}
} // namespace
Wfo zero() { return make(WfoNode::Kind::Zero); }
Wfo one() { return make(WfoNode::Kind::One); }
Wfo weight(std::string k) { return make(WfoNode::Kind::Const, std::move(k)); }
Wfo cond(Fo guard, Wfo t, Wfo e) { return make(WfoNode::Kind::Cond, {}, {}, std::move(guard), std::move(t), std::move(e)); }
Wfo plus(Wfo a, Wfo b) { return make(WfoNode::Kind::Sum, {}, {}, {}, std::move(a), std::move(b)); }
Wfo times(Wfo a, Wfo b) { return make(WfoNode::Kind::Prod, {}, {}, {}, std::move(a), std::move(b)); }
Wfo sum(std::string x, Wfo body) { return make(WfoNode::Kind::SumVar, {}, std::move(x), {}, std::move(body)); }
Wfo prod_lr(std::string x, Wfo body) { return make(WfoNode::Kind::ProdLR, {}, std::move(x), {}, std::move(body)); }
Wfo prod_rl(std::string x, Wfo body) { return make(WfoNode::Kind::ProdRL, {}, std::move(x), {}, std::move(body)); }
} // namespace wf

SyntaxError::SyntaxError(int line, int column, const std::string& msg)
    : std::runtime_error("syntax error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line), column_(column) {}

// ---------------------------------------------------------------- evaluation

namespace {

int lookup(const Valuation& sigma, const std::string& x) {
    auto it = sigma.find(x);
    if (it == sigma.end()) throw EvalError("unbound variable '" + x + "'");
    return it->second;
}

} // namespace

bool fo_eval(const Fo& phi, const PlainWord& u, const Valuation& sigma) {
    using K = FoNode::Kind;
    switch (phi->kind) {
    case K::True: return true;
    case K::Letter: {
        int i = lookup(sigma, phi->var);
        if (i < 1 || i > static_cast<int>(u.size()))
            throw EvalError("variable '" + phi->var + "' points outside the word");
        return u[i - 1] == phi->letter;
    }
    case K::Leq: return lookup(sigma, phi->var) <= lookup(sigma, phi->var2);
    case K::Not: return !fo_eval(phi->left, u, sigma);
    case K::And: return fo_eval(phi->left, u, sigma) && fo_eval(phi->right, u, sigma);
    case K::Forall: {
        Valuation inner = sigma;
        for (int i = 1; i <= static_cast<int>(u.size()); ++i) {
            inner[phi->var] = i;
            if (!fo_eval(phi->left, u, inner)) return false;
        }
        return true;
    }
    }
    return false;
}

MultisetSeries wfo_eval(const Wfo& Phi, const PlainWord& u, const Valuation& sigma) {
    using K = WfoNode::Kind;
    const int n = static_cast<int>(u.size());
    switch (Phi->kind) {
    case K::Zero: return MultisetSeries::empty();
    case K::One: return MultisetSeries::unit();
    case K::Const: return MultisetSeries::singleton({Phi->weight});
    case K::Cond:
        return fo_eval(Phi->guard, u, sigma) ? wfo_eval(Phi->left, u, sigma) : wfo_eval(Phi->right, u, sigma);
    case K::Sum: return ms_union(wfo_eval(Phi->left, u, sigma), wfo_eval(Phi->right, u, sigma));
    case K::Prod: return ms_product(wfo_eval(Phi->left, u, sigma), wfo_eval(Phi->right, u, sigma));
    case K::SumVar: {
        MultisetSeries acc;
        Valuation inner = sigma;
        for (int i = 1; i <= n; ++i) {
            inner[Phi->var] = i;
            acc = ms_union(acc, wfo_eval(Phi->left, u, inner));
        }
        return acc;
    }
    case K::ProdLR:
    case K::ProdRL: {
        MultisetSeries acc = MultisetSeries::unit();
        Valuation inner = sigma;
        for (int step = 0; step < n; ++step) {
            inner[Phi->var] = Phi->kind == K::ProdLR ? step + 1 : n - step;
            acc = ms_product(acc, wfo_eval(Phi->left, u, inner));
            if (acc.is_empty()) break;
        }
        return acc;
    }
    }
    return {};
}

std::set<std::string> free_vars(const Fo& phi) {
    using K = FoNode::Kind;
    switch (phi->kind) {
    case K::True: return {};
    case K::Letter: return {phi->var};
    case K::Leq: return {phi->var, phi->var2};
    case K::Not: return free_vars(phi->left);
    case K::And: {
        auto a = free_vars(phi->left);
        auto b = free_vars(phi->right);
        a.insert(b.begin(), b.end());
        return a;
    }
    case K::Forall: {
        auto a = free_vars(phi->left);
        a.erase(phi->var);
        return a;
    }
    }
    return {};
}

std::set<std::string> free_vars(const Wfo& Phi) {
    using K = WfoNode::Kind;
    switch (Phi->kind) {
    case K::Zero:
    case K::One:
    case K::Const: return {};
    case K::Cond: {
        auto a = free_vars(Phi->guard);
        for (const auto& side : {Phi->left, Phi->right}) {
            auto b = free_vars(side);
            a.insert(b.begin(), b.end());
        }
        return a;
    }
    case K::Sum:
    case K::Prod: {
        auto a = free_vars(Phi->left);
        auto b = free_vars(Phi->right);
        a.insert(b.begin(), b.end());
        return a;
    }
    case K::SumVar:
    case K::ProdLR:
    case K::ProdRL: {
        auto a = free_vars(Phi->left);
        a.erase(Phi->var);
        return a;
    }
    }
    return {};
}

// ---------------------------------------------------------------- fragments

namespace {

bool has_kind(const Wfo& Phi, WfoNode::Kind k) {
    if (!Phi) return false;
    if (Phi->kind == k) return true;
    return has_kind(Phi->left, k) || has_kind(Phi->right, k);
}

bool is_step(const Wfo& Phi) {
    using K = WfoNode::Kind;
    if (Phi->kind == K::Const) return true;
    if (Phi->kind == K::Cond) return is_step(Phi->left) && is_step(Phi->right);
    return false;
}

bool is_rone(const Wfo& Phi) {
    using K = WfoNode::Kind;
    switch (Phi->kind) {
    case K::Zero: return true;
    case K::Cond:
    case K::Sum: return is_rone(Phi->left) && is_rone(Phi->right);
    case K::SumVar: return is_rone(Phi->left);
    case K::ProdLR: return is_step(Phi->left);
    default: return false;
    }
}

} // namespace

std::set<Fragment> classify_fragment(const Wfo& Phi) {
    using K = WfoNode::Kind;
    std::set<Fragment> tags{Fragment::WFO};
    const bool binary_product = has_kind(Phi, K::Prod);
    if (!binary_product && !has_kind(Phi, K::ProdRL)) tags.insert(Fragment::lrWFO);
    if (!binary_product && !has_kind(Phi, K::ProdLR)) tags.insert(Fragment::rlWFO);
    if (is_step(Phi)) tags.insert(Fragment::stepWFO);
    if (is_rone(Phi)) tags.insert(Fragment::RoneWFO);
    return tags;
}

std::string fragment_name(Fragment f) {
    switch (f) {
    case Fragment::WFO: return "WFO";
    case Fragment::lrWFO: return "lrWFO";
    case Fragment::rlWFO: return "rlWFO";
    case Fragment::RoneWFO: return "RoneWFO";
    case Fragment::stepWFO: return "step-wFO";
    }
    return "?";
}

// ---------------------------------------------------------------- parsing

namespace {

struct Token {
    enum class Type { Ident, Sym, End };
    Type type;
    std::string text;
    int line, col;
};

std::vector<Token> tokenize(const std::string& text, int first_line = 1) {
    std::vector<Token> out;
    int line = first_line, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t k) {
        for (std::size_t j = 0; j < k; ++j, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
            out.push_back({Token::Type::Ident, text.substr(i, j - i), line, col});
            advance(j - i);
            continue;
        }
        if (c == '<' && i + 1 < text.size() && text[i + 1] == '=') {
            out.push_back({Token::Type::Sym, "<=", line, col});
            advance(2);
            continue;
        }
        if (std::string("()?:+.!&").find(c) != std::string::npos) {
            out.push_back({Token::Type::Sym, std::string(1, c), line, col});
            advance(1);
            continue;
        }
        throw SyntaxError(line, col, std::string("unexpected character '") + c + "'");
    }
    out.push_back({Token::Type::End, "", line, col});
    return out;
}

bool is_keyword(const std::string& s) {
    return s == "zero" || s == "one" || s == "sum" || s == "prodL" || s == "prodR" || s == "forall" || s == "T" ||
           s == "true";
}

bool is_letter_atom(const Token& t, const Token& next) {
    return t.type == Token::Type::Ident && t.text.size() >= 2 && t.text[0] == 'P' && next.text == "(";
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Wfo parse_wfo_all() {
        Wfo f = parse_sum();
        expect_end();
        return f;
    }

    Fo parse_fo_all() {
        Fo f = parse_fo_and();
        expect_end();
        return f;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at(const std::string& s) const { return peek().type != Token::Type::End && peek().text == s; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw SyntaxError(peek().line, peek().col, msg);
    }

    void expect(const std::string& s) {
        if (!at(s)) fail("expected '" + s + "' but found '" + describe(peek()) + "'");
        ++pos_;
    }

    void expect_end() {
        if (peek().type != Token::Type::End) fail("unexpected '" + describe(peek()) + "' after formula");
    }

    static std::string describe(const Token& t) { return t.type == Token::Type::End ? "end of input" : t.text; }

    std::string ident(const char* what) {
        if (peek().type != Token::Type::Ident || is_keyword(peek().text)) fail(std::string("expected ") + what);
        return toks_[pos_++].text;
    }

    // FO grammar: and-chains of unary formulas; forall extends to the right.
    Fo parse_fo_and() {
        Fo f = parse_fo_unary();
        while (at("&")) {
            ++pos_;
            f = fo::conj(f, parse_fo_unary());
        }
        return f;
    }

    Fo parse_fo_unary() {
        if (at("!")) {
            ++pos_;
            return fo::neg(parse_fo_unary());
        }
        if (at("forall")) {
            ++pos_;
            std::string x = ident("variable after 'forall'");
            expect(".");
            return fo::forall(x, parse_fo_and());
        }
        if (at("T") || at("true")) {
            ++pos_;
            return fo::top();
        }
        if (at("(")) {
            ++pos_;
            Fo f = parse_fo_and();
            expect(")");
            return f;
        }
        if (is_letter_atom(peek(), peek(1))) {
            std::string a = toks_[pos_++].text.substr(1);
            expect("(");
            std::string x = ident("variable in letter atom");
            expect(")");
            return fo::letter(a, x);
        }
        if (peek().type == Token::Type::Ident && peek(1).text == "<=") {
            std::string x = ident("variable");
            expect("<=");
            std::string y = ident("variable after '<='");
            return fo::leq(x, y);
        }
        fail("expected a first-order formula but found '" + describe(peek()) + "'");
    }

    bool may_start_guard() const {
        const Token& t = peek();
        if (t.type != Token::Type::Sym && t.type != Token::Type::Ident) return false;
        if (t.text == "!" || t.text == "forall" || t.text == "T" || t.text == "true" || t.text == "(") return true;
        if (is_letter_atom(t, peek(1))) return true;
        return t.type == Token::Type::Ident && peek(1).text == "<=";
    }

    Wfo parse_sum() {
        Wfo f = parse_prod();
        while (at("+")) {
            ++pos_;
            f = wf::plus(f, parse_prod());
        }
        return f;
    }

    Wfo parse_prod() {
        Wfo f = parse_unary();
        while (at(".")) {
            ++pos_;
            f = wf::times(f, parse_unary());
        }
        return f;
    }

    Wfo parse_unary() {
        if (may_start_guard()) {
            std::size_t save = pos_;
            try {
                Fo guard = parse_fo_and();
                if (at("?")) {
                    ++pos_;
                    Wfo t = parse_sum();
                    expect(":");
                    Wfo e = parse_sum();
                    return wf::cond(guard, t, e);
                }
            } catch (const SyntaxError&) {
            }
            pos_ = save;
        }
        if (at("(")) {
            ++pos_;
            Wfo f = parse_sum();
            expect(")");
            return f;
        }
        if (at("zero")) {
            ++pos_;
            return wf::zero();
        }
        if (at("one")) {
            ++pos_;
            return wf::one();
        }
        if (at("sum") || at("prodL") || at("prodR")) {
            std::string kw = toks_[pos_++].text;
            std::string x = ident("variable after binder");
            expect(".");
            Wfo body = parse_sum();
            if (kw == "sum") return wf::sum(x, body);
            if (kw == "prodL") return wf::prod_lr(x, body);
            return wf::prod_rl(x, body);
        }
        if (peek().type == Token::Type::Ident && !is_keyword(peek().text)) return wf::weight(toks_[pos_++].text);
        fail("expected a weighted formula but found '" + describe(peek()) + "'");
    }
};

// Context of a subterm when printing, used to decide on parentheses.
enum class Ctx { Open, SumLeft, SumRight, ProdLeft, ProdRight };

void print_fo(std::ostream& out, const Fo& f, int prec);

void print_fo(std::ostream& out, const Fo& f, int prec) {
    using K = FoNode::Kind;
    switch (f->kind) {
    case K::True: out << "T"; return;
    case K::Letter: out << 'P' << f->letter << '(' << f->var << ')'; return;
    case K::Leq: out << f->var << "<=" << f->var2; return;
    case K::Not: out << '!'; print_fo(out, f->left, 2); return;
    case K::And:
        if (prec > 0) out << '(';
        print_fo(out, f->left, 1);  // a binder on the left would swallow the conjunction
        out << " & ";
        print_fo(out, f->right, 1);
        if (prec > 0) out << ')';
        return;
    case K::Forall:
        if (prec > 0) out << '(';
        out << "forall " << f->var << " . ";
        print_fo(out, f->left, 0);
        if (prec > 0) out << ')';
        return;
    }
}

void print_wfo(std::ostream& out, const Wfo& f, Ctx ctx) {
    using K = WfoNode::Kind;
    switch (f->kind) {
    case K::Zero: out << "zero"; return;
    case K::One: out << "one"; return;
    case K::Const: out << f->weight; return;
    case K::Cond:
        out << '(';
        print_fo(out, f->guard, 1);
        out << " ? ";
        print_wfo(out, f->left, Ctx::Open);
        out << " : ";
        print_wfo(out, f->right, Ctx::Open);
        out << ')';
        return;
    case K::Sum: {
        bool paren = ctx != Ctx::Open && ctx != Ctx::SumLeft;
        if (paren) out << '(';
        print_wfo(out, f->left, Ctx::SumLeft);
        out << " + ";
        print_wfo(out, f->right, Ctx::SumRight);
        if (paren) out << ')';
        return;
    }
    case K::Prod: {
        bool paren = ctx == Ctx::ProdRight;
        if (paren) out << '(';
        print_wfo(out, f->left, Ctx::ProdLeft);
        out << " . ";
        print_wfo(out, f->right, Ctx::ProdRight);
        if (paren) out << ')';
        return;
    }
    case K::SumVar:
    case K::ProdLR:
    case K::ProdRL: {
        bool paren = ctx != Ctx::Open;
        if (paren) out << '(';
        out << (f->kind == K::SumVar ? "sum " : f->kind == K::ProdLR ? "prodL " : "prodR ") << f->var << " . ";
        print_wfo(out, f->left, Ctx::Open);
        if (paren) out << ')';
        return;
    }
    }
}

std::vector<std::string> split_words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

struct Header {
    std::map<std::string, std::vector<std::string>> fields;
    std::string body;
    int body_line = 1;
};

Header split_header(const std::string& text, const std::set<std::string>& keys) {
    Header h;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool in_body = false;
    std::ostringstream body;
    while (std::getline(in, line)) {
        ++lineno;
        if (!in_body) {
            auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos || line[first] == '#') continue;
            auto colon = line.find(':');
            if (colon != std::string::npos) {
                std::string key = line.substr(first, colon - first);
                while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
                if (keys.count(key)) {
                    h.fields[key] = split_words(line.substr(colon + 1));
                    continue;
                }
            }
            in_body = true;
            h.body_line = lineno;
        }
        body << line << '\n';
    }
    h.body = body.str();
    return h;
}

void check_fo_letters(const Fo& f, const std::set<std::string>& letters) {
    if (!f) return;
    if (f->kind == FoNode::Kind::Letter && !letters.count(f->letter))
        throw EvalError("letter '" + f->letter + "' is not in the declared alphabet");
    check_fo_letters(f->left, letters);
    check_fo_letters(f->right, letters);
}

void check_wfo_symbols(const Wfo& f, const std::set<std::string>& letters, const std::set<std::string>& weights) {
    if (!f) return;
    if (f->kind == WfoNode::Kind::Const && !weights.count(f->weight))
        throw EvalError("weight '" + f->weight + "' is not in the declared weight alphabet");
    if (f->guard) check_fo_letters(f->guard, letters);
    check_wfo_symbols(f->left, letters, weights);
    check_wfo_symbols(f->right, letters, weights);
}

} // namespace

Wfo parse_formula(const std::string& text) { return Parser(tokenize(text)).parse_wfo_all(); }

Fo parse_fo(const std::string& text) { return Parser(tokenize(text)).parse_fo_all(); }

std::string format_formula(const Wfo& Phi) {
    std::ostringstream out;
    print_wfo(out, Phi, Ctx::Open);
    return out.str();
}

std::string format_fo(const Fo& phi) {
    std::ostringstream out;
    print_fo(out, phi, 0);
    return out.str();
}

WfoDocument parse_wfo_document(const std::string& text) {
    Header h = split_header(text, {"alphabet", "weights"});
    WfoDocument doc;
    doc.alphabet = h.fields["alphabet"];
    doc.weights = h.fields["weights"];
    doc.formula = Parser(tokenize(h.body, h.body_line)).parse_wfo_all();
    return doc;
}

FoDocument parse_fo_document(const std::string& text) {
    Header h = split_header(text, {"alphabet", "free"});
    FoDocument doc;
    doc.alphabet = h.fields["alphabet"];
    doc.free = h.fields["free"];
    doc.formula = Parser(tokenize(h.body, h.body_line)).parse_fo_all();
    std::set<std::string> letters(doc.alphabet.begin(), doc.alphabet.end());
    check_fo_letters(doc.formula, letters);
    return doc;
}

std::string format_wfo_document(const WfoDocument& doc) {
    std::ostringstream out;
    out << "alphabet:";
    for (const auto& a : doc.alphabet) out << ' ' << a;
    out << "\nweights:";
    for (const auto& k : doc.weights) out << ' ' << k;
    out << '\n' << format_formula(doc.formula) << '\n';
    return out.str();
}

void check_symbols(const WfoDocument& doc) {
    std::set<std::string> letters(doc.alphabet.begin(), doc.alphabet.end());
    std::set<std::string> weights(doc.weights.begin(), doc.weights.end());
    check_wfo_symbols(doc.formula, letters, weights);
}

} // namespace wfo
