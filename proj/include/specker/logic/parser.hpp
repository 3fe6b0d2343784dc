#pragma once

#include "specker/logic/formula.hpp"
#include "specker/logic/vocabulary.hpp"

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace specker::logic {

class FormulaError : public std::runtime_error {
public:
    enum class Kind { Syntax, UnknownSymbol, ArityMismatch, UnboundVariable, BadParameter };

    FormulaError(Kind kind, std::size_t position, const std::string& what)
        : std::runtime_error(what + " (at offset " + std::to_string(position) + ")"), kind_(kind), position_(position) {}

    Kind kind() const { return kind_; }
    std::size_t position() const { return position_; }

private:
    Kind kind_;
    std::size_t position_;
};

namespace detail {

struct Token {
    enum Kind { LParen, RParen, Atom, End } kind;
    std::string text;
    std::size_t pos;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ == src_.size()) return {Token::End, {}, pos_};
        std::size_t start = pos_;
        char c = src_[pos_];
        if (c == '(') return ++pos_, Token{Token::LParen, "(", start};
        if (c == ')') return ++pos_, Token{Token::RParen, ")", start};
        while (pos_ < src_.size() && !std::isspace(static_cast<unsigned char>(src_[pos_])) && src_[pos_] != '(' &&
               src_[pos_] != ')')
            ++pos_;
        return {Token::Atom, std::string(src_.substr(start, pos_ - start)), start};
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
};

inline bool is_identifier(const std::string& s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '\'') return false;
    return true;
}

inline bool is_natural(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return s.size() < 10;
}

class Parser {
public:
    Parser(std::string_view text, const Vocabulary& vocab, std::vector<std::string> free)
        : lex_(text), vocab_(vocab), scope_(std::move(free)) {
        advance();
    }

    Formula parse_all() {
        Formula f = formula();
        if (cur_.kind != Token::End) fail(FormulaError::Kind::Syntax, "trailing input '" + cur_.text + "'");
        return f;
    }

private:
    using K = FormulaError::Kind;

    [[noreturn]] void fail(K kind, const std::string& msg) const { throw FormulaError(kind, cur_.pos, msg); }
    [[noreturn]] void fail_at(K kind, std::size_t pos, const std::string& msg) const {
        throw FormulaError(kind, pos, msg);
    }

    void advance() { cur_ = lex_.next(); }

    void expect_rparen() {
        if (cur_.kind != Token::RParen) fail(K::Syntax, "expected ')'");
        advance();
    }

    std::string atom(const char* what) {
        if (cur_.kind != Token::Atom) fail(K::Syntax, std::string("expected ") + what);
        std::string s = cur_.text;
        advance();
        return s;
    }

    bool in_scope(const std::string& v) const {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
            if (*it == v) return true;
        return false;
    }

    std::string individual_binder() {
        std::size_t pos = cur_.pos;
        std::string v = atom("variable");
        if (!is_identifier(v) || is_set_variable(v))
            fail_at(K::Syntax, pos, "individual variables are lowercase identifiers, got '" + v + "'");
        return v;
    }

    std::string set_binder() {
        std::size_t pos = cur_.pos;
        std::string v = atom("set variable");
        if (!is_identifier(v) || !is_set_variable(v))
            fail_at(K::Syntax, pos, "set variables are capitalized identifiers, got '" + v + "'");
        return v;
    }

    int natural(const char* what) {
        std::size_t pos = cur_.pos;
        std::string s = atom(what);
        if (!is_natural(s)) fail_at(K::Syntax, pos, std::string("expected natural number for ") + what);
        (void)pos;
        return std::stoi(s);
    }

    Term term() {
        std::size_t pos = cur_.pos;
        if (cur_.kind != Token::Atom) fail(K::Syntax, "expected term");
        std::string s = atom("term");
        if (is_natural(s)) {
            int v = std::stoi(s);
            if (v < 1) fail_at(K::BadParameter, pos, "element constants are 1-based");
            return Term::element(v);
        }
        if (!is_identifier(s) || is_set_variable(s))
            fail_at(K::Syntax, pos, "expected individual variable or element constant, got '" + s + "'");
        if (!in_scope(s)) fail_at(K::UnboundVariable, pos, "unbound variable '" + s + "'");
        return Term::variable(s);
    }

    Formula quantified(Op op, std::string v) {
        scope_.push_back(v);
        Formula body = formula();
        scope_.pop_back();
        expect_rparen();
        return build::make({op, {std::move(body)}, std::move(v), {}, {}});
    }

    Formula formula() {
        if (cur_.kind == Token::Atom) {
            std::string s = cur_.text;
            if (s == "true") return advance(), build::top();
            if (s == "false") return advance(), build::bottom();
            fail(K::Syntax, "unexpected atom '" + s + "'");
        }
        if (cur_.kind != Token::LParen) fail(K::Syntax, "expected '('");
        advance();
        std::size_t head_pos = cur_.pos;
        std::string head = atom("operator");
        if (head == "and" || head == "or" || head == "implies") {
            Formula l = formula();
            Formula r = formula();
            expect_rparen();
            Op op = head == "and" ? Op::And : head == "or" ? Op::Or : Op::Implies;
            return build::make({op, {std::move(l), std::move(r)}, {}, {}, {}});
        }
        if (head == "not") {
            Formula f = formula();
            expect_rparen();
            return build::neg(std::move(f));
        }
        if (head == "forall") return quantified(Op::Forall, individual_binder());
        if (head == "exists") return quantified(Op::Exists, individual_binder());
        if (head == "forall-set") return quantified(Op::ForallSet, set_binder());
        if (head == "exists-set") return quantified(Op::ExistsSet, set_binder());
        if (head == "cmod") {
            int a = natural("cmod residue");
            int b = natural("cmod modulus");
            if (b < 2 || a >= b) fail_at(K::BadParameter, head_pos, "cmod requires 0 <= a < b and b >= 2");
            std::string v = individual_binder();
            scope_.push_back(v);
            Formula body = formula();
            scope_.pop_back();
            expect_rparen();
            return build::count_mod(a, b, std::move(v), std::move(body));
        }
        if (head == "rel") {
            std::size_t name_pos = cur_.pos;
            std::string name = atom("relation name");
            auto idx = vocab_.find(name);
            if (!idx) fail_at(K::UnknownSymbol, name_pos, "unknown relation symbol '" + name + "'");
            std::vector<Term> ts;
            while (cur_.kind == Token::Atom) ts.push_back(term());
            if (static_cast<int>(ts.size()) != vocab_[*idx].arity)
                fail_at(K::ArityMismatch, head_pos,
                        "relation '" + name + "' has arity " + std::to_string(vocab_[*idx].arity) + " but got " +
                            std::to_string(ts.size()) + " terms");
            expect_rparen();
            return build::rel(std::move(name), std::move(ts));
        }
        if (head == "in") {
            Term x = term();
            std::size_t pos = cur_.pos;
            std::string X = atom("set variable");
            if (!is_identifier(X) || !is_set_variable(X)) fail_at(K::Syntax, pos, "expected set variable");
            if (!in_scope(X)) fail_at(K::UnboundVariable, pos, "unbound set variable '" + X + "'");
            expect_rparen();
            return build::in(std::move(x), std::move(X));
        }
        if (head == "=" || head == "<") {
            Term x = term();
            Term y = term();
            expect_rparen();
            return head == "=" ? build::eq(std::move(x), std::move(y)) : build::lt(std::move(x), std::move(y));
        }
        fail_at(K::Syntax, head_pos, "unknown operator '" + head + "'");
    }

    Lexer lex_;
    const Vocabulary& vocab_;
    std::vector<std::string> scope_;
    Token cur_{Token::End, {}, 0};
};

}  // namespace detail

/// Parse the S-expression surface syntax. `free` lists variables that may
/// occur free (empty for sentences).
inline Formula parse_formula(std::string_view text, const Vocabulary& vocab, std::vector<std::string> free = {}) {
    return detail::Parser(text, vocab, std::move(free)).parse_all();
}

/// Check a programmatically built formula against a vocabulary, with the same
/// error kinds the parser reports (positions are 0).
inline void validate(const Formula& f, const Vocabulary& vocab, std::vector<std::string> scope = {}) {
    using K = FormulaError::Kind;
    auto bound = [&](const std::string& v) {
        for (const auto& s : scope)
            if (s == v) return true;
        return false;
    };
    auto check_term = [&](const Term& t) {
        if (t.is_var() && !bound(t.var)) throw FormulaError(K::UnboundVariable, 0, "unbound variable '" + t.var + "'");
        if (!t.is_var() && t.constant < 1) throw FormulaError(K::BadParameter, 0, "element constants are 1-based");
    };
    switch (f->op) {
    case Op::Rel: {
        auto idx = vocab.find(f->rel);
        if (!idx) throw FormulaError(K::UnknownSymbol, 0, "unknown relation symbol '" + f->rel + "'");
        if (static_cast<int>(f->terms.size()) != vocab[*idx].arity)
            throw FormulaError(K::ArityMismatch, 0, "arity mismatch for '" + f->rel + "'");
        for (const auto& t : f->terms) check_term(t);
        return;
    }
    case Op::In:
        check_term(f->terms[0]);
        if (!bound(f->rel)) throw FormulaError(K::UnboundVariable, 0, "unbound set variable '" + f->rel + "'");
        return;
    case Op::Eq:
    case Op::Lt:
        check_term(f->terms[0]);
        check_term(f->terms[1]);
        return;
    case Op::CountMod:
        if (f->b < 2 || f->a < 0 || f->a >= f->b)
            throw FormulaError(K::BadParameter, 0, "cmod requires 0 <= a < b and b >= 2");
        [[fallthrough]];
    case Op::Forall:
    case Op::Exists:
    case Op::ForallSet:
    case Op::ExistsSet:
        scope.push_back(f->var);
        validate(f->kids[0], vocab, scope);
        scope.pop_back();
        return;
    default:
        for (const auto& k : f->kids) validate(k, vocab, scope);
    }
}

}  // namespace specker::logic
