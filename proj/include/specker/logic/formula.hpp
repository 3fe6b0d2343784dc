#pragma once

#include <initializer_list>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace specker::logic {

enum class Op {
    And,
    Or,
    Not,
    Implies,
    Forall,
    Exists,
    ForallSet,
    ExistsSet,
    CountMod,
    Rel,
    In,
    Eq,
    Lt,
    True,
    False,
};

/// An individual term: a lowercase variable or a constant element label (1-based).
struct Term {
    std::string var;
    int constant = 0;

    bool is_var() const { return !var.empty(); }
    static Term variable(std::string v) { return Term{std::move(v), 0}; }
    static Term element(int label) { return Term{{}, label}; }
    friend bool operator==(const Term&, const Term&) = default;
};

struct Node;
using Formula = std::shared_ptr<const Node>;

/// Immutable AST node. `var` is the bound variable of quantifiers and cmod;
/// `rel` the relation symbol of Rel atoms or the set variable of In atoms.
struct Node {
    Op op;
    std::vector<Formula> kids;
    std::string var;
    std::string rel;
    std::vector<Term> terms;
    int a = 0;
    int b = 0;
};

namespace build {

inline Formula make(Node n) { return std::make_shared<const Node>(std::move(n)); }

inline Formula top() { return make({Op::True, {}, {}, {}, {}}); }
inline Formula bottom() { return make({Op::False, {}, {}, {}, {}}); }
inline Formula conj(Formula l, Formula r) { return make({Op::And, {std::move(l), std::move(r)}, {}, {}, {}}); }
inline Formula disj(Formula l, Formula r) { return make({Op::Or, {std::move(l), std::move(r)}, {}, {}, {}}); }
inline Formula neg(Formula f) { return make({Op::Not, {std::move(f)}, {}, {}, {}}); }
inline Formula implies(Formula l, Formula r) { return make({Op::Implies, {std::move(l), std::move(r)}, {}, {}, {}}); }
inline Formula iff(const Formula& l, const Formula& r) { return conj(implies(l, r), implies(r, l)); }
inline Formula forall(std::string x, Formula f) { return make({Op::Forall, {std::move(f)}, std::move(x), {}, {}}); }
inline Formula exists(std::string x, Formula f) { return make({Op::Exists, {std::move(f)}, std::move(x), {}, {}}); }
inline Formula forall_set(std::string X, Formula f) { return make({Op::ForallSet, {std::move(f)}, std::move(X), {}, {}}); }
inline Formula exists_set(std::string X, Formula f) { return make({Op::ExistsSet, {std::move(f)}, std::move(X), {}, {}}); }
inline Formula count_mod(int a, int b, std::string x, Formula f) {
    Node n{Op::CountMod, {std::move(f)}, std::move(x), {}, {}};
    n.a = a;
    n.b = b;
    return make(std::move(n));
}

inline Term t(const std::string& v) { return Term::variable(v); }
inline Term t(int label) { return Term::element(label); }

inline Formula rel(std::string r, std::vector<Term> ts) { return make({Op::Rel, {}, {}, std::move(r), std::move(ts)}); }
inline Formula rel(std::string r, const std::string& x) { return rel(std::move(r), std::vector<Term>{t(x)}); }
inline Formula rel(std::string r, const std::string& x, const std::string& y) {
    return rel(std::move(r), std::vector<Term>{t(x), t(y)});
}
inline Formula in(Term x, std::string X) { return make({Op::In, {}, {}, std::move(X), {std::move(x)}}); }
inline Formula in(const std::string& x, std::string X) { return in(t(x), std::move(X)); }
inline Formula eq(Term x, Term y) { return make({Op::Eq, {}, {}, {}, {std::move(x), std::move(y)}}); }
inline Formula eq(const std::string& x, const std::string& y) { return eq(t(x), t(y)); }
inline Formula lt(Term x, Term y) { return make({Op::Lt, {}, {}, {}, {std::move(x), std::move(y)}}); }
inline Formula lt(const std::string& x, const std::string& y) { return lt(t(x), t(y)); }

/// Left-nested conjunction; empty list is `true`.
inline Formula all_of(const std::vector<Formula>& fs) {
    if (fs.empty()) return top();
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
    return acc;
}
/// Left-nested disjunction; empty list is `false`.
inline Formula any_of(const std::vector<Formula>& fs) {
    if (fs.empty()) return bottom();
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
    return acc;
}

}  // namespace build

inline bool is_set_variable(const std::string& name) {
    return !name.empty() && name[0] >= 'A' && name[0] <= 'Z';
}

inline void print_term(std::ostream& os, const Term& t) {
    if (t.is_var())
        os << t.var;
    else
        os << t.constant;
}

inline void print(std::ostream& os, const Formula& f) {
    switch (f->op) {
    case Op::True: os << "true"; return;
    case Op::False: os << "false"; return;
    case Op::And: os << "(and "; break;
    case Op::Or: os << "(or "; break;
    case Op::Not: os << "(not "; break;
    case Op::Implies: os << "(implies "; break;
    case Op::Forall: os << "(forall " << f->var << ' '; break;
    case Op::Exists: os << "(exists " << f->var << ' '; break;
    case Op::ForallSet: os << "(forall-set " << f->var << ' '; break;
    case Op::ExistsSet: os << "(exists-set " << f->var << ' '; break;
    case Op::CountMod: os << "(cmod " << f->a << ' ' << f->b << ' ' << f->var << ' '; break;
    case Op::Rel:
        os << "(rel " << f->rel;
        for (const auto& t : f->terms) {
            os << ' ';
            print_term(os, t);
        }
        os << ')';
        return;
    case Op::In:
        os << "(in ";
        print_term(os, f->terms[0]);
        os << ' ' << f->rel << ')';
        return;
    case Op::Eq:
    case Op::Lt:
        os << (f->op == Op::Eq ? "(= " : "(< ");
        print_term(os, f->terms[0]);
        os << ' ';
        print_term(os, f->terms[1]);
        os << ')';
        return;
    }
    for (std::size_t i = 0; i < f->kids.size(); ++i) {
        if (i) os << ' ';
        print(os, f->kids[i]);
    }
    os << ')';
}

inline std::string to_string(const Formula& f) {
    std::ostringstream os;
    print(os, f);
    return os.str();
}

/// Structural equality.
inline bool same(const Formula& x, const Formula& y) {
    if (x == y) return true;
    if (x->op != y->op || x->var != y->var || x->rel != y->rel || x->terms != y->terms || x->a != y->a ||
        x->b != y->b || x->kids.size() != y->kids.size())
        return false;
    for (std::size_t i = 0; i < x->kids.size(); ++i)
        if (!same(x->kids[i], y->kids[i])) return false;
    return true;
}

inline std::size_t node_count(const Formula& f) {
    std::size_t c = 1;
    for (const auto& k : f->kids) c += node_count(k);
    return c;
}

inline bool uses_order(const Formula& f) {
    if (f->op == Op::Lt) return true;
    for (const auto& k : f->kids)
        if (uses_order(k)) return true;
    return false;
}

inline void collect_relations(const Formula& f, std::set<std::string>& out) {
    if (f->op == Op::Rel) out.insert(f->rel);
    for (const auto& k : f->kids) collect_relations(k, out);
}

/// Free individual and set variables, in order of first occurrence.
inline void free_variables(const Formula& f, std::vector<std::string>& bound, std::vector<std::string>& out) {
    auto note = [&](const std::string& v) {
        for (const auto& b : bound)
            if (b == v) return;
        for (const auto& o : out)
            if (o == v) return;
        out.push_back(v);
    };
    switch (f->op) {
    case Op::Forall:
    case Op::Exists:
    case Op::ForallSet:
    case Op::ExistsSet:
    case Op::CountMod:
        bound.push_back(f->var);
        free_variables(f->kids[0], bound, out);
        bound.pop_back();
        return;
    case Op::In:
        note(f->rel);
        [[fallthrough]];
    case Op::Rel:
    case Op::Eq:
    case Op::Lt:
        for (const auto& t : f->terms)
            if (t.is_var()) note(t.var);
        return;
    default:
        for (const auto& k : f->kids) free_variables(k, bound, out);
    }
}

inline std::vector<std::string> free_variables(const Formula& f) {
    std::vector<std::string> bound, out;
    free_variables(f, bound, out);
    return out;
}

/// Replace every occurrence of relation symbol `from` by `to` (same arity).
inline Formula rename_relation(const Formula& f, const std::string& from, const std::string& to) {
    if (f->op == Op::Rel) {
        if (f->rel != from) return f;
        Node n = *f;
        n.rel = to;
        return build::make(std::move(n));
    }
    if (f->kids.empty()) return f;
    Node n = *f;
    for (auto& k : n.kids) k = rename_relation(k, from, to);
    return build::make(std::move(n));
}

}  // namespace specker::logic
