#pragma once

#include "specker/logic/formula.hpp"
#include "specker/logic/structure.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace specker::logic {

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Kleene truth values: evaluation over partially specified relations.
enum class Truth : std::int8_t { False = 0, True = 1, Unknown = 2 };

inline Truth truth_not(Truth t) {
    return t == Truth::Unknown ? t : (t == Truth::True ? Truth::False : Truth::True);
}

/// A formula lowered to slot-indexed nodes. Every binder owns a slot, so the
/// evaluator needs no name lookups.
class CompiledFormula {
public:
    struct CNode {
        Op op;
        int k0 = -1;
        int k1 = -1;
        int slot = -1;  // bound slot for quantifiers / set slot for In
        int rel = -1;   // relation index for Rel
        int a = 0;
        int b = 0;
        std::vector<int> terms;  // >= 0: individual slot; < 0: constant -label
    };

    explicit CompiledFormula(const Formula& f, const std::vector<std::string>& free = {}) {
        std::vector<std::pair<std::string, int>> scope;
        for (const auto& v : free) {
            int slot = is_set_variable(v) ? set_slots_++ : ind_slots_++;
            scope.emplace_back(v, slot);
            free_.emplace_back(v, slot);
        }
        root_ = lower(f, scope);
    }

    const std::vector<CNode>& nodes() const { return nodes_; }
    int root() const { return root_; }
    int individual_slots() const { return ind_slots_; }
    int set_slots() const { return set_slots_; }
    /// Relation names in first-occurrence order with the arity used in the formula.
    const std::vector<std::pair<std::string, int>>& relations() const { return rels_; }
    const std::vector<std::pair<std::string, int>>& free_slots() const { return free_; }
    bool ordered() const { return ordered_; }
    bool has_set_quantifier() const { return has_set_q_; }

private:
    static int lookup(const std::vector<std::pair<std::string, int>>& scope, const std::string& v) {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (it->first == v) return it->second;
        throw EvalError("missing assignment for variable '" + v + "'");
    }

    int term_code(const Term& t, const std::vector<std::pair<std::string, int>>& scope) {
        if (!t.is_var()) return -t.constant;
        return lookup(scope, t.var);
    }

    int lower(const Formula& f, std::vector<std::pair<std::string, int>>& scope) {
        CNode n;
        n.op = f->op;
        switch (f->op) {
        case Op::Forall:
        case Op::Exists:
        case Op::CountMod:
            n.slot = ind_slots_++;
            n.a = f->a;
            n.b = f->b;
            scope.emplace_back(f->var, n.slot);
            n.k0 = lower(f->kids[0], scope);
            scope.pop_back();
            break;
        case Op::ForallSet:
        case Op::ExistsSet:
            has_set_q_ = true;
            n.slot = set_slots_++;
            scope.emplace_back(f->var, n.slot);
            n.k0 = lower(f->kids[0], scope);
            scope.pop_back();
            break;
        case Op::Rel: {
            int idx = -1;
            for (std::size_t i = 0; i < rels_.size(); ++i)
                if (rels_[i].first == f->rel) idx = static_cast<int>(i);
            if (idx < 0) {
                idx = static_cast<int>(rels_.size());
                rels_.emplace_back(f->rel, static_cast<int>(f->terms.size()));
            } else if (rels_[idx].second != static_cast<int>(f->terms.size())) {
                throw EvalError("relation '" + f->rel + "' used with inconsistent arity");
            }
            n.rel = idx;
            for (const auto& t : f->terms) n.terms.push_back(term_code(t, scope));
            break;
        }
        case Op::In:
            n.terms.push_back(term_code(f->terms[0], scope));
            n.slot = lookup(scope, f->rel);
            break;
        case Op::Lt:
            ordered_ = true;
            [[fallthrough]];
        case Op::Eq:
            n.terms.push_back(term_code(f->terms[0], scope));
            n.terms.push_back(term_code(f->terms[1], scope));
            break;
        case Op::True:
        case Op::False: break;
        default:
            n.k0 = lower(f->kids[0], scope);
            if (f->kids.size() > 1) n.k1 = lower(f->kids[1], scope);
        }
        nodes_.push_back(std::move(n));
        return static_cast<int>(nodes_.size()) - 1;
    }

    std::vector<CNode> nodes_;
    int root_ = -1;
    int ind_slots_ = 0;
    int set_slots_ = 0;
    bool ordered_ = false;
    bool has_set_q_ = false;
    std::vector<std::pair<std::string, int>> rels_;
    std::vector<std::pair<std::string, int>> free_;
};

/// Partially specified interpretation: one cell per (relation, tuple) holding
/// 0, 1 or -1 (unknown). Tuples are indexed in base n with the first
/// coordinate most significant; elements are 0-based here.
struct ModelView {
    int n = 0;
    const int* rank = nullptr;
    const std::int8_t* cells = nullptr;
    std::vector<int> offset;  // per compiled relation; -1 means empty relation
};

/// Evaluates a CompiledFormula under a ModelView. When `watch` is set, the
/// ids of unknown cells read are appended to it; an Unknown result can only
/// change once one of those cells is fixed.
class Evaluator {
public:
    Evaluator(const CompiledFormula& cf, const ModelView& view)
        : cf_(cf), view_(view), ind_(static_cast<std::size_t>(cf.individual_slots()), 0),
          set_(static_cast<std::size_t>(cf.set_slots()), 0) {}

    void bind_individual(int slot, int element0) { ind_[slot] = element0; }
    void bind_set(int slot, std::uint64_t mask) { set_[slot] = mask; }
    std::vector<int>& individuals() { return ind_; }

    Truth eval(int node, std::vector<int>* watch = nullptr) {
        watch_ = watch;
        return go(node);
    }
    Truth eval(std::vector<int>* watch = nullptr) { return eval(cf_.root(), watch); }

private:
    // Element for a term code; -1 when a constant lies outside the universe.
    int element(int code) const {
        if (code >= 0) return ind_[code];
        int label = -code;
        return label <= view_.n ? label - 1 : -1;
    }

    Truth go(int id) {
        const auto& nd = cf_.nodes()[id];
        const int n = view_.n;
        switch (nd.op) {
        case Op::True: return Truth::True;
        case Op::False: return Truth::False;
        case Op::Not: return truth_not(go(nd.k0));
        case Op::And: {
            Truth l = go(nd.k0);
            if (l == Truth::False) return l;
            Truth r = go(nd.k1);
            if (r == Truth::False) return r;
            return (l == Truth::True && r == Truth::True) ? Truth::True : Truth::Unknown;
        }
        case Op::Or: {
            Truth l = go(nd.k0);
            if (l == Truth::True) return l;
            Truth r = go(nd.k1);
            if (r == Truth::True) return r;
            return (l == Truth::False && r == Truth::False) ? Truth::False : Truth::Unknown;
        }
        case Op::Implies: {
            Truth l = go(nd.k0);
            if (l == Truth::False) return Truth::True;
            Truth r = go(nd.k1);
            if (r == Truth::True) return r;
            return (l == Truth::True && r == Truth::False) ? Truth::False : Truth::Unknown;
        }
        case Op::Forall:
        case Op::Exists: {
            const Truth stop = nd.op == Op::Forall ? Truth::False : Truth::True;
            Truth acc = nd.op == Op::Forall ? Truth::True : Truth::False;
            int saved = ind_[nd.slot];
            for (int v = 0; v < n; ++v) {
                ind_[nd.slot] = v;
                Truth t = go(nd.k0);
                if (t == stop) {
                    acc = stop;
                    break;
                }
                if (t == Truth::Unknown) acc = Truth::Unknown;
            }
            ind_[nd.slot] = saved;
            return acc;
        }
        case Op::ForallSet:
        case Op::ExistsSet: {
            if (n > 30) throw EvalError("set quantification over universes larger than 30 is not supported");
            const Truth stop = nd.op == Op::ForallSet ? Truth::False : Truth::True;
            Truth acc = nd.op == Op::ForallSet ? Truth::True : Truth::False;
            std::uint64_t saved = set_[nd.slot];
            const std::uint64_t limit = std::uint64_t{1} << n;
            for (std::uint64_t m = 0; m < limit; ++m) {
                set_[nd.slot] = m;
                Truth t = go(nd.k0);
                if (t == stop) {
                    acc = stop;
                    break;
                }
                if (t == Truth::Unknown) acc = Truth::Unknown;
            }
            set_[nd.slot] = saved;
            return acc;
        }
        case Op::CountMod: {
            int yes = 0, unknown = 0;
            int saved = ind_[nd.slot];
            for (int v = 0; v < n; ++v) {
                ind_[nd.slot] = v;
                Truth t = go(nd.k0);
                if (t == Truth::True)
                    ++yes;
                else if (t == Truth::Unknown)
                    ++unknown;
            }
            ind_[nd.slot] = saved;
            if (unknown == 0) return yes % nd.b == nd.a ? Truth::True : Truth::False;
            bool some_hit = false, some_miss = false;
            for (int c = yes; c <= yes + unknown && !(some_hit && some_miss); ++c)
                (c % nd.b == nd.a ? some_hit : some_miss) = true;
            if (!some_hit) return Truth::False;
            return some_miss ? Truth::Unknown : Truth::True;
        }
        case Op::Rel: {
            int off = view_.offset[nd.rel];
            int idx = 0;
            for (int code : nd.terms) {
                int e = element(code);
                if (e < 0) return Truth::False;
                idx = idx * n + e;
            }
            if (off < 0) return Truth::False;
            std::int8_t c = view_.cells[off + idx];
            if (c < 0) {
                if (watch_) watch_->push_back(off + idx);
                return Truth::Unknown;
            }
            return c ? Truth::True : Truth::False;
        }
        case Op::In: {
            int e = element(nd.terms[0]);
            if (e < 0) return Truth::False;
            return (set_[nd.slot] >> e) & 1u ? Truth::True : Truth::False;
        }
        case Op::Eq: {
            int x = element(nd.terms[0]), y = element(nd.terms[1]);
            if (x < 0 || y < 0) return Truth::False;
            return x == y ? Truth::True : Truth::False;
        }
        case Op::Lt: {
            int x = element(nd.terms[0]), y = element(nd.terms[1]);
            if (x < 0 || y < 0) return Truth::False;
            if (!view_.rank) throw EvalError("formula uses '<' but the structure has no order");
            return view_.rank[x] < view_.rank[y] ? Truth::True : Truth::False;
        }
        }
        return Truth::Unknown;
    }

    const CompiledFormula& cf_;
    const ModelView& view_;
    std::vector<int> ind_;
    std::vector<std::uint64_t> set_;
    std::vector<int>* watch_ = nullptr;
};

/// Values for free variables: individuals by element label, sets by labels.
struct Assignment {
    std::map<std::string, int> individuals;
    std::map<std::string, std::vector<int>> sets;
};

namespace detail {

/// Dense cells for a fully specified structure, laid out for `cf`.
struct DenseModel {
    std::vector<std::int8_t> cells;
    std::vector<int> rank;
    ModelView view;

    DenseModel(const CompiledFormula& cf, const Structure& s) {
        view.n = s.n;
        int total = 0;
        for (const auto& [name, arity] : cf.relations()) {
            view.offset.push_back(total);
            int sz = 1;
            for (int i = 0; i < arity; ++i) sz *= s.n;
            total += sz;
        }
        cells.assign(static_cast<std::size_t>(total), 0);
        for (std::size_t r = 0; r < cf.relations().size(); ++r) {
            for (const auto& t : s.relation(cf.relations()[r].first)) {
                if (static_cast<int>(t.size()) != cf.relations()[r].second)
                    throw EvalError("tuple arity mismatch for '" + cf.relations()[r].first + "'");
                int idx = 0;
                for (int e : t) idx = idx * s.n + (e - 1);
                cells[view.offset[r] + idx] = 1;
            }
        }
        if (s.order) {
            rank.assign(static_cast<std::size_t>(s.n), 0);
            for (int k = 0; k < s.n; ++k) rank[(*s.order)[k] - 1] = k;
        }
        view.cells = cells.data();
        view.rank = s.order ? rank.data() : nullptr;
    }
};

}  // namespace detail

/// Tarski semantics on a finite structure. Set quantifiers range over the 2^n
/// subsets in increasing mask order.
inline bool evaluate(const Formula& phi, const Structure& s, const Assignment& env = {}) {
    std::vector<std::string> free = free_variables(phi);
    CompiledFormula cf(phi, free);
    if (cf.ordered() && !s.order) throw EvalError("formula uses '<' but the structure has no order");
    detail::DenseModel dm(cf, s);
    Evaluator ev(cf, dm.view);
    for (const auto& [name, slot] : cf.free_slots()) {
        if (is_set_variable(name)) {
            auto it = env.sets.find(name);
            if (it == env.sets.end()) throw EvalError("missing assignment for set variable '" + name + "'");
            std::uint64_t mask = 0;
            for (int e : it->second) {
                if (e < 1 || e > s.n) throw EvalError("set assignment outside universe");
                mask |= std::uint64_t{1} << (e - 1);
            }
            ev.bind_set(slot, mask);
        } else {
            auto it = env.individuals.find(name);
            if (it == env.individuals.end()) throw EvalError("missing assignment for variable '" + name + "'");
            if (it->second < 1 || it->second > s.n) throw EvalError("assignment outside universe");
            ev.bind_individual(slot, it->second - 1);
        }
    }
    return ev.eval() == Truth::True;
}

}  // namespace specker::logic
