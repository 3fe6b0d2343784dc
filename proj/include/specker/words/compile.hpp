#pragma once

#include "specker/logic/formula.hpp"
#include "specker/logic/vocabulary.hpp"
#include "specker/words/dfa.hpp"

#include <string>
#include <vector>

namespace specker::words {

using logic::Formula;
using logic::Op;
using logic::Vocabulary;

namespace detail {

// Tracks 0..s-1 carry the unary symbols; each enclosing binder adds one
// track on top, innermost highest.
class WordCompiler {
public:
    explicit WordCompiler(const Vocabulary& vocab) : vocab_(vocab) {
        if (!vocab.all_unary()) throw DfaError("word compilation needs unary symbols only");
        if (vocab.size() > 16) throw DfaError("too many unary symbols for an explicit alphabet");
    }

    Dfa compile(const Formula& f) {
        if (!logic::free_variables(f).empty()) throw DfaError("word compilation needs a sentence");
        return minimize(go(f));
    }

private:
    int tracks() const { return static_cast<int>(vocab_.size() + scope_.size()); }

    int track_of(const logic::Term& t) const {
        if (!t.is_var()) throw DfaError("element constants are not supported in word formulas");
        return track_of(t.var);
    }
    int track_of(const std::string& v) const {
        for (std::size_t i = scope_.size(); i-- > 0;)
            if (scope_[i] == v) return static_cast<int>(vocab_.size() + i);
        throw DfaError("unbound variable '" + v + "'");
    }

    // Every position with bit x set also has bit y set (2 states).
    Dfa implies_at_positions(int x, int y, bool y_negated = false) const {
        Dfa d;
        d.tracks = tracks();
        int ok = d.add_state(true), sink = d.add_state(false);
        for (int c = 0; c < d.letters(); ++c) {
            bool xs = (c >> x) & 1, ys = ((c >> y) & 1) != y_negated;
            d.delta[0][static_cast<std::size_t>(c)] = xs && !ys ? sink : ok;
            d.delta[1][static_cast<std::size_t>(c)] = sink;
        }
        return d;
    }

    // Bits x and y agree everywhere.
    Dfa same_positions(int x, int y) const {
        Dfa d;
        d.tracks = tracks();
        int ok = d.add_state(true), sink = d.add_state(false);
        for (int c = 0; c < d.letters(); ++c) {
            d.delta[0][static_cast<std::size_t>(c)] = ((c >> x) & 1) == ((c >> y) & 1) ? ok : sink;
            d.delta[1][static_cast<std::size_t>(c)] = sink;
        }
        return d;
    }

    // The x position comes strictly before the y position.
    Dfa before(int x, int y) const {
        Dfa d;
        d.tracks = tracks();
        int none = d.add_state(false), seen_x = d.add_state(false), done = d.add_state(true), sink = d.add_state(false);
        for (int c = 0; c < d.letters(); ++c) {
            bool xs = (c >> x) & 1, ys = (c >> y) & 1;
            auto at = [&](int q) -> int& { return d.delta[static_cast<std::size_t>(q)][static_cast<std::size_t>(c)]; };
            at(none) = ys ? sink : xs ? seen_x : none;
            at(seen_x) = ys && !xs ? done : xs ? sink : seen_x;
            at(done) = xs || ys ? sink : done;
            at(sink) = sink;
        }
        return d;
    }

    // Exactly one position carries bit t.
    Dfa exactly_one(int t) const {
        Dfa d;
        d.tracks = tracks();
        int zero = d.add_state(false), one = d.add_state(true), sink = d.add_state(false);
        for (int c = 0; c < d.letters(); ++c) {
            bool b = (c >> t) & 1;
            d.delta[static_cast<std::size_t>(zero)][static_cast<std::size_t>(c)] = b ? one : zero;
            d.delta[static_cast<std::size_t>(one)][static_cast<std::size_t>(c)] = b ? sink : one;
            d.delta[static_cast<std::size_t>(sink)][static_cast<std::size_t>(c)] = sink;
        }
        return d;
    }

    // Number of positions with bit t is congruent to a mod b.
    Dfa count_mod(int t, int a, int b) const {
        Dfa d;
        d.tracks = tracks();
        for (int r = 0; r < b; ++r) d.add_state(r == a);
        for (int r = 0; r < b; ++r)
            for (int c = 0; c < d.letters(); ++c)
                d.delta[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = ((c >> t) & 1) ? (r + 1) % b : r;
        return d;
    }

    Dfa exists_top(Dfa body, bool first_order) {
        if (first_order) body = product(body, exactly_one(tracks() - 1), BoolOp::And);
        return minimize(project_top(minimize(body)));
    }

    Dfa bind(const std::string& v, const Formula& body, bool first_order, bool universal) {
        scope_.push_back(v);
        Dfa inner = go(body);
        if (universal) inner = complement(inner);
        Dfa r = exists_top(std::move(inner), first_order);
        scope_.pop_back();
        return universal ? complement(r) : r;
    }

    Dfa go(const Formula& f) {
        switch (f->op) {
        case Op::True: return constant_dfa(tracks(), true);
        case Op::False: return constant_dfa(tracks(), false);
        case Op::Not: return complement(go(f->kids[0]));
        case Op::And: return minimize(product(go(f->kids[0]), go(f->kids[1]), BoolOp::And));
        case Op::Or: return minimize(product(go(f->kids[0]), go(f->kids[1]), BoolOp::Or));
        case Op::Implies: return minimize(product(go(f->kids[0]), go(f->kids[1]), BoolOp::Implies));
        case Op::Exists: return bind(f->var, f->kids[0], true, false);
        case Op::Forall: return bind(f->var, f->kids[0], true, true);
        case Op::ExistsSet: return bind(f->var, f->kids[0], false, false);
        case Op::ForallSet: return bind(f->var, f->kids[0], false, true);
        case Op::CountMod: {
            // exists T: (forall x: x in T <-> psi) and |T| = a mod b
            scope_.push_back(kCounterTrack);
            const int T = tracks() - 1;
            scope_.push_back(f->var);
            Dfa psi = go(f->kids[0]);
            Dfa mark = implies_at_positions(tracks() - 1, T);
            Dfa agree = minimize(product(mark, psi, BoolOp::Iff));
            Dfa all = complement(exists_top(complement(agree), true));
            scope_.pop_back();
            Dfa counted = minimize(product(all, count_mod(T, f->a, f->b), BoolOp::And));
            Dfa r = exists_top(std::move(counted), false);
            scope_.pop_back();
            return r;
        }
        case Op::Rel: {
            auto idx = vocab_.find(f->rel);
            if (!idx) throw DfaError("unknown symbol '" + f->rel + "'");
            if (f->terms.size() != 1) throw DfaError("symbol '" + f->rel + "' is not unary");
            return implies_at_positions(track_of(f->terms[0]), static_cast<int>(*idx));
        }
        case Op::In: return implies_at_positions(track_of(f->terms[0]), track_of(f->rel));
        case Op::Eq: return same_positions(track_of(f->terms[0]), track_of(f->terms[1]));
        case Op::Lt: return before(track_of(f->terms[0]), track_of(f->terms[1]));
        }
        throw DfaError("unsupported construct");
    }

    static constexpr const char* kCounterTrack = "#count";
    const Vocabulary& vocab_;
    std::vector<std::string> scope_;
};

}  // namespace detail

/// Minimal DFA accepting exactly the words w in (2^s)^n whose structure
/// <[n], <_nat, R(w)> satisfies phi; letter bit i is symbol i of `vocab`.
inline Dfa compile_word_formula(const Formula& phi, const Vocabulary& vocab) {
    return detail::WordCompiler(vocab).compile(phi);
}

}  // namespace specker::words
