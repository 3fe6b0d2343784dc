#pragma once

#include "specker/bigint.hpp"
#include "specker/counting/count.hpp"
#include "specker/logic/eval.hpp"
#include "specker/logic/formula.hpp"
#include "specker/logic/vocabulary.hpp"
#include "specker/series/poly.hpp"
#include "specker/words/compile.hpp"
#include "specker/words/transfer.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace specker::construct {

class ConstructError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using logic::Formula;
using series::MPoly;

using StructurePredicate = std::function<bool(const logic::Structure&)>;
using PositionPredicate = std::function<bool(const logic::Structure&, int)>;

/// Condition on the bound relations: a sentence over the bound symbols (and
/// `<` when the polynomial is ordered) or a native predicate.
struct Guard {
    std::optional<Formula> formula;
    StructurePredicate check;
    std::string label;

    static Guard of(Formula f, std::string label = {}) { return {std::move(f), {}, std::move(label)}; }
    static Guard native(StructurePredicate p, std::string label) { return {std::nullopt, std::move(p), std::move(label)}; }
};

/// Product over the positions v with Psi(v) of a weight monomial. A formula
/// Psi has exactly one free individual variable, `var`.
struct Factor {
    std::optional<Formula> formula;
    std::string var = "v";
    PositionPredicate check;
    MPoly weight;

    static Factor of(Formula f, std::string var, MPoly weight) { return {std::move(f), std::move(var), {}, std::move(weight)}; }
    static Factor native(PositionPredicate p, MPoly weight) { return {std::nullopt, "v", std::move(p), std::move(weight)}; }
};

/// Sum over interpretations of the bound symbols satisfying every guard of
/// the product of all factors.
struct SpeckerPolynomial {
    logic::Vocabulary bound;
    std::vector<Guard> guards;
    std::vector<Factor> factors;
    bool ordered = true;

    std::set<std::string> indeterminates() const {
        std::set<std::string> out;
        for (const auto& f : factors)
            for (const auto& x : f.weight.variables()) out.insert(x);
        return out;
    }

    /// Every factor and guard is a formula and every bound symbol is unary.
    bool word_shaped() const {
        for (std::size_t i = 0; i < bound.size(); ++i)
            if (bound[i].arity != 1) return false;
        for (const auto& g : guards)
            if (!g.formula) return false;
        for (const auto& f : factors)
            if (!f.formula) return false;
        return true;
    }

    void check() const {
        for (const auto& f : factors) {
            if (f.weight.terms().size() > 1) throw ConstructError("factor weight must be a single monomial");
            if (f.formula) {
                auto fv = logic::free_variables(*f.formula);
                if (fv.size() > 1 || (fv.size() == 1 && fv[0] != f.var))
                    throw ConstructError("factor formula must have exactly the free variable '" + f.var + "'");
            } else if (!f.check) {
                throw ConstructError("factor without a condition");
            }
        }
        std::set<std::string> declared;
        for (std::size_t i = 0; i < bound.size(); ++i) declared.insert(bound[i].name);
        auto check_refs = [&](const Formula& phi) {
            std::set<std::string> used;
            logic::collect_relations(phi, used);
            for (const auto& r : used)
                if (!declared.count(r)) throw ConstructError("formula refers to undeclared symbol '" + r + "'");
            if (!ordered && logic::uses_order(phi)) throw ConstructError("unordered polynomial uses '<'");
        };
        for (const auto& g : guards) {
            if (g.formula) {
                if (!logic::free_variables(*g.formula).empty()) throw ConstructError("guard formulas must be sentences");
                check_refs(*g.formula);
            } else if (!g.check) {
                throw ConstructError("guard without a condition");
            }
        }
        for (const auto& f : factors)
            if (f.formula) check_refs(*f.formula);
    }
};

enum class PolyEvalMode { Auto, Brute, Dp };

struct PolyEvalOptions {
    PolyEvalMode mode = PolyEvalMode::Auto;
    int brute_limit = 6;  // Auto cross-checks with brute force up to this n
    std::uint64_t budget = counting::kDefaultBudget;
};

namespace detail {

/// Evaluates a one-variable formula at every position of a fixed structure.
class PositionFormula {
public:
    PositionFormula(const Formula& f, const std::string& var) : cf_(f, {var}) {
        for (const auto& [name, slot] : cf_.free_slots())
            if (name == var) slot_ = slot;
    }

    int count(const logic::Structure& s) const {
        logic::detail::DenseModel dm(cf_, s);
        logic::Evaluator ev(cf_, dm.view);
        int c = 0;
        for (int v = 0; v < s.n; ++v) {
            if (slot_ >= 0) ev.bind_individual(slot_, v);
            if (ev.eval() == logic::Truth::True) ++c;
        }
        return c;
    }

private:
    logic::CompiledFormula cf_;
    int slot_ = -1;
};

inline BigInt power(const BigInt& b, int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

inline std::string fresh_name(const std::string& stem, const std::set<std::string>& taken) {
    if (!taken.count(stem)) return stem;
    for (int i = 1;; ++i) {
        std::string s = stem + "_" + std::to_string(i);
        if (!taken.count(s)) return s;
    }
}

}  // namespace detail

inline BigInt eval_specker_polynomial_brute(const SpeckerPolynomial& sp, int n, const std::map<std::string, BigInt>& values,
                                            std::uint64_t budget = counting::kDefaultBudget) {
    sp.check();
    std::vector<BigInt> weight;
    for (const auto& f : sp.factors) weight.push_back(f.weight.eval(values));

    std::vector<Formula> formula_guards;
    std::vector<const Guard*> native_guards;
    for (const auto& g : sp.guards) {
        if (g.formula)
            formula_guards.push_back(*g.formula);
        else
            native_guards.push_back(&g);
    }
    std::vector<std::optional<detail::PositionFormula>> pos;
    for (const auto& f : sp.factors) {
        if (f.formula)
            pos.emplace_back(std::in_place, *f.formula, f.var);
        else
            pos.emplace_back(std::nullopt);
    }

    counting::CountTask task;
    task.phi = logic::build::all_of(formula_guards);
    task.vocab = sp.bound;
    task.n = n;
    task.mode = sp.ordered ? counting::OrderMode::Natural : counting::OrderMode::Unordered;
    if (!sp.ordered && logic::uses_order(task.phi)) throw ConstructError("unordered polynomial uses '<'");
    BigInt total = 0;
    counting::for_each_model(
        task,
        [&](const counting::ModelSearch& m) {
            logic::Structure s = m.structure(sp.bound);
            if (sp.ordered) s.order = logic::natural_order(n);
            for (const Guard* g : native_guards)
                if (!g->check(s)) return;
            BigInt term = 1;
            for (std::size_t j = 0; j < sp.factors.size() && term != 0; ++j) {
                int c = 0;
                if (pos[j]) {
                    c = pos[j]->count(s);
                } else {
                    for (int v = 1; v <= n; ++v)
                        if (sp.factors[j].check(s, v)) ++c;
                }
                term *= detail::power(weight[j], c);
            }
            total += term;
        },
        budget);
    return total;
}

/// Automaton over the bound symbols plus marker tracks; `track[j]` is the
/// track whose set positions are exactly those where factor j applies. A
/// factor of the form v in U reuses U's own track and factors with the same
/// condition share one marker.
struct PolynomialAutomaton {
    words::Dfa dfa;
    std::vector<int> track;
};

inline PolynomialAutomaton specker_polynomial_dfa(const SpeckerPolynomial& sp) {
    using namespace logic::build;
    sp.check();
    for (std::size_t i = 0; i < sp.bound.size(); ++i)
        if (sp.bound[i].arity != 1)
            throw ConstructError("position DP needs unary bound symbols; '" + sp.bound[i].name + "' has arity " +
                                 std::to_string(sp.bound[i].arity));
    if (!sp.word_shaped()) throw ConstructError("position DP needs formula guards and factors");
    std::set<std::string> taken;
    for (std::size_t i = 0; i < sp.bound.size(); ++i) taken.insert(sp.bound[i].name);
    logic::Vocabulary v = sp.bound;
    std::vector<Formula> parts;
    for (const auto& g : sp.guards) parts.push_back(*g.formula);
    PolynomialAutomaton out;
    std::map<std::string, int> marker;
    for (const auto& f : sp.factors) {
        const Formula& psi = *f.formula;
        if (psi->op == logic::Op::Rel && psi->terms.size() == 1 && psi->terms[0].is_var() && psi->terms[0].var == f.var) {
            out.track.push_back(static_cast<int>(sp.bound.index_of(psi->rel)));
            continue;
        }
        std::string key = f.var + ":" + logic::to_string(psi);
        auto it = marker.find(key);
        if (it == marker.end()) {
            std::string mark = detail::fresh_name("Mark" + std::to_string(marker.size()), taken);
            taken.insert(mark);
            v.add(mark, 1);
            parts.push_back(forall(f.var, iff(rel(mark, f.var), psi)));
            it = marker.emplace(key, static_cast<int>(v.size()) - 1).first;
        }
        out.track.push_back(it->second);
    }
    out.dfa = words::compile_word_formula(all_of(parts), v);
    return out;
}

inline BigInt eval_specker_polynomial_dp(const SpeckerPolynomial& sp, int n, const std::map<std::string, BigInt>& values) {
    PolynomialAutomaton pa = specker_polynomial_dfa(sp);
    const words::Dfa& d = pa.dfa;
    std::vector<BigInt> weight;
    for (const auto& f : sp.factors) weight.push_back(f.weight.eval(values));
    std::vector<BigInt> letter_weight(static_cast<std::size_t>(d.letters()), BigInt(1));
    for (int a = 0; a < d.letters(); ++a)
        for (std::size_t j = 0; j < weight.size(); ++j)
            if ((a >> pa.track[j]) & 1) letter_weight[static_cast<std::size_t>(a)] *= weight[j];
    return words::weighted_word_counts(d, letter_weight, n)[static_cast<std::size_t>(n)];
}

/// Auto uses the position DP when the polynomial is word-shaped and brute
/// force otherwise; for small n it runs both and requires agreement.
inline BigInt eval_specker_polynomial(const SpeckerPolynomial& sp, int n, const std::map<std::string, BigInt>& values,
                                      const PolyEvalOptions& opts = {}) {
    if (n < 0) throw ConstructError("negative universe size");
    for (const auto& x : sp.indeterminates())
        if (!values.count(x)) throw ConstructError("unassigned indeterminate '" + x + "'");
    switch (opts.mode) {
        case PolyEvalMode::Brute:
            return eval_specker_polynomial_brute(sp, n, values, opts.budget);
        case PolyEvalMode::Dp:
            return eval_specker_polynomial_dp(sp, n, values);
        case PolyEvalMode::Auto:
            break;
    }
    if (!sp.word_shaped() || !sp.ordered) return eval_specker_polynomial_brute(sp, n, values, opts.budget);
    BigInt dp = eval_specker_polynomial_dp(sp, n, values);
    if (n <= opts.brute_limit) {
        BigInt bf = eval_specker_polynomial_brute(sp, n, values, opts.budget);
        if (bf != dp)
            throw ConstructError("polynomial evaluation lanes disagree at n=" + std::to_string(n) + ": brute force " +
                                 to_string(bf) + ", DP " + to_string(dp));
    }
    return dp;
}

/// Result of substituting integer polynomials for indeterminates: a new
/// polynomial whose value at `constants` (plus the new indeterminates)
/// equals the old value at the substituted polynomials.
struct Substitution {
    SpeckerPolynomial poly;
    std::map<std::string, BigInt> constants;

    std::map<std::string, BigInt> point(std::map<std::string, BigInt> w) const {
        for (const auto& [k, v] : constants) w[k] = v;
        return w;
    }
};

/// Each factor's substituted weight expands to d monomials; the positions of
/// the factor are split into d new unary blocks, one per monomial, and each
/// block gets the monomial's coefficient as a fresh indeterminate and its
/// variables as repeated factors. Indeterminates missing from `h` stay.
inline Substitution substitute_indeterminates(const SpeckerPolynomial& sp, const std::map<std::string, MPoly>& h) {
    using namespace logic::build;
    sp.check();
    Substitution out;
    out.poly.bound = sp.bound;
    out.poly.guards = sp.guards;
    out.poly.ordered = sp.ordered;

    std::set<std::string> taken;
    for (std::size_t i = 0; i < sp.bound.size(); ++i) taken.insert(sp.bound[i].name);
    std::set<std::string> names = sp.indeterminates();
    for (const auto& [z, p] : h)
        for (const auto& w : p.variables()) names.insert(w);

    for (std::size_t j = 0; j < sp.factors.size(); ++j) {
        const Factor& f = sp.factors[j];
        MPoly expanded = f.weight.terms().empty() ? MPoly() : MPoly(f.weight.terms().begin()->second);
        if (!f.weight.terms().empty()) {
            for (const auto& [z, e] : f.weight.terms().begin()->first) {
                auto it = h.find(z);
                MPoly base = it == h.end() ? MPoly::var(z) : it->second;
                expanded *= base.pow(static_cast<unsigned>(e));
            }
        }
        std::vector<std::string> blocks;
        std::vector<std::pair<MPoly::Monomial, BigInt>> terms(expanded.terms().begin(), expanded.terms().end());
        for (std::size_t k = 0; k < terms.size(); ++k) {
            std::string b = detail::fresh_name("Part" + std::to_string(j) + "x" + std::to_string(k), taken);
            taken.insert(b);
            out.poly.bound.add(b, 1);
            blocks.push_back(b);
        }

        // The blocks partition the positions satisfying the factor's condition.
        if (f.formula) {
            std::vector<Formula> in_block, disjoint;
            for (const auto& b : blocks) in_block.push_back(rel(b, f.var));
            for (std::size_t a = 0; a < blocks.size(); ++a)
                for (std::size_t c = a + 1; c < blocks.size(); ++c)
                    disjoint.push_back(neg(conj(rel(blocks[a], f.var), rel(blocks[c], f.var))));
            out.poly.guards.push_back(
                Guard::of(forall(f.var, conj(iff(*f.formula, any_of(in_block)), all_of(disjoint))), "partition"));
        } else {
            PositionPredicate pred = f.check;
            out.poly.guards.push_back(Guard::native(
                [pred, blocks](const logic::Structure& s) {
                    for (int v = 1; v <= s.n; ++v) {
                        int hits = 0;
                        for (const auto& b : blocks) hits += s.holds(b, {v}) ? 1 : 0;
                        if (hits != (pred(s, v) ? 1 : 0)) return false;
                    }
                    return true;
                },
                "partition"));
        }

        for (std::size_t k = 0; k < terms.size(); ++k) {
            const std::string var = "v";
            std::string c = detail::fresh_name("coef" + std::to_string(j) + "x" + std::to_string(k), names);
            names.insert(c);
            out.constants[c] = terms[k].second;
            out.poly.factors.push_back(Factor::of(rel(blocks[k], var), var, MPoly::var(c)));
            for (const auto& [w, e] : terms[k].first)
                for (int rep = 0; rep < e; ++rep) out.poly.factors.push_back(Factor::of(rel(blocks[k], var), var, MPoly::var(w)));
        }
    }
    return out;
}

/// Subsets U of [n] weighted by z^|U|.
inline SpeckerPolynomial subset_polynomial(const std::string& z = "z") {
    SpeckerPolynomial sp;
    sp.bound.add("U", 1);
    sp.factors.push_back(Factor::of(logic::build::rel("U", "v"), "v", MPoly::var(z)));
    return sp;
}

/// Touchard polynomial: equivalence relations E weighted by x per class,
/// counting each class at its first element.
inline SpeckerPolynomial touchard_polynomial(const std::string& x = "x") {
    using namespace logic::build;
    SpeckerPolynomial sp;
    sp.bound.add("E", 2);
    Formula refl = forall("a", rel("E", "a", "a"));
    Formula sym = forall("a", forall("b", implies(rel("E", "a", "b"), rel("E", "b", "a"))));
    Formula trans = forall("a", forall("b", forall("c", implies(conj(rel("E", "a", "b"), rel("E", "b", "c")), rel("E", "a", "c")))));
    sp.guards.push_back(Guard::of(all_of({refl, sym, trans}), "cliques"));
    Formula first = forall("u", implies(lt("u", "v"), neg(rel("E", "u", "v"))));
    sp.factors.push_back(Factor::of(first, "v", MPoly::var(x)));
    return sp;
}

}  // namespace specker::construct
