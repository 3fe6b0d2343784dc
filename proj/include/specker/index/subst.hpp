#pragma once

#include "specker/logic/eval.hpp"
#include "specker/logic/structure.hpp"
#include "specker/logic/vocabulary.hpp"
#include "specker/util.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace specker::index {

using logic::PointedStructure;
using logic::Structure;
using logic::Tuple;
using logic::Vocabulary;

class IndexError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ContextCapExceeded : public IndexError {
public:
    explicit ContextCapExceeded(std::uint64_t cap)
        : IndexError("context enumeration cap of " + std::to_string(cap) + " exceeded"), cap_(cap) {}
    std::uint64_t cap() const { return cap_; }

private:
    std::uint64_t cap_;
};

inline constexpr std::uint64_t kDefaultContextCap = 1000000;

using Membership = std::function<bool(const Structure&)>;

namespace detail {

inline void check_against(const Structure& s, const Vocabulary& vocab) {
    for (const auto& [name, tuples] : s.interp) {
        auto idx = vocab.find(name);
        if (!idx) throw IndexError("vocabulary mismatch: unknown symbol '" + name + "'");
        for (const auto& t : tuples) {
            if (static_cast<int>(t.size()) != vocab[*idx].arity)
                throw IndexError("vocabulary mismatch: arity of '" + name + "'");
            for (int e : t)
                if (e < 1 || e > s.n) throw IndexError("tuple element outside the universe");
        }
    }
}

}  // namespace detail

/// Splices A2 into A1 at A1's point. A1's other elements keep their relative
/// order as 1..n1-1 and A2's elements follow as n1..n1+n2-1. Tuples of A1
/// through the point are copied once for every way of replacing each
/// occurrence of the point, independently, by an element of A2.
inline Structure subst(const PointedStructure& a1, const Structure& a2, const Vocabulary& vocab) {
    const Structure& s1 = a1.base;
    detail::check_against(s1, vocab);
    detail::check_against(a2, vocab);
    if (a1.point < 1 || a1.point > s1.n) throw IndexError("point outside the universe");
    const int n1 = s1.n, n2 = a2.n;
    auto map1 = [&](int e) { return e < a1.point ? e : e - 1; };
    auto map2 = [&](int e) { return n1 - 1 + e; };
    Structure out;
    out.n = n1 + n2 - 1;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        const std::string& name = vocab[i].name;
        auto& rel = out.interp[name];
        for (const auto& t : s1.relation(name)) {
            std::vector<std::size_t> at;
            Tuple base(t.size());
            for (std::size_t k = 0; k < t.size(); ++k) {
                if (t[k] == a1.point)
                    at.push_back(k);
                else
                    base[k] = map1(t[k]);
            }
            if (at.empty()) {
                rel.insert(base);
                continue;
            }
            if (n2 == 0) continue;
            std::vector<int> pick(at.size(), 1);
            for (;;) {
                for (std::size_t j = 0; j < at.size(); ++j) base[at[j]] = map2(pick[j]);
                rel.insert(base);
                std::size_t j = 0;
                while (j < pick.size() && ++pick[j] > n2) pick[j++] = 1;
                if (j == pick.size()) break;
            }
        }
        for (const auto& t : a2.relation(name)) {
            Tuple m(t.size());
            for (std::size_t k = 0; k < t.size(); ++k) m[k] = map2(t[k]);
            rel.insert(m);
        }
        if (rel.empty()) out.interp.erase(name);
    }
    return out;
}

/// Pointed version: the result is pointed at A2's point.
inline PointedStructure subst(const PointedStructure& a1, const PointedStructure& a2, const Vocabulary& vocab) {
    if (a2.point < 1 || a2.point > a2.base.n) throw IndexError("point outside the universe");
    return {subst(a1, a2.base, vocab), a1.base.n - 1 + a2.point};
}

/// Membership in the class of models of a sentence (no order).
class FormulaMembership {
public:
    explicit FormulaMembership(const logic::Formula& phi) : cf_(phi) {
        if (!logic::free_variables(phi).empty()) throw IndexError("membership formula must be a sentence");
        if (cf_.ordered()) throw IndexError("membership formula must not use '<'");
    }
    bool operator()(const Structure& s) const {
        logic::detail::DenseModel dm(cf_, s);
        logic::Evaluator ev(cf_, dm.view);
        return ev.eval() == logic::Truth::True;
    }

private:
    logic::CompiledFormula cf_;
};

/// All structures over `vocab` on [n], in lexicographic order of the
/// concatenated relation bit masks (first symbol, first tuple most significant).
template <class Visit>
bool for_each_structure(const Vocabulary& vocab, int n, Visit&& visit) {
    std::vector<std::pair<std::string, std::vector<Tuple>>> cells;
    std::size_t total = 0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        std::vector<Tuple> tuples;
        int ar = vocab[i].arity;
        std::size_t count = 1;
        for (int k = 0; k < ar; ++k) count *= static_cast<std::size_t>(n);
        for (std::size_t idx = 0; idx < count; ++idx) {
            Tuple t(static_cast<std::size_t>(ar));
            std::size_t rest = idx;
            for (int k = ar - 1; k >= 0; --k) {
                t[static_cast<std::size_t>(k)] = static_cast<int>(rest % static_cast<std::size_t>(n)) + 1;
                rest /= static_cast<std::size_t>(n);
            }
            tuples.push_back(std::move(t));
        }
        total += tuples.size();
        cells.emplace_back(vocab[i].name, std::move(tuples));
    }
    if (total > 40) throw IndexError("too many relation cells to enumerate");
    const std::uint64_t limit = std::uint64_t{1} << total;
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        Structure s;
        s.n = n;
        std::size_t bit = total;
        for (const auto& [name, tuples] : cells) {
            for (const auto& t : tuples) {
                --bit;
                if ((mask >> bit) & 1) s.interp[name].insert(t);
            }
        }
        if (!visit(s)) return false;
    }
    return true;
}

/// Canonical representative of the isomorphism class (minimum over all
/// relabelings of the sorted tuple lists).
inline Structure canonical_form(const Structure& s) {
    std::vector<int> perm = logic::natural_order(s.n);
    std::optional<Structure> best;
    do {
        Structure r = logic::relabel(s, perm);
        r.order.reset();
        if (!best || r.interp < best->interp) best = std::move(r);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return *best;
}

struct Context {
    PointedStructure context;
    bool first_in_class = false;  // whether Subst(D, A1) is in the class
};

struct DistinguishOptions {
    std::uint64_t cap = kDefaultContextCap;
};

/// First pointed context D with |D| <= bound (by size, then relation masks,
/// then point) such that exactly one of Subst(D, A1), Subst(D, A2) is in C.
inline std::optional<Context> distinguish(const Membership& in_class, const Structure& a1, const Structure& a2,
                                          const Vocabulary& vocab, int bound, const DistinguishOptions& opts = {}) {
    std::uint64_t seen = 0;
    std::optional<Context> found;
    for (int m = 1; m <= bound && !found; ++m) {
        for_each_structure(vocab, m, [&](const Structure& d) {
            for (int a = 1; a <= m; ++a) {
                if (++seen > opts.cap) throw ContextCapExceeded(opts.cap);
                PointedStructure pd{d, a};
                bool x = in_class(subst(pd, a1, vocab));
                bool y = in_class(subst(pd, a2, vocab));
                if (x != y) {
                    found = Context{pd, x};
                    return false;
                }
            }
            return true;
        });
    }
    return found;
}

struct IndexReport {
    int size = 0;
    int bound = 0;
    std::size_t candidates = 0;
    std::vector<Structure> representatives;

    std::size_t lower_bound() const { return representatives.size(); }
};

/// Greedy search for pairwise distinguishable structures among all
/// isomorphism types of size 1..size; the count is a lower bound on the
/// number of classes of indistinguishability.
inline IndexReport index_lower_bound(const Membership& in_class, const Vocabulary& vocab, int size, int bound,
                                     const DistinguishOptions& opts = {}) {
    for (std::size_t i = 0; i < vocab.size(); ++i)
        if (vocab[i].arity > 2) throw IndexError("index experiments allow arity at most 2");
    IndexReport rep;
    rep.size = size;
    rep.bound = bound;
    std::vector<Structure> candidates;
    for (int n = 1; n <= size; ++n) {
        std::set<std::map<std::string, std::set<Tuple>>> seen;
        for_each_structure(vocab, n, [&](const Structure& s) {
            Structure c = canonical_form(s);
            if (seen.insert(c.interp).second) candidates.push_back(std::move(c));
            return true;
        });
    }
    rep.candidates = candidates.size();
    for (const auto& c : candidates) {
        bool separated = true;
        for (const auto& r : rep.representatives) {
            if (!distinguish(in_class, c, r, vocab, bound, opts)) {
                separated = false;
                break;
            }
        }
        if (separated) rep.representatives.push_back(c);
    }
    return rep;
}

}  // namespace specker::index
