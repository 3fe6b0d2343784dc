#pragma once

#include "specker/logic/vocabulary.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace specker::logic {

using Tuple = std::vector<int>;

/// Finite relational structure on the universe [n] = {1..n}. `order`, when
/// present, lists the elements from <-least to <-greatest.
struct Structure {
    int n = 0;
    std::map<std::string, std::set<Tuple>> interp;
    std::optional<std::vector<int>> order;

    const std::set<Tuple>& relation(const std::string& name) const {
        static const std::set<Tuple> empty;
        auto it = interp.find(name);
        return it == interp.end() ? empty : it->second;
    }

    bool holds(const std::string& name, const Tuple& t) const { return relation(name).count(t) > 0; }

    friend bool operator==(const Structure&, const Structure&) = default;
};

struct PointedStructure {
    Structure base;
    int point = 1;

    friend bool operator==(const PointedStructure&, const PointedStructure&) = default;
};

inline bool is_permutation_of_universe(const std::vector<int>& order, int n) {
    if (static_cast<int>(order.size()) != n) return false;
    std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
    for (int e : order) {
        if (e < 1 || e > n || seen[e]) return false;
        seen[e] = 1;
    }
    return true;
}

inline std::vector<int> natural_order(int n) {
    std::vector<int> o(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) o[i] = i + 1;
    return o;
}

/// Throws std::invalid_argument when a tuple leaves the universe, has the
/// wrong arity for `vocab`, or the order is not a permutation.
inline void check_structure(const Structure& s, const Vocabulary* vocab = nullptr) {
    if (s.n < 0) throw std::invalid_argument("negative universe size");
    for (const auto& [name, tuples] : s.interp) {
        std::optional<int> arity;
        if (vocab) {
            auto idx = vocab->find(name);
            if (!idx) throw std::invalid_argument("structure interprets unknown symbol '" + name + "'");
            arity = (*vocab)[*idx].arity;
        }
        for (const auto& t : tuples) {
            if (arity && static_cast<int>(t.size()) != *arity)
                throw std::invalid_argument("tuple arity mismatch for '" + name + "'");
            if (!arity) arity = static_cast<int>(t.size());
            if (static_cast<int>(t.size()) != *arity) throw std::invalid_argument("mixed tuple arities in '" + name + "'");
            for (int e : t)
                if (e < 1 || e > s.n) throw std::invalid_argument("tuple entry outside universe in '" + name + "'");
        }
    }
    if (s.order && !is_permutation_of_universe(*s.order, s.n))
        throw std::invalid_argument("order is not a permutation of the universe");
}

/// Relabel every element e to perm[e-1] (perm is a permutation of [n]).
inline Structure relabel(const Structure& s, const std::vector<int>& perm) {
    Structure r;
    r.n = s.n;
    for (const auto& [name, tuples] : s.interp) {
        auto& out = r.interp[name];
        for (auto t : tuples) {
            for (int& e : t) e = perm[e - 1];
            out.insert(std::move(t));
        }
    }
    if (s.order) {
        std::vector<int> o = *s.order;
        for (int& e : o) e = perm[e - 1];
        r.order = std::move(o);
    }
    return r;
}

/// Brute-force isomorphism test over all n! bijections; with points given,
/// the bijection must map one to the other.
inline bool isomorphic(const Structure& a, const Structure& b, std::optional<int> pa = {}, std::optional<int> pb = {}) {
    if (a.n != b.n) return false;
    std::set<std::string> names;
    for (const auto& [k, v] : a.interp)
        if (!v.empty()) names.insert(k);
    for (const auto& [k, v] : b.interp)
        if (!v.empty()) names.insert(k);
    for (const auto& nm : names)
        if (a.relation(nm).size() != b.relation(nm).size()) return false;
    std::vector<int> perm = natural_order(a.n);
    do {
        if (pa && pb && perm[*pa - 1] != *pb) continue;
        bool ok = true;
        for (const auto& nm : names) {
            const auto& rb = b.relation(nm);
            for (auto t : a.relation(nm)) {
                for (int& e : t) e = perm[e - 1];
                if (!rb.count(t)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) break;
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace specker::logic
