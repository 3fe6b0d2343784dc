#pragma once

#include "specker/bigint.hpp"
#include "specker/construct/polynomial.hpp"
#include "specker/series/linrec.hpp"

#include <map>
#include <string>
#include <vector>

namespace specker::construct {

/// Labeling of [n] for a recurrence of order r. label[v] for v in 1..n is
/// 0 for S, i in 1..r for U_i, r + i for I_i; label[0] is unused.
struct PathEncoding {
    int n = 0;
    int r = 0;
    std::vector<int> label;

    bool in_S(int v) const { return label[static_cast<std::size_t>(v)] == 0; }
    int u_index(int v) const {
        int l = label[static_cast<std::size_t>(v)];
        return l >= 1 && l <= r ? l : 0;
    }
    int i_index(int v) const {
        int l = label[static_cast<std::size_t>(v)];
        return l > r ? l - r : 0;
    }
    bool on_path(int v) const { return label[static_cast<std::size_t>(v)] != 0; }
};

/// The validity conditions of a recurrence-tree path, checked one by one:
/// partition, n starts the path, exactly one initial condition, initial
/// conditions only inside [r], no path vertex inside [r], each U_i vertex
/// steps i down over skipped elements, and I_k sits at element k.
inline bool satisfies_phi_rec(const PathEncoding& e) {
    const int n = e.n, r = e.r;
    if (static_cast<int>(e.label.size()) != n + 1) return false;
    for (int v = 1; v <= n; ++v) {
        int l = e.label[static_cast<std::size_t>(v)];
        if (l < 0 || l > 2 * r) return false;
    }
    if (n < 1 || e.u_index(n) == 0) return false;
    int initials = 0;
    for (int v = 1; v <= n; ++v) initials += e.i_index(v) ? 1 : 0;
    if (initials != 1) return false;
    for (int v = r + 1; v <= n; ++v)
        if (e.i_index(v)) return false;
    for (int v = 1; v <= std::min(r, n); ++v)
        if (e.u_index(v)) return false;
    for (int v = 1; v <= n; ++v) {
        int i = e.u_index(v);
        if (!i) continue;
        for (int k = 1; k < i; ++k)
            if (v - k < 1 || !e.in_S(v - k)) return false;
        if (v - i < 1 || !e.on_path(v - i)) return false;
    }
    for (int v = 1; v <= n; ++v)
        if (e.i_index(v) && e.i_index(v) != v) return false;
    return true;
}

/// Valid encodings for (r, n), grouped by weight signature: how often each
/// U_i occurs, plus the index of the initial condition reached.
class RecurrenceTree {
public:
    RecurrenceTree(int r, int n) : r_(r), n_(n) {
        if (r < 1) throw ConstructError("recurrence order must be at least 1");
        if (n <= r) return;
        PathEncoding e{n, r, std::vector<int>(static_cast<std::size_t>(n) + 1, 0)};
        dfs(e, n);
    }

    int order() const { return r_; }
    int n() const { return n_; }
    std::size_t paths() const { return paths_; }
    const std::map<std::vector<int>, BigInt>& signatures() const { return sig_; }

    /// Sum over paths of prod f_i^{#U_i} * A_e.
    BigInt evaluate(const std::vector<BigInt>& f, const std::vector<BigInt>& A) const {
        BigInt total = 0;
        for (const auto& [sig, mult] : sig_) {
            BigInt w = mult * A[static_cast<std::size_t>(sig[static_cast<std::size_t>(r_)] - 1)];
            for (int i = 0; i < r_ && w != 0; ++i) w *= detail::power(f[static_cast<std::size_t>(i)], sig[static_cast<std::size_t>(i)]);
            total += w;
        }
        return total;
    }

    /// Every encoding, for inspection.
    template <class Visit>
    void for_each(Visit&& visit) const {
        if (n_ <= r_) return;
        PathEncoding e{n_, r_, std::vector<int>(static_cast<std::size_t>(n_) + 1, 0)};
        walk(e, n_, visit);
    }

private:
    // Builds candidates top-down from n, then accepts each only after the
    // independent validity check.
    template <class Visit>
    void walk(PathEncoding& e, int v, Visit& visit) const {
        if (v <= r_) {
            e.label[static_cast<std::size_t>(v)] = r_ + v;
            if (satisfies_phi_rec(e)) visit(static_cast<const PathEncoding&>(e));
            e.label[static_cast<std::size_t>(v)] = 0;
            return;
        }
        for (int i = 1; i <= r_; ++i) {
            e.label[static_cast<std::size_t>(v)] = i;
            walk(e, v - i, visit);
        }
        e.label[static_cast<std::size_t>(v)] = 0;
    }

    void dfs(PathEncoding& e, int v) {
        auto record = [this](const PathEncoding& p) {
            std::vector<int> sig(static_cast<std::size_t>(r_) + 1, 0);
            for (int u = 1; u <= p.n; ++u) {
                if (int i = p.u_index(u)) ++sig[static_cast<std::size_t>(i - 1)];
                if (int k = p.i_index(u)) sig[static_cast<std::size_t>(r_)] = k;
            }
            sig_[sig] += 1;
            ++paths_;
        };
        walk(e, v, record);
    }

    int r_;
    int n_;
    std::size_t paths_ = 0;
    std::map<std::vector<int>, BigInt> sig_;
};

/// Folds a preperiod into extra zero coefficients so the recurrence holds
/// right after its initial values, and moves the index base to 1.
inline series::LinRec flatten_recurrence(const series::LinRec& rec) {
    rec.check();
    if (rec.modulus != 0) throw ConstructError("modular recurrences are not supported here");
    if (rec.base > 1) throw ConstructError("recurrence values below index " + std::to_string(rec.base) + " are unknown");
    series::LinRec out = rec;
    out.coeffs.resize(rec.coeffs.size() + static_cast<std::size_t>(rec.preperiod), BigInt(0));
    out.preperiod = 0;
    if (rec.base < 1) {
        auto terms = series::generate(rec, 1 - rec.base + static_cast<int>(out.coeffs.size()));
        out.initials.assign(terms.begin() + (1 - rec.base), terms.end());
        out.base = 1;
    }
    return out;
}

/// Value at n as a sum over recurrence-tree paths. Indices inside the
/// initial block are read directly.
inline BigInt encode_recurrence_paths(const series::LinRec& rec, int n) {
    series::LinRec flat = flatten_recurrence(rec);
    if (n < 1) throw ConstructError("path encoding starts at index 1");
    const int r = flat.order();
    if (n <= r) return flat.initials[static_cast<std::size_t>(n - 1)];
    return RecurrenceTree(r, n).evaluate(flat.coeffs, flat.initials);
}

inline BigInt encode_recurrence_paths(const series::PolyLinRec& rec, int n, const std::map<std::string, BigInt>& values) {
    return encode_recurrence_paths(series::evaluate_at(rec, values), n);
}

/// The path sum as a Specker polynomial over unary U_i, I_i with
/// indeterminates z1..z2r; the guard is the native validity check.
inline SpeckerPolynomial path_polynomial(int r) {
    using namespace logic::build;
    SpeckerPolynomial sp;
    for (int i = 1; i <= r; ++i) sp.bound.add("U" + std::to_string(i), 1);
    for (int i = 1; i <= r; ++i) sp.bound.add("I" + std::to_string(i), 1);
    sp.guards.push_back(Guard::native(
        [r](const logic::Structure& s) {
            PathEncoding e{s.n, r, std::vector<int>(static_cast<std::size_t>(s.n) + 1, 0)};
            for (int v = 1; v <= s.n; ++v) {
                int hits = 0;
                for (int i = 1; i <= r; ++i) {
                    if (s.holds("U" + std::to_string(i), {v})) e.label[static_cast<std::size_t>(v)] = i, ++hits;
                    if (s.holds("I" + std::to_string(i), {v})) e.label[static_cast<std::size_t>(v)] = r + i, ++hits;
                }
                if (hits > 1) return false;
            }
            return satisfies_phi_rec(e);
        },
        "phi_rec"));
    for (int i = 1; i <= r; ++i)
        sp.factors.push_back(Factor::of(rel("U" + std::to_string(i), "v"), "v", MPoly::var("z" + std::to_string(i))));
    for (int i = 1; i <= r; ++i)
        sp.factors.push_back(Factor::of(rel("I" + std::to_string(i), "v"), "v", MPoly::var("z" + std::to_string(r + i))));
    return sp;
}

}  // namespace specker::construct
