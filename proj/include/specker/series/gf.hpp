#pragma once

#include "specker/bigint.hpp"
#include "specker/series/bm.hpp"
#include "specker/series/linrec.hpp"
#include "specker/series/matrix.hpp"
#include "specker/series/poly.hpp"

#include <cctype>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace specker::series {

/// P(x) / Q(x) with Q(0) = 1. Q keeps its full length d + 1 and P its full
/// length d + preperiod so that conversions to and from LinRec round-trip.
struct RationalGF {
    Poly P;
    Poly Q;
    friend bool operator==(const RationalGF&, const RationalGF&) = default;
};

/// First `count` coefficients of P/Q.
inline std::vector<BigInt> expand(const RationalGF& g, int count) {
    if (g.Q.empty() || g.Q[0] != 1) throw LinRecError("denominator must satisfy Q(0) = 1");
    std::vector<BigInt> f(static_cast<std::size_t>(std::max(count, 0)), 0);
    for (int n = 0; n < count; ++n) {
        BigInt v = static_cast<std::size_t>(n) < g.P.size() ? g.P[static_cast<std::size_t>(n)] : BigInt(0);
        for (std::size_t j = 1; j < g.Q.size() && j <= static_cast<std::size_t>(n); ++j)
            v -= g.Q[j] * f[static_cast<std::size_t>(n) - j];
        f[static_cast<std::size_t>(n)] = v;
    }
    return f;
}

inline RationalGF gf_from_linrec(const LinRec& rec) {
    rec.check();
    if (rec.base != 0) throw LinRecError("generating functions need index base 0");
    if (rec.modulus != 0) throw LinRecError("generating functions need a recurrence over Z");
    RationalGF g;
    g.Q.push_back(1);
    for (const auto& a : rec.coeffs) g.Q.push_back(-a);
    const std::size_t len = rec.initials.size();
    Poly prod = poly_mul(g.Q, rec.initials);
    g.P.assign(prod.begin(), prod.begin() + static_cast<std::ptrdiff_t>(len));
    return g;
}

inline LinRec gf_to_linrec(const RationalGF& g) {
    if (g.Q.empty() || g.Q[0] != 1) throw LinRecError("denominator must satisfy Q(0) = 1");
    RationalGF h = g;
    if (h.Q.size() < 2) h.Q.push_back(0);
    const int d = static_cast<int>(h.Q.size()) - 1;
    LinRec rec;
    for (int j = 1; j <= d; ++j) rec.coeffs.push_back(-h.Q[static_cast<std::size_t>(j)]);
    rec.preperiod = std::max(0, static_cast<int>(h.P.size()) - d);
    rec.initials = expand(h, d + rec.preperiod);
    return rec;
}

// ---- rational expressions ----

struct RationalExpr;
using RationalExprPtr = std::shared_ptr<const RationalExpr>;

/// Expression over integer polynomials in x with +, -, *, and star.
struct RationalExpr {
    enum class Kind { Poly, Sum, Difference, Product, Star } kind = Kind::Poly;
    series::Poly poly;
    RationalExprPtr left, right;

    static RationalExprPtr leaf(series::Poly p) {
        auto e = std::make_shared<RationalExpr>();
        e->poly = std::move(p);
        return e;
    }
    static RationalExprPtr binary(Kind k, RationalExprPtr l, RationalExprPtr r) {
        auto e = std::make_shared<RationalExpr>();
        e->kind = k;
        e->left = std::move(l);
        e->right = std::move(r);
        return e;
    }
    static RationalExprPtr star(RationalExprPtr f) { return binary(Kind::Star, std::move(f), nullptr); }
};

class SeriesError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<BigInt> truncate(const Poly& p, std::size_t len) {
    std::vector<BigInt> r(len, 0);
    for (std::size_t i = 0; i < p.size() && i < len; ++i) r[i] = p[i];
    return r;
}

inline std::vector<BigInt> series_mul(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
    const std::size_t len = a.size();
    std::vector<BigInt> r(len, 0);
    for (std::size_t i = 0; i < len; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; i + j < len; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

inline std::vector<BigInt> eval_expr(const RationalExpr& e, std::size_t len) {
    using K = RationalExpr::Kind;
    switch (e.kind) {
    case K::Poly: return truncate(e.poly, len);
    case K::Sum:
    case K::Difference: {
        auto a = eval_expr(*e.left, len), b = eval_expr(*e.right, len);
        for (std::size_t i = 0; i < len; ++i) a[i] += e.kind == K::Sum ? b[i] : BigInt(-b[i]);
        return a;
    }
    case K::Product: return series_mul(eval_expr(*e.left, len), eval_expr(*e.right, len));
    case K::Star: {
        auto f = eval_expr(*e.left, len);
        if (len > 0 && f[0] != 0) throw SeriesError("star of a series with nonzero constant term");
        // G = 1 + F G, solved coefficient by coefficient
        std::vector<BigInt> g(len, 0);
        for (std::size_t n = 0; n < len; ++n) {
            BigInt v = n == 0 ? BigInt(1) : BigInt(0);
            for (std::size_t j = 1; j <= n; ++j) v += f[j] * g[n - j];
            g[n] = v;
        }
        return g;
    }
    }
    return {};
}

// sum := prod (('+'|'-') prod)* ; prod := unary ('*' unary)* ; unary := '-' unary | pow ;
// pow := atom ('^' nat)? ; atom := nat | 'x' | '(' sum ')' | 'star' '(' sum ')'
class ExprParser {
public:
    explicit ExprParser(std::string_view s) : s_(s) {}
    RationalExprPtr parse() {
        auto e = sum();
        skip();
        if (i_ != s_.size()) fail("unexpected character");
        return e;
    }

private:
    using K = RationalExpr::Kind;
    [[noreturn]] void fail(const std::string& m) const {
        throw SeriesError(m + " at position " + std::to_string(i_) + " in '" + std::string(s_) + "'");
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    RationalExprPtr sum() {
        auto e = prod();
        for (;;) {
            if (eat('+'))
                e = RationalExpr::binary(K::Sum, e, prod());
            else if (eat('-'))
                e = RationalExpr::binary(K::Difference, e, prod());
            else
                return e;
        }
    }
    RationalExprPtr prod() {
        auto e = unary();
        while (eat('*')) e = RationalExpr::binary(K::Product, e, unary());
        return e;
    }
    RationalExprPtr unary() {
        if (eat('-')) return RationalExpr::binary(K::Difference, RationalExpr::leaf({}), unary());
        return power();
    }
    RationalExprPtr power() {
        auto base = atom();
        if (!eat('^')) return base;
        skip();
        std::size_t start = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (start == i_) fail("expected exponent");
        unsigned e = static_cast<unsigned>(std::stoul(std::string(s_.substr(start, i_ - start))));
        auto r = RationalExpr::leaf({1});
        for (unsigned k = 0; k < e; ++k) r = RationalExpr::binary(K::Product, r, base);
        return r;
    }
    RationalExprPtr atom() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end of input");
        if (eat('(')) {
            auto e = sum();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(s_[i_]))) {
            std::size_t start = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            return RationalExpr::leaf({BigInt(std::string(s_.substr(start, i_ - start)))});
        }
        if (s_.substr(i_, 4) == "star") {
            i_ += 4;
            if (!eat('(')) fail("expected '(' after star");
            auto e = sum();
            if (!eat(')')) fail("expected ')'");
            return RationalExpr::star(e);
        }
        if (s_[i_] == 'x') {
            ++i_;
            return RationalExpr::leaf({0, 1});
        }
        fail("unexpected character");
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

}  // namespace detail

/// Coefficients 0..N of the expression as a power series in x.
inline std::vector<BigInt> eval_rational_expr(const RationalExpr& e, int N) {
    if (N < 0) throw SeriesError("N must be nonnegative");
    return detail::eval_expr(e, static_cast<std::size_t>(N) + 1);
}

inline RationalExprPtr parse_rational_expr(std::string_view text) { return detail::ExprParser(text).parse(); }

// ---- combining recurrences ----

/// Same sequence and coefficients with the smallest preperiod that still
/// generates it (checked on 2 * (order + preperiod) + 8 terms).
inline LinRec tighten_preperiod(const LinRec& rec) {
    const int len = 2 * (rec.order() + rec.preperiod) + 8;
    auto terms = generate(rec, len);
    for (int p = 0; p < rec.preperiod; ++p) {
        LinRec r = rec;
        r.preperiod = p;
        r.initials.assign(terms.begin(), terms.begin() + rec.order() + p);
        if (generate(r, len) == terms) return r;
    }
    return rec;
}

enum class CombineOp { Sum, Difference, Hadamard };

/// Recurrence for the termwise sum, difference or product of two integer
/// sequences. Sum and difference use (P1 Q2 +- P2 Q1) / (Q1 Q2); the product
/// uses the characteristic polynomial of the Kronecker product of the
/// companion matrices. The result is checked on 2 * order + 8 terms.
inline LinRec combine_recurrences(CombineOp op, const LinRec& r1, const LinRec& r2) {
    r1.check();
    r2.check();
    if (r1.base != 0 || r2.base != 0) throw LinRecError("combining needs index base 0");
    if (r1.modulus != 0 || r2.modulus != 0) throw LinRecError("combining needs recurrences over Z");
    LinRec out;
    if (op == CombineOp::Hadamard) {
        Poly cp = charpoly(kronecker(companion(r1.coeffs), companion(r2.coeffs)));
        const std::size_t D = cp.size() - 1;  // monic: x^D - sum b_j x^(D-j)
        for (std::size_t j = 1; j <= D; ++j) out.coeffs.push_back(-cp[D - j]);
        // state vectors of both factors exist and evolve linearly from this index on
        out.preperiod = std::max(r1.order() + r1.preperiod, r2.order() + r2.preperiod) - 1;
        auto a = generate(r1, static_cast<int>(D) + out.preperiod);
        auto b = generate(r2, static_cast<int>(D) + out.preperiod);
        for (std::size_t i = 0; i < a.size(); ++i) out.initials.push_back(a[i] * b[i]);
    } else {
        RationalGF g1 = gf_from_linrec(r1), g2 = gf_from_linrec(r2);
        int sign = op == CombineOp::Sum ? 1 : -1;
        RationalGF g{poly_add(poly_mul(g1.P, g2.Q), poly_mul(g2.P, g1.Q), sign), poly_mul(g1.Q, g2.Q)};
        // P keeps the length implied by both preperiods
        std::size_t want = g.Q.size() - 1 + static_cast<std::size_t>(std::max(r1.preperiod, r2.preperiod));
        g.P = trimmed(g.P);
        if (g.P.size() < want) g.P.resize(want, 0);
        out = gf_to_linrec(g);
    }
    out = tighten_preperiod(out);
    const int check = 2 * (out.order() + out.preperiod) + 8;
    auto a = generate(r1, check), b = generate(r2, check), c = generate(out, check);
    for (int i = 0; i < check; ++i) {
        BigInt want = op == CombineOp::Sum ? a[i] + b[i] : op == CombineOp::Difference ? a[i] - b[i] : a[i] * b[i];
        if (c[static_cast<std::size_t>(i)] != want)
            throw LinRecError("combined recurrence failed validation at n = " + std::to_string(i));
    }
    return out;
}

}  // namespace specker::series
