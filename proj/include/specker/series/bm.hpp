#pragma once

#include "specker/bigint.hpp"
#include "specker/series/linrec.hpp"

#include <boost/integer/common_factor.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace specker::series {

/// The prefix is too short for the recurrence found so far to be trusted.
class UnstableRecurrence : public std::runtime_error {
public:
    UnstableRecurrence(int order, std::size_t length)
        : std::runtime_error("prefix of length " + std::to_string(length) + " cannot certify a recurrence of order " +
                             std::to_string(order)),
          order_(order) {}
    int order() const { return order_; }

private:
    int order_;
};

struct BmResult {
    LinRec rec;                       // meaningful when `integral`
    std::vector<Rational> rational;   // a_1..a_d over Q
    BigInt denominator = 1;           // lcm of the denominators of a_j
    bool integral = true;
    int complexity = 0;               // linear complexity L
};

namespace detail {

// Connection polynomial C and linear complexity L, generic over a field.
template <class F, class Inv>
std::pair<std::vector<F>, int> berlekamp_massey_core(const std::vector<F>& s, Inv inverse) {
    std::vector<F> C{F(1)}, B{F(1)};
    int L = 0, m = 1;
    F b = F(1);
    for (std::size_t n = 0; n < s.size(); ++n) {
        F d = s[n];
        for (int i = 1; i <= L; ++i)
            if (static_cast<std::size_t>(i) < C.size()) d += C[static_cast<std::size_t>(i)] * s[n - static_cast<std::size_t>(i)];
        if (d == F(0)) {
            ++m;
            continue;
        }
        F coef = d * inverse(b);
        std::vector<F> T = C;
        if (C.size() < B.size() + static_cast<std::size_t>(m)) C.resize(B.size() + static_cast<std::size_t>(m), F(0));
        for (std::size_t i = 0; i < B.size(); ++i) C[i + static_cast<std::size_t>(m)] -= coef * B[i];
        if (2 * L <= static_cast<int>(n)) {
            L = static_cast<int>(n) + 1 - L;
            B = std::move(T);
            b = d;
            m = 1;
        } else {
            ++m;
        }
    }
    while (C.size() > 1 && C.back() == F(0)) C.pop_back();
    return {C, L};
}

template <class F, class Conv>
void fill_linrec(const std::vector<F>& C, int L, const std::vector<BigInt>& prefix, std::vector<F>& coeffs_out,
                 LinRec& rec, Conv to_int) {
    int deg = static_cast<int>(C.size()) - 1;
    int d = std::max(deg, 1);
    coeffs_out.assign(static_cast<std::size_t>(d), F(0));
    for (int i = 1; i <= deg; ++i) coeffs_out[static_cast<std::size_t>(i - 1)] = -C[static_cast<std::size_t>(i)];
    if (L == 0) {
        // zero sequence: order-1 recurrence with coefficient 0 and initial 0
        rec.coeffs = {0};
        rec.initials = {0};
        rec.preperiod = 0;
        return;
    }
    rec.coeffs.clear();
    for (const auto& c : coeffs_out) rec.coeffs.push_back(to_int(c));
    rec.preperiod = std::max(0, L - d);
    rec.initials.assign(prefix.begin(), prefix.begin() + d + rec.preperiod);
}

}  // namespace detail

/// Minimal recurrence of an integer prefix over Q. Throws UnstableRecurrence
/// when 2L exceeds the prefix length.
inline BmResult berlekamp_massey(const std::vector<BigInt>& prefix, int base = 0) {
    std::vector<Rational> s(prefix.begin(), prefix.end());
    auto [C, L] = detail::berlekamp_massey_core<Rational>(s, [](const Rational& x) { return Rational(1) / x; });
    if (2 * static_cast<std::size_t>(L) > prefix.size()) throw UnstableRecurrence(L, prefix.size());
    BmResult r;
    r.complexity = L;
    r.rec.base = base;
    for (std::size_t i = 1; i < C.size(); ++i) {
        BigInt den = boost::multiprecision::denominator(C[i]);
        r.denominator = boost::integer::lcm(r.denominator, den);
    }
    r.integral = r.denominator == 1;
    detail::fill_linrec(C, L, prefix, r.rational, r.rec, [&](const Rational& q) {
        return r.integral ? BigInt(boost::multiprecision::numerator(q)) : BigInt(boost::multiprecision::numerator(q * r.denominator));
    });
    if (!r.integral) {
        // cleared form: denominator * f(n) = sum (denominator * a_j) f(n - j)
        r.rec.coeffs.clear();
        for (const auto& q : r.rational) r.rec.coeffs.push_back(BigInt(boost::multiprecision::numerator(q * r.denominator)));
    }
    return r;
}

namespace detail {
struct ModP {
    std::int64_t v = 0;
    std::int64_t p = 2;
    ModP() = default;
    ModP(std::int64_t x, std::int64_t p_) : v(((x % p_) + p_) % p_), p(p_) {}
    explicit ModP(int one) : v(one), p(0) {}  // placeholder constant, fixed by the first operation
    static std::int64_t fix(std::int64_t a, std::int64_t b) { return a ? a : b; }
    ModP operator*(const ModP& o) const {
        std::int64_t q = fix(p, o.p);
        return ModP(static_cast<std::int64_t>((static_cast<__int128>(v) * o.v) % q), q);
    }
    ModP& operator+=(const ModP& o) {
        std::int64_t q = fix(p, o.p);
        *this = ModP(v + o.v, q);
        return *this;
    }
    ModP& operator-=(const ModP& o) {
        std::int64_t q = fix(p, o.p);
        *this = ModP(v - o.v, q);
        return *this;
    }
    ModP operator-() const { return p ? ModP(-v, p) : ModP(static_cast<int>(-v)); }
    bool operator==(const ModP& o) const { return v == o.v; }
};
}  // namespace detail

inline bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

/// Minimal recurrence over the prime field Z_p; coefficients in [0, p).
inline LinRec berlekamp_massey_mod(const std::vector<BigInt>& prefix, std::int64_t p, int base = 0) {
    if (!is_prime(p)) throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
    std::vector<detail::ModP> s;
    std::vector<BigInt> reduced;
    for (const auto& x : prefix) {
        BigInt r = detail::reduce(x, p);
        reduced.push_back(r);
        s.emplace_back(static_cast<std::int64_t>(r), p);
    }
    auto inverse = [p](const detail::ModP& x) {
        std::int64_t result = 1, b = x.v, e = p - 2;
        while (e > 0) {
            if (e & 1) result = static_cast<std::int64_t>((static_cast<__int128>(result) * b) % p);
            b = static_cast<std::int64_t>((static_cast<__int128>(b) * b) % p);
            e >>= 1;
        }
        return detail::ModP(result, p);
    };
    auto [C, L] = detail::berlekamp_massey_core<detail::ModP>(s, inverse);
    if (2 * static_cast<std::size_t>(L) > prefix.size()) throw UnstableRecurrence(L, prefix.size());
    LinRec rec;
    rec.base = base;
    rec.modulus = p;
    std::vector<detail::ModP> coeffs;
    detail::fill_linrec(C, L, reduced, coeffs, rec, [p](const detail::ModP& x) { return BigInt(((x.v % p) + p) % p); });
    return rec;
}

/// Re-run Berlekamp-Massey on 2d + 2 generated terms: the minimal
/// recurrence of the same sequence.
inline LinRec minimize_linrec(const LinRec& rec) {
    int len = 2 * (rec.order() + rec.preperiod) + 2;
    BmResult r = berlekamp_massey(generate(rec, len), rec.base);
    if (!r.integral) throw LinRecError("internal: minimal recurrence of an integer recurrence is not integral");
    return r.rec;
}

}  // namespace specker::series
