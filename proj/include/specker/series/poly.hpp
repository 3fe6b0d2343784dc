#pragma once

#include "specker/bigint.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace specker::series {

/// Dense univariate integer polynomial, coefficient of x^i at index i.
using Poly = std::vector<BigInt>;

inline Poly trimmed(Poly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

inline Poly poly_add(const Poly& a, const Poly& b, int sign = 1) {
    Poly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += sign * b[i];
    return r;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

inline std::string poly_to_string(const Poly& p, const std::string& var = "x") {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0) continue;
        BigInt c = p[i];
        bool negative = c < 0;
        if (negative) c = -c;
        if (first)
            os << (negative ? "-" : "");
        else
            os << (negative ? " - " : " + ");
        first = false;
        if (i == 0 || c != 1) os << c;
        if (i > 0) {
            if (c != 1) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    if (first) os << "0";
    return os.str();
}

/// Integer polynomial through the points (xs[i], ys[i]); throws when the
/// interpolant has non-integer coefficients or the xs repeat.
inline Poly interpolate(const std::vector<BigInt>& xs, const std::vector<BigInt>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("interpolate: size mismatch");
    const std::size_t k = xs.size();
    std::vector<Rational> acc(k, Rational(0));
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Rational> basis{Rational(1)};
        Rational denom = 1;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            if (xs[i] == xs[j]) throw std::invalid_argument("interpolate: repeated abscissa");
            std::vector<Rational> next(basis.size() + 1, Rational(0));
            for (std::size_t t = 0; t < basis.size(); ++t) {
                next[t + 1] += basis[t];
                next[t] -= basis[t] * Rational(xs[j]);
            }
            basis = std::move(next);
            denom *= Rational(xs[i] - xs[j]);
        }
        for (std::size_t t = 0; t < basis.size() && t < k; ++t) acc[t] += basis[t] * Rational(ys[i]) / denom;
    }
    Poly out;
    for (const auto& c : acc) {
        if (denominator(c) != 1) throw std::invalid_argument("interpolate: non-integer coefficient");
        out.push_back(numerator(c));
    }
    return trimmed(out);
}

/// Sparse multivariate integer polynomial over named indeterminates.
class MPoly {
public:
    using Monomial = std::map<std::string, int>;  // variable -> positive exponent

    MPoly() = default;
    MPoly(long long c) {  // NOLINT: implicit from integer constants
        if (c != 0) terms_[{}] = c;
    }
    MPoly(const BigInt& c) {  // NOLINT
        if (c != 0) terms_[{}] = c;
    }
    static MPoly var(const std::string& name) {
        MPoly p;
        p.terms_[{{name, 1}}] = 1;
        return p;
    }
    static MPoly monomial(const BigInt& c, Monomial m) {
        MPoly p;
        for (auto it = m.begin(); it != m.end();) it = it->second == 0 ? m.erase(it) : std::next(it);
        if (c != 0) p.terms_[std::move(m)] = c;
        return p;
    }

    const std::map<Monomial, BigInt>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }
    BigInt constant_term() const {
        auto it = terms_.find({});
        return it == terms_.end() ? BigInt(0) : it->second;
    }
    std::set<std::string> variables() const {
        std::set<std::string> v;
        for (const auto& [m, c] : terms_)
            for (const auto& [x, e] : m) v.insert(x);
        return v;
    }

    MPoly& operator+=(const MPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    MPoly& operator-=(const MPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
    friend MPoly operator-(const MPoly& a) { return MPoly() - a; }
    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        MPoly r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m = ma;
                for (const auto& [x, e] : mb) m[x] += e;
                r.add_term(m, ca * cb);
            }
        return r;
    }
    MPoly& operator*=(const MPoly& o) { return *this = *this * o; }
    friend bool operator==(const MPoly& a, const MPoly& b) { return a.terms_ == b.terms_; }

    MPoly pow(unsigned e) const {
        MPoly r(1);
        for (unsigned i = 0; i < e; ++i) r *= *this;
        return r;
    }

    /// Value at integer points; throws when a variable is unassigned.
    BigInt eval(const std::map<std::string, BigInt>& values) const {
        BigInt total = 0;
        for (const auto& [m, c] : terms_) {
            BigInt t = c;
            for (const auto& [x, e] : m) {
                auto it = values.find(x);
                if (it == values.end()) throw std::invalid_argument("unassigned indeterminate '" + x + "'");
                for (int i = 0; i < e; ++i) t *= it->second;
            }
            total += t;
        }
        return total;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c0] : terms_) {
            BigInt c = c0;
            bool negative = c < 0;
            if (negative) c = -c;
            if (first)
                os << (negative ? "-" : "");
            else
                os << (negative ? " - " : " + ");
            first = false;
            bool need_star = false;
            if (m.empty() || c != 1) {
                os << c;
                need_star = true;
            }
            for (const auto& [x, e] : m) {
                if (need_star) os << "*";
                os << x;
                if (e > 1) os << "^" << e;
                need_star = true;
            }
        }
        return os.str();
    }

private:
    void add_term(const Monomial& m, const BigInt& c) {
        if (c == 0) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    std::map<Monomial, BigInt> terms_;
};

class PolyParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// expr := term (('+'|'-') term)* ; term := unary ('*' unary)* ;
// unary := '-' unary | power ; power := atom ('^' nat)? ;
// atom := integer | identifier | '(' expr ')'
class MPolyParser {
public:
    explicit MPolyParser(std::string_view s) : s_(s) {}

    MPoly parse() {
        MPoly p = expr();
        skip();
        if (i_ != s_.size()) fail("unexpected character");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw PolyParseError(msg + " at position " + std::to_string(i_) + " in '" + std::string(s_) + "'");
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
    MPoly expr() {
        MPoly p = term();
        for (;;) {
            if (eat('+'))
                p += term();
            else if (eat('-'))
                p -= term();
            else
                return p;
        }
    }
    MPoly term() {
        MPoly p = unary();
        while (eat('*')) p *= unary();
        return p;
    }
    MPoly unary() {
        if (eat('-')) return -unary();
        return power();
    }
    MPoly power() {
        MPoly base = atom();
        if (eat('^')) {
            skip();
            std::size_t start = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            if (start == i_) fail("expected exponent");
            return base.pow(static_cast<unsigned>(std::stoul(std::string(s_.substr(start, i_ - start)))));
        }
        return base;
    }
    MPoly atom() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end of input");
        char c = s_[i_];
        if (c == '(') {
            ++i_;
            MPoly p = expr();
            if (!eat(')')) fail("expected ')'");
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            return MPoly(BigInt(std::string(s_.substr(start, i_ - start))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i_;
            while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
            return MPoly::var(std::string(s_.substr(start, i_ - start)));
        }
        fail("unexpected character");
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

}  // namespace detail

inline MPoly parse_mpoly(std::string_view text) { return detail::MPolyParser(text).parse(); }

}  // namespace specker::series
