#pragma once

#include "specker/bigint.hpp"
#include "specker/series/poly.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace specker::series {

class LinRecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// f(n) = a_1 f(n-1) + ... + a_d f(n-d) for n >= base + d + preperiod, with
/// f(base), ..., f(base + d + preperiod - 1) given. A nonzero `modulus`
/// means all values live in Z_modulus (only for the BigInt ring).
template <class T>
struct BasicLinRec {
    std::vector<T> coeffs;
    std::vector<T> initials;
    int base = 0;
    int preperiod = 0;
    std::int64_t modulus = 0;

    int order() const { return static_cast<int>(coeffs.size()); }

    void check() const {
        if (coeffs.empty()) throw LinRecError("recurrence order must be at least 1");
        if (preperiod < 0) throw LinRecError("negative preperiod");
        if (initials.size() != coeffs.size() + static_cast<std::size_t>(preperiod))
            throw LinRecError("expected " + std::to_string(coeffs.size() + static_cast<std::size_t>(preperiod)) +
                              " initial values, got " + std::to_string(initials.size()));
        if (modulus < 0 || modulus == 1) throw LinRecError("modulus must be 0 or at least 2");
    }

    friend bool operator==(const BasicLinRec&, const BasicLinRec&) = default;
};

using LinRec = BasicLinRec<BigInt>;
using PolyLinRec = BasicLinRec<MPoly>;

namespace detail {
inline BigInt reduce(const BigInt& v, std::int64_t m) {
    if (m == 0) return v;
    BigInt r = v % m;
    if (r < 0) r += m;
    return r;
}
inline MPoly reduce(const MPoly& v, std::int64_t) { return v; }
}  // namespace detail

/// f(base), f(base+1), ..., f(base + count - 1).
template <class T>
std::vector<T> generate(const BasicLinRec<T>& rec, int count) {
    rec.check();
    std::vector<T> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    const std::size_t d = rec.coeffs.size();
    for (int i = 0; i < count; ++i) {
        if (static_cast<std::size_t>(i) < rec.initials.size()) {
            out.push_back(detail::reduce(rec.initials[static_cast<std::size_t>(i)], rec.modulus));
            continue;
        }
        T v{};
        for (std::size_t j = 1; j <= d; ++j) v += rec.coeffs[j - 1] * out[out.size() - j];
        out.push_back(detail::reduce(v, rec.modulus));
    }
    return out;
}

/// f(n) by forward iteration.
template <class T>
T eval_linrec(const BasicLinRec<T>& rec, int n) {
    if (n < rec.base) throw LinRecError("index " + std::to_string(n) + " below index base " + std::to_string(rec.base));
    return generate(rec, n - rec.base + 1).back();
}

/// Move the index base to `new_base` (<= base is not allowed: values before
/// the base are unknown). Keeps the same coefficients and absorbs the shift
/// into the initial values.
template <class T>
BasicLinRec<T> rebase(const BasicLinRec<T>& rec, int new_base) {
    if (new_base < rec.base) throw LinRecError("cannot move the index base backwards");
    BasicLinRec<T> r = rec;
    int shift = new_base - rec.base;
    auto terms = generate(rec, shift + static_cast<int>(rec.initials.size()));
    r.base = new_base;
    r.preperiod = std::max(0, rec.preperiod - shift);
    r.initials.assign(terms.begin() + shift, terms.begin() + shift + static_cast<int>(rec.coeffs.size()) + r.preperiod);
    return r;
}

/// Substitute integer values for the indeterminates of a polynomial recurrence.
inline LinRec evaluate_at(const PolyLinRec& rec, const std::map<std::string, BigInt>& values) {
    LinRec r;
    for (const auto& c : rec.coeffs) r.coeffs.push_back(c.eval(values));
    for (const auto& c : rec.initials) r.initials.push_back(c.eval(values));
    r.base = rec.base;
    r.preperiod = rec.preperiod;
    return r;
}

inline LinRec make_linrec(std::vector<BigInt> coeffs, std::vector<BigInt> initials, int base = 0, int preperiod = 0) {
    LinRec r{std::move(coeffs), std::move(initials), base, preperiod, 0};
    r.check();
    return r;
}

}  // namespace specker::series
