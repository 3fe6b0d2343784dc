#pragma once

#include "specker/bigint.hpp"
#include "specker/series/poly.hpp"

#include <stdexcept>
#include <vector>

namespace specker::series {

using Matrix = std::vector<std::vector<BigInt>>;

inline Matrix identity_matrix(std::size_t n) {
    Matrix m(n, std::vector<BigInt>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline Matrix mat_mul(const Matrix& a, const Matrix& b) {
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    Matrix r(n, std::vector<BigInt>(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) r[i][j] += a[i][t] * b[t][j];
        }
    return r;
}

/// Companion matrix of f(n) = sum a_j f(n-j), acting on (f(n-1), ..., f(n-d)).
inline Matrix companion(const std::vector<BigInt>& coeffs) {
    const std::size_t d = coeffs.size();
    Matrix m(d, std::vector<BigInt>(d, 0));
    for (std::size_t j = 0; j < d; ++j) m[0][j] = coeffs[j];
    for (std::size_t i = 1; i < d; ++i) m[i][i - 1] = 1;
    return m;
}

inline Matrix kronecker(const Matrix& a, const Matrix& b) {
    const std::size_t n = a.size(), m = b.size();
    Matrix r(n * m, std::vector<BigInt>(n * m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (a[i][j] == 0) continue;
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t l = 0; l < m; ++l) r[i * m + k][j * m + l] = a[i][j] * b[k][l];
        }
    return r;
}

/// Characteristic polynomial det(xI - A) by Faddeev-LeVerrier; every
/// division is exact for integer matrices. Index i holds the x^i coefficient.
inline Poly charpoly(const Matrix& a) {
    const std::size_t n = a.size();
    Poly c(n + 1, 0);
    c[n] = 1;
    Matrix M(n, std::vector<BigInt>(n, 0));  // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A M_{k-1} + c_{n-k+1} I
        Matrix am = mat_mul(a, M);
        for (std::size_t i = 0; i < n; ++i) am[i][i] += c[n - k + 1];
        M = std::move(am);
        Matrix t = mat_mul(a, M);
        BigInt trace = 0;
        for (std::size_t i = 0; i < n; ++i) trace += t[i][i];
        if (trace % static_cast<long long>(k) != 0) throw std::logic_error("internal: inexact division in charpoly");
        c[n - k] = -trace / static_cast<long long>(k);
    }
    return c;
}

}  // namespace specker::series
