#pragma once

#include "specker/bigint.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace specker::catalog::oracles {

using Seq = std::vector<BigInt>;

inline Seq binary_relations(int N) {
    Seq out;
    for (int n = 0; n <= N; ++n) out.push_back(pow2(static_cast<unsigned>(n * n)));
    return out;
}

inline Seq factorials(int N) {
    Seq out{1};
    for (int n = 1; n <= N; ++n) out.push_back(out.back() * n);
    return out;
}

/// Restricted growth strings: set partitions of [n], tallied by block count.
/// Returns counts[n][k].
inline std::vector<std::vector<BigInt>> partitions_by_blocks(int N) {
    std::vector<std::vector<BigInt>> out(static_cast<std::size_t>(N) + 1, std::vector<BigInt>(static_cast<std::size_t>(N) + 1, 0));
    out[0][0] = 1;
    for (int n = 1; n <= N; ++n) {
        std::vector<int> a(static_cast<std::size_t>(n), 0), mx(static_cast<std::size_t>(n), 0);
        for (;;) {
            out[static_cast<std::size_t>(n)][static_cast<std::size_t>(mx[static_cast<std::size_t>(n) - 1] + 1)] += 1;
            int i = n - 1;
            while (i > 0 && a[static_cast<std::size_t>(i)] > mx[static_cast<std::size_t>(i) - 1]) --i;
            if (i == 0) break;
            ++a[static_cast<std::size_t>(i)];
            for (int j = i; j < n; ++j) {
                if (j > i) a[static_cast<std::size_t>(j)] = 0;
                int prev = j == 0 ? 0 : mx[static_cast<std::size_t>(j) - 1];
                mx[static_cast<std::size_t>(j)] = std::max(prev, a[static_cast<std::size_t>(j)]);
            }
        }
    }
    return out;
}

inline Seq bell_by_enumeration(int N) {
    auto t = partitions_by_blocks(N);
    Seq out;
    for (int n = 0; n <= N; ++n) {
        BigInt s = 0;
        for (const auto& c : t[static_cast<std::size_t>(n)]) s += c;
        out.push_back(s);
    }
    return out;
}

/// Bell numbers by the Bell (Aitken) triangle.
inline Seq bell_triangle(int N) {
    Seq out{1};
    std::vector<BigInt> row{1};
    for (int n = 1; n <= N; ++n) {
        std::vector<BigInt> next{row.back()};
        for (const auto& v : row) next.push_back(next.back() + v);
        out.push_back(next.front());
        row = std::move(next);
    }
    return out;
}

inline std::vector<std::int64_t> bell_triangle_mod(int N, std::int64_t m) {
    std::vector<std::int64_t> out{1 % m};
    std::vector<std::int64_t> row{1 % m};
    for (int n = 1; n <= N; ++n) {
        std::vector<std::int64_t> next{row.back()};
        for (auto v : row) next.push_back((next.back() + v) % m);
        out.push_back(next.front());
        row = std::move(next);
    }
    return out;
}

/// Stirling numbers of the second kind S(n, r) by the triangle recurrence.
inline Seq stirling2_column(int r, int N) {
    std::vector<BigInt> prev(static_cast<std::size_t>(r) + 1, 0);
    prev[0] = 1;
    Seq out{prev[static_cast<std::size_t>(r)]};
    for (int n = 1; n <= N; ++n) {
        std::vector<BigInt> cur(static_cast<std::size_t>(r) + 1, 0);
        for (int k = 1; k <= r; ++k) cur[static_cast<std::size_t>(k)] = k * prev[static_cast<std::size_t>(k)] + prev[static_cast<std::size_t>(k) - 1];
        out.push_back(cur[static_cast<std::size_t>(r)]);
        prev = std::move(cur);
    }
    return out;
}

/// Permutations of [n] with exactly r cycles, by enumerating permutations.
inline Seq stirling1_by_enumeration(int r, int N) {
    Seq out;
    for (int n = 0; n <= N; ++n) {
        std::vector<int> p(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
        BigInt count = 0;
        do {
            std::vector<char> seen(static_cast<std::size_t>(n), 0);
            int cycles = 0;
            for (int i = 0; i < n; ++i) {
                if (seen[static_cast<std::size_t>(i)]) continue;
                ++cycles;
                for (int j = i; !seen[static_cast<std::size_t>(j)]; j = p[static_cast<std::size_t>(j)]) seen[static_cast<std::size_t>(j)] = 1;
            }
            if (cycles == r) ++count;
        } while (std::next_permutation(p.begin(), p.end()));
        out.push_back(count);
    }
    return out;
}

/// Unsigned Stirling numbers of the first kind c(n, r).
inline Seq stirling1_column(int r, int N) {
    std::vector<BigInt> prev(static_cast<std::size_t>(r) + 1, 0);
    prev[0] = 1;
    Seq out{prev[static_cast<std::size_t>(r)]};
    for (int n = 1; n <= N; ++n) {
        std::vector<BigInt> cur(static_cast<std::size_t>(r) + 1, 0);
        for (int k = 1; k <= r; ++k)
            cur[static_cast<std::size_t>(k)] = (n - 1) * prev[static_cast<std::size_t>(k)] + prev[static_cast<std::size_t>(k) - 1];
        out.push_back(cur[static_cast<std::size_t>(r)]);
        prev = std::move(cur);
    }
    return out;
}

/// n^(n-2) for n >= 1 (1 at n = 1); the value at n = 0 is set to 1.
inline Seq cayley(int N) {
    Seq out{1};
    for (int n = 1; n <= N; ++n) out.push_back(n == 1 ? BigInt(1) : ipow(BigInt(n), static_cast<unsigned>(n - 2)));
    return out;
}

/// Equal halves: half the central binomial at even n, 0 at odd n and at 0.
inline Seq e2eq(int N) {
    Seq out;
    for (int n = 0; n <= N; ++n) out.push_back(n == 0 || n % 2 ? BigInt(0) : binomial(n, n / 2) / 2);
    return out;
}

/// Height sequences a_0 .. a_{2n-1} with a_0 = 1, steps of +-1, a_{2n-1} = 0
/// and no negative heights, counted by walking the steps.
inline Seq catalan_ballot(int N) {
    Seq out{1};
    for (int n = 1; n <= N; ++n) {
        std::vector<BigInt> ways(static_cast<std::size_t>(2 * n) + 2, 0);
        ways[1] = 1;
        for (int step = 1; step < 2 * n; ++step) {
            std::vector<BigInt> next(ways.size(), 0);
            for (std::size_t h = 0; h < ways.size(); ++h) {
                if (ways[h] == 0) continue;
                if (h + 1 < ways.size()) next[h + 1] += ways[h];
                if (h >= 1) next[h - 1] += ways[h];
            }
            ways = std::move(next);
        }
        out.push_back(ways[0]);
    }
    return out;
}

/// C_0 = 1, C_{n+1} = sum C_i C_{n-i}.
inline Seq catalan_convolution(int N) {
    Seq c{1};
    for (int n = 0; n < N; ++n) {
        BigInt s = 0;
        for (int i = 0; i <= n; ++i) s += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(n - i)];
        c.push_back(s);
    }
    return c;
}

/// Connected graphs with all degrees even, by brute force over edge sets.
inline Seq eulerian_by_enumeration(int N) {
    Seq out{1};
    for (int n = 1; n <= N; ++n) {
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
        BigInt count = 0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edges.size()); ++mask) {
            std::vector<int> deg(static_cast<std::size_t>(n), 0), comp(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) comp[static_cast<std::size_t>(i)] = i;
            std::function<int(int)> find = [&](int x) {
                return comp[static_cast<std::size_t>(x)] == x ? x : comp[static_cast<std::size_t>(x)] = find(comp[static_cast<std::size_t>(x)]);
            };
            for (std::size_t e = 0; e < edges.size(); ++e) {
                if (!((mask >> e) & 1)) continue;
                auto [a, b] = edges[e];
                ++deg[static_cast<std::size_t>(a)];
                ++deg[static_cast<std::size_t>(b)];
                comp[static_cast<std::size_t>(find(a))] = find(b);
            }
            bool ok = true;
            for (int i = 0; i < n && ok; ++i) ok = deg[static_cast<std::size_t>(i)] % 2 == 0 && find(i) == find(0);
            if (ok) ++count;
        }
        out.push_back(count);
    }
    return out;
}

/// Even graphs number 2^C(n-1,2); connected ones follow by splitting off the
/// component of vertex 1.
inline Seq eulerian_fast(int N) {
    Seq even{1}, conn{1};
    for (int n = 1; n <= N; ++n) even.push_back(pow2(static_cast<unsigned>((n - 1) * (n - 2) / 2)));
    for (int n = 1; n <= N; ++n) {
        BigInt c = even[static_cast<std::size_t>(n)];
        for (int k = 1; k < n; ++k) c -= binomial(n - 1, k - 1) * conn[static_cast<std::size_t>(k)] * even[static_cast<std::size_t>(n - k)];
        conn.push_back(c);
    }
    return conn;
}

/// F_n = sum_k C(n-k-1, k), n >= 1; F_0 = 0.
inline Seq fibonacci(int N) {
    Seq out{0};
    for (int n = 1; n <= N; ++n) {
        BigInt s = 0;
        for (int k = 0; n - k - 1 >= k; ++k) s += binomial(n - k - 1, k);
        out.push_back(s);
    }
    return out;
}

/// L_n = F_{n-1} + F_{n+1}; L_0 = 2.
inline Seq lucas(int N) {
    Seq f = fibonacci(N + 1);
    Seq out{2};
    for (int n = 1; n <= N; ++n) out.push_back(f[static_cast<std::size_t>(n) - 1] + f[static_cast<std::size_t>(n) + 1]);
    return out;
}

/// T_n(x) = sum_k C(n, 2k) (x^2 - 1)^k x^(n-2k).
inline Seq chebyshev(int N, const BigInt& x) {
    Seq out;
    for (int n = 0; n <= N; ++n) {
        BigInt s = 0;
        for (int k = 0; 2 * k <= n; ++k)
            s += binomial(n, 2 * k) * ipow(x * x - 1, static_cast<unsigned>(k)) * ipow(x, static_cast<unsigned>(n - 2 * k));
        out.push_back(s);
    }
    return out;
}

/// T_n(x) = sum_k S(n, k) x^k.
inline Seq touchard(int N, const BigInt& x) {
    Seq out;
    for (int n = 0; n <= N; ++n) {
        BigInt s = n == 0 ? BigInt(1) : BigInt(0);
        for (int k = 1; k <= n; ++k) s += stirling2_column(k, n)[static_cast<std::size_t>(n)] * ipow(x, static_cast<unsigned>(k));
        out.push_back(s);
    }
    return out;
}

/// Falling factorial x (x-1) ... (x-k+1); empty product is 1.
inline BigInt falling(const BigInt& x, int k) {
    BigInt r = 1;
    for (int i = 0; i < k; ++i) r *= x - i;
    return r;
}

/// M_n(x) = sum_k C(n,k) (n-1)^(n-k falling) 2^k x^(k falling), n >= 1.
inline BigInt mittag_leffler(int n, const BigInt& x) {
    BigInt s = 0;
    for (int k = 0; k <= n; ++k) s += binomial(n, k) * falling(BigInt(n - 1), n - k) * pow2(static_cast<unsigned>(k)) * falling(x, k);
    return s;
}

inline Seq mittag_leffler_seq(int N, const BigInt& x) {
    Seq out{1};
    for (int n = 1; n <= N; ++n) out.push_back(mittag_leffler(n, x));
    return out;
}

}  // namespace specker::catalog::oracles
