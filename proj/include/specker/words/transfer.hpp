#pragma once

#include "specker/bigint.hpp"
#include "specker/series/bm.hpp"
#include "specker/series/linrec.hpp"
#include "specker/series/matrix.hpp"
#include "specker/words/dfa.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace specker::words {

/// M[q][q'] = number of letters moving q to q'.
struct TransferMatrix {
    series::Matrix M;
    std::vector<BigInt> init;
    std::vector<BigInt> accept;
};

inline TransferMatrix transfer_matrix(const Dfa& d) {
    const std::size_t n = static_cast<std::size_t>(d.states());
    TransferMatrix t;
    t.M.assign(n, std::vector<BigInt>(n, 0));
    t.init.assign(n, 0);
    t.accept.assign(n, 0);
    t.init[static_cast<std::size_t>(d.initial)] = 1;
    for (std::size_t q = 0; q < n; ++q) {
        t.accept[q] = d.accepting[q] ? 1 : 0;
        for (int target : d.delta[q]) t.M[q][static_cast<std::size_t>(target)] += 1;
    }
    return t;
}

/// Weighted counts: each letter contributes its weight to a word's product.
/// Returns sum over accepted words of length 0..N of the product of letter
/// weights, one entry per length.
inline std::vector<BigInt> weighted_word_counts(const Dfa& d, const std::vector<BigInt>& letter_weight, int N) {
    if (static_cast<int>(letter_weight.size()) != d.letters()) throw DfaError("one weight per letter required");
    const std::size_t n = static_cast<std::size_t>(d.states());
    // collapse letters into weighted edges
    std::vector<std::vector<std::pair<std::size_t, BigInt>>> edges(n);
    for (std::size_t q = 0; q < n; ++q) {
        std::vector<BigInt> w(n, 0);
        for (int c = 0; c < d.letters(); ++c) w[static_cast<std::size_t>(d.delta[q][static_cast<std::size_t>(c)])] += letter_weight[static_cast<std::size_t>(c)];
        for (std::size_t t = 0; t < n; ++t)
            if (w[t] != 0) edges[q].emplace_back(t, w[t]);
    }
    std::vector<BigInt> v(n, 0), out;
    v[static_cast<std::size_t>(d.initial)] = 1;
    for (int len = 0; len <= N; ++len) {
        BigInt total = 0;
        for (std::size_t q = 0; q < n; ++q)
            if (d.accepting[q]) total += v[q];
        out.push_back(total);
        if (len == N) break;
        std::vector<BigInt> next(n, 0);
        for (std::size_t q = 0; q < n; ++q) {
            if (v[q] == 0) continue;
            for (const auto& [t, w] : edges[q]) next[t] += v[q] * w;
        }
        v = std::move(next);
    }
    return out;
}

/// Accepted words of each length 0..N.
inline std::vector<BigInt> word_counts(const Dfa& d, int N) {
    return weighted_word_counts(d, std::vector<BigInt>(static_cast<std::size_t>(d.letters()), 1), N);
}

/// Number of accepted words of length n: e^T M^n a.
inline BigInt count_words(const Dfa& d, int n) {
    if (n < 0) throw DfaError("negative word length");
    return word_counts(d, n).back();
}

class RecurrenceValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DfaRecurrence {
    series::LinRec rec;
    bool from_charpoly = false;  // true when Berlekamp-Massey did not give an integral, verified recurrence
};

/// Integer recurrence for the word counts of a DFA: Berlekamp-Massey on the
/// first 2|Q| + 4 counts, else the characteristic polynomial of M. Either
/// way the result reproduces count_words for 32 terms past its initial values.
inline DfaRecurrence recurrence_from_dfa(const Dfa& d) {
    const int Q = d.states();
    const int prefix = 2 * Q + 4;
    auto verify = [&](const series::LinRec& rec) {
        int len = static_cast<int>(rec.initials.size()) + 32;
        return series::generate(rec, len) == word_counts(d, len - 1);
    };
    DfaRecurrence out;
    auto counts = word_counts(d, prefix - 1);
    series::BmResult bm = series::berlekamp_massey(counts);
    if (bm.integral && verify(bm.rec)) {
        out.rec = bm.rec;
        return out;
    }
    series::Poly cp = series::charpoly(transfer_matrix(d).M);
    const std::size_t D = cp.size() - 1;
    for (std::size_t j = 1; j <= D; ++j) out.rec.coeffs.push_back(-cp[D - j]);
    auto init = word_counts(d, static_cast<int>(D) - 1);
    out.rec.initials.assign(init.begin(), init.end());
    out.from_charpoly = true;
    if (!verify(out.rec)) throw RecurrenceValidationError("internal: characteristic polynomial recurrence failed validation");
    return out;
}

}  // namespace specker::words
