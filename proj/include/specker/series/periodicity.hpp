#pragma once

#include "specker/bigint.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace specker::series {

struct PeriodicityReport {
    std::int64_t modulus = 0;
    int horizon = 0;
    bool periodic = false;
    int n0 = 0;      // valid when periodic
    int period = 0;  // valid when periodic
    // Window [n0, horizon - period] over which f(n + period) == f(n) (mod m) was checked.
    int window_begin = 0;
    int window_end = -1;
};

namespace detail {
inline bool window_holds(const std::vector<std::int64_t>& r, int n0, int p) {
    const int H = static_cast<int>(r.size()) - 1;
    for (int n = n0; n + p <= H; ++n)
        if (r[static_cast<std::size_t>(n)] != r[static_cast<std::size_t>(n + p)]) return false;
    return true;
}
}  // namespace detail

/// Smallest period p, then smallest n0, such that r(n + p) == r(n) for
/// n0 <= n <= H - p, accepted only when the checked tail [n0, H] has length at
/// least max(2p, (H + 1) / 2). Finding nothing never means the sequence is
/// aperiodic, only that no period is visible within the horizon.
inline PeriodicityReport detect_periodicity_residues(const std::vector<std::int64_t>& residues, std::int64_t m) {
    if (m < 2) throw std::invalid_argument("modulus must be at least 2");
    if (residues.size() < 5) throw std::invalid_argument("horizon must be at least 4");
    const int H = static_cast<int>(residues.size()) - 1;
    PeriodicityReport rep;
    rep.modulus = m;
    rep.horizon = H;
    for (int p = 1; 2 * p <= H + 1; ++p) {
        // smallest n0: walk back from the end while the shifted values agree
        int n0 = H - p + 1;
        while (n0 > 0 && residues[static_cast<std::size_t>(n0 - 1)] == residues[static_cast<std::size_t>(n0 - 1 + p)]) --n0;
        const int tail = H - n0 + 1;
        if (tail < 2 * p || 2 * tail < H + 1) continue;
        if (!detail::window_holds(residues, n0, p)) throw std::logic_error("internal: periodicity re-check failed");
        rep.periodic = true;
        rep.n0 = n0;
        rep.period = p;
        rep.window_begin = n0;
        rep.window_end = H - p;
        return rep;
    }
    return rep;
}

inline std::vector<std::int64_t> residues_of(const std::vector<BigInt>& values, std::int64_t m) {
    std::vector<std::int64_t> r;
    r.reserve(values.size());
    for (const auto& v : values) r.push_back(mod_floor(v, m));
    return r;
}

/// f(0..H) reduced mod m, from a generator of exact values.
inline PeriodicityReport detect_periodicity_mod(const std::function<BigInt(int)>& f, std::int64_t m, int H) {
    if (H < 4) throw std::invalid_argument("horizon must be at least 4");
    std::vector<std::int64_t> r;
    for (int n = 0; n <= H; ++n) r.push_back(mod_floor(f(n), m));
    return detect_periodicity_residues(r, m);
}

inline PeriodicityReport detect_periodicity_mod(const std::vector<BigInt>& values, std::int64_t m) {
    return detect_periodicity_residues(residues_of(values, m), m);
}

}  // namespace specker::series
