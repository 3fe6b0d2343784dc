#pragma once

#include "specker/counting/count.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace specker::counting {

enum class CoiStrategyKind { Exhaustive, Sampled, Auto };

struct CoiStrategy {
    CoiStrategyKind kind = CoiStrategyKind::Auto;
    std::uint64_t seed = 1;
    int samples = 64;

    static CoiStrategy exhaustive() { return {CoiStrategyKind::Exhaustive, 0, 0}; }
    static CoiStrategy sampled(std::uint64_t seed, int samples = 64) { return {CoiStrategyKind::Sampled, seed, samples}; }
};

inline constexpr int kMaxExhaustiveCoi = 5;

struct CoiReport {
    int n = 0;
    std::vector<std::pair<std::vector<int>, BigInt>> counts;  // (order, count)
    bool invariant = true;
    std::optional<std::pair<std::size_t, std::size_t>> witness;  // indices into counts
    CoiStrategyKind strategy = CoiStrategyKind::Exhaustive;
    std::uint64_t seed = 0;
    int samples = 0;
};

/// Reruns the ordered count under many orders of [n] and compares.
/// `task.mode` and `task.order` are ignored.
inline CoiReport check_coi(CountTask task, CoiStrategy strategy = {}, const CountOptions& opts = {}) {
    const int n = task.n;
    CoiReport rep;
    rep.n = n;
    if (strategy.kind == CoiStrategyKind::Auto)
        strategy = n <= kMaxExhaustiveCoi ? CoiStrategy::exhaustive() : CoiStrategy::sampled(strategy.seed, strategy.samples);
    if (strategy.kind == CoiStrategyKind::Exhaustive && n > kMaxExhaustiveCoi)
        throw CountError("exhaustive order check is limited to n <= " + std::to_string(kMaxExhaustiveCoi));
    rep.strategy = strategy.kind;

    std::vector<std::vector<int>> orders;
    if (strategy.kind == CoiStrategyKind::Exhaustive) {
        std::vector<int> p = logic::natural_order(n);
        do orders.push_back(p);
        while (std::next_permutation(p.begin(), p.end()));
    } else {
        rep.seed = strategy.seed;
        rep.samples = strategy.samples;
        std::mt19937_64 rng(strategy.seed);
        for (int i = 0; i < strategy.samples; ++i) {
            std::vector<int> p = logic::natural_order(n);
            fisher_yates(p, rng);
            orders.push_back(std::move(p));
        }
    }
    for (auto& o : orders) {
        BigInt c = ordered_specker_count(task, o, opts);
        rep.counts.emplace_back(std::move(o), std::move(c));
    }
    for (std::size_t i = 1; i < rep.counts.size(); ++i) {
        if (rep.counts[i].second != rep.counts[0].second) {
            rep.invariant = false;
            rep.witness = std::make_pair(std::size_t{0}, i);
            break;
        }
    }
    return rep;
}

/// f1(n) - f2(n); each family maps n to a counting task.
template <class Family1, class Family2>
BigInt diff_specker_eval(const Family1& f1, const Family2& f2, int n, const CountOptions& opts = {}) {
    return specker_count(f1(n), opts) - specker_count(f2(n), opts);
}

}  // namespace specker::counting
