#include "specker/catalog/entries.hpp"

#include <gtest/gtest.h>

using namespace specker;
using namespace specker::catalog;

namespace {

Seq nums(std::initializer_list<long long> xs) {
    Seq out;
    for (auto x : xs) out.emplace_back(x);
    return out;
}

void expect_pass(const VerifyReport& rep) {
    for (const auto& l : rep.lanes)
        EXPECT_TRUE(l.pass) << rep.entry << " lane " << l.lane << " n=" << l.first_mismatch.value_or(-1) << " expected "
                            << l.expected << " got " << l.actual;
    for (const auto& f : rep.facts) EXPECT_TRUE(f.pass) << rep.entry << " fact " << f.name << ": " << f.detail;
}

bool has_lane(const VerifyReport& rep, const std::string& lane) {
    for (const auto& l : rep.lanes)
        if (l.lane == lane) return true;
    return false;
}

}  // namespace

TEST(Oracles, SmallValues) {
    EXPECT_EQ(oracles::bell_by_enumeration(6), nums({1, 1, 2, 5, 15, 52, 203}));
    EXPECT_EQ(oracles::bell_triangle(6), nums({1, 1, 2, 5, 15, 52, 203}));
    EXPECT_EQ(oracles::stirling2_column(2, 5), nums({0, 0, 1, 3, 7, 15}));
    EXPECT_EQ(oracles::stirling1_by_enumeration(1, 5), nums({0, 1, 1, 2, 6, 24}));
    EXPECT_EQ(oracles::stirling1_column(2, 5), nums({0, 0, 1, 3, 11, 50}));
    EXPECT_EQ(oracles::catalan_ballot(5), nums({1, 1, 2, 5, 14, 42}));
    EXPECT_EQ(oracles::eulerian_by_enumeration(5), nums({1, 1, 0, 1, 3, 38}));
    EXPECT_EQ(oracles::fibonacci(8), nums({0, 1, 1, 2, 3, 5, 8, 13, 21}));
    EXPECT_EQ(oracles::lucas(5), nums({2, 1, 3, 4, 7, 11}));
    EXPECT_EQ(oracles::chebyshev(3, BigInt(2)), nums({1, 2, 7, 26}));
    EXPECT_EQ(oracles::touchard(3, BigInt(2)), nums({1, 2, 6, 22}));
    EXPECT_EQ(oracles::e2eq(6), nums({0, 0, 1, 0, 3, 0, 10}));
}

TEST(Oracles, IndependentRoutesAgree) {
    EXPECT_EQ(oracles::bell_by_enumeration(11), oracles::bell_triangle(11));
    EXPECT_EQ(oracles::catalan_ballot(30), oracles::catalan_convolution(30));
    EXPECT_EQ(oracles::eulerian_by_enumeration(7), oracles::eulerian_fast(7));
    for (int r = 1; r <= 4; ++r) {
        auto t = oracles::partitions_by_blocks(10);
        auto col = oracles::stirling2_column(r, 10);
        for (int n = 0; n <= 10; ++n) EXPECT_EQ(t[static_cast<std::size_t>(n)][static_cast<std::size_t>(r)], col[static_cast<std::size_t>(n)]);
        EXPECT_EQ(oracles::stirling1_by_enumeration(r, 8), oracles::stirling1_column(r, 8));
    }
    auto bell = oracles::bell_triangle(300);
    for (std::int64_t m : {2, 3, 5, 7}) EXPECT_EQ(series::residues_of(bell, m), oracles::bell_triangle_mod(300, m));
    // Fibonacci by its sum formula against the plain recurrence
    auto fib = oracles::fibonacci(90);
    for (int n = 2; n <= 90; ++n) EXPECT_EQ(fib[static_cast<std::size_t>(n)], fib[static_cast<std::size_t>(n) - 1] + fib[static_cast<std::size_t>(n) - 2]);
}

TEST(Registry, Lookup) {
    auto names = list_entries();
    EXPECT_GE(names.size(), 14u);
    for (const auto& n : names) EXPECT_NO_THROW(get_entry(n)) << n;
    auto bell = get_entry("bell");
    EXPECT_EQ(bell.name, "equivalence_relations");
    ASSERT_TRUE(bell.formula);
    EXPECT_EQ(logic::to_string(*bell.formula), logic::to_string(formulas::equivalence("E")));
    auto cat = get_entry("catalan");
    EXPECT_TRUE(cat.ordered);
    EXPECT_EQ(cat.feasibility, 3);
    EXPECT_THROW(get_entry("unknown"), CatalogError);
    EXPECT_THROW(get_entry("stirling2_x"), CatalogError);
    EXPECT_THROW(get_entry("stirling2_0"), CatalogError);
    EXPECT_EQ(get_entry("stirling2").name, "stirling2_2");
    EXPECT_EQ(get_entry("stirling2(3)").name, "stirling2_3");
    EXPECT_EQ(get_entry("stirling1_2").name, "stirling1_2");
    EXPECT_EQ(get_entry("touchard", {3}).point.at("x"), 3);
}

TEST(Verify, BinaryRelations) {
    auto rep = verify_entry("binary_relations", 3);
    EXPECT_EQ(rep.oracle, nums({1, 2, 16, 512}));
    expect_pass(rep);
    EXPECT_TRUE(rep.pass());
}

TEST(Verify, Trees) {
    auto rep = verify_entry("trees", 4);
    EXPECT_EQ(rep.oracle, nums({1, 1, 3, 16}));
    expect_pass(rep);
}

TEST(Verify, E2eq) {
    auto rep = verify_entry("e2eq", 5);
    EXPECT_EQ(rep.oracle, nums({0, 1, 0, 3, 0}));
    expect_pass(rep);
}

TEST(Verify, EveryEntryOnItsFeasibilityRange) {
    for (const auto& name : list_entries()) {
        auto e = get_entry(name);
        int max_n = std::max(e.first_n, std::min(e.feasibility > 0 ? e.feasibility : 8, 5));
        if (name == "catalan") max_n = 3;
        auto rep = verify_entry(e, max_n);
        expect_pass(rep);
        if (e.formula) {
            EXPECT_TRUE(has_lane(rep, "brute")) << name;
        }
    }
}

TEST(Verify, WordLaneForOrderedStirling) {
    for (int r = 1; r <= 3; ++r) {
        auto e = get_entry("stirling2_" + std::to_string(r));
        auto rep = verify_entry(e, 4);
        ASSERT_TRUE(has_lane(rep, "words-dp"));
        for (const auto& l : rep.lanes) {
            if (l.lane == "words-dp") {
                EXPECT_EQ(l.to, kDpHorizon);
            }
        }
        expect_pass(rep);
    }
}

TEST(Verify, RecurrenceLanes) {
    for (const std::string name : {"fibonacci", "lucas", "chebyshev"}) {
        auto rep = verify_entry(name, 6);
        for (const std::string lane : {"recurrence", "paths", "diff-repr"}) EXPECT_TRUE(has_lane(rep, lane)) << name << lane;
        expect_pass(rep);
    }
}

TEST(Verify, TouchardAtSeveralPoints) {
    for (std::int64_t x : {0, 1, 2, 3}) {
        auto rep = verify_entry(get_entry("touchard", {x}), 4);
        EXPECT_TRUE(has_lane(rep, "polynomial"));
        expect_pass(rep);
    }
}

TEST(Verify, MismatchIsReportedWithFirstIndex) {
    auto e = get_entry("binary_relations");
    e.fast = [](int N) {
        auto s = oracles::binary_relations(N);
        s[2] += 1;
        return s;
    };
    e.facts.clear();
    auto rep = verify_entry(e, 3);
    EXPECT_FALSE(rep.pass());
    bool saw = false;
    for (const auto& l : rep.lanes)
        if (!l.pass) {
            saw = true;
            EXPECT_EQ(l.first_mismatch, 2);
        }
    EXPECT_TRUE(saw);
}

TEST(Facts, PeriodicityVerdicts) {
    auto bell = get_entry("bell");
    auto r2 = series::detect_periodicity_residues(bell.residues_mod(200, 2), 2);
    ASSERT_TRUE(r2.periodic);
    EXPECT_EQ(r2.period, 3);
    EXPECT_EQ(r2.n0, 0);
    EXPECT_TRUE(series::detect_periodicity_residues(bell.residues_mod(200, 3), 3).periodic);
    auto r5 = series::detect_periodicity_residues(bell.residues_mod(kBellMod5Horizon, 5), 5);
    ASSERT_TRUE(r5.periodic);
    EXPECT_EQ(r5.period, 781);
    EXPECT_FALSE(series::detect_periodicity_residues(bell.residues_mod(200, 5), 5).periodic);

    auto s1 = get_entry("stirling1_1");
    for (std::int64_t m : {2, 3, 4}) EXPECT_TRUE(series::detect_periodicity_residues(s1.residues_mod(200, m), m).periodic);
    auto cat = get_entry("catalan");
    EXPECT_FALSE(series::detect_periodicity_residues(cat.residues_mod(64, 2), 2).periodic);
}

TEST(Facts, SpeckerBlatterEntriesArePeriodic) {
    for (const auto& name : list_entries()) {
        auto e = get_entry(name);
        if (!e.specker_blatter) continue;
        EXPECT_FALSE(e.ordered) << name;
        int checked = 0;
        for (const auto& f : e.facts) {
            if (f.name.rfind("period-mod-", 0) != 0) continue;
            auto res = f.check();
            EXPECT_TRUE(res.pass) << name << " " << f.claim;
            ++checked;
        }
        EXPECT_EQ(checked, 4) << name;
    }
}

TEST(Facts, DiscoveredStirlingRecurrenceOrder) {
    for (int r = 1; r <= 3; ++r) {
        auto e = get_entry("stirling2_" + std::to_string(r));
        for (const auto& f : e.facts)
            if (f.name == "discovered-recurrence") {
                auto res = f.check();
                EXPECT_TRUE(res.pass) << res.detail;
                EXPECT_NE(res.detail.find("order " + std::to_string(r)), std::string::npos) << res.detail;
            }
    }
}
