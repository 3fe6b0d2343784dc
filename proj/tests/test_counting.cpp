#include "specker/catalog/formulas.hpp"
#include "specker/counting/coi.hpp"
#include "specker/counting/count.hpp"
#include "specker/logic/eval.hpp"
#include "specker/logic/parser.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace specker;
using namespace specker::counting;
using logic::Vocabulary;
namespace F = specker::catalog::formulas;

namespace {

CountTask task(logic::Formula phi, Vocabulary v, int n, OrderMode mode = OrderMode::Unordered) {
    CountTask t;
    t.phi = std::move(phi);
    t.vocab = std::move(v);
    t.n = n;
    t.mode = mode;
    return t;
}

Vocabulary binary_e() { return Vocabulary{}.add("E", 2); }

// Independent oracle: enumerate all binary relations on [n] as bit masks.
template <class Pred>
long long count_binary_relations(int n, Pred pred) {
    long long total = 0;
    const int bits = n * n;
    for (unsigned long long m = 0; m < (1ull << bits); ++m) {
        auto e = [&](int i, int j) { return ((m >> (i * n + j)) & 1ull) != 0; };
        if (pred(e)) ++total;
    }
    return total;
}

bool is_equivalence(int n, auto e) {
    for (int i = 0; i < n; ++i)
        if (!e(i, i)) return false;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (e(i, j) != e(j, i)) return false;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (e(i, j) && e(j, k) && !e(i, k)) return false;
    return true;
}

}  // namespace

TEST(SpeckerCount, BinaryRelations) {
    EXPECT_EQ(specker_count(task(logic::build::top(), binary_e(), 2)), 16);
    EXPECT_EQ(specker_count(task(logic::build::top(), binary_e(), 3)), 512);
}

TEST(SpeckerCount, LinearOrders) {
    EXPECT_EQ(specker_count(task(F::linear_order(), binary_e(), 3)), 6);
    EXPECT_EQ(specker_count(task(F::linear_order(), binary_e(), 4)), 24);
}

TEST(SpeckerCount, EquivalenceMatchesEnumeration) {
    for (int n = 0; n <= 4; ++n) {
        long long oracle = count_binary_relations(n, [&](auto e) { return is_equivalence(n, e); });
        EXPECT_EQ(specker_count(task(F::equivalence(), binary_e(), n)), oracle) << n;
    }
    EXPECT_EQ(specker_count(task(F::equivalence(), binary_e(), 4)), 15);
}

TEST(SpeckerCount, FalseGivesZero) {
    EXPECT_EQ(specker_count(task(logic::build::bottom(), binary_e(), 3)), 0);
    EXPECT_EQ(specker_count(task(logic::build::bottom(), Vocabulary{}, 3)), 0);
}

TEST(SpeckerCount, NoCountedSymbols) {
    Vocabulary v;
    EXPECT_EQ(specker_count(task(F::even_size_cmod(), v, 4)), 1);
    EXPECT_EQ(specker_count(task(F::even_size_cmod(), v, 3)), 0);
}

TEST(SpeckerCount, FixedNonCountedSymbol) {
    Vocabulary v;
    v.add("P", 1, false).add("R", 1);
    // R must contain P
    auto phi = logic::parse_formula("(forall x (implies (rel P x) (rel R x)))", v);
    CountTask t = task(phi, v, 4);
    t.fixed["P"] = {{1}, {3}};
    EXPECT_EQ(specker_count(t), 4);
    t.fixed["R"] = {{1}};
    EXPECT_THROW(specker_count(t), CountError);
}

TEST(SpeckerCount, BudgetExceededIsDistinct) {
    CountOptions opts;
    opts.budget = 100;
    try {
        specker_count(task(F::equivalence(), binary_e(), 4), opts);
        FAIL();
    } catch (const BudgetExceeded& e) {
        EXPECT_EQ(e.budget(), 100u);
    }
}

TEST(SpeckerCount, RejectsBadTasks) {
    EXPECT_THROW(specker_count(task(F::e2eq(), F::e2eq_vocab(), 3)), CountError);
    CountTask t = task(F::e2eq(), F::e2eq_vocab(), 3, OrderMode::Given);
    t.order = {1, 1, 2};
    EXPECT_THROW(specker_count(t), CountError);
    auto open = logic::parse_formula("(rel E x x)", binary_e(), {"x"});
    EXPECT_THROW(specker_count(task(open, binary_e(), 2)), CountError);
}

TEST(OrderedCount, E2eq) {
    const long long expected[] = {0, 0, 1, 0, 3, 0, 10};
    for (int n = 0; n <= 6; ++n)
        EXPECT_EQ(specker_count(task(F::e2eq(), F::e2eq_vocab(), n, OrderMode::Natural)), expected[n]) << n;
    CountTask t = task(F::e2eq(), F::e2eq_vocab(), 4);
    EXPECT_EQ(ordered_specker_count(t, {4, 3, 2, 1}), 3);
}

TEST(OrderedCount, Catalan) {
    const long long expected[] = {1, 1, 2, 5};
    for (int n = 1; n <= 3; ++n)
        EXPECT_EQ(specker_count(task(F::catalan(), F::catalan_vocab(), n, OrderMode::Natural)), expected[n]) << n;
}

TEST(Coi, E2eqExhaustive) {
    CoiReport rep = check_coi(task(F::e2eq(), F::e2eq_vocab(), 4));
    EXPECT_TRUE(rep.invariant);
    EXPECT_EQ(rep.counts.size(), 24u);
    for (const auto& [order, count] : rep.counts) EXPECT_EQ(count, 3);
}

TEST(Coi, MinimumInR) {
    Vocabulary v = Vocabulary{}.add("R", 1);
    auto phi = logic::parse_formula("(exists x (and (rel R x) (not (exists y (< y x)))))", v);
    CoiReport rep = check_coi(task(phi, v, 3));
    EXPECT_TRUE(rep.invariant);
    for (const auto& [order, count] : rep.counts) EXPECT_EQ(count, 4);
}

TEST(Coi, FixedLabelBreaksInvariance) {
    Vocabulary v = Vocabulary{}.add("R", 1);
    // element 1 is the minimum: depends on how the order places label 1
    auto phi = logic::parse_formula("(and (forall y (not (< y 1))) (rel R 1))", v);
    CoiReport rep = check_coi(task(phi, v, 3));
    ASSERT_FALSE(rep.invariant);
    ASSERT_TRUE(rep.witness.has_value());
    const auto& a = rep.counts[rep.witness->first];
    const auto& b = rep.counts[rep.witness->second];
    EXPECT_NE(a.second, b.second);
}

TEST(Coi, SampledStrategyIsSeeded) {
    CountTask t = task(F::e2eq(), F::e2eq_vocab(), 6);
    CoiReport r1 = check_coi(t, CoiStrategy::sampled(7, 8));
    CoiReport r2 = check_coi(t, CoiStrategy::sampled(7, 8));
    EXPECT_EQ(r1.strategy, CoiStrategyKind::Sampled);
    EXPECT_EQ(r1.seed, 7u);
    ASSERT_EQ(r1.counts.size(), 8u);
    for (std::size_t i = 0; i < r1.counts.size(); ++i) EXPECT_EQ(r1.counts[i], r2.counts[i]);
    EXPECT_TRUE(r1.invariant);
    EXPECT_THROW(check_coi(t, CoiStrategy::exhaustive()), CountError);
}

TEST(DiffEval, Examples) {
    auto orders = [](int n) { return task(F::linear_order(), binary_e(), n); };
    auto none = [](int n) { return task(logic::build::bottom(), binary_e(), n); };
    auto eqs = [](int n) { return task(F::equivalence(), binary_e(), n); };
    EXPECT_EQ(diff_specker_eval(orders, none, 3), 6);
    EXPECT_EQ(diff_specker_eval(eqs, eqs, 4), 0);
    EXPECT_EQ(diff_specker_eval(none, orders, 3), -6);
}

TEST(Properties, UnusedUnarySymbolDoublesPerElement) {
    for (int n = 0; n <= 3; ++n) {
        BigInt base = specker_count(task(F::equivalence(), binary_e(), n));
        Vocabulary v = binary_e();
        v.add("S", 1);
        EXPECT_EQ(specker_count(task(F::equivalence(), v, n)), base * pow2(static_cast<unsigned>(n)));
    }
    // n = 4 with a cheaper base formula
    Vocabulary v = Vocabulary{}.add("R", 1).add("S", 1);
    auto phi = F::no_consecutive();
    BigInt base = specker_count(task(phi, Vocabulary{}.add("R", 1), 4, OrderMode::Natural));
    EXPECT_EQ(specker_count(task(phi, v, 4, OrderMode::Natural)), base * 16);
}

TEST(Properties, FixedInterpretationRelabelInvariance) {
    // unordered counting is invariant under relabeling a fixed symbol
    Vocabulary v;
    v.add("P", 2, false).add("E", 2);
    auto phi = logic::parse_formula(
        "(forall x (forall y (implies (rel P x y) (and (rel E x y) (not (rel E y x))))))", v);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 2 + static_cast<int>(rng() % 3);
        CountTask t = task(phi, v, n);
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j)
                if (i != j && rng() % 3 == 0) t.fixed["P"].insert({i, j});
        std::vector<int> perm = logic::natural_order(n);
        fisher_yates(perm, rng);
        CountTask u = t;
        u.fixed["P"].clear();
        for (const auto& tup : t.fixed["P"]) u.fixed["P"].insert({perm[tup[0] - 1], perm[tup[1] - 1]});
        EXPECT_EQ(specker_count(t), specker_count(u));
    }
}

TEST(Properties, WorkerCountDoesNotChangeResult) {
    CountTask t = task(F::e2eq(), F::e2eq_vocab(), 5, OrderMode::Natural);
    CountTask s = task(F::stirling2_relation(2), binary_e(), 4);
    for (const CountTask* x : {&t, &s}) {
        CountOptions o1;
        CountResult r1 = count_models(*x, o1);
        for (int w : {2, 4}) {
            CountOptions ow;
            ow.workers = w;
            CountResult rw = count_models(*x, ow);
            EXPECT_EQ(rw.count, r1.count);
            EXPECT_EQ(rw.nodes, r1.nodes);
        }
    }
}

TEST(Properties, NaturalOrderMatchesFixedSuccessorRelation) {
    // `<` under the natural order vs. a non-counted fixed relation L = natural <
    Vocabulary v = Vocabulary{}.add("R", 1).add("L", 2, false);
    auto ordered = F::no_consecutive();
    auto via_l = logic::parse_formula(
        "(forall x (forall y (implies (and (rel L x y) (not (exists q0 (and (rel L x q0) (rel L q0 y))))) "
        "(not (and (rel R x) (rel R y))))))",
        v);
    for (int n = 0; n <= 4; ++n) {
        CountTask a = task(ordered, v, n, OrderMode::Natural);
        CountTask b = task(via_l, v, n);
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) b.fixed["L"].insert({i, j});
        EXPECT_EQ(specker_count(a), specker_count(b)) << n;
    }
}

TEST(ModelVisitor, VisitsEveryModel) {
    std::vector<logic::Structure> seen;
    for_each_model(task(F::equivalence(), binary_e(), 3),
                   [&](const ModelSearch& m) { seen.push_back(m.structure(binary_e())); });
    EXPECT_EQ(seen.size(), 5u);
    for (const auto& s : seen) EXPECT_TRUE(logic::evaluate(F::equivalence(), s));
}
