#include "specker/catalog/formulas.hpp"
#include "specker/logic/eval.hpp"
#include "specker/logic/fragment.hpp"
#include "specker/logic/parser.hpp"
#include "specker/logic/structure.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace specker::logic;
namespace F = specker::catalog::formulas;

namespace {

Vocabulary binary_e() { return Vocabulary{}.add("E", 2); }
Vocabulary unary_r() { return Vocabulary{}.add("R", 1); }

Structure unary_structure(int n, unsigned mask) {
    Structure s;
    s.n = n;
    auto& r = s.interp["R"];
    for (int i = 0; i < n; ++i)
        if ((mask >> i) & 1u) r.insert({i + 1});
    return s;
}

// Random formula with one free variable x over a unary R and `=`.
Formula random_unary(std::mt19937_64& rng, int depth, const std::vector<std::string>& vars) {
    using namespace build;
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 7);
    std::uniform_int_distribution<std::size_t> var(0, vars.size() - 1);
    switch (pick(rng)) {
    case 0: return rel("R", vars[var(rng)]);
    case 1: return eq(vars[var(rng)], vars[var(rng)]);
    case 2: return (rng() & 1u) ? top() : bottom();
    case 3: return neg(random_unary(rng, depth - 1, vars));
    case 4: return conj(random_unary(rng, depth - 1, vars), random_unary(rng, depth - 1, vars));
    case 5: return disj(random_unary(rng, depth - 1, vars), random_unary(rng, depth - 1, vars));
    default: {
        std::string y = "v" + std::to_string(vars.size());
        auto inner = vars;
        inner.push_back(y);
        Formula body = random_unary(rng, depth - 1, inner);
        return (rng() & 1u) ? forall(y, body) : exists(y, body);
    }
    }
}

}  // namespace

TEST(Vocabulary, RejectsDuplicatesAndBadArity) {
    Vocabulary v;
    v.add("E", 2);
    EXPECT_THROW(v.add("E", 1), std::invalid_argument);
    EXPECT_THROW(v.add("R", 0), std::invalid_argument);
    v.add("R", 3, false);
    EXPECT_EQ(v.max_arity(), 3);
    EXPECT_FALSE(v[1].counted);
}

TEST(Parser, ParsesForallAtom) {
    Formula f = parse_formula("(forall x (rel E x x))", binary_e());
    using namespace build;
    EXPECT_TRUE(same(f, forall("x", rel("E", "x", "x"))));
}

TEST(Parser, ParsesCmod) {
    Formula f = parse_formula("(cmod 0 2 x true)", Vocabulary{});
    EXPECT_EQ(f->op, Op::CountMod);
    EXPECT_EQ(f->a, 0);
    EXPECT_EQ(f->b, 2);
    EXPECT_EQ(f->kids[0]->op, Op::True);
}

TEST(Parser, ReportsErrors) {
    auto kind_of = [](const std::string& text, const Vocabulary& v) {
        try {
            parse_formula(text, v);
        } catch (const FormulaError& e) {
            return e.kind();
        }
        ADD_FAILURE() << "no error for " << text;
        return FormulaError::Kind::Syntax;
    };
    EXPECT_EQ(kind_of("(forall x (rel E x))", binary_e()), FormulaError::Kind::ArityMismatch);
    EXPECT_EQ(kind_of("(forall x (rel Q x x))", binary_e()), FormulaError::Kind::UnknownSymbol);
    EXPECT_EQ(kind_of("(rel E x y)", binary_e()), FormulaError::Kind::UnboundVariable);
    EXPECT_EQ(kind_of("(cmod 2 2 x true)", binary_e()), FormulaError::Kind::BadParameter);
    EXPECT_EQ(kind_of("(and true", binary_e()), FormulaError::Kind::Syntax);
    EXPECT_EQ(kind_of("(and true false) true", binary_e()), FormulaError::Kind::Syntax);
    EXPECT_EQ(kind_of("(forall X true)", binary_e()), FormulaError::Kind::Syntax);
}

TEST(Parser, ErrorPositionPointsAtOffendingToken) {
    try {
        parse_formula("(and true (bogus))", Vocabulary{});
        FAIL();
    } catch (const FormulaError& e) {
        EXPECT_EQ(e.position(), 11u);
    }
}

TEST(Parser, RoundTripsCatalogFormulas) {
    Vocabulary v;
    v.add("E", 2).add("F", 2).add("U", 1).add("R", 1).add("F1", 2).add("F2", 2);
    for (const Formula& f : {F::equivalence(), F::trees(), F::eulerian(), F::e2eq(), F::catalan(), F::stirling1(2),
                             F::even_size_msol()}) {
        std::string text = to_string(f);
        Formula back = parse_formula(text, v);
        EXPECT_TRUE(same(f, back)) << text;
        EXPECT_EQ(to_string(back), text);
    }
}

TEST(Parser, IgnoresWhitespace) {
    Formula a = parse_formula("(exists x\n\t(rel R x))", unary_r());
    Formula b = parse_formula("( exists  x (rel R x) )", unary_r());
    EXPECT_TRUE(same(a, b));
}

TEST(Evaluate, ReflexiveIdentity) {
    Structure s{3, {{"E", {{1, 1}, {2, 2}, {3, 3}}}}, std::nullopt};
    EXPECT_TRUE(evaluate(parse_formula("(forall x (rel E x x))", binary_e()), s));
}

TEST(Evaluate, EvenUniverseViaCmod) {
    Formula f = parse_formula("(cmod 0 2 x true)", Vocabulary{});
    for (int n = 0; n <= 6; ++n) EXPECT_EQ(evaluate(f, Structure{n, {}, std::nullopt}), n % 2 == 0) << n;
}

TEST(Evaluate, EquivalenceAxiomsByHand) {
    Structure s{3, {{"E", {{1, 1}, {2, 2}, {3, 3}, {1, 2}, {2, 1}}}}, std::nullopt};
    EXPECT_TRUE(evaluate(F::equivalence(), s));
    s.interp["E"].erase({2, 1});
    EXPECT_FALSE(evaluate(F::equivalence(), s));
}

TEST(Evaluate, EmptyUniverseConventions) {
    Structure s{0, {}, std::nullopt};
    EXPECT_TRUE(evaluate(parse_formula("(forall x false)", Vocabulary{}), s));
    EXPECT_FALSE(evaluate(parse_formula("(exists x true)", Vocabulary{}), s));
    EXPECT_TRUE(evaluate(parse_formula("(cmod 0 3 x true)", Vocabulary{}), s));
    EXPECT_FALSE(evaluate(parse_formula("(cmod 1 3 x true)", Vocabulary{}), s));
}

TEST(Evaluate, ErrorsOnMissingOrderOrAssignment) {
    Formula ordered = parse_formula("(exists x (exists y (< x y)))", Vocabulary{});
    EXPECT_THROW(evaluate(ordered, Structure{2, {}, std::nullopt}), EvalError);
    EXPECT_TRUE(evaluate(ordered, Structure{2, {}, natural_order(2)}));
    Formula open = parse_formula("(rel R x)", unary_r(), {"x"});
    EXPECT_THROW(evaluate(open, unary_structure(2, 1)), EvalError);
    Assignment env;
    env.individuals["x"] = 1;
    EXPECT_TRUE(evaluate(open, unary_structure(2, 1), env));
    env.individuals["x"] = 2;
    EXPECT_FALSE(evaluate(open, unary_structure(2, 1), env));
}

TEST(Evaluate, SetVariablesAndConstants) {
    Formula f = parse_formula("(and (in 2 X) (not (in 1 X)))", Vocabulary{}, {"X"});
    Assignment env;
    env.sets["X"] = {2, 3};
    EXPECT_TRUE(evaluate(f, Structure{3, {}, std::nullopt}, env));
    env.sets["X"] = {1, 2};
    EXPECT_FALSE(evaluate(f, Structure{3, {}, std::nullopt}, env));
    // a constant outside the universe makes atoms false
    Formula g = parse_formula("(rel R 4)", unary_r());
    EXPECT_FALSE(evaluate(g, unary_structure(3, 7)));
}

TEST(Evaluate, OrderFollowsGivenPermutation) {
    Formula f = parse_formula("(< 3 1)", Vocabulary{});
    EXPECT_FALSE(evaluate(f, Structure{3, {}, natural_order(3)}));
    EXPECT_TRUE(evaluate(f, Structure{3, {}, std::vector<int>{3, 2, 1}}));
}

TEST(Fragment, Classification) {
    auto tag = classify_fragment(parse_formula("(forall x (rel E x x))", binary_e()));
    EXPECT_EQ(tag.fragment, Fragment::FOL);
    EXPECT_FALSE(tag.ordered);
    EXPECT_EQ(tag.max_arity, 2);
    tag = classify_fragment(parse_formula("(exists-set U (forall x (in x U)))", Vocabulary{}));
    EXPECT_EQ(tag.fragment, Fragment::MSOL);
    EXPECT_EQ(tag.max_arity, 1);
    tag = classify_fragment(F::eulerian());
    EXPECT_EQ(tag.fragment, Fragment::CMSOL);
    EXPECT_FALSE(tag.ordered);
    EXPECT_EQ(tag.max_arity, 2);
    tag = classify_fragment(F::e2eq());
    EXPECT_EQ(tag.fragment, Fragment::FOL);
    EXPECT_TRUE(tag.ordered);
}

TEST(Properties, DeMorganExhaustive) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        Formula f = random_unary(rng, 3, {"x"});
        Formula g = random_unary(rng, 3, {"x"});
        Formula lhs = build::forall("x", build::neg(build::conj(f, g)));
        Formula rhs = build::forall("x", build::disj(build::neg(f), build::neg(g)));
        for (int n = 0; n <= 4; ++n)
            for (unsigned m = 0; m < (1u << n); ++m)
                ASSERT_EQ(evaluate(lhs, unary_structure(n, m)), evaluate(rhs, unary_structure(n, m)));
    }
}

TEST(Properties, CmodMatchesDirectCount) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 40; ++trial) {
        Formula psi = random_unary(rng, 3, {"x"});
        int b = 2 + static_cast<int>(rng() % 3);
        int a = static_cast<int>(rng() % static_cast<unsigned>(b));
        Formula c = build::count_mod(a, b, "x", psi);
        for (int n = 0; n <= 5; ++n) {
            for (unsigned m = 0; m < (1u << n); ++m) {
                Structure s = unary_structure(n, m);
                int hits = 0;
                for (int v = 1; v <= n; ++v) {
                    Assignment env;
                    env.individuals["x"] = v;
                    hits += evaluate(psi, s, env);
                }
                ASSERT_EQ(evaluate(c, s), hits % b == a);
            }
        }
    }
}

TEST(Properties, QuantifierDuality) {
    std::mt19937_64 rng(13);
    using namespace build;
    for (int trial = 0; trial < 30; ++trial) {
        Formula psi = random_unary(rng, 3, {"x"});
        Formula set_psi = disj(in("x", "U"), psi);
        for (int n = 0; n <= 3; ++n) {
            for (unsigned m = 0; m < (1u << n); ++m) {
                Structure s = unary_structure(n, m);
                ASSERT_EQ(evaluate(forall("x", psi), s), evaluate(neg(exists("x", neg(psi))), s));
                ASSERT_EQ(evaluate(forall_set("U", forall("x", set_psi)), s),
                          evaluate(neg(exists_set("U", neg(forall("x", set_psi)))), s));
            }
        }
    }
}

TEST(Structure, RelabelAndIsomorphism) {
    Structure a{3, {{"E", {{1, 2}, {2, 3}}}}, std::nullopt};
    Structure b = relabel(a, {3, 1, 2});
    EXPECT_TRUE(isomorphic(a, b));
    Structure c{3, {{"E", {{1, 2}, {1, 3}}}}, std::nullopt};
    EXPECT_FALSE(isomorphic(a, c));
    EXPECT_TRUE(isomorphic(a, b, 1, 3));
    EXPECT_FALSE(isomorphic(a, b, 1, 1));
    EXPECT_THROW(check_structure(Structure{2, {{"E", {{1, 3}}}}, std::nullopt}), std::invalid_argument);
}
