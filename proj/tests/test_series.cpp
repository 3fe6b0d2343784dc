#include "specker/series/bm.hpp"
#include "specker/series/gf.hpp"
#include "specker/series/linrec.hpp"
#include "specker/series/matrix.hpp"
#include "specker/series/periodicity.hpp"
#include "specker/series/poly.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace specker;
using namespace specker::series;

namespace {

std::vector<BigInt> ints(std::initializer_list<long long> xs) { return {xs.begin(), xs.end()}; }

std::vector<BigInt> fibonacci(int count) {
    std::vector<BigInt> f{0, 1};
    while (static_cast<int>(f.size()) < count) f.push_back(f[f.size() - 1] + f[f.size() - 2]);
    f.resize(static_cast<std::size_t>(count));
    return f;
}

std::vector<BigInt> two_pow_plus_one(int from, int count) {
    std::vector<BigInt> v;
    for (int n = from; n < from + count; ++n) v.push_back(pow2(static_cast<unsigned>(n)) + 1);
    return v;
}

// Bell numbers from the Bell triangle.
std::vector<BigInt> bell(int count) {
    std::vector<BigInt> out{1};
    std::vector<BigInt> row{1};
    while (static_cast<int>(out.size()) < count) {
        std::vector<BigInt> next{row.back()};
        for (const auto& v : row) next.push_back(next.back() + v);
        out.push_back(next[0]);
        row = std::move(next);
    }
    out.resize(static_cast<std::size_t>(count));
    return out;
}

std::vector<BigInt> catalan(int count) {
    std::vector<BigInt> c{1};
    for (int n = 1; n < count; ++n) {
        BigInt s = 0;
        for (int i = 0; i < n; ++i) s += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(n - 1 - i)];
        c.push_back(s);
    }
    return c;
}

LinRec random_linrec(std::mt19937_64& rng) {
    int d = 1 + static_cast<int>(rng() % 4);
    LinRec r;
    for (int j = 0; j < d; ++j) r.coeffs.push_back(static_cast<long long>(rng() % 11) - 5);
    for (int j = 0; j < d; ++j) r.initials.push_back(static_cast<long long>(rng() % 11) - 5);
    return r;
}

}  // namespace

TEST(EvalLinrec, Examples) {
    EXPECT_EQ(eval_linrec(make_linrec(ints({1, 1}), ints({0, 1})), 10), 55);
    EXPECT_EQ(eval_linrec(make_linrec(ints({1, 1}), ints({2, 1})), 5), 11);
    EXPECT_EQ(eval_linrec(make_linrec(ints({3, -2}), ints({3, 5}), 1), 6), 65);
    EXPECT_THROW(eval_linrec(make_linrec(ints({3, -2}), ints({3, 5}), 1), 0), LinRecError);
    EXPECT_THROW(make_linrec(ints({1, 1}), ints({1})), LinRecError);
}

TEST(EvalLinrec, ModularAndPolynomial) {
    LinRec fib = make_linrec(ints({1, 1}), ints({0, 1}));
    fib.modulus = 7;
    EXPECT_EQ(eval_linrec(fib, 10), 55 % 7);
    PolyLinRec cheb;
    cheb.coeffs = {MPoly(2) * MPoly::var("x"), MPoly(-1)};
    cheb.initials = {MPoly(1), MPoly::var("x")};
    MPoly t3 = eval_linrec(cheb, 3);
    EXPECT_EQ(t3, parse_mpoly("4*x^3 - 3*x"));
    EXPECT_EQ(t3.eval({{"x", 2}}), 26);
}

TEST(EvalLinrec, Rebase) {
    LinRec r = make_linrec(ints({3, -2}), ints({2, 3}), 0);
    LinRec s = rebase(r, 1);
    EXPECT_EQ(s.base, 1);
    EXPECT_EQ(s.initials, ints({3, 5}));
    EXPECT_EQ(eval_linrec(s, 6), eval_linrec(r, 6));
}

TEST(Poly, ParseAndPrint) {
    MPoly p = parse_mpoly("(w1 + w2)^2 - 2*w1*w2");
    EXPECT_EQ(p, parse_mpoly("w1^2 + w2^2"));
    EXPECT_EQ(p.eval({{"w1", 3}, {"w2", -1}}), 10);
    EXPECT_EQ(parse_mpoly(p.to_string()), p);
    EXPECT_THROW(parse_mpoly("2 +"), PolyParseError);
    EXPECT_THROW(p.eval({{"w1", 1}}), std::invalid_argument);
    EXPECT_EQ(poly_to_string({1, -1, -1}), "1 - x - x^2");
}

TEST(BerlekampMassey, Fibonacci) {
    BmResult r = berlekamp_massey(fibonacci(10));
    EXPECT_TRUE(r.integral);
    EXPECT_EQ(r.rec.coeffs, ints({1, 1}));
    EXPECT_EQ(r.rec.initials, ints({0, 1}));
    EXPECT_EQ(generate(r.rec, 10), fibonacci(10));
}

TEST(BerlekampMassey, ConstantAndTwoPowPlusOne) {
    BmResult c = berlekamp_massey(ints({1, 1, 1, 1}));
    EXPECT_EQ(c.rec.coeffs, ints({1}));
    BmResult r = berlekamp_massey(two_pow_plus_one(1, 6), 1);
    EXPECT_EQ(r.rec.coeffs, ints({3, -2}));
    EXPECT_EQ(r.rec.base, 1);
    EXPECT_EQ(generate(r.rec, 6), two_pow_plus_one(1, 6));
}

TEST(BerlekampMassey, PreperiodAndZero) {
    BmResult r = berlekamp_massey(ints({1, 1, 2, 4, 8, 16}));
    EXPECT_EQ(r.rec.coeffs, ints({2}));
    EXPECT_EQ(r.rec.preperiod, 1);
    EXPECT_EQ(generate(r.rec, 6), ints({1, 1, 2, 4, 8, 16}));
    BmResult z = berlekamp_massey(ints({0, 0, 0, 0}));
    EXPECT_EQ(z.rec.coeffs, ints({0}));
    EXPECT_EQ(z.rec.initials, ints({0}));
    BmResult tail = berlekamp_massey(ints({5, 0, 0, 0, 0, 0}));
    EXPECT_EQ(generate(tail.rec, 6), ints({5, 0, 0, 0, 0, 0}));
}

TEST(BerlekampMassey, ShortPrefixIsUnstable) {
    try {
        berlekamp_massey(ints({1, 2, 4, 9}));
        FAIL();
    } catch (const UnstableRecurrence& e) {
        EXPECT_EQ(e.order(), 3);
    }
}

TEST(BerlekampMassey, RationalRecurrenceIsFlagged) {
    // f(n) = f(n-1) / 2 style data is not an integer recurrence
    BmResult r = berlekamp_massey(ints({4, 2, 1, 3, 2, 4, 1, 5}));
    EXPECT_GT(r.complexity, 0);
    if (!r.integral) {
        EXPECT_GT(r.denominator, 1);
    }
}

TEST(BerlekampMassey, ModularPrime) {
    LinRec r = berlekamp_massey_mod(fibonacci(20), 2);
    EXPECT_EQ(r.modulus, 2);
    auto g = generate(r, 20);
    auto f = fibonacci(20);
    for (int i = 0; i < 20; ++i) EXPECT_EQ(g[i], f[i] % 2);
    EXPECT_THROW(berlekamp_massey_mod(fibonacci(20), 4), std::invalid_argument);
    LinRec b = berlekamp_massey_mod(bell(40), 3);
    auto gb = generate(b, 40);
    auto bb = bell(40);
    for (int i = 0; i < 40; ++i) EXPECT_EQ(gb[i], bb[i] % 3);
}

TEST(BerlekampMassey, MinimalityOnRegeneratedSequence) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        LinRec r = random_linrec(rng);
        auto seq = generate(r, 2 * r.order() + 6);
        BmResult a = berlekamp_massey(seq);
        ASSERT_TRUE(a.integral);
        BmResult b = berlekamp_massey(generate(a.rec, static_cast<int>(seq.size())));
        EXPECT_EQ(b.rec.order(), a.rec.order());
        EXPECT_EQ(b.complexity, a.complexity);
        EXPECT_EQ(generate(a.rec, 40), generate(r, 40));
    }
}

TEST(Periodicity, Examples) {
    auto fib = detect_periodicity_mod(fibonacci(65), 2);
    ASSERT_TRUE(fib.periodic);
    EXPECT_EQ(fib.n0, 0);
    EXPECT_EQ(fib.period, 3);
    auto b = detect_periodicity_mod(bell(121), 2);
    ASSERT_TRUE(b.periodic);
    EXPECT_EQ(b.n0, 0);
    EXPECT_EQ(b.period, 3);
    auto c = detect_periodicity_mod(catalan(65), 2);
    EXPECT_FALSE(c.periodic);
    EXPECT_EQ(c.horizon, 64);
    auto b3 = detect_periodicity_mod(bell(201), 3);
    ASSERT_TRUE(b3.periodic);
    EXPECT_EQ(b3.period, 13);
}

TEST(Periodicity, GeneratorOverload) {
    auto r = detect_periodicity_mod([](int n) { return BigInt(n % 4 == 0 ? 1 : 0) + 10; }, 5, 40);
    ASSERT_TRUE(r.periodic);
    EXPECT_EQ(r.period, 4);
    EXPECT_THROW(detect_periodicity_mod([](int) { return BigInt(0); }, 1, 40), std::invalid_argument);
    EXPECT_THROW(detect_periodicity_mod([](int) { return BigInt(0); }, 2, 3), std::invalid_argument);
}

TEST(Periodicity, SoundAndFoundWithinPigeonholeHorizon) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 60; ++trial) {
        int m = 2 + static_cast<int>(rng() % 5);
        LinRec r;
        int d = 1 + static_cast<int>(rng() % 3);
        for (int j = 0; j < d; ++j) r.coeffs.push_back(static_cast<long long>(rng() % 11) - 5);
        for (int j = 0; j < d; ++j) r.initials.push_back(static_cast<long long>(rng() % 11) - 5);
        long long mp = 1;
        for (int i = 0; i <= d; ++i) mp *= m;
        int H = static_cast<int>(2 * mp + d);
        auto terms = generate(r, H + 1);
        auto rep = detect_periodicity_mod(terms, m);
        ASSERT_TRUE(rep.periodic) << "m=" << m << " d=" << d;
        for (int n = rep.n0; n + rep.period <= H; ++n)
            ASSERT_EQ(mod_floor(terms[n], m), mod_floor(terms[n + rep.period], m));
    }
}

TEST(GeneratingFunction, Examples) {
    RationalGF fib = gf_from_linrec(make_linrec(ints({1, 1}), ints({0, 1})));
    EXPECT_EQ(trimmed(fib.P), ints({0, 1}));
    EXPECT_EQ(fib.Q, ints({1, -1, -1}));
    EXPECT_EQ(expand(fib, 6), fibonacci(6));
    RationalGF one = gf_from_linrec(make_linrec(ints({1}), ints({1})));
    EXPECT_EQ(one.P, ints({1}));
    EXPECT_EQ(one.Q, ints({1, -1}));
    RationalGF tp = gf_from_linrec(make_linrec(ints({3, -2}), ints({2, 3})));
    EXPECT_EQ(tp.Q, ints({1, -3, 2}));
    EXPECT_THROW(gf_to_linrec(RationalGF{ints({1}), ints({2, 1})}), LinRecError);
}

TEST(GeneratingFunction, RoundTrips) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        LinRec r = random_linrec(rng);
        if (trial % 3 == 0) {
            r.preperiod = 1 + static_cast<int>(rng() % 2);
            for (int i = 0; i < r.preperiod; ++i) r.initials.push_back(static_cast<long long>(rng() % 7) - 3);
        }
        LinRec back = gf_to_linrec(gf_from_linrec(r));
        EXPECT_EQ(back.coeffs, r.coeffs);
        EXPECT_EQ(back.initials, r.initials);
        EXPECT_EQ(back.preperiod, r.preperiod);
    }
}

TEST(RationalExpr, Examples) {
    EXPECT_EQ(eval_rational_expr(*parse_rational_expr("star(x + x^2)"), 8), ints({1, 1, 2, 3, 5, 8, 13, 21, 34}));
    EXPECT_EQ(eval_rational_expr(*parse_rational_expr("(1+x)*(1+x)"), 3), ints({1, 2, 1, 0}));
    EXPECT_EQ(eval_rational_expr(*parse_rational_expr("star(x)"), 4), ints({1, 1, 1, 1, 1}));
    EXPECT_THROW(eval_rational_expr(*parse_rational_expr("star(1 + x)"), 4), SeriesError);
    EXPECT_THROW(parse_rational_expr("star(x"), SeriesError);
}

TEST(RationalExpr, CompositionsOracle) {
    // compositions of N into parts 1 and 2, counted directly
    auto compositions = [](int N) {
        std::vector<BigInt> c(static_cast<std::size_t>(N) + 1, 0);
        c[0] = 1;
        for (int n = 1; n <= N; ++n) c[n] = c[n - 1] + (n >= 2 ? c[n - 2] : BigInt(0));
        return c;
    };
    EXPECT_EQ(eval_rational_expr(*parse_rational_expr("star(x+x^2)"), 8), compositions(8));
}

TEST(Combine, SumDifferenceHadamard) {
    LinRec fib = make_linrec(ints({1, 1}), ints({0, 1}));
    LinRec luc = make_linrec(ints({1, 1}), ints({2, 1}));
    LinRec s = combine_recurrences(CombineOp::Sum, fib, luc);
    EXPECT_EQ(generate(s, 5), ints({2, 2, 4, 6, 10}));
    EXPECT_EQ(minimize_linrec(s).coeffs, ints({1, 1}));
    LinRec z = minimize_linrec(combine_recurrences(CombineOp::Difference, fib, fib));
    EXPECT_EQ(z.coeffs, ints({0}));
    EXPECT_EQ(z.initials, ints({0}));
    LinRec two = make_linrec(ints({2}), ints({1}));
    LinRec h = combine_recurrences(CombineOp::Hadamard, two, fib);
    EXPECT_EQ(generate(h, 5), ints({0, 2, 4, 16, 48}));
    EXPECT_EQ(h.coeffs, ints({2, 4}));
    EXPECT_EQ(minimize_linrec(h).coeffs, ints({2, 4}));
}

TEST(Combine, RandomAgainstTermwise) {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 30; ++trial) {
        LinRec a = random_linrec(rng), b = random_linrec(rng);
        if (trial % 4 == 0) {
            a.preperiod = 1;
            a.initials.push_back(3);
        }
        for (CombineOp op : {CombineOp::Sum, CombineOp::Difference, CombineOp::Hadamard}) {
            LinRec c = combine_recurrences(op, a, b);
            auto x = generate(a, 30), y = generate(b, 30), z = generate(c, 30);
            for (int i = 0; i < 30; ++i) {
                BigInt want = op == CombineOp::Sum ? x[i] + y[i] : op == CombineOp::Difference ? x[i] - y[i] : x[i] * y[i];
                ASSERT_EQ(z[i], want);
            }
        }
    }
}

TEST(Matrix, CharpolyOfCompanion) {
    Poly cp = charpoly(companion(ints({1, 1})));
    EXPECT_EQ(cp, ints({-1, -1, 1}));
    Poly cp3 = charpoly(companion(ints({2, -3, 5})));
    EXPECT_EQ(cp3, ints({-5, 3, -2, 1}));
}
