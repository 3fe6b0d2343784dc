// Acceptance suite: one PASS/FAIL line per criterion. Each criterion also
// produces a JSON record; the last criterion reruns the others under several
// worker counts and compares those records byte for byte.

#include "specker/catalog/entries.hpp"
#include "specker/catalog/formulas.hpp"
#include "specker/catalog/oracles.hpp"
#include "specker/construct/diff.hpp"
#include "specker/construct/paths.hpp"
#include "specker/counting/coi.hpp"
#include "specker/counting/count.hpp"
#include "specker/index/subst.hpp"
#include "specker/io/json.hpp"
#include "specker/series/bm.hpp"
#include "specker/series/linrec.hpp"
#include "specker/series/periodicity.hpp"
#include "specker/util.hpp"
#include "specker/words/compile.hpp"
#include "specker/words/transfer.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace specker;
using io::Json;
namespace F = specker::catalog::formulas;
namespace O = specker::catalog::oracles;

namespace {

struct Result {
    bool pass = true;
    Json record = Json::object();
    std::string note;

    void check(bool ok, const std::string& what) {
        if (!ok && pass) note = what;
        pass = pass && ok;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

counting::CountOptions with_workers(int w) {
    counting::CountOptions o;
    o.workers = w;
    return o;
}

BigInt count(const logic::Formula& phi, const logic::Vocabulary& v, int n, bool ordered, int workers) {
    counting::CountTask t;
    t.phi = phi;
    t.vocab = v;
    t.n = n;
    t.mode = ordered ? counting::OrderMode::Natural : counting::OrderMode::Unordered;
    return counting::specker_count(t, with_workers(workers));
}

logic::Vocabulary graph() { return logic::Vocabulary{}.add("E", 2); }

logic::Vocabulary unary(std::initializer_list<const char*> names) {
    logic::Vocabulary v;
    for (const char* n : names) v.add(n, 1);
    return v;
}

// 1. exact counting identities
Result counting_identities(int workers) {
    Result r;
    struct Case {
        std::string name;
        logic::Formula phi;
        logic::Vocabulary vocab;
        bool ordered;
        int from, to;
        std::function<BigInt(int)> expect;
    };
    std::vector<Case> cases = {
        {"binary_relations", logic::build::top(), graph(), false, 1, 4, [](int n) { return pow2(static_cast<unsigned>(n * n)); }},
        {"linear_orders", F::linear_order("E"), graph(), false, 1, 5, [](int n) { return factorial(n); }},
        {"equivalence_relations", F::equivalence("E"), graph(), false, 1, 5,
         [](int n) { return std::vector<BigInt>{1, 1, 2, 5, 15, 52}[static_cast<std::size_t>(n)]; }},
        {"trees", F::trees("E"), graph(), false, 1, 5, [](int n) { return n == 1 ? BigInt(1) : ipow(BigInt(n), static_cast<unsigned>(n - 2)); }},
        {"stirling2_2", F::stirling2_relation(2, "E"), graph(), false, 2, 5,
         [](int n) { return std::vector<BigInt>{0, 0, 1, 3, 7, 15}[static_cast<std::size_t>(n)]; }},
        {"stirling1_1", F::stirling1(1, "E"), graph(), false, 1, 5, [](int n) { return factorial(n - 1); }},
        {"e2eq", F::e2eq(), F::e2eq_vocab(), true, 1, 6,
         [](int n) { return std::vector<BigInt>{0, 0, 1, 0, 3, 0, 10}[static_cast<std::size_t>(n)]; }},
    };
    for (const auto& c : cases) {
        auto t0 = Clock::now();
        Json values = Json::array();
        for (int n = c.from; n <= c.to; ++n) {
            BigInt got = count(c.phi, c.vocab, n, c.ordered, workers);
            values.push_back(io::big(got));
            r.check(got == c.expect(n), c.name + " at n=" + std::to_string(n));
        }
        r.check(seconds_since(t0) < 60.0, c.name + " took longer than 60 s");
        r.record[c.name] = values;
    }
    return r;
}

// 2. compiled automata agree with model counting on words
Result word_compiler(int workers) {
    using namespace logic::build;
    Result r;
    std::vector<std::tuple<std::string, logic::Formula, logic::Vocabulary>> cases = {
        {"even_parity", F::even_parity(), unary({"R"})},
        {"no_consecutive", F::no_consecutive(), unary({"R"})},
        {"all_in", F::all_in(), unary({"R"})},
        {"stirling2_ordered_2", F::stirling2_ordered(2), F::stirling2_ordered_vocab(2)},
        {"stirling2_ordered_3", F::stirling2_ordered(3), F::stirling2_ordered_vocab(3)},
        {"cmod_and_set", conj(count_mod(1, 3, "x", rel("A", "x")), exists_set("X", forall("x", implies(rel("B", "x"), in("x", "X"))))),
         unary({"A", "B"})},
        {"no_A_after_B", F::forall_all({"x", "y"}, implies(conj(lt("x", "y"), rel("A", "y")), neg(rel("B", "x")))), unary({"A", "B"})},
    };
    for (const auto& [name, phi, v] : cases) {
        auto d = words::compile_word_formula(phi, v);
        auto counts = words::word_counts(d, 10);
        for (int n = 0; n <= 10; ++n)
            r.check(counts[static_cast<std::size_t>(n)] == count(phi, v, n, true, workers), name + " at n=" + std::to_string(n));
        r.record[name] = Json{{"states", d.states()}, {"counts", io::big_array(counts)}};
    }
    return r;
}

// 3. recurrences read off the automata
Result recurrence_extraction(int) {
    Result r;
    auto nc = words::compile_word_formula(F::no_consecutive(), unary({"R"}));
    auto par = words::compile_word_formula(F::even_parity(), unary({"R"}));
    auto rn = words::recurrence_from_dfa(nc);
    auto rp = words::recurrence_from_dfa(par);
    r.check(rn.rec.order() == 2 && rn.rec.coeffs == std::vector<BigInt>{1, 1}, "no_consecutive recurrence is not (1,1)");
    r.check(rp.rec.coeffs == std::vector<BigInt>{2} && rp.rec.preperiod <= 1, "parity recurrence is not a(n)=2a(n-1)");
    r.check(series::generate(rn.rec, 51) == words::word_counts(nc, 50), "no_consecutive recurrence differs before n=50");
    r.check(series::generate(rp.rec, 51) == words::word_counts(par, 50), "parity recurrence differs before n=50");
    r.record["no_consecutive"] = io::to_json(rn.rec);
    r.record["even_parity"] = io::to_json(rp.rec);
    return r;
}

// 4. Berlekamp-Massey
Result berlekamp_massey(int) {
    Result r;
    auto fib = O::fibonacci(9);
    std::vector<BigInt> p2;
    for (int n = 0; n < 6; ++n) p2.push_back(pow2(static_cast<unsigned>(n)) + 1);
    auto bf = series::berlekamp_massey(fib);
    auto bp = series::berlekamp_massey(p2);
    r.check(bf.integral && bf.rec.coeffs == std::vector<BigInt>{1, 1}, "Fibonacci coefficients");
    r.check(bp.integral && bp.rec.coeffs == std::vector<BigInt>{3, -2}, "2^n+1 coefficients");
    r.check(series::generate(bf.rec, 10) == fib, "Fibonacci regeneration");
    r.check(series::generate(bp.rec, 6) == p2, "2^n+1 regeneration");
    r.record["fibonacci"] = io::to_json(bf.rec);
    r.record["pow2_plus_1"] = io::to_json(bp.rec);
    return r;
}

// 5. path sums over the recurrence tree on an exhaustive grid
Result path_grid(int) {
    Result r;
    std::size_t recs = 0, checks = 0, mismatches = 0;
    for (int order = 1; order <= 3; ++order) {
        std::vector<int> coeff(static_cast<std::size_t>(order), -3), init(static_cast<std::size_t>(order), 0);
        for (;;) {
            std::vector<BigInt> cs(coeff.begin(), coeff.end()), is(init.begin(), init.end());
            auto rec = series::make_linrec(cs, is, 1);
            auto gen = series::generate(rec, 12);
            ++recs;
            for (int n = 1; n <= 12; ++n) {
                ++checks;
                if (construct::encode_recurrence_paths(rec, n) != gen[static_cast<std::size_t>(n - 1)]) {
                    if (!mismatches) r.note = "mismatch for order " + std::to_string(order) + " at n=" + std::to_string(n);
                    ++mismatches;
                }
            }
            // odometer over coefficients in [-3,3], then initial values in [0,3]
            std::size_t k = 0;
            for (; k < coeff.size(); ++k) {
                if (++coeff[k] <= 3) break;
                coeff[k] = -3;
            }
            if (k < coeff.size()) continue;
            for (k = 0; k < init.size(); ++k) {
                if (++init[k] <= 3) break;
                init[k] = 0;
            }
            if (k == init.size()) break;
        }
    }
    r.pass = mismatches == 0;
    r.record = Json{{"recurrences", recs}, {"checks", checks}, {"mismatches", mismatches}};
    return r;
}

// 6. difference representations
Result difference_representations(int workers) {
    Result r;
    std::vector<std::pair<std::string, series::LinRec>> cases = {
        {"fibonacci", series::make_linrec({1, 1}, {0, 1})},
        {"lucas", series::make_linrec({1, 1}, {2, 1})},
        {"pow2_plus_1", series::make_linrec({3, -2}, {2, 3})},
    };
    for (const auto& [name, rec] : cases) {
        auto repr = construct::recurrence_to_diff_representation(rec);
        construct::DiffEvalOptions o;
        o.brute_limit = 6;
        o.count = with_workers(workers);
        auto want = series::generate(rec, 21);
        Json values = Json::array();
        for (int n = 1; n <= 20; ++n) {
            try {
                auto e = construct::eval_diff_representation_full(repr, n, o);
                r.check(e.value == want[static_cast<std::size_t>(n)], name + " value at n=" + std::to_string(n));
                r.check(n > 6 || e.brute_checked, name + " model search skipped at n=" + std::to_string(n));
                values.push_back(Json::array({io::big(e.f1), io::big(e.f2)}));
            } catch (const std::exception& ex) {
                r.check(false, name + ": " + ex.what());
            }
        }
        Json coi = Json::array();
        for (int n = 1; n <= 5; ++n) {
            auto [c1, c2] = construct::check_repr_coi(repr, n, counting::CoiStrategy::exhaustive(), o.count);
            r.check(c1.invariant && c2.invariant, name + " not order invariant at n=" + std::to_string(n));
            r.check(c1.counts.size() == static_cast<std::size_t>(factorial(n)), name + " did not try all orders");
            coi.push_back(Json::array({c1.invariant, c2.invariant}));
        }
        r.record[name] = Json{{"symbols", repr.vocab.size()}, {"values", values}, {"coi", coi}};
    }
    return r;
}

// 7. periodicity of MSOL-definable counts
Result specker_blatter(int) {
    Result r;
    auto bell = catalog::get_entry("bell");
    auto b2 = series::detect_periodicity_residues(bell.residues_mod(200, 2), 2);
    r.check(b2.periodic && b2.period == 3 && b2.n0 == 0, "Bell mod 2");
    auto b3 = series::detect_periodicity_residues(bell.residues_mod(200, 3), 3);
    r.check(b3.periodic, "Bell mod 3");
    auto f2 = series::detect_periodicity_mod(O::fibonacci(200), 2);
    r.check(f2.periodic && f2.period == 3, "Fibonacci mod 2");
    r.record["bell_mod_2"] = io::to_json(b2);
    r.record["bell_mod_3"] = io::to_json(b3);
    r.record["fibonacci_mod_2"] = io::to_json(f2);
    // the stirling1(1) lane cross-checks its oracle against the counter first
    auto s1 = catalog::get_entry("stirling1_1");
    auto small = s1.fast(5);
    for (int n = 1; n <= 5; ++n)
        r.check(count(*s1.formula, s1.vocab, n, false, 1) == small[static_cast<std::size_t>(n)], "stirling1(1) oracle at n=" + std::to_string(n));
    for (std::int64_t m : {2, 3, 4}) {
        auto rep = series::detect_periodicity_residues(s1.residues_mod(200, m), m);
        r.check(rep.periodic, "stirling1(1) mod " + std::to_string(m));
        r.record["stirling1_1_mod_" + std::to_string(m)] = io::to_json(rep);
    }
    return r;
}

// 8. sequences with no visible period mod 2
Result anti_periodicity(int) {
    Result r;
    auto cat = O::catalan_convolution(64);
    auto c2 = series::detect_periodicity_mod(cat, 2);
    r.check(!c2.periodic, "Catalan mod 2 shows a period");
    for (int n = 1; n <= 64; ++n) {
        bool odd = mod_floor(cat[static_cast<std::size_t>(n)], 2) == 1;
        r.check(odd == (((n + 1) & n) == 0), "Catalan parity rule at n=" + std::to_string(n));
    }
    r.check(O::catalan_ballot(20) == O::catalan_convolution(20), "Catalan oracles disagree");
    auto e = O::e2eq(128);
    std::vector<BigInt> even;
    for (int k = 0; k <= 64; ++k) even.push_back(e[static_cast<std::size_t>(2 * k)]);
    auto e2 = series::detect_periodicity_mod(even, 2);
    r.check(!e2.periodic, "e2eq mod 2 shows a period");
    r.record["catalan_mod_2"] = io::to_json(c2);
    r.record["e2eq_even_mod_2"] = io::to_json(e2);
    return r;
}

logic::Structure random_structure(std::mt19937_64& rng, const logic::Vocabulary& v, int n) {
    logic::Structure s;
    s.n = n;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const int ar = v[i].arity;
        std::vector<int> t(static_cast<std::size_t>(ar), 1);
        for (;;) {
            if (uniform_below(rng, 3) == 0) s.interp[v[i].name].insert(t);
            std::size_t k = 0;
            for (; k < t.size(); ++k) {
                if (++t[k] <= n) break;
                t[k] = 1;
            }
            if (k == t.size()) break;
        }
    }
    return s;
}

// 9. substitution
Result substitution(int) {
    Result r;
    logic::Vocabulary v = logic::Vocabulary{}.add("E", 2).add("U", 1);
    std::mt19937_64 rng(2024);
    int size_ok = 0;
    for (int it = 0; it < 200; ++it) {
        int n1 = 1 + static_cast<int>(uniform_below(rng, 4)), n2 = static_cast<int>(uniform_below(rng, 4)) + 1;
        logic::PointedStructure a1{random_structure(rng, v, n1), 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n1)))};
        auto a2 = random_structure(rng, v, n2);
        auto s = index::subst(a1, a2, v);
        if (s.n == n1 + n2 - 1) ++size_ok;
    }
    r.check(size_ok == 200, "size law");
    logic::Vocabulary g = graph();
    logic::PointedStructure w1{logic::Structure{2, {{"E", {{1, 2}}}}, std::nullopt}, 1};
    auto w = index::subst(w1, logic::Structure{2, {}, std::nullopt}, g);
    Json wj = io::to_json(w);
    r.check(io::dump(wj) == R"({"n":3,"relations":{"E":[[2,1],[3,1]]}})", "worked example");
    int cong_ok = 0;
    for (int it = 0; it < 50; ++it) {
        int nd = 1 + static_cast<int>(uniform_below(rng, 3)), n2 = 1 + static_cast<int>(uniform_below(rng, 3));
        logic::PointedStructure d{random_structure(rng, v, nd), 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(nd)))};
        auto a2 = random_structure(rng, v, n2);
        std::vector<int> perm = logic::natural_order(n2);
        fisher_yates(perm, rng);
        auto a2p = logic::relabel(a2, perm);
        if (logic::isomorphic(index::subst(d, a2, v), index::subst(d, a2p, v))) ++cong_ok;
    }
    r.check(cong_ok == 50, "isomorphism congruence");
    r.record = Json{{"size_law", size_ok}, {"worked_example", wj}, {"congruence", cong_ok}};
    return r;
}

using Criterion = std::function<Result(int)>;

const std::vector<std::pair<std::string, Criterion>>& criteria() {
    static const std::vector<std::pair<std::string, Criterion>> list = {
        {"counting identities", counting_identities},
        {"word compiler equivalence", word_compiler},
        {"recurrence extraction", recurrence_extraction},
        {"Berlekamp-Massey", berlekamp_massey},
        {"recurrence-tree paths", path_grid},
        {"difference representations", difference_representations},
        {"periodicity mod m", specker_blatter},
        {"no period mod 2", anti_periodicity},
        {"substitution", substitution},
    };
    return list;
}

std::string run_all(int workers, std::vector<Result>* keep) {
    Json all = Json::array();
    for (const auto& [name, fn] : criteria()) {
        Result res = fn(workers);
        all.push_back(Json{{"criterion", name}, {"pass", res.pass}, {"record", res.record}});
        if (keep) keep->push_back(std::move(res));
    }
    return io::dump(all);
}

}  // namespace

int main() {
    bool all_pass = true;
    const int workers = 1;
    std::vector<Result> first;
    auto t0 = Clock::now();
    std::vector<std::string> dumps;
    {
        Json all = Json::array();
        int k = 0;
        for (const auto& [name, fn] : criteria()) {
            ++k;
            auto t = Clock::now();
            Result res = fn(workers);
            std::printf("%s %d %s (%.1f s)%s%s\n", res.pass ? "PASS" : "FAIL", k, name.c_str(), seconds_since(t),
                        res.note.empty() ? "" : ": ", res.note.c_str());
            std::fflush(stdout);
            all_pass = all_pass && res.pass;
            all.push_back(Json{{"criterion", name}, {"pass", res.pass}, {"record", res.record}});
        }
        dumps.push_back(io::dump(all));
    }

    // 10. byte-identical records across worker counts and a repeated run
    auto t = Clock::now();
    bool same = true;
    std::string note;
    for (int w : {2, 4, 1}) {
        std::string d = run_all(w, nullptr);
        if (d != dumps.front()) {
            same = false;
            if (note.empty()) note = ": records differ with " + std::to_string(w) + " workers";
        }
    }
    std::printf("%s 10 determinism (%.1f s)%s\n", same ? "PASS" : "FAIL", seconds_since(t), note.c_str());
    all_pass = all_pass && same;
    std::printf("total %.1f s\n", seconds_since(t0));
    return all_pass ? 0 : 1;
}
