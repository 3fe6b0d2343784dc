#pragma once

#include "specker/bigint.hpp"
#include "specker/catalog/formulas.hpp"
#include "specker/catalog/oracles.hpp"
#include "specker/construct/diff.hpp"
#include "specker/construct/paths.hpp"
#include "specker/construct/polynomial.hpp"
#include "specker/counting/count.hpp"
#include "specker/series/bm.hpp"
#include "specker/series/linrec.hpp"
#include "specker/series/periodicity.hpp"
#include "specker/words/compile.hpp"
#include "specker/words/transfer.hpp"

#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace specker::catalog {

using logic::Formula;
using oracles::Seq;

class CatalogError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FactResult {
    std::string name;
    std::string claim;
    bool pass = false;
    std::string detail;
};

struct Fact {
    std::string name;
    std::string claim;
    std::function<FactResult()> check;
};

/// An ordered word formula whose word counts equal the entry's values.
struct WordLane {
    Formula formula;
    logic::Vocabulary vocab;
};

struct CatalogEntry {
    std::string name;
    std::string description;
    std::map<std::string, std::string> params;
    logic::Vocabulary vocab;
    std::optional<Formula> formula;
    bool ordered = false;
    int first_n = 0;      // values below first_n are conventions, not compared
    int feasibility = 0;  // largest n for brute-force model counting
    int oracle_max_n = 0; // largest n for the enumerating oracle
    std::function<Seq(int)> oracle;  // independent exact values f(0..N)
    std::function<Seq(int)> fast;    // long sequences f(0..N)
    std::function<std::vector<std::int64_t>(int, std::int64_t)> residues;  // f(0..H) mod m
    std::optional<WordLane> words;
    std::optional<series::LinRec> recurrence;
    int diff_brute_limit = 6;
    std::optional<construct::SpeckerPolynomial> polynomial;
    std::map<std::string, BigInt> point;  // indeterminate values for the polynomial lane
    bool specker_blatter = false;  // unordered MSOL2 / CMSOL2 class
    std::vector<Fact> facts;

    std::vector<std::int64_t> residues_mod(int H, std::int64_t m) const {
        return residues ? residues(H, m) : series::residues_of(fast(H), m);
    }
};

inline constexpr int kSpeckerBlatterHorizon = 200;
// Bell numbers mod 5 have period 781, beyond what a horizon of 200 can show.
inline constexpr int kBellMod5Horizon = 2000;
inline constexpr int kDpHorizon = 20;

namespace detail {

inline Fact periodic_fact(const CatalogEntry& e, std::int64_t m, int H) {
    std::string claim = "period mod " + std::to_string(m) + " within horizon " + std::to_string(H);
    auto res = e.residues;
    auto fast = e.fast;
    return {"period-mod-" + std::to_string(m), claim, [=] {
                auto r = res ? res(H, m) : series::residues_of(fast(H), m);
                auto rep = series::detect_periodicity_residues(r, m);
                FactResult f{"period-mod-" + std::to_string(m), claim, rep.periodic, ""};
                f.detail = rep.periodic ? "n0=" + std::to_string(rep.n0) + " period=" + std::to_string(rep.period)
                                        : "no period found";
                return f;
            }};
}

inline void add_specker_blatter(CatalogEntry& e) {
    e.specker_blatter = true;
    for (std::int64_t m = 2; m <= 5; ++m) {
        int H = e.name == "equivalence_relations" && m == 5 ? kBellMod5Horizon : kSpeckerBlatterHorizon;
        e.facts.push_back(periodic_fact(e, m, H));
    }
}

inline Fact no_period_fact(const std::string& name, std::function<std::vector<std::int64_t>()> residues, std::int64_t m,
                           const std::string& claim) {
    return {name, claim, [=] {
                auto rep = series::detect_periodicity_residues(residues(), m);
                FactResult f{name, claim, !rep.periodic, ""};
                f.detail = rep.periodic ? "period " + std::to_string(rep.period) + " from n0=" + std::to_string(rep.n0)
                                        : "no period found within horizon " + std::to_string(rep.horizon);
                return f;
            }};
}

inline Fact bm_fact(const std::string& name, std::function<Seq()> prefix, std::vector<BigInt> coeffs) {
    std::string claim = "Berlekamp-Massey recovers coefficients (";
    for (std::size_t i = 0; i < coeffs.size(); ++i) claim += (i ? "," : "") + to_string(coeffs[i]);
    claim += ")";
    return {name, claim, [=] {
                auto bm = series::berlekamp_massey(prefix());
                FactResult f{name, claim, bm.integral && bm.rec.coeffs == coeffs, ""};
                f.detail = "order " + std::to_string(bm.complexity);
                return f;
            }};
}

inline int parse_suffix(const std::string& name, const std::string& stem, int fallback) {
    if (name == stem) return fallback;
    std::string rest = name.substr(stem.size());
    if (rest.size() >= 3 && rest.front() == '(' && rest.back() == ')') rest = rest.substr(1, rest.size() - 2);
    else if (!rest.empty() && rest.front() == '_') rest = rest.substr(1);
    else throw CatalogError("unknown catalog entry '" + name + "'");
    if (rest.empty() || rest.size() > 2 || rest.find_first_not_of("0123456789") != std::string::npos)
        throw CatalogError("unknown catalog entry '" + name + "'");
    int r = std::stoi(rest);
    if (r < 1) throw CatalogError("parameter must be at least 1 in '" + name + "'");
    return r;
}

inline bool has_stem(const std::string& name, const std::string& stem) {
    return name.compare(0, stem.size(), stem) == 0 &&
           (name.size() == stem.size() || name[stem.size()] == '_' || name[stem.size()] == '(');
}

inline logic::Vocabulary binary_E() { return logic::Vocabulary{}.add("E", 2); }

inline CatalogEntry recurrence_entry(std::string name, std::string description, series::LinRec rec,
                                     std::function<Seq(int)> oracle) {
    CatalogEntry e;
    e.name = std::move(name);
    e.description = std::move(description);
    e.recurrence = rec;
    e.oracle = std::move(oracle);
    e.oracle_max_n = 200;
    e.fast = [rec](int N) { return series::generate(rec, N + 1); };
    e.first_n = 0;
    return e;
}

}  // namespace detail

struct EntryParams {
    std::optional<std::int64_t> x;  // indeterminate value for polynomial families
};

inline std::vector<std::string> list_entries() {
    return {"binary_relations", "linear_orders", "equivalence_relations", "stirling2", "stirling1", "e2eq",
            "catalan",          "eulerian_graphs", "trees",               "touchard",  "mittag_leffler",
            "fibonacci",        "lucas",         "chebyshev"};
}

/// Registry lookup. "bell" is another name for equivalence_relations;
/// stirling2 and stirling1 take the block / cycle count as "_r" or "(r)",
/// defaulting to 2 and 1.
inline CatalogEntry get_entry(const std::string& requested, const EntryParams& params = {}) {
    namespace f = formulas;
    using namespace logic::build;
    const std::string name = requested == "bell" ? "equivalence_relations" : requested;
    CatalogEntry e;
    e.name = name;

    if (name == "binary_relations") {
        e.description = "all binary relations";
        e.vocab = detail::binary_E();
        e.formula = top();
        e.feasibility = 5;
        e.oracle_max_n = 200;
        e.oracle = oracles::binary_relations;
        e.fast = oracles::binary_relations;
        detail::add_specker_blatter(e);
    } else if (name == "linear_orders") {
        e.description = "strict linear orders";
        e.vocab = detail::binary_E();
        e.formula = f::linear_order("E");
        e.feasibility = 5;
        e.oracle_max_n = 200;
        e.oracle = oracles::factorials;
        e.fast = oracles::factorials;
        detail::add_specker_blatter(e);
    } else if (name == "equivalence_relations") {
        e.description = "equivalence relations (Bell numbers)";
        e.vocab = detail::binary_E();
        e.formula = f::equivalence("E");
        e.feasibility = 5;
        e.oracle_max_n = 12;
        e.oracle = oracles::bell_by_enumeration;
        e.fast = oracles::bell_triangle;
        e.residues = [](int H, std::int64_t m) { return oracles::bell_triangle_mod(H, m); };
        detail::add_specker_blatter(e);
    } else if (detail::has_stem(name, "stirling2")) {
        const int r = detail::parse_suffix(name, "stirling2", 2);
        e.name = "stirling2_" + std::to_string(r);
        e.params["r"] = std::to_string(r);
        e.description = "equivalence relations with exactly " + std::to_string(r) + " classes";
        e.vocab = detail::binary_E();
        e.formula = f::stirling2_relation(r, "E");
        e.first_n = 1;
        e.feasibility = 5;
        e.oracle_max_n = 12;
        e.oracle = [r](int N) {
            auto t = oracles::partitions_by_blocks(N);
            Seq out;
            for (int n = 0; n <= N; ++n) out.push_back(r <= N ? t[static_cast<std::size_t>(n)][static_cast<std::size_t>(r)] : BigInt(0));
            return out;
        };
        e.fast = [r](int N) { return oracles::stirling2_column(r, N); };
        if (r <= 16) e.words = WordLane{f::stirling2_ordered(r), f::stirling2_ordered_vocab(r)};
        detail::add_specker_blatter(e);
        if (e.words) {
            auto lane = *e.words;
            auto fast = e.fast;
            std::string claim = "the ordered block formula has an integer recurrence reproducing the values to n=60";
            e.facts.push_back({"discovered-recurrence", claim, [lane, fast, claim] {
                                   auto dfa = words::compile_word_formula(lane.formula, lane.vocab);
                                   auto dr = words::recurrence_from_dfa(dfa);
                                   bool ok = series::generate(dr.rec, 61) == fast(60);
                                   return FactResult{"discovered-recurrence", claim, ok,
                                                     "order " + std::to_string(dr.rec.order()) + ", preperiod " +
                                                         std::to_string(dr.rec.preperiod) + ", states " +
                                                         std::to_string(dfa.states())};
                               }});
        }
    } else if (detail::has_stem(name, "stirling1")) {
        const int r = detail::parse_suffix(name, "stirling1", 1);
        e.name = "stirling1_" + std::to_string(r);
        e.params["r"] = std::to_string(r);
        e.description = "permutations with exactly " + std::to_string(r) + " cycles, as successor relations";
        e.vocab = detail::binary_E();
        e.formula = f::stirling1(r, "E");
        e.first_n = 1;
        e.feasibility = 5;
        e.oracle_max_n = 9;
        e.oracle = [r](int N) { return oracles::stirling1_by_enumeration(r, N); };
        e.fast = [r](int N) { return oracles::stirling1_column(r, N); };
        detail::add_specker_blatter(e);
        auto fast = e.fast;
        std::string claim = "no linear recurrence of order at most 10 fits the first 40 values";
        e.facts.push_back({"no-short-recurrence", claim, [fast, claim] {
                               FactResult res{"no-short-recurrence", claim, true, ""};
                               try {
                                   auto bm = series::berlekamp_massey(fast(39));
                                   res.pass = bm.complexity > 10;
                                   res.detail = "linear complexity " + std::to_string(bm.complexity) + " of 40 terms";
                               } catch (const series::UnstableRecurrence& u) {
                                   res.detail = "linear complexity " + std::to_string(u.order()) + " of 40 terms";
                                   res.pass = u.order() > 10;
                               }
                               return res;
                           }});
    } else if (name == "e2eq") {
        e.description = "equal-halves structures with a monotone bijection";
        e.vocab = f::e2eq_vocab();
        e.formula = f::e2eq();
        e.ordered = true;
        e.first_n = 1;
        e.feasibility = 6;
        e.oracle_max_n = 200;
        e.oracle = oracles::e2eq;
        e.fast = oracles::e2eq;
        e.facts.push_back(detail::no_period_fact(
            "no-period-mod-2-even", [] {
                auto v = oracles::e2eq(128);
                std::vector<std::int64_t> r;
                for (int k = 0; k <= 64; ++k) r.push_back(mod_floor(v[static_cast<std::size_t>(2 * k)], 2));
                return r;
            },
            2, "values at even sizes show no period mod 2 within horizon 64"));
    } else if (name == "catalan") {
        e.description = "height tuples of Dyck paths (Catalan numbers, C_n at size n)";
        e.vocab = f::catalan_vocab();
        e.formula = f::catalan();
        e.ordered = true;
        e.first_n = 1;
        e.feasibility = 3;
        e.oracle_max_n = 200;
        e.oracle = oracles::catalan_ballot;
        e.fast = oracles::catalan_convolution;
        e.facts.push_back(detail::no_period_fact(
            "no-period-mod-2", [] { return series::residues_of(oracles::catalan_convolution(64), 2); }, 2,
            "no period mod 2 within horizon 64"));
        std::string claim = "C_n is odd exactly when n = 2^k - 1, for n <= 64";
        e.facts.push_back({"parity-rule", claim, [claim] {
                               auto c = oracles::catalan_convolution(64);
                               for (int n = 1; n <= 64; ++n) {
                                   bool odd = mod_floor(c[static_cast<std::size_t>(n)], 2) == 1;
                                   bool mersenne = ((n + 1) & n) == 0;
                                   if (odd != mersenne)
                                       return FactResult{"parity-rule", claim, false, "fails at n=" + std::to_string(n)};
                               }
                               return FactResult{"parity-rule", claim, true, "holds for n=1..64"};
                           }});
    } else if (name == "eulerian_graphs") {
        e.description = "connected simple graphs with all degrees even";
        e.vocab = detail::binary_E();
        e.formula = f::eulerian("E");
        e.first_n = 1;
        e.feasibility = 5;
        e.oracle_max_n = 7;
        e.oracle = oracles::eulerian_by_enumeration;
        e.fast = oracles::eulerian_fast;
        detail::add_specker_blatter(e);
    } else if (name == "trees") {
        e.description = "labeled trees";
        e.vocab = detail::binary_E();
        e.formula = f::trees("E");
        e.first_n = 1;
        e.feasibility = 5;
        e.oracle_max_n = 200;
        e.oracle = oracles::cayley;
        e.fast = oracles::cayley;
        detail::add_specker_blatter(e);
    } else if (name == "touchard") {
        const std::int64_t x = params.x.value_or(1);
        e.params["x"] = std::to_string(x);
        e.description = "Touchard polynomial: sum over partitions of x^(number of blocks)";
        e.vocab = detail::binary_E();
        e.feasibility = 5;
        e.oracle_max_n = 200;
        e.oracle = [x](int N) { return oracles::touchard(N, BigInt(x)); };
        e.fast = e.oracle;
        e.polynomial = construct::touchard_polynomial("x");
        e.point = {{"x", BigInt(x)}};
        std::string claim = "T_n(1) equals the Bell numbers for n <= 30";
        e.facts.push_back({"bell-at-one", claim, [claim] {
                               bool ok = oracles::touchard(30, BigInt(1)) == oracles::bell_triangle(30);
                               return FactResult{"bell-at-one", claim, ok, ok ? "equal" : "differ"};
                           }});
    } else if (name == "mittag_leffler") {
        const std::int64_t x = params.x.value_or(1);
        e.params["x"] = std::to_string(x);
        e.description = "Mittag-Leffler polynomial by its direct sum (counting reading unverified)";
        e.first_n = 1;
        e.oracle_max_n = 200;
        e.oracle = [x](int N) { return oracles::mittag_leffler_seq(N, BigInt(x)); };
        e.fast = e.oracle;
        std::string claim = "2 M_{n+1}(x) = x (M_n(x+1) + 2 M_n(x) + M_n(x-1)) for n <= 6, x in [-3, 3]";
        e.facts.push_back({"shift-identity", claim, [claim] {
                               for (int n = 1; n <= 6; ++n)
                                   for (int xv = -3; xv <= 3; ++xv) {
                                       BigInt X(xv);
                                       BigInt lhs = 2 * oracles::mittag_leffler(n + 1, X);
                                       BigInt rhs = X * (oracles::mittag_leffler(n, X + 1) + 2 * oracles::mittag_leffler(n, X) +
                                                         oracles::mittag_leffler(n, X - 1));
                                       if (lhs != rhs)
                                           return FactResult{"shift-identity", claim, false,
                                                             "fails at n=" + std::to_string(n) + ", x=" + std::to_string(xv)};
                                   }
                               return FactResult{"shift-identity", claim, true, "holds on the grid"};
                           }});
    } else if (name == "fibonacci") {
        e = detail::recurrence_entry(name, "Fibonacci numbers, F_0 = 0", series::make_linrec({1, 1}, {0, 1}),
                                     oracles::fibonacci);
        e.facts.push_back(detail::bm_fact("bm-10-terms", [] { return oracles::fibonacci(9); }, {1, 1}));
        e.facts.push_back(detail::periodic_fact(e, 2, kSpeckerBlatterHorizon));
    } else if (name == "lucas") {
        e = detail::recurrence_entry(name, "Lucas numbers, L_0 = 2", series::make_linrec({1, 1}, {2, 1}), oracles::lucas);
        e.facts.push_back(detail::bm_fact("bm-10-terms", [] { return oracles::lucas(9); }, {1, 1}));
        e.facts.push_back(detail::periodic_fact(e, 2, kSpeckerBlatterHorizon));
    } else if (name == "chebyshev") {
        const std::int64_t x = params.x.value_or(2);
        BigInt X(x);
        e = detail::recurrence_entry(name, "Chebyshev polynomials of the first kind at an integer point",
                                     series::make_linrec({2 * X, -1}, {1, X}),
                                     [X](int N) { return oracles::chebyshev(N, X); });
        e.params["x"] = std::to_string(x);
        // 14 block symbols at x = 2; keep the model-search check small
        e.diff_brute_limit = 4;
        std::string claim = "the path sum equals the closed form for x in [-2, 3], n <= 12";
        e.facts.push_back({"paths-grid", claim, [claim] {
                               for (int xv = -2; xv <= 3; ++xv) {
                                   BigInt Y(xv);
                                   auto rec = series::make_linrec({2 * Y, -1}, {1, Y});
                                   auto want = oracles::chebyshev(12, Y);
                                   for (int n = 1; n <= 12; ++n)
                                       if (construct::encode_recurrence_paths(rec, n) != want[static_cast<std::size_t>(n)])
                                           return FactResult{"paths-grid", claim, false,
                                                             "fails at x=" + std::to_string(xv) + ", n=" + std::to_string(n)};
                               }
                               return FactResult{"paths-grid", claim, true, "holds on the grid"};
                           }});
    } else {
        throw CatalogError("unknown catalog entry '" + requested + "'");
    }
    return e;
}

struct LaneResult {
    std::string lane;
    int from = 0;
    int to = -1;
    bool pass = true;
    std::optional<int> first_mismatch;
    std::string expected;
    std::string actual;
    std::string note;
};

struct VerifyReport {
    std::string entry;
    int max_n = 0;
    Seq oracle;  // f(first_n .. max_n)
    std::vector<LaneResult> lanes;
    std::vector<FactResult> facts;

    bool pass() const {
        for (const auto& l : lanes)
            if (!l.pass) return false;
        for (const auto& f : facts)
            if (!f.pass) return false;
        return true;
    }
};

struct VerifyOptions {
    int dp_n = kDpHorizon;
    bool facts = true;
    counting::CountOptions count;
    bool concurrent = false;  // run lanes on separate threads
};

namespace detail {

inline LaneResult compare_lane(const std::string& lane, int from, int to, const Seq& want,
                               const std::function<BigInt(int)>& value) {
    LaneResult r;
    r.lane = lane;
    r.from = from;
    r.to = to;
    for (int n = from; n <= to; ++n) {
        BigInt got;
        try {
            got = value(n);
        } catch (const std::exception& ex) {
            r.pass = false;
            r.first_mismatch = n;
            r.expected = to_string(want[static_cast<std::size_t>(n)]);
            r.actual = std::string("error: ") + ex.what();
            return r;
        }
        if (got != want[static_cast<std::size_t>(n)]) {
            r.pass = false;
            r.first_mismatch = n;
            r.expected = to_string(want[static_cast<std::size_t>(n)]);
            r.actual = to_string(got);
            return r;
        }
    }
    return r;
}

}  // namespace detail

/// Compares the oracle with every applicable counting lane and checks the
/// recorded facts. Brute-force lanes stop at the entry's feasibility bound.
inline VerifyReport verify_entry(const CatalogEntry& e, int max_n, const VerifyOptions& opts = {}) {
    if (max_n < e.first_n) throw CatalogError("max_n is below the first index of '" + e.name + "'");
    VerifyReport rep;
    rep.entry = e.name;
    rep.max_n = max_n;
    const int dp_to = std::max(max_n, opts.dp_n);
    const Seq fast = e.fast(dp_to);
    const Seq oracle = e.oracle(std::min(max_n, e.oracle_max_n));
    for (int n = e.first_n; n <= max_n; ++n)
        rep.oracle.push_back(n < static_cast<int>(oracle.size()) ? oracle[static_cast<std::size_t>(n)] : fast[static_cast<std::size_t>(n)]);

    std::vector<std::function<LaneResult()>> lanes;
    lanes.push_back([&] {
        const int to = std::min(max_n, e.oracle_max_n);
        auto r = detail::compare_lane("fast-oracle", e.first_n, to, oracle, [&](int n) { return fast[static_cast<std::size_t>(n)]; });
        if (to < max_n) r.note = "enumerating oracle limited to n <= " + std::to_string(to);
        return r;
    });
    if (e.formula) {
        lanes.push_back([&] {
            const int to = std::min(max_n, e.feasibility);
            auto r = detail::compare_lane("brute", e.first_n, to, fast, [&](int n) {
                counting::CountTask t;
                t.phi = *e.formula;
                t.vocab = e.vocab;
                t.n = n;
                t.mode = e.ordered ? counting::OrderMode::Natural : counting::OrderMode::Unordered;
                return counting::specker_count(t, opts.count);
            });
            if (to < max_n) r.note = "limited to the feasibility bound n <= " + std::to_string(to);
            return r;
        });
    }
    if (e.words) {
        lanes.push_back([&] {
            auto dfa = words::compile_word_formula(e.words->formula, e.words->vocab);
            auto counts = words::word_counts(dfa, dp_to);
            return detail::compare_lane("words-dp", std::max(e.first_n, 1), dp_to, fast,
                                        [&](int n) { return counts[static_cast<std::size_t>(n)]; });
        });
    }
    if (e.recurrence) {
        lanes.push_back([&] {
            auto gen = series::generate(*e.recurrence, dp_to + 1);
            return detail::compare_lane("recurrence", e.first_n, dp_to, fast, [&](int n) { return gen[static_cast<std::size_t>(n)]; });
        });
        lanes.push_back([&] {
            return detail::compare_lane("paths", std::max(e.first_n, 1), dp_to, fast,
                                        [&](int n) { return construct::encode_recurrence_paths(*e.recurrence, n); });
        });
        lanes.push_back([&] {
            LaneResult r;
            try {
                auto repr = construct::recurrence_to_diff_representation(*e.recurrence);
                construct::DiffEvalOptions dopts;
                dopts.brute_limit = std::min(max_n, e.diff_brute_limit);
                dopts.count = opts.count;
                r = detail::compare_lane("diff-repr", std::max(e.first_n, 1), dp_to, fast,
                                         [&](int n) { return construct::eval_diff_representation(repr, n, dopts); });
                r.note = std::to_string(repr.vocab.size()) + " block symbols; model search to n <= " +
                         std::to_string(dopts.brute_limit);
            } catch (const construct::ConstructError& ex) {
                r.lane = "diff-repr";
                r.note = std::string("not applicable: ") + ex.what();
            }
            return r;
        });
    }
    if (e.polynomial) {
        lanes.push_back([&] {
            const int to = std::min(max_n, std::min(e.feasibility, 4));
            construct::PolyEvalOptions popts;
            popts.mode = construct::PolyEvalMode::Brute;
            auto r = detail::compare_lane("polynomial", std::max(e.first_n, 1), to, fast,
                                          [&](int n) { return construct::eval_specker_polynomial(*e.polynomial, n, e.point, popts); });
            if (to < max_n) r.note = "limited to n <= " + std::to_string(to);
            return r;
        });
    }

    if (opts.concurrent) {
        std::vector<std::future<LaneResult>> futs;
        for (auto& l : lanes) futs.push_back(std::async(std::launch::async, l));
        for (auto& f : futs) rep.lanes.push_back(f.get());
    } else {
        for (auto& l : lanes) rep.lanes.push_back(l());
    }
    if (opts.facts)
        for (const auto& f : e.facts) rep.facts.push_back(f.check());
    return rep;
}

inline VerifyReport verify_entry(const std::string& name, int max_n, const VerifyOptions& opts = {}) {
    return verify_entry(get_entry(name), max_n, opts);
}

}  // namespace specker::catalog
