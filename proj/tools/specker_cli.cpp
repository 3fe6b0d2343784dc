// Command-line front end. Every subcommand prints one JSON document on
// standard output. Exit codes: 0 success, 1 a verification lane disagreed,
// 2 usage or input error.

#include "specker/catalog/entries.hpp"
#include "specker/construct/diff.hpp"
#include "specker/construct/paths.hpp"
#include "specker/construct/polynomial.hpp"
#include "specker/counting/coi.hpp"
#include "specker/counting/count.hpp"
#include "specker/index/subst.hpp"
#include "specker/io/json.hpp"
#include "specker/logic/parser.hpp"
#include "specker/series/bm.hpp"
#include "specker/series/periodicity.hpp"
#include "specker/util.hpp"
#include "specker/words/compile.hpp"
#include "specker/words/transfer.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using namespace specker;
using io::Json;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string vocab;
    std::string formula;
    std::string input;
    std::string dfa;
    std::string entry;
    std::string out;
    std::string a1;
    std::string a2;
    int n = -1;
    int max_n = -1;
    int horizon = 200;
    int step = 1;
    int size = 3;
    int bound = 2;
    int brute_limit = 6;
    int coi_n = -1;
    int samples = 0;
    std::int64_t mod = 0;
    std::optional<std::int64_t> x;
    std::uint64_t seed = 1;
    std::uint64_t budget = counting::kDefaultBudget;
    std::uint64_t cap = index::kDefaultContextCap;
    int workers = default_workers();
    bool ordered = false;
    bool no_facts = false;
    std::string format = "json";
};

struct Outcome {
    Json report;
    int code = 0;
};

Json small_or_string(const BigInt& v) { return fits_int64(v) ? Json(static_cast<std::int64_t>(v)) : Json(to_string(v)); }

counting::CountOptions count_options(const RunConfig& c) {
    counting::CountOptions o;
    o.budget = c.budget;
    o.workers = c.workers;
    return o;
}

logic::Vocabulary load_vocab(const RunConfig& c) {
    if (c.vocab.empty()) throw UsageError("--vocab is required");
    return io::vocabulary_from_json(io::read_json_file(c.vocab));
}

logic::Formula load_formula(const RunConfig& c, const logic::Vocabulary& v) {
    if (c.formula.empty()) throw UsageError("--formula is required");
    return logic::parse_formula(io::read_text_file(c.formula), v);
}

catalog::CatalogEntry load_entry(const RunConfig& c) {
    catalog::EntryParams p;
    p.x = c.x;
    return catalog::get_entry(c.entry, p);
}

/// Sentence and vocabulary from --vocab/--formula or from a catalog entry.
std::pair<logic::Formula, logic::Vocabulary> load_problem(const RunConfig& c, bool& ordered) {
    if (!c.entry.empty()) {
        auto e = load_entry(c);
        if (!e.formula) throw UsageError("entry '" + e.name + "' has no formula");
        ordered = ordered || e.ordered;
        return {*e.formula, e.vocab};
    }
    auto v = load_vocab(c);
    return {load_formula(c, v), v};
}

void require(bool ok, const std::string& what) {
    if (!ok) throw UsageError(what);
}

Outcome cmd_count(const RunConfig& c) {
    require(c.n >= 0, "--n is required");
    bool ordered = c.ordered;
    auto [phi, vocab] = load_problem(c, ordered);
    counting::CountTask t;
    t.phi = phi;
    t.vocab = vocab;
    t.n = c.n;
    t.mode = ordered ? counting::OrderMode::Natural : counting::OrderMode::Unordered;
    auto r = counting::count_models(t, count_options(c));
    return {Json{{"n", c.n}, {"count", io::big(r.count)}}};
}

Outcome cmd_coi(const RunConfig& c) {
    require(c.n >= 0, "--n is required");
    bool ordered = true;
    auto [phi, vocab] = load_problem(c, ordered);
    counting::CountTask t;
    t.phi = phi;
    t.vocab = vocab;
    t.n = c.n;
    counting::CoiStrategy s = c.samples > 0 ? counting::CoiStrategy::sampled(c.seed, c.samples) : counting::CoiStrategy{};
    if (c.samples == 0 && c.n <= counting::kMaxExhaustiveCoi) s = counting::CoiStrategy::exhaustive();
    if (c.samples == 0 && c.n > counting::kMaxExhaustiveCoi) s = counting::CoiStrategy::sampled(c.seed);
    auto rep = counting::check_coi(t, s, count_options(c));
    return {io::to_json(rep), rep.invariant ? 0 : 1};
}

Outcome cmd_compile(const RunConfig& c) {
    auto v = load_vocab(c);
    auto d = words::compile_word_formula(load_formula(c, v), v);
    Json j = io::to_json(d);
    if (c.max_n >= 0) j["counts"] = io::big_array(words::word_counts(d, c.max_n));
    return {j};
}

io::Sequence load_sequence(const RunConfig& c) {
    if (!c.input.empty()) return io::sequence_from_json(io::read_json_file(c.input));
    require(c.max_n >= 0, "--max-n is required");
    if (!c.entry.empty()) return {0, load_entry(c).fast(c.max_n)};
    if (!c.dfa.empty()) return {0, words::word_counts(io::dfa_from_json(io::read_json_file(c.dfa)), c.max_n)};
    if (!c.formula.empty()) {
        auto v = load_vocab(c);
        return {0, words::word_counts(words::compile_word_formula(load_formula(c, v), v), c.max_n)};
    }
    throw UsageError("one of --input, --entry, --dfa or --formula is required");
}

Outcome cmd_seq(const RunConfig& c) {
    require(c.input.empty(), "seq takes --entry, --dfa or --formula");
    return {io::to_json(load_sequence(c))};
}

Outcome cmd_recurrence(const RunConfig& c) {
    io::Sequence s;
    if (c.max_n < 0 && c.input.empty() && (!c.dfa.empty() || !c.formula.empty())) {
        // a DFA yields its recurrence directly from the transfer matrix
        words::Dfa d;
        if (!c.dfa.empty()) {
            d = io::dfa_from_json(io::read_json_file(c.dfa));
        } else {
            auto v = load_vocab(c);
            d = words::compile_word_formula(load_formula(c, v), v);
        }
        auto dr = words::recurrence_from_dfa(d);
        Json coeffs = Json::array();
        for (const auto& a : dr.rec.coeffs) coeffs.push_back(small_or_string(a));
        return {Json{{"coeffs", coeffs},
                     {"order", dr.rec.order()},
                     {"initials", io::big_array(dr.rec.initials)},
                     {"base", dr.rec.base},
                     {"preperiod", dr.rec.preperiod}}};
    }
    s = load_sequence(c);
    if (c.mod != 0) {
        if (!series::is_prime(c.mod)) throw UsageError("--mod must be prime for recurrence detection");
        auto rec = series::berlekamp_massey_mod(s.terms, c.mod, s.base);
        Json coeffs = Json::array();
        for (const auto& a : rec.coeffs) coeffs.push_back(small_or_string(a));
        return {Json{{"coeffs", coeffs}, {"order", rec.order()}, {"modulus", c.mod}, {"base", rec.base}}};
    }
    series::BmResult bm;
    try {
        bm = series::berlekamp_massey(s.terms, s.base);
    } catch (const series::UnstableRecurrence& e) {
        return {Json{{"verdict", "unstable"}, {"order", e.order()}, {"terms", s.terms.size()}}, 1};
    }
    Json coeffs = Json::array();
    for (const auto& a : bm.rec.coeffs) coeffs.push_back(small_or_string(a));
    Json j{{"coeffs", coeffs}, {"order", bm.rec.order()}};
    if (!bm.integral) j["denominator"] = small_or_string(bm.denominator);
    j["initials"] = io::big_array(bm.rec.initials);
    j["base"] = bm.rec.base;
    j["preperiod"] = bm.rec.preperiod;
    j["integral"] = bm.integral;
    return {j};
}

Outcome cmd_periodicity(const RunConfig& c) {
    require(c.mod >= 2, "--mod must be at least 2");
    require(c.horizon >= 4, "--horizon must be at least 4");
    require(c.step >= 1, "--step must be at least 1");
    std::vector<std::int64_t> r;
    if (!c.entry.empty()) {
        auto e = load_entry(c);
        if (c.step == 1) {
            r = e.residues_mod(c.horizon, c.mod);
        } else {
            auto all = e.residues_mod(c.horizon * c.step, c.mod);
            for (int i = 0; i <= c.horizon; ++i) r.push_back(all[static_cast<std::size_t>(i * c.step)]);
        }
    } else {
        require(!c.input.empty(), "one of --entry or --input is required");
        auto s = io::sequence_from_json(io::read_json_file(c.input));
        for (std::size_t i = 0; i < s.terms.size(); i += static_cast<std::size_t>(c.step)) r.push_back(mod_floor(s.terms[i], c.mod));
    }
    return {io::to_json(series::detect_periodicity_residues(r, c.mod))};
}

Outcome cmd_construct(const RunConfig& c) {
    require(c.max_n >= 1, "--max-n must be at least 1");
    if (!c.entry.empty()) {
        auto e = load_entry(c);
        if (!e.polynomial) throw UsageError("entry '" + e.name + "' has no Specker polynomial");
        auto want = e.fast(c.max_n);
        construct::PolyEvalOptions po;
        po.budget = c.budget;
        Json values = Json::array();
        int code = 0;
        for (int n = 1; n <= c.max_n; ++n) {
            BigInt v = construct::eval_specker_polynomial(*e.polynomial, n, e.point, po);
            bool ok = v == want[static_cast<std::size_t>(n)];
            if (!ok) code = 1;
            values.push_back(Json{{"n", n}, {"polynomial", io::big(v)}, {"oracle", io::big(want[static_cast<std::size_t>(n)])}, {"agree", ok}});
        }
        return {Json{{"entry", e.name}, {"values", values}, {"agree", code == 0}}, code};
    }
    require(!c.input.empty(), "one of --input or --entry is required");
    auto rec = io::linrec_from_json(io::read_json_file(c.input));
    auto flat = construct::flatten_recurrence(rec);
    auto gen = series::generate(flat, c.max_n);  // f(1..max_n)
    Json values = Json::array();
    int code = 0;
    for (int n = 1; n <= c.max_n; ++n) {
        BigInt v = construct::encode_recurrence_paths(rec, n);
        bool ok = v == gen[static_cast<std::size_t>(n - 1)];
        if (!ok) code = 1;
        std::size_t paths = n > flat.order() ? construct::RecurrenceTree(flat.order(), n).paths() : 1;
        values.push_back(Json{{"n", n}, {"paths", paths}, {"value", io::big(v)}, {"recurrence", io::big(gen[static_cast<std::size_t>(n - 1)])}, {"agree", ok}});
    }
    return {Json{{"order", flat.order()}, {"values", values}, {"agree", code == 0}}, code};
}

Outcome cmd_diff_repr(const RunConfig& c) {
    require(!c.input.empty(), "--input is required");
    const int max_n = c.max_n < 0 ? catalog::kDpHorizon : c.max_n;
    require(max_n >= 1, "--max-n must be at least 1");
    auto rec = io::linrec_from_json(io::read_json_file(c.input));
    auto repr = construct::recurrence_to_diff_representation(rec);
    if (!c.out.empty()) {
        std::ofstream f(c.out);
        if (!f) throw UsageError("cannot write '" + c.out + "'");
        f << io::dump(io::to_json(repr)) << "\n";
    }
    construct::DiffEvalOptions o;
    o.brute_limit = c.brute_limit;
    o.count = count_options(c);
    auto gen = series::generate(repr.target, max_n);
    Json values = Json::array();
    int code = 0;
    for (int n = 1; n <= max_n; ++n) {
        Json row{{"n", n}};
        try {
            auto e = construct::eval_diff_representation_full(repr, n, o);
            bool ok = e.value == gen[static_cast<std::size_t>(n - 1)];
            if (!ok) code = 1;
            row["f1"] = io::big(e.f1);
            row["f2"] = io::big(e.f2);
            row["value"] = io::big(e.value);
            row["target"] = io::big(gen[static_cast<std::size_t>(n - 1)]);
            row["model_search"] = e.brute_checked;
            row["agree"] = ok;
        } catch (const construct::ConstructError& ex) {
            code = 1;
            row["error"] = ex.what();
            row["agree"] = false;
        }
        values.push_back(row);
    }
    Json j{{"symbols", repr.vocab.size()}, {"negative_weights", repr.has_negative}, {"values", values}};
    if (c.coi_n >= 0) {
        auto [r1, r2] = construct::check_repr_coi(repr, c.coi_n, counting::CoiStrategy::exhaustive(), o.count);
        j["coi"] = Json{{"f1", io::to_json(r1)}, {"f2", io::to_json(r2)}};
        if (!r1.invariant || !r2.invariant) code = 1;
    }
    j["agree"] = code == 0;
    return {j, code};
}

Outcome cmd_index(const RunConfig& c) {
    auto v = load_vocab(c);
    if (!c.a1.empty() || !c.a2.empty()) {
        require(!c.a1.empty() && !c.a2.empty(), "--a1 and --a2 go together");
        auto a1 = io::pointed_from_json(io::read_json_file(c.a1));
        Json j2 = io::read_json_file(c.a2);
        if (j2.contains("point")) return {io::to_json(index::subst(a1, io::pointed_from_json(j2), v))};
        return {io::to_json(index::subst(a1, io::structure_from_json(j2), v))};
    }
    require(c.size >= 1 && c.bound >= 1, "--size and --bound must be at least 1");
    index::FormulaMembership member(load_formula(c, v));
    index::DistinguishOptions o;
    o.cap = c.cap;
    return {io::to_json(index::index_lower_bound(member, v, c.size, c.bound, o))};
}

Outcome cmd_verify(const RunConfig& c) {
    require(!c.entry.empty(), "--entry is required");
    auto e = load_entry(c);
    const int max_n = c.max_n < 0 ? std::max(e.first_n, e.feasibility) : c.max_n;
    catalog::VerifyOptions o;
    o.count = count_options(c);
    o.facts = !c.no_facts;
    o.concurrent = c.workers > 1;
    auto rep = catalog::verify_entry(e, max_n, o);
    Json j = io::to_json(rep);
    j["metadata"] = io::to_json(e);
    return {j, rep.pass() ? 0 : 1};
}

void print(const Json& j, const std::string& format) {
    if (format == "table" && j.is_object()) {
        for (const auto& [k, v] : j.items()) std::cout << k << "\t" << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        return;
    }
    std::cout << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Counting, recurrences and periodicity for logically defined classes"};
    app.require_subcommand(1);
    RunConfig c;

    auto common = [&](CLI::App* s) {
        s->add_option("--workers", c.workers, "worker threads for counting")->check(CLI::Range(1, 256));
        s->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "table"}));
    };
    auto problem = [&](CLI::App* s) {
        s->add_option("--vocab", c.vocab, "vocabulary JSON file");
        s->add_option("--formula", c.formula, "formula file (S-expression)");
        s->add_option("--entry", c.entry, "catalog entry");
        s->add_option("--x", c.x, "indeterminate value for polynomial entries");
    };
    auto budget = [&](CLI::App* s) { s->add_option("--budget", c.budget, "search node budget"); };

    auto* count = app.add_subcommand("count", "count models of a sentence on [n]");
    problem(count);
    common(count);
    budget(count);
    count->add_option("--n", c.n, "universe size")->required()->check(CLI::NonNegativeNumber);
    count->add_flag("--ordered", c.ordered, "count with the natural order on [n]");

    auto* coi = app.add_subcommand("coi-check", "check counting order invariance");
    problem(coi);
    common(coi);
    budget(coi);
    coi->add_option("--n", c.n, "universe size")->required()->check(CLI::NonNegativeNumber);
    coi->add_option("--samples", c.samples, "sampled orders (0: all orders when n <= 5)");
    coi->add_option("--seed", c.seed, "sampling seed");

    auto* compile = app.add_subcommand("compile", "compile a word formula to a minimal DFA");
    compile->add_option("--vocab", c.vocab, "vocabulary JSON file")->required();
    compile->add_option("--formula", c.formula, "formula file")->required();
    compile->add_option("--max-n", c.max_n, "also emit word counts for n = 0..max-n");
    common(compile);

    auto* seq = app.add_subcommand("seq", "print a sequence");
    problem(seq);
    seq->add_option("--dfa", c.dfa, "DFA JSON file");
    seq->add_option("--max-n", c.max_n, "last index")->required()->check(CLI::NonNegativeNumber);
    common(seq);

    auto* recurrence = app.add_subcommand("recurrence", "find a linear recurrence");
    recurrence->add_option("--input", c.input, "sequence JSON file");
    problem(recurrence);
    recurrence->add_option("--dfa", c.dfa, "DFA JSON file");
    recurrence->add_option("--max-n", c.max_n, "prefix length for entries");
    recurrence->add_option("--mod", c.mod, "prime modulus");
    common(recurrence);

    auto* periodicity = app.add_subcommand("periodicity", "look for an ultimate period mod m");
    periodicity->add_option("--input", c.input, "sequence JSON file");
    periodicity->add_option("--entry", c.entry, "catalog entry");
    periodicity->add_option("--x", c.x, "indeterminate value for polynomial entries");
    periodicity->add_option("--mod", c.mod, "modulus")->required();
    periodicity->add_option("--horizon", c.horizon, "last index examined");
    periodicity->add_option("--step", c.step, "examine f(step * i) only");
    common(periodicity);

    auto* construct = app.add_subcommand("construct", "evaluate recurrence paths or a Specker polynomial");
    construct->add_option("--input", c.input, "recurrence JSON file");
    construct->add_option("--entry", c.entry, "catalog entry with a Specker polynomial");
    construct->add_option("--x", c.x, "indeterminate value");
    construct->add_option("--max-n", c.max_n, "last index")->required();
    budget(construct);
    common(construct);

    auto* diff = app.add_subcommand("diff-repr", "two ordered counting problems for a recurrence");
    diff->add_option("--input", c.input, "recurrence JSON file")->required();
    diff->add_option("--max-n", c.max_n, "last index (default 20)");
    diff->add_option("--brute-limit", c.brute_limit, "model-search cross-check up to this n");
    diff->add_option("--coi", c.coi_n, "also check order invariance at this n");
    diff->add_option("--out", c.out, "write the bundle (vocabulary and both sentences) here");
    budget(diff);
    common(diff);

    auto* idx = app.add_subcommand("index", "substitution and index experiments");
    idx->add_option("--vocab", c.vocab, "vocabulary JSON file")->required();
    idx->add_option("--formula", c.formula, "class sentence");
    idx->add_option("--size", c.size, "largest candidate size");
    idx->add_option("--bound", c.bound, "largest context size");
    idx->add_option("--cap", c.cap, "context enumeration cap");
    idx->add_option("--a1", c.a1, "pointed structure JSON for Subst");
    idx->add_option("--a2", c.a2, "structure JSON for Subst");
    common(idx);

    auto* verify = app.add_subcommand("verify", "cross-check a catalog entry");
    verify->add_option("--entry", c.entry, "catalog entry")->required();
    verify->add_option("--x", c.x, "indeterminate value for polynomial entries");
    verify->add_option("--max-n", c.max_n, "last index for model search");
    verify->add_flag("--no-facts", c.no_facts, "skip the recorded facts");
    budget(verify);
    common(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e);
            return 0;
        }
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        Outcome o;
        if (*count) o = cmd_count(c);
        else if (*coi) o = cmd_coi(c);
        else if (*compile) o = cmd_compile(c);
        else if (*seq) o = cmd_seq(c);
        else if (*recurrence) o = cmd_recurrence(c);
        else if (*periodicity) o = cmd_periodicity(c);
        else if (*construct) o = cmd_construct(c);
        else if (*diff) o = cmd_diff_repr(c);
        else if (*idx) o = cmd_index(c);
        else o = cmd_verify(c);
        print(o.report, c.format);
        return o.code;
    } catch (const counting::BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
