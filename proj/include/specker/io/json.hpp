#pragma once

#include "specker/bigint.hpp"
#include "specker/catalog/entries.hpp"
#include "specker/construct/diff.hpp"
#include "specker/counting/coi.hpp"
#include "specker/index/subst.hpp"
#include "specker/logic/formula.hpp"
#include "specker/logic/parser.hpp"
#include "specker/logic/structure.hpp"
#include "specker/logic/vocabulary.hpp"
#include "specker/series/linrec.hpp"
#include "specker/series/periodicity.hpp"
#include "specker/words/dfa.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace specker::io {

/// Keys keep insertion order so output is stable byte for byte.
using Json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string dump(const Json& j) { return j.dump(); }

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError("'" + path + "': " + e.what());
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- numbers: written as decimal strings, read from strings or integers

inline Json big(const BigInt& v) { return to_string(v); }

inline BigInt big_from(const Json& j) {
    if (j.is_string()) {
        try {
            return parse_bigint(j.get<std::string>());
        } catch (const std::exception&) {
            throw FormatError("not an integer: \"" + j.get<std::string>() + "\"");
        }
    }
    if (j.is_number_integer()) return j.is_number_unsigned() ? BigInt(j.get<std::uint64_t>()) : BigInt(j.get<std::int64_t>());
    throw FormatError("expected an integer or a decimal string");
}

inline Json big_array(const std::vector<BigInt>& vs) {
    Json a = Json::array();
    for (const auto& v : vs) a.push_back(big(v));
    return a;
}

inline std::vector<BigInt> big_array_from(const Json& j) {
    if (!j.is_array()) throw FormatError("expected an array of integers");
    std::vector<BigInt> out;
    for (const auto& x : j) out.push_back(big_from(x));
    return out;
}

namespace detail {
inline const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}
inline int int_field(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_number_integer()) throw FormatError(std::string("field \"") + key + "\" must be an integer");
    return v.get<int>();
}
inline int int_field_or(const Json& j, const char* key, int fallback) {
    return j.is_object() && j.contains(key) ? int_field(j, key) : fallback;
}
}  // namespace detail

// ---- vocabulary: {"symbols":[{"name","arity","counted"}]}

inline Json to_json(const logic::Vocabulary& v) {
    Json syms = Json::array();
    for (const auto& s : v.symbols()) syms.push_back(Json{{"name", s.name}, {"arity", s.arity}, {"counted", s.counted}});
    return Json{{"symbols", syms}};
}

inline logic::Vocabulary vocabulary_from_json(const Json& j) {
    logic::Vocabulary v;
    const Json& syms = detail::field(j, "symbols");
    if (!syms.is_array()) throw FormatError("\"symbols\" must be an array");
    for (const auto& s : syms) {
        const Json& name = detail::field(s, "name");
        if (!name.is_string()) throw FormatError("symbol name must be a string");
        bool counted = s.contains("counted") ? s.at("counted").get<bool>() : true;
        try {
            v.add(name.get<std::string>(), detail::int_field(s, "arity"), counted);
        } catch (const std::invalid_argument& e) {
            throw FormatError(e.what());
        }
    }
    return v;
}

// ---- structures: {"n", "relations":{"E":[[i,j],...]}, "point"?}

inline Json to_json(const logic::Structure& s, std::optional<int> point = {}) {
    Json rels = Json::object();
    for (const auto& [name, tuples] : s.interp) {
        Json ts = Json::array();
        for (const auto& t : tuples) ts.push_back(t);
        rels[name] = ts;
    }
    Json j{{"n", s.n}, {"relations", rels}};
    if (point) j["point"] = *point;
    return j;
}

inline Json to_json(const logic::PointedStructure& p) { return to_json(p.base, p.point); }

inline logic::Structure structure_from_json(const Json& j) {
    logic::Structure s;
    s.n = detail::int_field(j, "n");
    if (s.n < 0) throw FormatError("negative universe size");
    if (j.contains("relations")) {
        const Json& rels = j.at("relations");
        if (!rels.is_object()) throw FormatError("\"relations\" must be an object");
        for (const auto& [name, ts] : rels.items()) {
            if (!ts.is_array()) throw FormatError("relation \"" + name + "\" must be an array of tuples");
            auto& rel = s.interp[name];
            for (const auto& t : ts) {
                if (!t.is_array()) throw FormatError("tuples must be arrays");
                logic::Tuple tup;
                for (const auto& e : t) {
                    if (!e.is_number_integer()) throw FormatError("tuple entries must be integers");
                    int v = e.get<int>();
                    if (v < 1 || v > s.n) throw FormatError("tuple entry " + std::to_string(v) + " outside [1, n]");
                    tup.push_back(v);
                }
                rel.insert(tup);
            }
            if (rel.empty()) s.interp.erase(name);
        }
    }
    return s;
}

inline logic::PointedStructure pointed_from_json(const Json& j) {
    logic::PointedStructure p{structure_from_json(j), detail::int_field(j, "point")};
    if (p.point < 1 || p.point > p.base.n) throw FormatError("point outside the universe");
    return p;
}

// ---- DFA: {"s","states","initial","accepting","delta"}

inline Json to_json(const words::Dfa& d) {
    Json acc = Json::array();
    for (int q = 0; q < d.states(); ++q)
        if (d.accepting[static_cast<std::size_t>(q)]) acc.push_back(q);
    return Json{{"s", d.tracks}, {"states", d.states()}, {"initial", d.initial}, {"accepting", acc}, {"delta", d.delta}};
}

inline words::Dfa dfa_from_json(const Json& j) {
    words::Dfa d;
    d.tracks = detail::int_field(j, "s");
    if (d.tracks < 0 || d.tracks > 16) throw FormatError("track count must be in [0, 16]");
    const int states = detail::int_field(j, "states");
    d.initial = detail::int_field(j, "initial");
    d.accepting.assign(static_cast<std::size_t>(std::max(states, 0)), 0);
    for (const auto& q : detail::field(j, "accepting")) {
        int v = q.get<int>();
        if (v < 0 || v >= states) throw FormatError("accepting state out of range");
        d.accepting[static_cast<std::size_t>(v)] = 1;
    }
    d.delta = detail::field(j, "delta").get<std::vector<std::vector<int>>>();
    try {
        d.check();
    } catch (const std::exception& e) {
        throw FormatError(std::string("invalid automaton: ") + e.what());
    }
    return d;
}

// ---- sequences and recurrences

struct Sequence {
    int base = 0;
    std::vector<BigInt> terms;
};

inline Json to_json(const Sequence& s) { return Json{{"base", s.base}, {"terms", big_array(s.terms)}}; }

inline Sequence sequence_from_json(const Json& j) {
    return {detail::int_field_or(j, "base", 0), big_array_from(detail::field(j, "terms"))};
}

inline Json to_json(const series::LinRec& r) {
    Json j{{"coeffs", big_array(r.coeffs)}, {"initials", big_array(r.initials)}, {"base", r.base}, {"preperiod", r.preperiod}};
    if (r.modulus) j["modulus"] = r.modulus;
    return j;
}

inline series::LinRec linrec_from_json(const Json& j) {
    series::LinRec r;
    r.coeffs = big_array_from(detail::field(j, "coeffs"));
    r.initials = big_array_from(detail::field(j, "initials"));
    r.base = detail::int_field_or(j, "base", 0);
    r.preperiod = detail::int_field_or(j, "preperiod", 0);
    if (j.contains("modulus")) r.modulus = j.at("modulus").get<std::int64_t>();
    try {
        r.check();
    } catch (const std::exception& e) {
        throw FormatError(e.what());
    }
    return r;
}

inline Json to_json(const series::PeriodicityReport& r) {
    Json j{{"verdict", r.periodic ? "periodic" : "no-period-found"}, {"modulus", r.modulus}, {"horizon", r.horizon}};
    if (r.periodic) {
        j["n0"] = r.n0;
        j["period"] = r.period;
        j["window"] = Json::array({r.window_begin, r.window_end});
    }
    return j;
}

inline Json to_json(const counting::CoiReport& r) {
    Json counts = Json::array();
    for (const auto& [order, c] : r.counts) counts.push_back(Json{{"order", order}, {"count", big(c)}});
    const char* strategy = r.strategy == counting::CoiStrategyKind::Exhaustive ? "exhaustive" : "sampled";
    Json j{{"n", r.n}, {"invariant", r.invariant}, {"strategy", strategy}, {"orders", r.counts.size()}};
    if (r.strategy != counting::CoiStrategyKind::Exhaustive) {
        j["seed"] = r.seed;
        j["samples"] = r.samples;
    }
    if (r.witness) j["witness"] = Json::array({counts[r.witness->first], counts[r.witness->second]});
    return j;
}

// ---- difference representation bundle

inline Json to_json(const construct::DiffSpeckerRepr& r) {
    Json blocks = Json::array();
    for (const auto& b : r.blocks) blocks.push_back(Json{{"name", b.name}, {"slot", b.slot}, {"copy", b.copy}, {"negative", b.negative}});
    return Json{{"target", to_json(r.target)},
                {"ordered", true},
                {"vocabulary", to_json(r.vocab)},
                {"blocks", blocks},
                {"f1", logic::to_string(r.f1)},
                {"f2", logic::to_string(r.f2)}};
}

/// The two sentences and vocabulary of a bundle, parsed back.
struct Bundle {
    logic::Vocabulary vocab;
    logic::Formula f1;
    logic::Formula f2;
};

inline Bundle bundle_from_json(const Json& j) {
    Bundle b;
    b.vocab = vocabulary_from_json(detail::field(j, "vocabulary"));
    b.f1 = logic::parse_formula(detail::field(j, "f1").get<std::string>(), b.vocab);
    b.f2 = logic::parse_formula(detail::field(j, "f2").get<std::string>(), b.vocab);
    return b;
}

// ---- catalog

inline Json to_json(const catalog::CatalogEntry& e) {
    Json params = Json::object();
    for (const auto& [k, v] : e.params) params[k] = v;
    Json facts = Json::array();
    for (const auto& f : e.facts) facts.push_back(Json{{"name", f.name}, {"claim", f.claim}});
    Json j{{"name", e.name}, {"description", e.description}, {"params", params}, {"vocabulary", to_json(e.vocab)}};
    j["formula"] = e.formula ? Json(logic::to_string(*e.formula)) : Json(nullptr);
    j["ordered"] = e.ordered;
    j["first_n"] = e.first_n;
    j["feasibility"] = e.feasibility;
    j["word_lane"] = e.words.has_value();
    j["recurrence"] = e.recurrence ? to_json(*e.recurrence) : Json(nullptr);
    j["polynomial"] = e.polynomial.has_value();
    j["specker_blatter"] = e.specker_blatter;
    j["facts"] = facts;
    return j;
}

inline Json to_json(const catalog::VerifyReport& r) {
    Json lanes = Json::array();
    for (const auto& l : r.lanes) {
        Json lj{{"lane", l.lane}, {"from", l.from}, {"to", l.to}, {"pass", l.pass}};
        if (l.first_mismatch) {
            lj["first_mismatch"] = *l.first_mismatch;
            lj["expected"] = l.expected;
            lj["actual"] = l.actual;
        }
        if (!l.note.empty()) lj["note"] = l.note;
        lanes.push_back(lj);
    }
    Json facts = Json::array();
    for (const auto& f : r.facts) facts.push_back(Json{{"name", f.name}, {"claim", f.claim}, {"pass", f.pass}, {"detail", f.detail}});
    return Json{{"entry", r.entry}, {"max_n", r.max_n}, {"oracle", big_array(r.oracle)},
                {"lanes", lanes},   {"facts", facts},   {"pass", r.pass()}};
}

// ---- index

inline Json to_json(const index::IndexReport& r) {
    Json reps = Json::array();
    for (const auto& s : r.representatives) reps.push_back(to_json(s));
    return Json{{"size", r.size}, {"bound", r.bound}, {"candidates", r.candidates}, {"lower_bound", r.lower_bound()},
                {"representatives", reps}};
}

}  // namespace specker::io
