#pragma once

#include "specker/bigint.hpp"
#include "specker/catalog/formulas.hpp"
#include "specker/construct/paths.hpp"
#include "specker/counting/coi.hpp"
#include "specker/counting/count.hpp"
#include "specker/series/linrec.hpp"
#include "specker/words/dfa.hpp"
#include "specker/words/transfer.hpp"

#include <string>
#include <utility>
#include <vector>

namespace specker::construct {

inline constexpr int kMaxReprSymbols = 16;
inline constexpr int kNonnegativePrefix = 32;

/// One unary block symbol. `slot` is 1..r for the path vertex sets U_i and
/// r+1..2r for the initial-condition sets I_i; `copy` numbers the |a| blocks
/// that realize the weight a of that slot.
struct ReprBlock {
    int slot = 0;
    int copy = 0;
    std::string name;
    bool negative = false;
};

/// f(n) = f1(n) - f2(n) where f1, f2 count ordered models of two sentences
/// over unary symbols and `<`.
struct DiffSpeckerRepr {
    series::LinRec target;  // index base 1, no preperiod
    logic::Vocabulary vocab;
    std::vector<ReprBlock> blocks;
    Formula f1;
    Formula f2;
    bool has_negative = false;
    words::Dfa dfa1;
    words::Dfa dfa2;

    int order() const { return target.order(); }

    counting::CountTask task(int which, int n) const {
        counting::CountTask t;
        t.phi = which == 1 ? f1 : f2;
        t.vocab = vocab;
        t.n = n;
        t.mode = counting::OrderMode::Natural;
        return t;
    }
};

namespace detail {

inline std::string slot_name(int slot, int r) {
    return slot <= r ? "U" + std::to_string(slot) : "I" + std::to_string(slot - r);
}

/// x has at most k elements <-below it.
inline Formula rank_at_most(const std::string& x, int k) {
    using namespace logic::build;
    if (k <= 0) return bottom();
    std::vector<std::string> ys;
    for (int i = 0; i < k; ++i) ys.push_back("r" + std::to_string(i));
    std::vector<Formula> chain{lt(ys.back(), x)};
    for (int i = 0; i + 1 < k; ++i) chain.push_back(lt(ys[static_cast<std::size_t>(i)], ys[static_cast<std::size_t>(i) + 1]));
    return neg(catalog::formulas::exists_all(ys, all_of(chain)));
}

inline Formula any_block(const std::vector<ReprBlock>& blocks, const std::string& x, int lo, int hi) {
    std::vector<Formula> fs;
    for (const auto& b : blocks)
        if (b.slot >= lo && b.slot <= hi) fs.push_back(logic::build::rel(b.name, x));
    return logic::build::any_of(fs);
}

/// Sentence describing a recurrence-tree path in block symbols. The path may
/// also consist of n alone when n lies in the initial block.
inline Formula path_sentence(const std::vector<ReprBlock>& blocks, int r) {
    using namespace logic::build;
    namespace cf = catalog::formulas;
    std::vector<Formula> parts;
    for (std::size_t a = 0; a < blocks.size(); ++a)
        for (std::size_t b = a + 1; b < blocks.size(); ++b)
            parts.push_back(forall("x", neg(conj(rel(blocks[a].name, "x"), rel(blocks[b].name, "x")))));
    auto on_path = [&](const std::string& x) { return any_block(blocks, x, 1, 2 * r); };
    auto in_initial = [&](const std::string& x) { return any_block(blocks, x, r + 1, 2 * r); };
    parts.push_back(forall("x", implies(cf::is_last("x"), on_path("x"))));
    parts.push_back(exists("x", in_initial("x")));
    parts.push_back(cf::forall_all({"x", "y"}, implies(conj(in_initial("x"), in_initial("y")), eq("x", "y"))));
    for (int k = 1; k <= r; ++k) {
        Formula at_k = conj(rank_at_most("x", k), neg(rank_at_most("x", k - 1)));
        parts.push_back(forall("x", implies(any_block(blocks, "x", r + k, r + k), at_k)));
    }
    parts.push_back(forall("x", implies(any_block(blocks, "x", 1, r), neg(rank_at_most("x", r)))));
    for (int i = 1; i <= r; ++i) {
        Formula ui = any_block(blocks, "x", i, i);
        if (ui->op == logic::Op::False) continue;
        // y1 .. yi are the i immediate predecessors of x.
        std::vector<std::string> ys;
        for (int k = 1; k <= i; ++k) ys.push_back("y" + std::to_string(k));
        std::vector<Formula> step{cf::succ(ys[0], "x")};
        for (int k = 1; k < i; ++k) step.push_back(cf::succ(ys[static_cast<std::size_t>(k)], ys[static_cast<std::size_t>(k) - 1]));
        for (int k = 0; k + 1 < i; ++k) step.push_back(neg(on_path(ys[static_cast<std::size_t>(k)])));
        step.push_back(on_path(ys.back()));
        parts.push_back(forall("x", implies(ui, cf::exists_all(ys, all_of(step)))));
    }
    return all_of(parts);
}

/// Reads positions 1..n and tracks the same path conditions directly.
/// `parity` selects paths with an even (0) or odd (1) number of vertices in
/// negatively weighted blocks.
inline words::Dfa path_dfa(const std::vector<ReprBlock>& blocks, int r, int parity) {
    const int tracks = static_cast<int>(blocks.size());
    words::Dfa d;
    d.tracks = tracks;
    // States: dead, pre(p) for p = 0..r-1, chain(c, g, par) with
    // c in 1..r+1 (position, capped), g in 0..r-1 (skips since the last vertex).
    const int dead = d.add_state(false);
    std::vector<int> pre(static_cast<std::size_t>(r));
    for (int p = 0; p < r; ++p) pre[static_cast<std::size_t>(p)] = d.add_state(false);
    auto chain_id = [&](int c, int g, int par) { return 1 + r + ((c - 1) * r + g) * 2 + par; };
    for (int c = 1; c <= r + 1; ++c)
        for (int g = 0; g < r; ++g)
            for (int par = 0; par < 2; ++par) d.add_state(g == 0 && par == parity);
    d.initial = pre[0];

    for (int a = 0; a < d.letters(); ++a) {
        const ReprBlock* blk = nullptr;
        bool valid = true;
        for (int t = 0; t < tracks; ++t) {
            if (!((a >> t) & 1)) continue;
            if (blk) valid = false;
            blk = &blocks[static_cast<std::size_t>(t)];
        }
        auto set = [&](int from, int to) { d.delta[static_cast<std::size_t>(from)][static_cast<std::size_t>(a)] = to; };
        set(dead, dead);
        for (int p = 0; p < r; ++p) {
            int q = p + 1;
            int to = dead;
            if (valid && !blk && q < r) to = pre[static_cast<std::size_t>(q)];
            if (valid && blk && blk->slot == r + q) to = chain_id(std::min(q, r + 1), 0, blk->negative ? 1 : 0);
            set(pre[static_cast<std::size_t>(p)], to);
        }
        for (int c = 1; c <= r + 1; ++c) {
            int q = std::min(c + 1, r + 1);
            for (int g = 0; g < r; ++g) {
                for (int par = 0; par < 2; ++par) {
                    int to = dead;
                    if (valid && !blk && g + 1 < r) to = chain_id(q, g + 1, par);
                    if (valid && blk && blk->slot <= r && q == r + 1 && g == blk->slot - 1)
                        to = chain_id(q, 0, par ^ (blk->negative ? 1 : 0));
                    set(chain_id(c, g, par), to);
                }
            }
        }
    }
    d.check();
    return words::minimize(d);
}

}  // namespace detail

/// Builds two ordered counting problems whose difference is the recurrence.
/// Slot weights a (coefficients, then initial values) become |a| labeled
/// blocks, so a vertex set Y contributes |a|^|Y| models; a slot with a = 0
/// gets no blocks and is therefore empty. Negative weights are handled by
/// splitting on the parity of the negatively weighted vertices.
inline DiffSpeckerRepr recurrence_to_diff_representation(const series::LinRec& rec) {
    using namespace logic::build;
    if (rec.coeffs.empty()) throw ConstructError("empty recurrence");
    series::LinRec flat = flatten_recurrence(rec);
    for (const auto& v : series::generate(flat, kNonnegativePrefix))
        if (v < 0) throw ConstructError("the sequence takes negative values; expected f: N -> N");
    const int r = flat.order();
    DiffSpeckerRepr out;
    out.target = flat;
    BigInt total_blocks = 0;
    std::vector<BigInt> weight;
    for (const auto& c : flat.coeffs) weight.push_back(c);
    for (const auto& c : flat.initials) weight.push_back(c);
    for (const auto& w : weight) total_blocks += abs(w);
    if (total_blocks > kMaxReprSymbols)
        throw ConstructError("representation needs " + to_string(total_blocks) + " block symbols; the limit is " +
                             std::to_string(kMaxReprSymbols));
    for (int slot = 1; slot <= 2 * r; ++slot) {
        const BigInt& w = weight[static_cast<std::size_t>(slot - 1)];
        int copies = static_cast<int>(abs(w));
        for (int c = 1; c <= copies; ++c) {
            ReprBlock b{slot, c, detail::slot_name(slot, r) + "_" + std::to_string(c), w < 0};
            out.vocab.add(b.name, 1);
            out.blocks.push_back(b);
            out.has_negative = out.has_negative || b.negative;
        }
    }
    Formula path = detail::path_sentence(out.blocks, r);
    if (out.has_negative) {
        std::vector<Formula> neg_blocks;
        for (const auto& b : out.blocks)
            if (b.negative) neg_blocks.push_back(rel(b.name, "x"));
        Formula even = count_mod(0, 2, "x", any_of(neg_blocks));
        out.f1 = conj(path, even);
        out.f2 = conj(path, neg(even));
        out.dfa2 = detail::path_dfa(out.blocks, r, 1);
    } else {
        out.f1 = path;
        out.f2 = bottom();
        out.dfa2 = words::constant_dfa(static_cast<int>(out.blocks.size()), false);
    }
    out.dfa1 = detail::path_dfa(out.blocks, r, 0);
    return out;
}

struct DiffEvalOptions {
    int brute_limit = 6;
    counting::CountOptions count;
};

struct DiffEval {
    int n = 0;
    BigInt f1;
    BigInt f2;
    BigInt value;
    bool brute_checked = false;
};

/// Counts both problems with the word automata and, up to `brute_limit`,
/// also by model search over the emitted sentences; any disagreement throws.
inline DiffEval eval_diff_representation_full(const DiffSpeckerRepr& repr, int n, const DiffEvalOptions& opts = {}) {
    if (n < 1) throw ConstructError("difference representation starts at n = 1");
    DiffEval e;
    e.n = n;
    e.f1 = words::count_words(repr.dfa1, n);
    e.f2 = words::count_words(repr.dfa2, n);
    if (n <= opts.brute_limit) {
        BigInt b1 = counting::specker_count(repr.task(1, n), opts.count);
        BigInt b2 = counting::specker_count(repr.task(2, n), opts.count);
        if (b1 != e.f1 || b2 != e.f2)
            throw ConstructError("counting lanes disagree at n=" + std::to_string(n) + ": model search (" + to_string(b1) +
                                 ", " + to_string(b2) + "), automaton (" + to_string(e.f1) + ", " + to_string(e.f2) + ")");
        e.brute_checked = true;
    }
    e.value = e.f1 - e.f2;
    return e;
}

inline BigInt eval_diff_representation(const DiffSpeckerRepr& repr, int n, const DiffEvalOptions& opts = {}) {
    return eval_diff_representation_full(repr, n, opts).value;
}

/// Order-invariance of both problems at size n.
inline std::pair<counting::CoiReport, counting::CoiReport> check_repr_coi(const DiffSpeckerRepr& repr, int n,
                                                                         counting::CoiStrategy strategy = counting::CoiStrategy::exhaustive(),
                                                                         const counting::CountOptions& opts = {}) {
    return {counting::check_coi(repr.task(1, n), strategy, opts), counting::check_coi(repr.task(2, n), strategy, opts)};
}

}  // namespace specker::construct
