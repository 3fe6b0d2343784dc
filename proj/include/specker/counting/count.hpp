#pragma once

#include "specker/bigint.hpp"
#include "specker/logic/eval.hpp"
#include "specker/logic/formula.hpp"
#include "specker/logic/structure.hpp"
#include "specker/logic/vocabulary.hpp"
#include "specker/util.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace specker::counting {

using logic::Formula;
using logic::Structure;
using logic::Truth;
using logic::Tuple;
using logic::Vocabulary;

class CountError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when the search visits more partial assignments than the budget.
class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(std::uint64_t budget)
        : std::runtime_error("search budget of " + std::to_string(budget) + " assignments exceeded"), budget_(budget) {}
    std::uint64_t budget() const { return budget_; }

private:
    std::uint64_t budget_;
};

enum class OrderMode { Unordered, Given, Natural };

struct CountTask {
    Formula phi;
    Vocabulary vocab;
    int n = 0;
    OrderMode mode = OrderMode::Unordered;
    std::vector<int> order;  // labels from least to greatest, for OrderMode::Given
    std::map<std::string, std::set<Tuple>> fixed;  // interpretations of non-counted symbols
};

inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 30;

struct CountOptions {
    std::uint64_t budget = kDefaultBudget;
    int workers = 1;
};

struct CountResult {
    BigInt count;
    std::uint64_t nodes = 0;
};

/// Depth-first model counter over the interpretations of the counted symbols.
///
/// Cells are fixed one at a time in a static order (see `cell_order`). The
/// sentence is split into clauses (top-level conjunctions and instantiated
/// universal quantifiers), each kept with its Kleene value and the unknown
/// cells it last read; assigning a cell re-evaluates only the clauses watching
/// it. A false clause prunes the subtree, and once every clause is true the
/// 2^k remaining completions are counted at once.
class ModelSearch {
public:
    static constexpr int kSplitBits = 8;
    static constexpr std::size_t kClauseCap = 50000;

    explicit ModelSearch(const CountTask& task) : cf_(sentence(task.phi)), n_(task.n) {
        if (task.n < 0) throw CountError("negative universe size");
        setup_order(task);
        setup_cells(task);
        build_clauses();
    }

    ModelSearch(const ModelSearch& o)
        : cf_(o.cf_), n_(o.n_), rank_(o.rank_), cells_(o.cells_), view_(o.view_), symbol_offset_(o.symbol_offset_),
          symbol_arity_(o.symbol_arity_), cell_order_(o.cell_order_), position_(o.position_), clauses_(o.clauses_),
          root_status_(o.root_status_), root_watch_(o.root_watch_), root_unknown_(o.root_unknown_),
          root_false_(o.root_false_) {
        view_.cells = cells_.data();
        view_.rank = rank_.empty() ? nullptr : rank_.data();
    }
    ModelSearch& operator=(const ModelSearch&) = delete;

    std::size_t searched_cells() const { return cell_order_.size(); }
    std::size_t clause_count() const { return clauses_.size(); }
    /// Number of prefixes the work is split into (independent of worker count).
    std::size_t prefix_count() const { return std::size_t{1} << split_bits(); }

    /// Count models whose first split_bits() searched cells spell a prefix in
    /// [begin, end), most significant cell first.
    BigInt count_prefixes(std::size_t begin, std::size_t end, std::uint64_t budget, std::uint64_t& nodes) {
        BigInt total = 0;
        for (std::size_t p = begin; p < end; ++p) total += run_prefix(p, budget, nodes, nullptr);
        return total;
    }

    /// Visit every model (cells fully assigned) in search order.
    void for_each_model(const std::function<void(const ModelSearch&)>& visit, std::uint64_t budget,
                        std::uint64_t& nodes) {
        for (std::size_t p = 0; p < prefix_count(); ++p) run_prefix(p, budget, nodes, &visit);
    }

    /// During a visit: is the tuple (1-based labels) in the symbol's relation?
    bool holds(std::size_t symbol, const Tuple& t) const {
        int idx = 0;
        for (int e : t) idx = idx * n_ + (e - 1);
        return cells_[symbol_offset_[symbol] + idx] == 1;
    }

    /// During a visit: the current model as a Structure (non-counted symbols included).
    Structure structure(const Vocabulary& vocab) const {
        Structure s;
        s.n = n_;
        for (std::size_t sym = 0; sym < vocab.size(); ++sym) {
            int ar = symbol_arity_[sym];
            int size = cells_for(ar);
            auto& rel = s.interp[vocab[sym].name];
            for (int idx = 0; idx < size; ++idx) {
                if (cells_[symbol_offset_[sym] + idx] != 1) continue;
                Tuple t(static_cast<std::size_t>(ar));
                int rest = idx;
                for (int i = ar - 1; i >= 0; --i) {
                    t[i] = rest % n_ + 1;
                    rest /= n_;
                }
                rel.insert(std::move(t));
            }
        }
        if (!rank_.empty()) {
            std::vector<int> order(static_cast<std::size_t>(n_));
            for (int e = 0; e < n_; ++e) order[rank_[e]] = e + 1;
            s.order = std::move(order);
        }
        return s;
    }

private:
    struct Clause {
        int node;
        bool negated;
        std::vector<int> env;
        std::vector<std::uint64_t> sets;
    };

    // Universal set quantifiers are split into one clause per subset up to this size.
    static constexpr int kMaxSplitSetUniverse = 8;

    static const Formula& sentence(const Formula& phi) {
        if (!logic::free_variables(phi).empty()) throw CountError("counting requires a sentence");
        return phi;
    }

    int split_bits() const { return static_cast<int>(std::min<std::size_t>(cell_order_.size(), kSplitBits)); }

    int cells_for(int arity) const {
        int sz = 1;
        for (int i = 0; i < arity; ++i) sz *= n_;
        return sz;
    }

    void setup_order(const CountTask& task) {
        if (task.mode == OrderMode::Unordered) {
            if (cf_.ordered()) throw CountError("formula uses '<' but the count is unordered");
            return;
        }
        std::vector<int> order = task.mode == OrderMode::Natural ? logic::natural_order(n_) : task.order;
        if (!logic::is_permutation_of_universe(order, n_)) throw CountError("order is not a permutation of the universe");
        rank_.assign(static_cast<std::size_t>(n_), 0);
        for (int k = 0; k < n_; ++k) rank_[order[k] - 1] = k;
    }

    void setup_cells(const CountTask& task) {
        const Vocabulary& vocab = task.vocab;
        std::set<std::string> used;
        logic::collect_relations(task.phi, used);
        int total = 0;
        for (std::size_t s = 0; s < vocab.size(); ++s) {
            symbol_offset_.push_back(total);
            symbol_arity_.push_back(vocab[s].arity);
            total += cells_for(vocab[s].arity);
        }
        cells_.assign(static_cast<std::size_t>(total), 0);
        for (const auto& [name, tuples] : task.fixed) {
            auto s = vocab.find(name);
            if (!s) throw CountError("fixed interpretation for unknown symbol '" + name + "'");
            if (vocab[*s].counted) throw CountError("symbol '" + name + "' is counted and cannot be fixed");
            for (const auto& t : tuples) {
                if (static_cast<int>(t.size()) != vocab[*s].arity) throw CountError("fixed tuple arity mismatch");
                int idx = 0;
                for (int e : t) {
                    if (e < 1 || e > n_) throw CountError("fixed tuple outside universe");
                    idx = idx * n_ + (e - 1);
                }
                cells_[symbol_offset_[*s] + idx] = 1;
            }
        }
        // formula relations -> cell offsets
        for (const auto& [name, arity] : cf_.relations()) {
            auto s = vocab.find(name);
            if (!s) throw CountError("formula mentions unknown symbol '" + name + "'");
            if (vocab[*s].arity != arity) throw CountError("arity mismatch for '" + name + "'");
            view_.offset.push_back(symbol_offset_[*s]);
        }
        // search order over counted cells
        struct Key {
            int unused;
            int top;
            std::vector<int> ranks;
            std::size_t symbol;
            int cell;
        };
        std::vector<Key> keys;
        for (std::size_t s = 0; s < vocab.size(); ++s) {
            if (!vocab[s].counted) continue;
            int ar = vocab[s].arity;
            for (int idx = 0; idx < cells_for(ar); ++idx) {
                Key k{used.count(vocab[s].name) ? 0 : 1, -1, std::vector<int>(static_cast<std::size_t>(ar)), s,
                      symbol_offset_[s] + idx};
                int rest = idx;
                for (int i = ar - 1; i >= 0; --i) {
                    int e = rest % n_;
                    rest /= n_;
                    k.ranks[i] = rank_.empty() ? e : rank_[e];
                    k.top = std::max(k.top, k.ranks[i]);
                }
                keys.push_back(std::move(k));
                cells_[static_cast<std::size_t>(keys.back().cell)] = -1;
            }
        }
        std::stable_sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
            if (a.unused != b.unused) return a.unused < b.unused;
            if (a.top != b.top) return a.top < b.top;
            if (a.ranks != b.ranks) return a.ranks < b.ranks;
            return a.symbol < b.symbol;
        });
        position_.assign(cells_.size(), -1);
        for (const auto& k : keys) {
            position_[static_cast<std::size_t>(k.cell)] = static_cast<int>(cell_order_.size());
            cell_order_.push_back(k.cell);
        }
        view_.n = n_;
        view_.cells = cells_.data();
        view_.rank = rank_.empty() ? nullptr : rank_.data();
    }

    void flatten(int id, bool negated, std::vector<int>& env, std::vector<std::uint64_t>& sets, bool& contradiction) {
        using logic::Op;
        const auto& nd = cf_.nodes()[id];
        auto conjunctive = [&](Op op) { return negated ? op == Op::Or : op == Op::And; };
        if (conjunctive(nd.op)) {
            flatten(nd.k0, negated, env, sets, contradiction);
            flatten(nd.k1, negated, env, sets, contradiction);
            return;
        }
        if (nd.op == Op::Not) return flatten(nd.k0, !negated, env, sets, contradiction);
        if (nd.op == Op::Implies && negated) {
            flatten(nd.k0, false, env, sets, contradiction);
            flatten(nd.k1, true, env, sets, contradiction);
            return;
        }
        bool universal = negated ? nd.op == Op::Exists : nd.op == Op::Forall;
        if (universal && clauses_.size() + static_cast<std::size_t>(n_) <= kClauseCap) {
            int saved = env[nd.slot];
            for (int v = 0; v < n_; ++v) {
                env[nd.slot] = v;
                flatten(nd.k0, negated, env, sets, contradiction);
            }
            env[nd.slot] = saved;
            return;
        }
        bool universal_set = negated ? nd.op == Op::ExistsSet : nd.op == Op::ForallSet;
        if (universal_set && n_ <= kMaxSplitSetUniverse &&
            clauses_.size() + (std::size_t{1} << n_) <= kClauseCap) {
            std::uint64_t saved = sets[nd.slot];
            for (std::uint64_t m = 0; m < (std::uint64_t{1} << n_); ++m) {
                sets[nd.slot] = m;
                flatten(nd.k0, negated, env, sets, contradiction);
            }
            sets[nd.slot] = saved;
            return;
        }
        if ((nd.op == Op::True && !negated) || (nd.op == Op::False && negated)) return;
        if ((nd.op == Op::False && !negated) || (nd.op == Op::True && negated)) {
            contradiction = true;
            return;
        }
        clauses_.push_back(Clause{id, negated, env, sets});
    }

    void build_clauses() {
        std::vector<int> env(static_cast<std::size_t>(cf_.individual_slots()), 0);
        std::vector<std::uint64_t> sets(static_cast<std::size_t>(cf_.set_slots()), 0);
        bool contradiction = false;
        flatten(cf_.root(), false, env, sets, contradiction);
        root_false_ = contradiction;
        root_status_.assign(clauses_.size(), Truth::Unknown);
        root_watch_.assign(clauses_.size(), {});
        logic::Evaluator ev(cf_, view_);
        for (std::size_t c = 0; c < clauses_.size() && !root_false_; ++c) {
            std::vector<int> w;
            Truth t = eval_clause(ev, c, &w);
            root_status_[c] = t;
            if (t == Truth::False) root_false_ = true;
            if (t == Truth::Unknown) {
                ++root_unknown_;
                root_watch_[c] = std::move(w);
            }
        }
    }

    Truth eval_clause(logic::Evaluator& ev, std::size_t c, std::vector<int>* watch) {
        const Clause& cl = clauses_[c];
        std::copy(cl.env.begin(), cl.env.end(), ev.individuals().begin());
        for (std::size_t i = 0; i < cl.sets.size(); ++i) ev.bind_set(static_cast<int>(i), cl.sets[i]);
        Truth t = ev.eval(cl.node, watch);
        return cl.negated ? logic::truth_not(t) : t;
    }

    // ---- per-run mutable state ----
    struct Run {
        std::vector<Truth> status;
        std::vector<std::vector<int>> watchers;  // cell -> clauses registered on it
        std::vector<std::pair<int, Truth>> status_trail;
        std::vector<int> push_trail;
        std::size_t unknown = 0;
        std::vector<int> scratch;
    };

    // Cells are fixed in a static order, so a clause can only change value once
    // the earliest-placed unknown cell it read gets fixed: watching that one
    // cell suffices.
    void register_watches(Run& run, int c, const std::vector<int>& w) {
        int best = -1;
        for (int cell : w)
            if (best < 0 || position_[static_cast<std::size_t>(cell)] < position_[static_cast<std::size_t>(best)])
                best = cell;
        if (best < 0) throw CountError("internal: undecided clause without unknown cells");
        run.watchers[static_cast<std::size_t>(best)].push_back(c);
        run.push_trail.push_back(best);
    }

    void start_run(Run& run) {
        run.status = root_status_;
        run.watchers.assign(cells_.size(), {});
        run.status_trail.clear();
        run.push_trail.clear();
        run.unknown = root_unknown_;
        for (std::size_t c = 0; c < clauses_.size(); ++c) {
            if (run.status[c] != Truth::Unknown) continue;
            register_watches(run, static_cast<int>(c), root_watch_[c]);
        }
        run.push_trail.clear();  // root registrations are never undone
    }

    // Fix a cell; false on conflict (state must then be undone by the caller).
    bool assign(Run& run, logic::Evaluator& ev, int cell, std::int8_t value) {
        cells_[static_cast<std::size_t>(cell)] = value;
        auto& list = run.watchers[static_cast<std::size_t>(cell)];
        const std::size_t len = list.size();
        for (std::size_t i = 0; i < len; ++i) {
            int c = list[i];
            if (run.status[static_cast<std::size_t>(c)] != Truth::Unknown) continue;
            run.scratch.clear();
            Truth t = eval_clause(ev, static_cast<std::size_t>(c), &run.scratch);
            if (t == Truth::Unknown) {
                register_watches(run, c, run.scratch);
                continue;
            }
            run.status_trail.emplace_back(c, Truth::Unknown);
            run.status[static_cast<std::size_t>(c)] = t;
            --run.unknown;
            if (t == Truth::False) return false;
        }
        return true;
    }

    void undo(Run& run, std::size_t status_mark, std::size_t push_mark) {
        while (run.status_trail.size() > status_mark) {
            auto [c, old] = run.status_trail.back();
            run.status_trail.pop_back();
            run.status[static_cast<std::size_t>(c)] = old;
            ++run.unknown;
        }
        while (run.push_trail.size() > push_mark) {
            run.watchers[static_cast<std::size_t>(run.push_trail.back())].pop_back();
            run.push_trail.pop_back();
        }
    }

    void tick(std::uint64_t& nodes, std::uint64_t budget) {
        if (++nodes > budget) throw BudgetExceeded(budget);
    }

    void enumerate_completions(std::size_t pos, const std::function<void(const ModelSearch&)>& visit) {
        if (pos == cell_order_.size()) {
            visit(*this);
            return;
        }
        int cell = cell_order_[pos];
        for (std::int8_t v : {std::int8_t{0}, std::int8_t{1}}) {
            cells_[static_cast<std::size_t>(cell)] = v;
            enumerate_completions(pos + 1, visit);
        }
        cells_[static_cast<std::size_t>(cell)] = -1;
    }

    BigInt settle(std::size_t next_pos, const std::function<void(const ModelSearch&)>* visit) {
        if (visit) {
            enumerate_completions(next_pos, *visit);
            return 0;
        }
        return pow2(cell_order_.size() - next_pos);
    }

    BigInt dfs(Run& run, logic::Evaluator& ev, std::size_t pos, std::uint64_t budget, std::uint64_t& nodes,
               const std::function<void(const ModelSearch&)>* visit) {
        BigInt total = 0;
        const int cell = cell_order_[pos];
        for (std::int8_t v : {std::int8_t{0}, std::int8_t{1}}) {
            tick(nodes, budget);
            std::size_t sm = run.status_trail.size(), pm = run.push_trail.size();
            if (assign(run, ev, cell, v)) {
                if (run.unknown == 0)
                    total += settle(pos + 1, visit);
                else if (pos + 1 < cell_order_.size())
                    total += dfs(run, ev, pos + 1, budget, nodes, visit);
                else
                    throw CountError("internal: clause undecided on a complete assignment");
            }
            undo(run, sm, pm);
        }
        cells_[static_cast<std::size_t>(cell)] = -1;
        return total;
    }

    BigInt run_prefix(std::size_t prefix, std::uint64_t budget, std::uint64_t& nodes,
                      const std::function<void(const ModelSearch&)>* visit) {
        if (root_false_) return 0;
        const std::size_t k = static_cast<std::size_t>(split_bits());
        if (root_unknown_ == 0) {
            // every clause already true: this prefix owns 2^(cells - k) completions
            for (std::size_t i = 0; i < k; ++i)
                cells_[static_cast<std::size_t>(cell_order_[i])] = static_cast<std::int8_t>((prefix >> (k - 1 - i)) & 1u);
            BigInt r = settle(k, visit);
            for (std::size_t i = 0; i < k; ++i) cells_[static_cast<std::size_t>(cell_order_[i])] = -1;
            tick(nodes, budget);
            return r;
        }
        Run run;
        start_run(run);
        logic::Evaluator ev(cf_, view_);
        BigInt result = 0;
        bool ok = true;
        std::size_t applied = 0;
        for (; applied < k; ++applied) {
            tick(nodes, budget);
            auto bit = static_cast<std::int8_t>((prefix >> (k - 1 - applied)) & 1u);
            if (!assign(run, ev, cell_order_[applied], bit)) {
                ok = false;
                ++applied;
                break;
            }
        }
        if (ok) {
            if (run.unknown == 0)
                result = settle(k, visit);
            else if (k < cell_order_.size())
                result = dfs(run, ev, k, budget, nodes, visit);
            else
                throw CountError("internal: clause undecided on a complete assignment");
        }
        for (std::size_t i = 0; i < applied; ++i) cells_[static_cast<std::size_t>(cell_order_[i])] = -1;
        return result;
    }

    logic::CompiledFormula cf_;
    int n_;
    std::vector<int> rank_;
    std::vector<std::int8_t> cells_;
    logic::ModelView view_;
    std::vector<int> symbol_offset_;
    std::vector<int> symbol_arity_;
    std::vector<int> cell_order_;
    std::vector<int> position_;  // cell -> index in cell_order_, -1 if not searched
    std::vector<Clause> clauses_;
    std::vector<Truth> root_status_;
    std::vector<std::vector<int>> root_watch_;
    std::size_t root_unknown_ = 0;
    bool root_false_ = false;
};

/// |{ interpretations of the counted symbols : <[n], (<), R> |= phi }|.
/// The prefix split is fixed, so the count and the node tally do not depend
/// on the worker count.
inline CountResult count_models(const CountTask& task, const CountOptions& opts = {}) {
    ModelSearch root(task);
    const std::size_t prefixes = root.prefix_count();
    int workers = std::max(1, opts.workers);
    std::vector<BigInt> partial(static_cast<std::size_t>(workers));
    std::vector<std::uint64_t> nodes(static_cast<std::size_t>(workers), 0);
    run_chunks(prefixes, workers, [&](std::size_t begin, std::size_t end, int w) {
        ModelSearch local(root);
        partial[static_cast<std::size_t>(w)] = local.count_prefixes(begin, end, opts.budget, nodes[static_cast<std::size_t>(w)]);
    });
    CountResult r;
    for (auto& p : partial) r.count += p;
    for (auto c : nodes) r.nodes += c;
    if (r.nodes > opts.budget) throw BudgetExceeded(opts.budget);
    return r;
}

inline BigInt specker_count(const CountTask& task, const CountOptions& opts = {}) { return count_models(task, opts).count; }

inline BigInt ordered_specker_count(CountTask task, const std::vector<int>& order, const CountOptions& opts = {}) {
    task.mode = OrderMode::Given;
    task.order = order;
    return count_models(task, opts).count;
}

/// Visit every model of the task, single-threaded, in search order.
inline void for_each_model(const CountTask& task, const std::function<void(const ModelSearch&)>& visit,
                           std::uint64_t budget = kDefaultBudget) {
    ModelSearch s(task);
    std::uint64_t nodes = 0;
    s.for_each_model(visit, budget, nodes);
}

}  // namespace specker::counting
