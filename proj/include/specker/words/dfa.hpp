#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace specker::words {

class DfaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Complete DFA over the alphabet of bit masks 0 .. 2^tracks - 1. Track i is
/// bit i of a letter.
struct Dfa {
    int tracks = 0;
    int initial = 0;
    std::vector<char> accepting;
    std::vector<std::vector<int>> delta;  // delta[state][letter]

    int states() const { return static_cast<int>(delta.size()); }
    int letters() const { return 1 << tracks; }

    int add_state(bool accept) {
        accepting.push_back(accept ? 1 : 0);
        delta.emplace_back(static_cast<std::size_t>(letters()), -1);
        return states() - 1;
    }

    void check() const {
        if (tracks < 0 || tracks > 24) throw DfaError("unsupported number of tracks");
        if (delta.empty()) throw DfaError("DFA needs at least one state");
        if (accepting.size() != delta.size()) throw DfaError("accepting flags do not match the state count");
        if (initial < 0 || initial >= states()) throw DfaError("initial state out of range");
        for (const auto& row : delta) {
            if (static_cast<int>(row.size()) != letters()) throw DfaError("transition row has the wrong length");
            for (int q : row)
                if (q < 0 || q >= states()) throw DfaError("transition target out of range");
        }
    }

    bool accepts(const std::vector<int>& word) const {
        int q = initial;
        for (int a : word) q = delta[static_cast<std::size_t>(q)][static_cast<std::size_t>(a)];
        return accepting[static_cast<std::size_t>(q)] != 0;
    }
};

/// One state; accepts everything or nothing.
inline Dfa constant_dfa(int tracks, bool accept) {
    Dfa d;
    d.tracks = tracks;
    int q = d.add_state(accept);
    std::fill(d.delta[0].begin(), d.delta[0].end(), q);
    return d;
}

inline Dfa complement(Dfa d) {
    for (auto& a : d.accepting) a = a ? 0 : 1;
    return d;
}

enum class BoolOp { And, Or, Implies, Iff };

/// Product automaton restricted to reachable pairs.
inline Dfa product(const Dfa& a, const Dfa& b, BoolOp op) {
    if (a.tracks != b.tracks) throw DfaError("product of automata over different alphabets");
    auto combine = [op](bool x, bool y) {
        switch (op) {
        case BoolOp::And: return x && y;
        case BoolOp::Or: return x || y;
        case BoolOp::Implies: return !x || y;
        case BoolOp::Iff: return x == y;
        }
        return false;
    };
    Dfa r;
    r.tracks = a.tracks;
    std::map<std::pair<int, int>, int> id;
    std::vector<std::pair<int, int>> queue;
    auto get = [&](int p, int q) {
        auto [it, fresh] = id.emplace(std::make_pair(p, q), r.states());
        if (fresh) {
            r.add_state(combine(a.accepting[static_cast<std::size_t>(p)] != 0, b.accepting[static_cast<std::size_t>(q)] != 0));
            queue.emplace_back(p, q);
        }
        return it->second;
    };
    r.initial = get(a.initial, b.initial);
    for (std::size_t i = 0; i < queue.size(); ++i) {
        auto [p, q] = queue[i];
        for (int c = 0; c < r.letters(); ++c) {
            int t = get(a.delta[static_cast<std::size_t>(p)][static_cast<std::size_t>(c)],
                        b.delta[static_cast<std::size_t>(q)][static_cast<std::size_t>(c)]);
            r.delta[i][static_cast<std::size_t>(c)] = t;
        }
    }
    return r;
}

/// Keep only states reachable from the initial state.
inline Dfa trim_unreachable(const Dfa& d) {
    std::vector<int> id(static_cast<std::size_t>(d.states()), -1);
    std::vector<int> order{d.initial};
    id[static_cast<std::size_t>(d.initial)] = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (int t : d.delta[static_cast<std::size_t>(order[i])])
            if (id[static_cast<std::size_t>(t)] < 0) {
                id[static_cast<std::size_t>(t)] = static_cast<int>(order.size());
                order.push_back(t);
            }
    Dfa r;
    r.tracks = d.tracks;
    for (int q : order) {
        r.add_state(d.accepting[static_cast<std::size_t>(q)] != 0);
        auto& row = r.delta.back();
        for (int c = 0; c < d.letters(); ++c) row[static_cast<std::size_t>(c)] = id[static_cast<std::size_t>(d.delta[static_cast<std::size_t>(q)][static_cast<std::size_t>(c)])];
    }
    r.initial = 0;
    return r;
}

/// Moore partition refinement on the reachable part. States of the result
/// are numbered in breadth-first order from the initial state, so equal
/// languages give identical automata.
inline Dfa minimize(const Dfa& input) {
    Dfa d = trim_unreachable(input);
    const int n = d.states(), L = d.letters();
    std::vector<int> cls(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) cls[static_cast<std::size_t>(q)] = d.accepting[static_cast<std::size_t>(q)] ? 1 : 0;
    int classes = 0;
    for (;;) {
        std::map<std::vector<int>, int> sig_id;
        std::vector<int> next(static_cast<std::size_t>(n));
        for (int q = 0; q < n; ++q) {
            std::vector<int> sig;
            sig.reserve(static_cast<std::size_t>(L) + 1);
            sig.push_back(cls[static_cast<std::size_t>(q)]);
            for (int c = 0; c < L; ++c) sig.push_back(cls[static_cast<std::size_t>(d.delta[static_cast<std::size_t>(q)][static_cast<std::size_t>(c)])]);
            auto [it, fresh] = sig_id.emplace(std::move(sig), static_cast<int>(sig_id.size()));
            next[static_cast<std::size_t>(q)] = it->second;
        }
        int count = static_cast<int>(sig_id.size());
        cls = std::move(next);
        if (count == classes) break;
        classes = count;
    }
    Dfa q;
    q.tracks = d.tracks;
    for (int c = 0; c < classes; ++c) q.add_state(false);
    for (int s = 0; s < n; ++s) {
        int c = cls[static_cast<std::size_t>(s)];
        q.accepting[static_cast<std::size_t>(c)] = d.accepting[static_cast<std::size_t>(s)];
        for (int a = 0; a < L; ++a)
            q.delta[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)] = cls[static_cast<std::size_t>(d.delta[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)])];
    }
    q.initial = cls[static_cast<std::size_t>(d.initial)];
    return trim_unreachable(q);
}

/// Existentially project away the highest track: subset construction over
/// both values of the removed bit.
inline Dfa project_top(const Dfa& d) {
    if (d.tracks == 0) throw DfaError("no track to project");
    const int t = d.tracks - 1;
    const int L = 1 << t;
    Dfa r;
    r.tracks = t;
    std::map<std::vector<int>, int> id;
    std::vector<std::vector<int>> queue;
    auto get = [&](std::vector<int> set) {
        auto [it, fresh] = id.emplace(set, r.states());
        if (fresh) {
            bool acc = std::any_of(set.begin(), set.end(), [&](int q) { return d.accepting[static_cast<std::size_t>(q)] != 0; });
            r.add_state(acc);
            queue.push_back(std::move(set));
        }
        return it->second;
    };
    r.initial = get({d.initial});
    for (std::size_t i = 0; i < queue.size(); ++i) {
        for (int c = 0; c < L; ++c) {
            std::vector<int> next;
            for (int q : queue[i]) {
                next.push_back(d.delta[static_cast<std::size_t>(q)][static_cast<std::size_t>(c)]);
                next.push_back(d.delta[static_cast<std::size_t>(q)][static_cast<std::size_t>(c | (1 << t))]);
            }
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            int target = get(std::move(next));
            r.delta[i][static_cast<std::size_t>(c)] = target;
        }
    }
    return r;
}

/// Same language over one more (ignored) top track.
inline Dfa add_track(const Dfa& d) {
    Dfa r;
    r.tracks = d.tracks + 1;
    r.initial = d.initial;
    r.accepting = d.accepting;
    for (const auto& row : d.delta) {
        std::vector<int> wide(row);
        wide.insert(wide.end(), row.begin(), row.end());
        r.delta.push_back(std::move(wide));
    }
    return r;
}

/// Structural isomorphism of two minimal automata via a joint walk.
inline bool isomorphic(const Dfa& a, const Dfa& b) {
    if (a.tracks != b.tracks || a.states() != b.states()) return false;
    std::vector<int> map(static_cast<std::size_t>(a.states()), -1), inv(static_cast<std::size_t>(b.states()), -1);
    std::vector<std::pair<int, int>> stack{{a.initial, b.initial}};
    map[static_cast<std::size_t>(a.initial)] = b.initial;
    inv[static_cast<std::size_t>(b.initial)] = a.initial;
    while (!stack.empty()) {
        auto [p, q] = stack.back();
        stack.pop_back();
        if (a.accepting[static_cast<std::size_t>(p)] != b.accepting[static_cast<std::size_t>(q)]) return false;
        for (int c = 0; c < a.letters(); ++c) {
            int x = a.delta[static_cast<std::size_t>(p)][static_cast<std::size_t>(c)];
            int y = b.delta[static_cast<std::size_t>(q)][static_cast<std::size_t>(c)];
            if (map[static_cast<std::size_t>(x)] < 0 && inv[static_cast<std::size_t>(y)] < 0) {
                map[static_cast<std::size_t>(x)] = y;
                inv[static_cast<std::size_t>(y)] = x;
                stack.emplace_back(x, y);
            } else if (map[static_cast<std::size_t>(x)] != y || inv[static_cast<std::size_t>(y)] != x) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace specker::words
