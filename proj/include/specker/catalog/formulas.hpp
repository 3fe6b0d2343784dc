#pragma once

#include "specker/logic/formula.hpp"
#include "specker/logic/vocabulary.hpp"

#include <string>
#include <vector>

// Defining sentences of the catalog classes.
namespace specker::catalog::formulas {

using logic::Formula;
using logic::Vocabulary;
using namespace logic::build;

inline Formula forall_all(const std::vector<std::string>& xs, Formula body) {
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = forall(*it, body);
    return body;
}

inline Formula exists_all(const std::vector<std::string>& xs, Formula body) {
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = exists(*it, body);
    return body;
}

inline Formula neq(const std::string& x, const std::string& y) { return neg(eq(x, y)); }

// ---- order helpers over `<` ----

inline Formula is_first(const std::string& x, const std::string& fresh = "q0") { return neg(exists(fresh, lt(fresh, x))); }
inline Formula is_last(const std::string& x, const std::string& fresh = "q0") { return neg(exists(fresh, lt(x, fresh))); }

/// y is the <-successor of x.
inline Formula succ(const std::string& x, const std::string& y, const std::string& fresh = "q0") {
    return conj(lt(x, y), neg(exists(fresh, conj(lt(x, fresh), lt(fresh, y)))));
}

// ---- binary relation properties ----

inline Formula reflexive(const std::string& E) { return forall("x", rel(E, "x", "x")); }
inline Formula irreflexive(const std::string& E) { return forall("x", neg(rel(E, "x", "x"))); }
inline Formula symmetric(const std::string& E) {
    return forall_all({"x", "y"}, implies(rel(E, "x", "y"), rel(E, "y", "x")));
}
inline Formula transitive(const std::string& E) {
    return forall_all({"x", "y", "z"}, implies(conj(rel(E, "x", "y"), rel(E, "y", "z")), rel(E, "x", "z")));
}

/// E is a partial function: at most one image per element.
inline Formula partial_function(const std::string& E) {
    return forall_all({"x", "y", "z"}, implies(conj(rel(E, "x", "y"), rel(E, "x", "z")), eq("y", "z")));
}

inline Formula equivalence(const std::string& E = "E") {
    return all_of({reflexive(E), symmetric(E), transitive(E)});
}

/// Strict linear order.
inline Formula linear_order(const std::string& E = "E") {
    return all_of({irreflexive(E), transitive(E),
                   forall_all({"x", "y"}, any_of({eq("x", "y"), rel(E, "x", "y"), rel(E, "y", "x")}))});
}

inline Formula simple_graph(const std::string& E) { return conj(irreflexive(E), symmetric(E)); }

/// Every nonempty proper subset has an E-edge leaving it.
inline Formula connected(const std::string& E) {
    Formula nonempty = exists("x", in("x", "X"));
    Formula proper = exists("x", neg(in("x", "X")));
    Formula crossing = exists_all({"x", "y"}, all_of({in("x", "X"), neg(in("y", "X")), rel(E, "x", "y")}));
    return forall_set("X", implies(conj(nonempty, proper), crossing));
}

/// No nonempty vertex set in which every vertex has two distinct neighbours inside it.
inline Formula acyclic(const std::string& E) {
    Formula two_inside = exists_all({"y", "z"}, all_of({neq("y", "z"), in("y", "X"), in("z", "X"), rel(E, "x", "y"),
                                                       rel(E, "x", "z")}));
    return neg(exists_set("X", conj(exists("x", in("x", "X")), forall("x", implies(in("x", "X"), two_inside)))));
}

inline Formula trees(const std::string& E = "E") { return all_of({simple_graph(E), connected(E), acyclic(E)}); }

inline Formula eulerian(const std::string& E = "E") {
    return all_of({simple_graph(E), connected(E), forall("x", count_mod(0, 2, "y", rel(E, "x", "y")))});
}

/// Equivalence relation with exactly r classes.
inline Formula stirling2_relation(int r, const std::string& E = "E") {
    std::vector<std::string> xs;
    for (int i = 1; i <= r; ++i) xs.push_back("c" + std::to_string(i));
    std::vector<Formula> parts;
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) parts.push_back(neg(rel(E, xs[i], xs[j])));
    std::vector<Formula> cover;
    for (const auto& x : xs) cover.push_back(rel(E, "y", x));
    parts.push_back(forall("y", any_of(cover)));
    return conj(equivalence(E), exists_all(xs, all_of(parts)));
}

inline std::string block_name(int i) { return "U" + std::to_string(i); }

/// Unary U1..Ur partition the universe into nonempty blocks whose minima increase.
inline Formula stirling2_ordered(int r) {
    std::vector<Formula> parts;
    // exactly one block per element
    std::vector<Formula> some;
    for (int i = 1; i <= r; ++i) some.push_back(rel(block_name(i), "x"));
    parts.push_back(forall("x", any_of(some)));
    for (int i = 1; i <= r; ++i)
        for (int j = i + 1; j <= r; ++j)
            parts.push_back(forall("x", neg(conj(rel(block_name(i), "x"), rel(block_name(j), "x")))));
    // min(U_i) < min(U_{i+1}); nonemptiness follows from the first block being nonempty
    parts.push_back(exists("x", rel(block_name(1), "x")));
    for (int i = 1; i < r; ++i) {
        Formula min_next = conj(rel(block_name(i + 1), "y"),
                                forall("z", implies(rel(block_name(i + 1), "z"), neg(lt("z", "y")))));
        parts.push_back(exists("y", conj(min_next, exists("x", conj(rel(block_name(i), "x"), lt("x", "y"))))));
    }
    return all_of(parts);
}

inline Vocabulary stirling2_ordered_vocab(int r) {
    Vocabulary v;
    for (int i = 1; i <= r; ++i) v.add(block_name(i), 1);
    return v;
}

/// E is the graph of a permutation with a single cycle.
inline Formula cyclic_permutation(const std::string& E = "E") {
    Formula total = forall("x", exists("y", rel(E, "x", "y")));
    Formula onto = forall("y", exists("x", rel(E, "x", "y")));
    Formula injective = forall_all({"x", "y", "z"}, implies(conj(rel(E, "x", "z"), rel(E, "y", "z")), eq("x", "y")));
    Formula closed = forall_all({"x", "y"}, implies(conj(in("x", "X"), rel(E, "x", "y")), in("y", "X")));
    Formula one_cycle = forall_set("X", implies(conj(exists("x", in("x", "X")), closed), forall("x", in("x", "X"))));
    return all_of({partial_function(E), total, onto, injective, one_cycle});
}

/// E is the graph of a permutation with exactly r cycles.
inline Formula stirling1(int r, const std::string& E = "E") {
    if (r == 1) return cyclic_permutation(E);
    Formula total = forall("x", exists("y", rel(E, "x", "y")));
    Formula onto = forall("y", exists("x", rel(E, "x", "y")));
    Formula injective = forall_all({"x", "y", "z"}, implies(conj(rel(E, "x", "z"), rel(E, "y", "z")), eq("x", "y")));
    auto closed = [&](const std::string& X) {
        return forall_all({"x", "y"}, implies(conj(in("x", X), rel(E, "x", "y")), in("y", X)));
    };
    // a cycle: nonempty, closed, and without a nonempty closed proper subset
    auto cycle = [&](const std::string& X) {
        Formula sub = forall("x", implies(in("x", "Y"), in("x", X)));
        Formula minimal = forall_set("Y", implies(all_of({exists("x", in("x", "Y")), sub, closed("Y")}),
                                                  forall("x", implies(in("x", X), in("x", "Y")))));
        return all_of({exists("x", in("x", X)), closed(X), minimal});
    };
    std::vector<std::string> Xs;
    for (int i = 1; i <= r; ++i) Xs.push_back("C" + std::to_string(i));
    std::vector<Formula> parts;
    for (const auto& X : Xs) parts.push_back(cycle(X));
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) parts.push_back(forall("x", neg(conj(in("x", Xs[i]), in("x", Xs[j])))));
    std::vector<Formula> cover;
    for (const auto& X : Xs) cover.push_back(in("x", X));
    parts.push_back(forall("x", any_of(cover)));
    Formula body = all_of(parts);
    for (auto it = Xs.rbegin(); it != Xs.rend(); ++it) body = exists_set(*it, body);
    return all_of({partial_function(E), total, onto, injective, body});
}

/// Equal halves: F is the unique monotone bijection from U onto its complement R,
/// and the first element lies in U.
inline Formula e2eq() {
    Formula func = conj(forall_all({"x", "y"}, implies(rel("F", "x", "y"), conj(rel("U", "x"), rel("R", "y")))),
                        partial_function("F"));
    Formula domain = forall("x", implies(rel("U", "x"), exists("y", rel("F", "x", "y"))));
    Formula range = forall("y", implies(rel("R", "y"), exists("x", rel("F", "x", "y"))));
    Formula split = forall("x", conj(implies(rel("U", "x"), neg(rel("R", "x"))), implies(neg(rel("R", "x")), rel("U", "x"))));
    Formula first = exists("x", conj(is_first("x"), rel("U", "x")));
    Formula injective =
        forall_all({"x", "y", "z"}, implies(conj(rel("F", "x", "z"), rel("F", "y", "z")), eq("x", "y")));
    Formula monotone = forall_all(
        {"x", "y", "u", "v"}, implies(all_of({rel("F", "x", "u"), rel("F", "y", "v"), lt("x", "y")}), lt("u", "v")));
    return all_of({func, domain, range, split, first, injective, monotone});
}

inline Vocabulary e2eq_vocab() { return Vocabulary{}.add("F", 2).add("U", 1).add("R", 1); }

/// Heights of a path read through two partial functions F1, F2 on the ordered
/// universe: position x of F carries height rank(F(x)) + 1, or 0 when F(x) is
/// undefined. F1 covers steps 0..n-1 and F2 steps n..2n-1. The path starts at
/// height 1, moves by +-1 and ends at height 0.
inline Formula catalan() {
    // heights of (F at x) and (G at y) differ by exactly one
    auto step = [](const std::string& F, const std::string& x, const std::string& G, const std::string& y) {
        Formula f_undef = neg(exists("p", rel(F, x, "p")));
        Formula g_undef = neg(exists("p", rel(G, y, "p")));
        Formula up_from_zero = conj(f_undef, exists("p", conj(rel(G, y, "p"), is_first("p", "q1"))));
        Formula down_to_zero = conj(g_undef, exists("p", conj(rel(F, x, "p"), is_first("p", "q1"))));
        Formula move = exists_all({"p", "s"}, all_of({rel(F, x, "p"), rel(G, y, "s"),
                                                       disj(succ("p", "s", "q1"), succ("s", "p", "q1"))}));
        return any_of({up_from_zero, down_to_zero, move});
    };
    Formula steps1 = forall_all({"x", "y"}, implies(succ("x", "y"), step("F1", "x", "F1", "y")));
    Formula steps2 = forall_all({"x", "y"}, implies(succ("x", "y"), step("F2", "x", "F2", "y")));
    Formula junction = forall_all({"x", "y"}, implies(conj(is_last("x"), is_first("y")), step("F1", "x", "F2", "y")));
    Formula start = forall("x", implies(is_first("x"), exists("p", conj(rel("F1", "x", "p"), is_first("p", "q1")))));
    Formula end = forall("x", implies(is_last("x"), neg(exists("p", rel("F2", "x", "p")))));
    return all_of({partial_function("F1"), partial_function("F2"), start, steps1, junction, steps2, end});
}

inline Vocabulary catalan_vocab() { return Vocabulary{}.add("F1", 2).add("F2", 2); }

// ---- word formulas over unary symbols ----

/// No two consecutive positions in R.
inline Formula no_consecutive(const std::string& R = "R") {
    return forall_all({"x", "y"}, implies(succ("x", "y"), neg(conj(rel(R, "x"), rel(R, "y")))));
}

inline Formula even_parity(const std::string& R = "R") { return count_mod(0, 2, "x", rel(R, "x")); }

inline Formula all_in(const std::string& R = "R") { return forall("x", rel(R, "x")); }

/// The universe has even size, expressed with an alternating set.
inline Formula even_size_msol() {
    Formula first_in = forall("x", implies(is_first("x"), in("x", "W")));
    Formula alternate = forall_all({"x", "y"}, implies(succ("x", "y"), conj(implies(in("x", "W"), neg(in("y", "W"))),
                                                                           implies(neg(in("x", "W")), in("y", "W")))));
    Formula last_out = forall("x", implies(is_last("x"), neg(in("x", "W"))));
    return exists_set("W", all_of({first_in, alternate, last_out}));
}

inline Formula even_size_cmod() { return count_mod(0, 2, "x", top()); }

}  // namespace specker::catalog::formulas
