#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <vector>

#include "prmc/automata/nfa.hpp"

namespace prmc {

namespace detail {

struct VectorHash {
    std::size_t operator()(const std::vector<State>& v) const noexcept {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (State s : v) h = (h ^ s) * 0x100000001b3ULL;
        return h;
    }
};

struct PairHash {
    std::size_t operator()(std::uint64_t k) const noexcept {
        k ^= k >> 33;
        k *= 0xff51afd7ed558ccdULL;
        k ^= k >> 33;
        return static_cast<std::size_t>(k);
    }
};

inline Nfa normalized(const Nfa& a) {
    Nfa c = a;
    c.normalize();
    return c;
}

inline void check_cap(std::size_t n, const Limits& lim, const char* what) {
    if (n > lim.max_states)
        throw CapacityError(std::string(what) + ": more than " + std::to_string(lim.max_states) + " states");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Determinization and minimization

/// Subset construction. The result is deterministic and trimmed of
/// unreachable subsets; missing transitions lead to an implicit sink.
inline Nfa determinize(const Nfa& a, const Limits& lim = {}) {
    Nfa out(a.layout());
    std::unordered_map<std::vector<State>, State, detail::VectorHash> index;
    std::vector<std::vector<State>> subsets;

    std::vector<State> init = a.initial();
    std::sort(init.begin(), init.end());
    init.erase(std::unique(init.begin(), init.end()), init.end());
    if (init.empty()) return out;

    auto intern = [&](std::vector<State>&& s) -> State {
        auto it = index.find(s);
        if (it != index.end()) return it->second;
        bool acc = false;
        for (State q : s) acc = acc || a.is_accepting(q);
        State id = out.add_state(acc);
        detail::check_cap(out.num_states(), lim, "determinize");
        index.emplace(s, id);
        subsets.push_back(std::move(s));
        return id;
    };
    out.set_initial(intern(std::move(init)));

    std::vector<Transition> moves;
    for (State cur = 0; cur < subsets.size(); ++cur) {
        moves.clear();
        for (State q : subsets[cur])
            for (const auto& t : a.transitions(q)) moves.push_back(t);
        std::sort(moves.begin(), moves.end());
        for (std::size_t i = 0; i < moves.size();) {
            Letter l = moves[i].letter;
            std::vector<State> tgt;
            for (; i < moves.size() && moves[i].letter == l; ++i)
                if (tgt.empty() || tgt.back() != moves[i].target) tgt.push_back(moves[i].target);
            State id = intern(std::move(tgt));
            out.add_transition(cur, l, id);
        }
    }
    return out;
}

namespace detail {

// Partition refinement for partial DFAs (Valmari & Lehtinen style): blocks of
// states and cords of transitions refine each other until stable.
class Refiner {
public:
    struct Partition {
        int z = 0;
        std::vector<int> E, L, S, F, P;
        void init(int n) {
            z = n > 0 ? 1 : 0;
            E.resize(n);
            L.resize(n);
            S.assign(n, 0);
            F.assign(n + 1, 0);
            P.assign(n + 1, 0);
            for (int i = 0; i < n; ++i) E[i] = L[i] = i;
            if (z) P[0] = n;
        }
    };

    // Returns, for each state, its block id (or -1 if removed), plus the number of blocks.
    std::pair<std::vector<int>, int> run(int nn, int q0, const std::vector<int>& finals, std::vector<int> T,
                                         std::vector<Letter> Lb, std::vector<int> H) {
        int mm = static_cast<int>(T.size());
        B.init(nn);
        A.assign(std::max(mm, 1), 0);
        Fa.assign(nn + 1, 0);
        rr = 0;
        reach(q0);
        rem_unreachable(T, H, Lb, mm);
        for (int q : finals)
            if (B.L[q] < B.P[0]) reach(q);
        int ff = rr;
        rem_unreachable(H, T, Lb, mm);

        W.assign(std::max(mm, nn) + 1, 0);
        M.assign(std::max(mm, nn) + 1, 0);
        w = 0;
        M[0] = ff;
        if (ff) {
            W[w++] = 0;
            split(B);
        }

        C.init(mm);
        if (mm) {
            std::sort(C.E.begin(), C.E.end(), [&](int x, int y) { return Lb[x] < Lb[y]; });
            C.z = M[0] = 0;
            Letter a = Lb[C.E[0]];
            for (int i = 0; i < mm; ++i) {
                int t = C.E[i];
                if (Lb[t] != a) {
                    a = Lb[t];
                    C.P[C.z++] = i;
                    C.F[C.z] = i;
                    M[C.z] = 0;
                }
                C.S[t] = C.z;
                C.L[t] = i;
            }
            C.P[C.z++] = mm;
        }

        make_adjacent(H, nn, mm);
        int b = 1, c = 0;
        while (c < C.z) {
            for (int i = C.F[c]; i < C.P[c]; ++i) mark(B, T[C.E[i]]);
            split(B);
            ++c;
            while (b < B.z) {
                for (int i = B.F[b]; i < B.P[b]; ++i)
                    for (int j = Fa[B.E[i]]; j < Fa[B.E[i] + 1]; ++j) mark(C, A[j]);
                split(C);
                ++b;
            }
        }

        std::vector<int> block(nn, -1);
        // Live states are those placed before B.P of their block; block 0's P
        // was set to the live count during pruning.
        for (int bl = 0; bl < B.z; ++bl)
            for (int i = B.F[bl]; i < B.P[bl]; ++i) block[B.E[i]] = bl;
        finals_count = ff;
        return {block, B.z};
    }

    int finals_count = 0;
    Partition B;

private:
    Partition C;
    std::vector<int> A, Fa, W, M;
    int w = 0, rr = 0;

    void mark(Partition& p, int e) {
        int s = p.S[e], i = p.L[e], j = p.F[s] + M[s];
        p.E[i] = p.E[j];
        p.L[p.E[i]] = i;
        p.E[j] = e;
        p.L[e] = j;
        if (!M[s]++) W[w++] = s;
    }

    void split(Partition& p) {
        while (w) {
            int s = W[--w], j = p.F[s] + M[s];
            if (j == p.P[s]) {
                M[s] = 0;
                continue;
            }
            if (M[s] <= p.P[s] - j) {
                p.F[p.z] = p.F[s];
                p.P[p.z] = p.F[s] = j;
            } else {
                p.P[p.z] = p.P[s];
                p.F[p.z] = p.P[s] = j;
            }
            for (int i = p.F[p.z]; i < p.P[p.z]; ++i) p.S[p.E[i]] = p.z;
            M[s] = M[p.z++] = 0;
        }
    }

    void reach(int q) {
        int i = B.L[q];
        if (i >= rr) {
            B.E[i] = B.E[rr];
            B.L[B.E[i]] = i;
            B.E[rr] = q;
            B.L[q] = rr++;
        }
    }

    void make_adjacent(const std::vector<int>& K, int nn, int mm) {
        std::fill(Fa.begin(), Fa.end(), 0);
        for (int t = 0; t < mm; ++t) ++Fa[K[t]];
        for (int q = 0; q < nn; ++q) Fa[q + 1] += Fa[q];
        for (int t = mm; t--;) A[--Fa[K[t]]] = t;
    }

    void rem_unreachable(std::vector<int>& T, std::vector<int>& H, std::vector<Letter>& Lb, int& mm) {
        const int nn = static_cast<int>(B.E.size());
        make_adjacent(T, nn, mm);
        for (int i = 0; i < rr; ++i)
            for (int j = Fa[B.E[i]]; j < Fa[B.E[i] + 1]; ++j) reach(H[A[j]]);
        int j = 0;
        for (int t = 0; t < mm; ++t) {
            if (B.L[T[t]] < rr) {
                H[j] = H[t];
                Lb[j] = Lb[t];
                T[j] = T[t];
                ++j;
            }
        }
        mm = j;
        T.resize(mm);
        H.resize(mm);
        Lb.resize(mm);
        B.P[0] = rr;
        rr = 0;
    }
};

/// Renumbers a deterministic automaton in BFS order (letters ascending) from its initial state.
inline Nfa canonical_order(const Nfa& d) {
    Nfa out(d.layout());
    if (d.initial().empty()) return out;
    std::vector<State> id(d.num_states(), UINT32_MAX);
    std::vector<State> order;
    id[d.initial()[0]] = 0;
    order.push_back(d.initial()[0]);
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto ts = d.transitions(order[i]);
        std::sort(ts.begin(), ts.end());
        for (const auto& t : ts)
            if (id[t.target] == UINT32_MAX) {
                id[t.target] = static_cast<State>(order.size());
                order.push_back(t.target);
            }
    }
    out.add_states(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        out.set_accepting(static_cast<State>(i), d.is_accepting(order[i]));
        for (const auto& t : d.transitions(order[i])) out.add_transition(static_cast<State>(i), t.letter, id[t.target]);
    }
    out.set_initial(0);
    out.normalize();
    return out;
}

}  // namespace detail

/// Minimal trimmed DFA of a deterministic automaton (no sink state; the empty
/// language yields an automaton without states).
inline Nfa minimize_dfa(const Nfa& d) {
    if (!d.is_deterministic()) throw Error("minimize_dfa: automaton is not deterministic");
    if (d.initial().empty() || d.num_states() == 0) return Nfa(d.layout());
    const int nn = static_cast<int>(d.num_states());
    std::vector<int> T, H, finals;
    std::vector<Letter> Lb;
    for (State q = 0; q < d.num_states(); ++q) {
        if (d.is_accepting(q)) finals.push_back(static_cast<int>(q));
        for (const auto& t : d.transitions(q)) {
            T.push_back(static_cast<int>(q));
            Lb.push_back(t.letter);
            H.push_back(static_cast<int>(t.target));
        }
    }
    detail::Refiner r;
    const int q0 = static_cast<int>(d.initial()[0]);
    auto [block, nb] = r.run(nn, q0, finals, T, Lb, H);
    if (r.finals_count == 0 || block[q0] < 0) return Nfa(d.layout());

    Nfa m(d.layout());
    m.add_states(static_cast<std::size_t>(nb));
    std::vector<char> done(static_cast<std::size_t>(nb), 0);
    for (State q = 0; q < d.num_states(); ++q) {
        int b = block[q];
        if (b < 0) continue;
        if (d.is_accepting(q)) m.set_accepting(static_cast<State>(b));
        if (done[b]) continue;
        done[b] = 1;
        for (const auto& t : d.transitions(q))
            if (block[t.target] >= 0) m.add_transition(static_cast<State>(b), t.letter, static_cast<State>(block[t.target]));
    }
    m.set_initial(static_cast<State>(block[q0]));
    return detail::canonical_order(m);
}

/// Determinize (unless already deterministic) and minimize; the working
/// canonical form used throughout the library. No sink state.
inline Nfa reduce(const Nfa& a, const Limits& lim = {}) {
    if (a.is_deterministic()) return minimize_dfa(a);
    return minimize_dfa(determinize(a, lim));
}

/// Complete minimal DFA over the layout's full letter set: the trimmed
/// minimal DFA plus one explicit sink when some transition is missing.
inline Nfa minimize(const Nfa& a, const Limits& lim = {}) {
    Nfa m = reduce(a, lim);
    const Letter letters = a.layout().letter_count();
    bool complete = m.num_states() > 0;
    for (State q = 0; q < m.num_states() && complete; ++q) complete = m.transitions(q).size() == letters;
    if (complete) return m;
    if ((m.num_states() + 1) * letters > lim.max_states * 16)
        throw CapacityError("minimize: completing the DFA would materialize too many transitions");
    Nfa out(a.layout());
    out.add_states(m.num_states() + 1);
    const State sink = static_cast<State>(m.num_states());
    for (State q = 0; q < m.num_states(); ++q) {
        out.set_accepting(q, m.is_accepting(q));
        const auto& ts = m.transitions(q);
        std::size_t k = 0;
        for (Letter l = 0; l < letters; ++l) {
            if (k < ts.size() && ts[k].letter == l) {
                out.add_transition(q, l, ts[k].target);
                ++k;
            } else {
                out.add_transition(q, l, sink);
            }
        }
    }
    for (Letter l = 0; l < letters; ++l) out.add_transition(sink, l, sink);
    out.set_initial(m.num_states() > 0 ? 0 : sink);
    out.normalize();
    return out;
}

// ---------------------------------------------------------------------------
// Queries

inline bool is_empty(const Nfa& a) { return trim(a).num_states() == 0; }

/// Shortest accepted word, ties broken by letter order; nullopt if empty.
inline std::optional<Word> shortest_word(const Nfa& a) {
    const std::size_t n = a.num_states();
    std::vector<State> parent(n, UINT32_MAX);
    std::vector<Letter> via(n, 0);
    std::vector<char> seen(n, 0);
    std::deque<State> queue;
    std::vector<State> init = a.initial();
    std::sort(init.begin(), init.end());
    for (State q : init) {
        if (seen[q]) continue;
        seen[q] = 1;
        queue.push_back(q);
    }
    while (!queue.empty()) {
        State q = queue.front();
        queue.pop_front();
        if (a.is_accepting(q)) {
            Word w;
            for (State c = q; parent[c] != UINT32_MAX; c = parent[c]) w.push_back(via[c]);
            std::reverse(w.begin(), w.end());
            return w;
        }
        auto ts = a.transitions(q);
        std::sort(ts.begin(), ts.end());
        for (const auto& t : ts)
            if (!seen[t.target]) {
                seen[t.target] = 1;
                parent[t.target] = q;
                via[t.target] = t.letter;
                queue.push_back(t.target);
            }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Boolean operations

inline Nfa union_of(const Nfa& a, const Nfa& b) {
    require_same_layout(a.layout(), b.layout(), "union");
    Nfa out(a.layout());
    out.add_states(a.num_states() + b.num_states());
    const State off = static_cast<State>(a.num_states());
    for (State q = 0; q < a.num_states(); ++q) {
        out.set_accepting(q, a.is_accepting(q));
        for (const auto& t : a.transitions(q)) out.add_transition(q, t.letter, t.target);
    }
    for (State q = 0; q < b.num_states(); ++q) {
        out.set_accepting(q + off, b.is_accepting(q));
        for (const auto& t : b.transitions(q)) out.add_transition(q + off, t.letter, t.target + off);
    }
    for (State q : a.initial()) out.set_initial(q);
    for (State q : b.initial()) out.set_initial(q + off);
    out.normalize();
    return out;
}

inline Nfa intersect(const Nfa& a0, const Nfa& b0, const Limits& lim = {}) {
    require_same_layout(a0.layout(), b0.layout(), "intersect");
    const Nfa a = detail::normalized(a0);
    const Nfa b = detail::normalized(b0);
    Nfa out(a.layout());
    std::unordered_map<std::uint64_t, State, detail::PairHash> index;
    std::vector<std::pair<State, State>> pairs;
    auto intern = [&](State p, State q) {
        std::uint64_t key = (std::uint64_t(p) << 32) | q;
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        State id = out.add_state(a.is_accepting(p) && b.is_accepting(q));
        detail::check_cap(out.num_states(), lim, "intersect");
        index.emplace(key, id);
        pairs.emplace_back(p, q);
        return id;
    };
    for (State p : a.initial())
        for (State q : b.initial()) out.set_initial(intern(p, q));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [p, q] = pairs[i];
        const auto& ta = a.transitions(p);
        const auto& tb = b.transitions(q);
        std::size_t x = 0, y = 0;
        while (x < ta.size() && y < tb.size()) {
            if (ta[x].letter < tb[y].letter) {
                ++x;
            } else if (tb[y].letter < ta[x].letter) {
                ++y;
            } else {
                Letter l = ta[x].letter;
                std::size_t y0 = y;
                for (; x < ta.size() && ta[x].letter == l; ++x)
                    for (y = y0; y < tb.size() && tb[y].letter == l; ++y)
                        out.add_transition(static_cast<State>(i), l, intern(ta[x].target, tb[y].target));
            }
        }
    }
    return trim(out);
}

/// L(a) \ L(b). `b` is determinized; `a` stays nondeterministic.
inline Nfa difference(const Nfa& a0, const Nfa& b, const Limits& lim = {}) {
    require_same_layout(a0.layout(), b.layout(), "difference");
    const Nfa a = detail::normalized(a0);
    const Nfa d = reduce(b, lim);
    constexpr State dead = UINT32_MAX;
    auto step = [&](State q, Letter l) -> State {
        if (q == dead) return dead;
        const auto& ts = d.transitions(q);
        auto it = std::lower_bound(ts.begin(), ts.end(), Transition{l, 0});
        return (it != ts.end() && it->letter == l) ? it->target : dead;
    };
    Nfa out(a.layout());
    std::unordered_map<std::uint64_t, State, detail::PairHash> index;
    std::vector<std::pair<State, State>> pairs;
    auto intern = [&](State p, State q) {
        std::uint64_t key = (std::uint64_t(p) << 32) | q;
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        bool acc = a.is_accepting(p) && (q == dead || !d.is_accepting(q));
        State id = out.add_state(acc);
        detail::check_cap(out.num_states(), lim, "difference");
        index.emplace(key, id);
        pairs.emplace_back(p, q);
        return id;
    };
    const State d0 = d.initial().empty() ? dead : d.initial()[0];
    for (State p : a.initial()) out.set_initial(intern(p, d0));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [p, q] = pairs[i];
        for (const auto& t : a.transitions(p)) out.add_transition(static_cast<State>(i), t.letter, intern(t.target, step(q, t.letter)));
    }
    return trim(out);
}

/// Complement relative to all words over the layout's full letter set.
inline Nfa complement(const Nfa& a, const Limits& lim = {}) {
    return difference(universal_language(a.layout()), a, lim);
}

inline bool is_subset(const Nfa& a, const Nfa& b, const Limits& lim = {}) {
    return is_empty(difference(a, b, lim));
}

// ---------------------------------------------------------------------------
// Rational operations

inline Nfa concat(const Nfa& a, const Nfa& b) {
    require_same_layout(a.layout(), b.layout(), "concat");
    Nfa out(a.layout());
    out.add_states(a.num_states() + b.num_states());
    const State off = static_cast<State>(a.num_states());
    bool b_nullable = false;
    for (State q : b.initial()) b_nullable = b_nullable || b.is_accepting(q);
    for (State q = 0; q < a.num_states(); ++q) {
        out.set_accepting(q, a.is_accepting(q) && b_nullable);
        for (const auto& t : a.transitions(q)) out.add_transition(q, t.letter, t.target);
        if (a.is_accepting(q))
            for (State i : b.initial())
                for (const auto& t : b.transitions(i)) out.add_transition(q, t.letter, t.target + off);
    }
    for (State q = 0; q < b.num_states(); ++q) {
        out.set_accepting(q + off, b.is_accepting(q));
        for (const auto& t : b.transitions(q)) out.add_transition(q + off, t.letter, t.target + off);
    }
    for (State q : a.initial()) out.set_initial(q);
    out.normalize();
    return trim(out);
}

inline Nfa star(const Nfa& a) {
    Nfa out(a.layout());
    out.add_states(a.num_states() + 1);
    const State fresh = static_cast<State>(a.num_states());
    out.set_accepting(fresh);
    out.set_initial(fresh);
    for (State q = 0; q < a.num_states(); ++q) {
        out.set_accepting(q, a.is_accepting(q));
        for (const auto& t : a.transitions(q)) out.add_transition(q, t.letter, t.target);
    }
    for (State i : a.initial())
        for (const auto& t : a.transitions(i)) {
            out.add_transition(fresh, t.letter, t.target);
            for (State f = 0; f < a.num_states(); ++f)
                if (a.is_accepting(f)) out.add_transition(f, t.letter, t.target);
        }
    out.normalize();
    return trim(out);
}

// ---------------------------------------------------------------------------
// Equivalence

struct EquivalenceResult {
    bool equal = true;
    Word counterexample;  ///< shortest word in the symmetric difference when !equal
};

/// Decides L(a) = L(b); on failure returns the shortest word of the symmetric
/// difference, ties broken by letter order.
inline EquivalenceResult equivalent(const Nfa& a, const Nfa& b, const Limits& lim = {}) {
    require_same_layout(a.layout(), b.layout(), "equivalent");
    const Nfa da = reduce(a, lim);
    const Nfa db = reduce(b, lim);
    constexpr State dead = UINT32_MAX;
    auto succ = [](const Nfa& d, State q, Letter l) -> State {
        if (q == dead) return dead;
        const auto& ts = d.transitions(q);
        auto it = std::lower_bound(ts.begin(), ts.end(), Transition{l, 0});
        return (it != ts.end() && it->letter == l) ? it->target : dead;
    };
    auto acc = [](const Nfa& d, State q) { return q != dead && d.is_accepting(q); };

    std::unordered_map<std::uint64_t, std::size_t, detail::PairHash> seen;
    struct Node {
        State p, q;
        std::size_t parent;
        Letter via;
    };
    std::vector<Node> nodes;
    auto push = [&](State p, State q, std::size_t parent, Letter via) {
        if (p == dead && q == dead) return;
        std::uint64_t key = (std::uint64_t(p) << 32) | q;
        if (seen.count(key)) return;
        seen.emplace(key, nodes.size());
        nodes.push_back({p, q, parent, via});
    };
    push(da.initial().empty() ? dead : da.initial()[0], db.initial().empty() ? dead : db.initial()[0], SIZE_MAX, 0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node n = nodes[i];
        if (acc(da, n.p) != acc(db, n.q)) {
            Word w;
            for (std::size_t c = i; nodes[c].parent != SIZE_MAX; c = nodes[c].parent) w.push_back(nodes[c].via);
            std::reverse(w.begin(), w.end());
            return {false, w};
        }
        std::vector<Letter> ls;
        if (n.p != dead)
            for (const auto& t : da.transitions(n.p)) ls.push_back(t.letter);
        if (n.q != dead)
            for (const auto& t : db.transitions(n.q)) ls.push_back(t.letter);
        std::sort(ls.begin(), ls.end());
        ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
        for (Letter l : ls) push(succ(da, n.p, l), succ(db, n.q, l), i, l);
    }
    return {true, {}};
}

inline bool same_language(const Nfa& a, const Nfa& b, const Limits& lim = {}) { return equivalent(a, b, lim).equal; }

}  // namespace prmc
