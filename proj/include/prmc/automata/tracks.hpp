#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "prmc/automata/algorithms.hpp"

namespace prmc {

/// Applies a letter morphism. The result is over `target` and is in general
/// nondeterministic.
template <class F>
Nfa map_letters(const Nfa& a, const TrackLayout& target, F&& f) {
    Nfa out(target);
    out.add_states(a.num_states());
    for (State q = 0; q < a.num_states(); ++q) {
        out.set_accepting(q, a.is_accepting(q));
        for (const auto& t : a.transitions(q)) out.add_transition(q, f(t.letter), t.target);
    }
    for (State q : a.initial()) out.set_initial(q);
    out.normalize();
    return out;
}

/// Keeps only the letters satisfying `pred`.
template <class P>
Nfa filter_letters(const Nfa& a, P&& pred) {
    Nfa out(a.layout());
    out.add_states(a.num_states());
    for (State q = 0; q < a.num_states(); ++q) {
        out.set_accepting(q, a.is_accepting(q));
        for (const auto& t : a.transitions(q))
            if (pred(t.letter)) out.add_transition(q, t.letter, t.target);
    }
    for (State q : a.initial()) out.set_initial(q);
    out.normalize();
    return trim(out);
}

/// Existential projection onto `names`, in that order (also reorders tracks).
inline Nfa keep_tracks(const Nfa& a, const std::vector<std::string>& names) {
    const auto& L = a.layout();
    std::vector<Track> tracks;
    std::vector<std::size_t> src;
    for (const auto& n : names) {
        src.push_back(L.index_of(n));
        tracks.push_back(L.track(src.back()));
    }
    TrackLayout target(std::move(tracks));
    std::vector<std::uint32_t> buf(names.size());
    return trim(map_letters(a, target, [&](Letter l) {
        for (std::size_t i = 0; i < src.size(); ++i) buf[i] = L.component(l, src[i]);
        return target.encode(buf);
    }));
}

inline Nfa drop_tracks(const Nfa& a, const std::vector<std::string>& names) {
    std::vector<std::string> keep;
    for (const auto& t : a.layout().tracks())
        if (std::find(names.begin(), names.end(), t.name) == names.end()) keep.push_back(t.name);
    for (const auto& n : names) a.layout().index_of(n);
    return keep_tracks(a, keep);
}

/// Renames tracks; letters are unchanged.
inline Nfa rename_tracks(const Nfa& a, const std::map<std::string, std::string>& renaming) {
    std::vector<Track> tracks = a.layout().tracks();
    for (const auto& [from, to] : renaming) a.layout().index_of(from);
    for (auto& t : tracks) {
        auto it = renaming.find(t.name);
        if (it != renaming.end()) t.name = it->second;
    }
    TrackLayout target(std::move(tracks));
    return map_letters(a, target, [](Letter l) { return l; });
}

/// Natural join: the result runs over the tracks of `a` followed by the
/// tracks of `b` absent from `a`, and accepts the words whose projections
/// are accepted by both. Shared tracks must have identical domains.
inline Nfa join(const Nfa& a, const Nfa& b, const Limits& lim = {}) {
    const auto& La = a.layout();
    const auto& Lb = b.layout();
    std::vector<std::pair<std::size_t, std::size_t>> shared;
    std::vector<std::size_t> extra;
    std::vector<Track> tracks = La.tracks();
    for (std::size_t j = 0; j < Lb.arity(); ++j) {
        if (auto i = La.find(Lb.track(j).name)) {
            if (La.track(*i).symbols != Lb.track(j).symbols)
                throw LayoutError("join: track '" + Lb.track(j).name + "' has different domains");
            shared.emplace_back(*i, j);
        } else {
            extra.push_back(j);
            tracks.push_back(Lb.track(j));
        }
    }
    TrackLayout target(std::move(tracks));
    Letter extra_count = 1;
    for (std::size_t j : extra) extra_count *= Lb.domain_size(j);

    auto key_a = [&](Letter l) {
        Letter k = 0;
        for (auto [i, j] : shared) k = k * Lb.domain_size(j) + La.component(l, i);
        return k;
    };
    auto key_b = [&](Letter l) {
        Letter k = 0;
        for (auto [i, j] : shared) k = k * Lb.domain_size(j) + Lb.component(l, j);
        return k;
    };
    auto rest_b = [&](Letter l) {
        Letter k = 0;
        for (std::size_t j : extra) k = k * Lb.domain_size(j) + Lb.component(l, j);
        return k;
    };

    struct Entry {
        Letter key, rest;
        State target;
        bool operator<(const Entry& o) const { return key < o.key; }
    };
    std::vector<std::vector<Entry>> bt(b.num_states());
    for (State q = 0; q < b.num_states(); ++q) {
        for (const auto& t : b.transitions(q)) bt[q].push_back({key_b(t.letter), rest_b(t.letter), t.target});
        std::sort(bt[q].begin(), bt[q].end(), [](const Entry& x, const Entry& y) {
            return std::tie(x.key, x.rest, x.target) < std::tie(y.key, y.rest, y.target);
        });
    }

    Nfa out(target);
    std::unordered_map<std::uint64_t, State, detail::PairHash> index;
    std::vector<std::pair<State, State>> pairs;
    auto intern = [&](State p, State q) {
        std::uint64_t k = (std::uint64_t(p) << 32) | q;
        auto it = index.find(k);
        if (it != index.end()) return it->second;
        State id = out.add_state(a.is_accepting(p) && b.is_accepting(q));
        detail::check_cap(out.num_states(), lim, "join");
        index.emplace(k, id);
        pairs.emplace_back(p, q);
        return id;
    };
    for (State p : a.initial())
        for (State q : b.initial()) out.set_initial(intern(p, q));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [p, q] = pairs[i];
        const auto& entries = bt[q];
        for (const auto& t : a.transitions(p)) {
            Entry probe{key_a(t.letter), 0, 0};
            auto range = std::equal_range(entries.begin(), entries.end(), probe);
            for (auto it = range.first; it != range.second; ++it)
                out.add_transition(static_cast<State>(i), t.letter * extra_count + it->rest, intern(t.target, it->target));
        }
    }
    out.normalize();
    return trim(out);
}

/// Cylindrification: reinterprets `a` over `target`, which must contain every
/// track of `a` with the same domain; other tracks are unconstrained. The
/// result has target's track order.
inline Nfa extend_to(const Nfa& a, const TrackLayout& target, const Limits& lim = {}) {
    if (a.layout() == target) return a;
    std::vector<Track> missing;
    for (const auto& t : target.tracks()) {
        auto i = a.layout().find(t.name);
        if (!i) {
            missing.push_back(t);
        } else if (a.layout().track(*i).symbols != t.symbols) {
            throw LayoutError("extend: track '" + t.name + "' has different domains");
        }
    }
    for (const auto& t : a.layout().tracks())
        if (!target.has(t.name)) throw LayoutError("extend: target lacks track '" + t.name + "'");
    Nfa joined = missing.empty() ? a : join(a, universal_language(TrackLayout(missing)), lim);
    std::vector<std::string> order;
    for (const auto& t : target.tracks()) order.push_back(t.name);
    return keep_tracks(joined, order);
}

// ---------------------------------------------------------------------------
// Track constraints

namespace constraint {

/// Letters whose components on tracks `x` and `y` carry the same symbol, over
/// the layout {x, y}. Both tracks must have the same domain.
inline Nfa equal(const Track& x, const Track& y) {
    if (x.symbols != y.symbols) throw LayoutError("equal: tracks have different domains");
    TrackLayout L({x, y});
    Nfa a(L);
    State q = a.add_state(true);
    a.set_initial(q);
    for (std::uint32_t s = 0; s < x.symbols.size(); ++s) {
        std::uint32_t c[2] = {s, s};
        a.add_transition(q, L.encode(c), q);
    }
    return a;
}

/// 0* 1 0* on a bit track.
inline Nfa exactly_one(const std::string& t) {
    Nfa a(TrackLayout({bit_track(t)}));
    a.add_states(2);
    a.set_initial(0);
    a.set_accepting(1);
    a.add_transition(0, 0, 0);
    a.add_transition(0, 1, 1);
    a.add_transition(1, 0, 1);
    return a;
}

/// 1 0* on a bit track: the marked position is the first one.
inline Nfa at_zero(const std::string& t) {
    Nfa a(TrackLayout({bit_track(t)}));
    a.add_states(2);
    a.set_initial(0);
    a.set_accepting(1);
    a.add_transition(0, 1, 1);
    a.add_transition(1, 0, 1);
    return a;
}

/// (0^k)* 1 0* on a bit track: the marked position is a multiple of k.
inline Nfa mod_zero(const std::string& t, std::size_t k) {
    if (k == 0) throw Error("mod_zero: modulus must be positive");
    Nfa a(TrackLayout({bit_track(t)}));
    a.add_states(k + 1);
    const State done = static_cast<State>(k);
    a.set_initial(0);
    a.set_accepting(done);
    for (std::size_t i = 0; i < k; ++i) a.add_transition(static_cast<State>(i), 0, static_cast<State>((i + 1) % k));
    a.add_transition(0, 1, done);
    a.add_transition(done, 0, done);
    return a;
}

/// Two bit tracks, each marked exactly once, with pos(y) = pos(x) + k.
inline Nfa offset(const std::string& x, const std::string& y, std::size_t k) {
    TrackLayout L({bit_track(x), bit_track(y)});
    auto letter = [&](std::uint32_t bx, std::uint32_t by) {
        std::uint32_t c[2] = {bx, by};
        return L.encode(c);
    };
    Nfa a(L);
    a.add_states(k + 2);
    const State done = static_cast<State>(k + 1);
    a.set_initial(0);
    a.set_accepting(done);
    a.add_transition(0, letter(0, 0), 0);
    a.add_transition(done, letter(0, 0), done);
    if (k == 0) {
        a.add_transition(0, letter(1, 1), done);
    } else {
        a.add_transition(0, letter(1, 0), 1);
        for (std::size_t i = 1; i < k; ++i) a.add_transition(static_cast<State>(i), letter(0, 0), static_cast<State>(i + 1));
        a.add_transition(static_cast<State>(k), letter(0, 1), done);
    }
    return a;
}

}  // namespace constraint

/// Relational composition of R over (x, y) with S over (y, z); `mid` names the
/// shared track, which is dropped.
inline Nfa compose(const Nfa& r, const Nfa& s, const std::string& mid, const Limits& lim = {}) {
    return drop_tracks(join(r, s, lim), {mid});
}

/// Swaps the contents of the two tracks of a binary relation, keeping the
/// track names in place.
inline Nfa inverse(const Nfa& r) {
    const auto& L = r.layout();
    if (L.arity() != 2) throw LayoutError("inverse: relation must have two tracks");
    const std::string x = L.track(0).name, y = L.track(1).name;
    return rename_tracks(keep_tracks(r, {y, x}), {{x, y}, {y, x}});
}

}  // namespace prmc
