#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "prmc/automata/layout.hpp"

namespace prmc {

using State = std::uint32_t;

/// Desk-scale caps. Exceeding one raises CapacityError.
struct Limits {
    std::size_t max_states = 1'000'000;
    std::size_t max_enum = 1'000'000;
};

struct Transition {
    Letter letter;
    State target;

    auto operator<=>(const Transition&) const = default;
};

/// Nondeterministic finite automaton over a multi-track layout, without
/// epsilon transitions. Operations never modify their arguments; the
/// mutators below are for construction only.
class Nfa {
public:
    Nfa() = default;
    explicit Nfa(TrackLayout layout) : layout_(std::move(layout)) {}

    const TrackLayout& layout() const { return layout_; }
    std::size_t num_states() const { return delta_.size(); }
    std::size_t num_transitions() const {
        std::size_t n = 0;
        for (const auto& d : delta_) n += d.size();
        return n;
    }

    const std::vector<State>& initial() const { return initial_; }
    bool is_initial(State q) const { return std::find(initial_.begin(), initial_.end(), q) != initial_.end(); }
    bool is_accepting(State q) const { return accepting_[q] != 0; }
    const std::vector<Transition>& transitions(State q) const { return delta_[q]; }

    State add_state(bool accepting = false) {
        delta_.emplace_back();
        accepting_.push_back(accepting ? 1 : 0);
        return static_cast<State>(delta_.size() - 1);
    }

    void add_states(std::size_t n) {
        delta_.resize(delta_.size() + n);
        accepting_.resize(accepting_.size() + n, 0);
    }

    void set_initial(State q) {
        if (!is_initial(q)) initial_.push_back(q);
    }
    void set_accepting(State q, bool acc = true) { accepting_[q] = acc ? 1 : 0; }

    void add_transition(State from, Letter letter, State to) {
        if (letter >= layout_.letter_count()) throw LayoutError("letter outside layout");
        delta_[from].push_back({letter, to});
    }

    /// Sorts and deduplicates transition lists and the initial set.
    void normalize() {
        for (auto& d : delta_) {
            std::sort(d.begin(), d.end());
            d.erase(std::unique(d.begin(), d.end()), d.end());
        }
        std::sort(initial_.begin(), initial_.end());
        initial_.erase(std::unique(initial_.begin(), initial_.end()), initial_.end());
    }

    /// Single initial state and at most one transition per (state, letter).
    bool is_deterministic() const {
        if (initial_.size() > 1) return false;
        for (const auto& d : delta_)
            for (std::size_t i = 1; i < d.size(); ++i)
                if (d[i].letter == d[i - 1].letter) return false;
        return true;
    }

    bool accepts(const Word& w) const {
        std::vector<char> cur(num_states(), 0), next(num_states(), 0);
        for (State q : initial_) cur[q] = 1;
        for (Letter a : w) {
            std::fill(next.begin(), next.end(), 0);
            bool any = false;
            for (State q = 0; q < num_states(); ++q) {
                if (!cur[q]) continue;
                for (const auto& t : delta_[q])
                    if (t.letter == a) next[t.target] = 1, any = true;
            }
            if (!any) return false;
            cur.swap(next);
        }
        for (State q = 0; q < num_states(); ++q)
            if (cur[q] && accepting_[q]) return true;
        return false;
    }

    /// Sorted list of distinct letters appearing on some transition.
    std::vector<Letter> used_letters() const {
        std::vector<Letter> ls;
        for (const auto& d : delta_)
            for (const auto& t : d) ls.push_back(t.letter);
        std::sort(ls.begin(), ls.end());
        ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
        return ls;
    }

private:
    TrackLayout layout_;
    std::vector<std::vector<Transition>> delta_;
    std::vector<State> initial_;
    std::vector<char> accepting_;
};

/// Removes states that are unreachable or cannot reach an accepting state.
/// The result of trimming an empty-language automaton has no states.
inline Nfa trim(const Nfa& a) {
    const std::size_t n = a.num_states();
    std::vector<char> fwd(n, 0), bwd(n, 0);
    std::vector<State> stack;
    for (State q : a.initial())
        if (!fwd[q]) fwd[q] = 1, stack.push_back(q);
    while (!stack.empty()) {
        State q = stack.back();
        stack.pop_back();
        for (const auto& t : a.transitions(q))
            if (!fwd[t.target]) fwd[t.target] = 1, stack.push_back(t.target);
    }
    std::vector<std::vector<State>> rev(n);
    for (State q = 0; q < n; ++q)
        if (fwd[q])
            for (const auto& t : a.transitions(q)) rev[t.target].push_back(q);
    for (State q = 0; q < n; ++q)
        if (fwd[q] && a.is_accepting(q)) bwd[q] = 1, stack.push_back(q);
    while (!stack.empty()) {
        State q = stack.back();
        stack.pop_back();
        for (State p : rev[q])
            if (!bwd[p]) bwd[p] = 1, stack.push_back(p);
    }
    std::vector<State> remap(n, UINT32_MAX);
    Nfa out(a.layout());
    for (State q = 0; q < n; ++q)
        if (fwd[q] && bwd[q]) remap[q] = out.add_state(a.is_accepting(q));
    for (State q = 0; q < n; ++q) {
        if (remap[q] == UINT32_MAX) continue;
        for (const auto& t : a.transitions(q))
            if (remap[t.target] != UINT32_MAX) out.add_transition(remap[q], t.letter, remap[t.target]);
    }
    for (State q : a.initial())
        if (remap[q] != UINT32_MAX) out.set_initial(remap[q]);
    out.normalize();
    return out;
}

/// The empty language over `layout`.
inline Nfa empty_language(const TrackLayout& layout) { return Nfa(layout); }

/// {ε} over `layout`.
inline Nfa epsilon_language(const TrackLayout& layout) {
    Nfa a(layout);
    a.set_initial(a.add_state(true));
    return a;
}

/// All words over the full letter set of `layout`.
inline Nfa universal_language(const TrackLayout& layout) {
    Nfa a(layout);
    State q = a.add_state(true);
    a.set_initial(q);
    for (Letter l = 0; l < layout.letter_count(); ++l) a.add_transition(q, l, q);
    return a;
}

/// All words of exactly length `n`.
inline Nfa words_of_length(const TrackLayout& layout, std::size_t n) {
    Nfa a(layout);
    a.add_states(n + 1);
    a.set_initial(0);
    a.set_accepting(static_cast<State>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (Letter l = 0; l < layout.letter_count(); ++l)
            a.add_transition(static_cast<State>(i), l, static_cast<State>(i + 1));
    return a;
}

/// Language consisting of the single word `w`.
inline Nfa single_word(const TrackLayout& layout, const Word& w) {
    Nfa a(layout);
    a.add_states(w.size() + 1);
    a.set_initial(0);
    a.set_accepting(static_cast<State>(w.size()));
    for (std::size_t i = 0; i < w.size(); ++i)
        a.add_transition(static_cast<State>(i), w[i], static_cast<State>(i + 1));
    return a;
}

}  // namespace prmc
