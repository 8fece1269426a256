#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "prmc/automata/algorithms.hpp"

namespace prmc {

/// All accepted words of length exactly `len`, sorted. Throws CapacityError
/// once more than `lim.max_enum` words would be produced.
inline std::vector<Word> enumerate_length(const Nfa& a, std::size_t len, const Limits& lim = {}) {
    const Nfa d = reduce(a, lim);
    std::vector<Word> out;
    if (d.num_states() == 0) return out;

    // can[r][q]: some word of length r leads from q to acceptance.
    std::vector<std::vector<char>> can(len + 1, std::vector<char>(d.num_states(), 0));
    for (State q = 0; q < d.num_states(); ++q) can[0][q] = d.is_accepting(q);
    for (std::size_t r = 1; r <= len; ++r)
        for (State q = 0; q < d.num_states(); ++q)
            for (const auto& t : d.transitions(q))
                if (can[r - 1][t.target]) {
                    can[r][q] = 1;
                    break;
                }

    Word w;
    auto rec = [&](auto&& self, State q, std::size_t rem) -> void {
        if (rem == 0) {
            if (out.size() >= lim.max_enum) throw CapacityError("enumerate_length: more than " + std::to_string(lim.max_enum) + " words");
            out.push_back(w);
            return;
        }
        for (const auto& t : d.transitions(q)) {
            if (!can[rem - 1][t.target]) continue;
            w.push_back(t.letter);
            self(self, t.target, rem - 1);
            w.pop_back();
        }
    };
    const State q0 = d.initial()[0];
    if (can[len][q0]) rec(rec, q0, len);
    return out;
}

/// Number of accepted words of length exactly `len` (saturating at UINT64_MAX).
inline std::uint64_t count_length(const Nfa& a, std::size_t len, const Limits& lim = {}) {
    const Nfa d = reduce(a, lim);
    if (d.num_states() == 0) return 0;
    std::vector<std::uint64_t> cnt(d.num_states(), 0), next(d.num_states());
    for (State q = 0; q < d.num_states(); ++q) cnt[q] = d.is_accepting(q) ? 1 : 0;
    for (std::size_t r = 0; r < len; ++r) {
        for (State q = 0; q < d.num_states(); ++q) {
            std::uint64_t s = 0;
            for (const auto& t : d.transitions(q)) {
                std::uint64_t c = cnt[t.target];
                s = (s > UINT64_MAX - c) ? UINT64_MAX : s + c;
            }
            next[q] = s;
        }
        cnt.swap(next);
    }
    return cnt[d.initial()[0]];
}

/// Trie automaton accepting exactly `words`; deterministic.
inline Nfa from_words(const TrackLayout& layout, const std::vector<Word>& words) {
    Nfa a(layout);
    State root = a.add_state();
    a.set_initial(root);
    std::vector<std::map<Letter, State>> child(1);
    for (const auto& w : words) {
        State q = root;
        for (Letter l : w) {
            auto it = child[q].find(l);
            if (it == child[q].end()) {
                State n = a.add_state();
                child.emplace_back();
                child[q].emplace(l, n);
                a.add_transition(q, l, n);
                q = n;
            } else {
                q = it->second;
            }
        }
        a.set_accepting(q);
    }
    a.normalize();
    return a;
}

/// Every word of length exactly `len` over the full letter set.
inline std::vector<Word> all_words(const TrackLayout& layout, std::size_t len, const Limits& lim = {}) {
    return enumerate_length(words_of_length(layout, len), len, lim);
}

}  // namespace prmc
