#pragma once

#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "prmc/automata.hpp"

namespace testing_support {

using namespace prmc;

/// Every word of length exactly n, built by counting (independent of the
/// automata layer).
inline std::vector<Word> words_exactly(const TrackLayout& L, std::size_t n) {
    std::vector<Word> out;
    Word w(n, 0);
    const Letter k = L.letter_count();
    while (true) {
        out.push_back(w);
        std::size_t i = n;
        while (i > 0) {
            if (++w[i - 1] < k) break;
            w[i - 1] = 0;
            --i;
        }
        if (i == 0) break;
    }
    return out;
}

inline std::vector<Word> words_upto(const TrackLayout& L, std::size_t n) {
    std::vector<Word> out;
    for (std::size_t l = 0; l <= n; ++l)
        for (auto& w : words_exactly(L, l)) out.push_back(std::move(w));
    return out;
}

inline TrackLayout mc_layout(const std::string& name = "src") { return TrackLayout({Track{name, {"m", "c"}}}); }

/// Word from a string of single-character symbols on a one-track layout.
inline Word w1(const TrackLayout& L, const std::string& s) {
    Word w;
    for (char c : s) w.push_back(L.symbol_index(0, std::string(1, c)));
    return w;
}

inline std::string str1(const TrackLayout& L, const Word& w) {
    std::string s;
    for (Letter l : w) s += L.track(0).symbols[l];
    return s;
}

/// Symbol counts on a one-track word.
inline std::size_t count_sym(const TrackLayout& L, const Word& w, const std::string& sym) {
    std::size_t n = 0;
    const auto idx = L.symbol_index(0, sym);
    for (Letter l : w) n += (l == idx);
    return n;
}

inline Nfa random_nfa(const TrackLayout& L, std::mt19937& rng, std::size_t states, double density) {
    Nfa a(L);
    a.add_states(states);
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<State> pick(0, static_cast<State>(states - 1));
    a.set_initial(pick(rng));
    if (u(rng) < 0.3) a.set_initial(pick(rng));
    for (State q = 0; q < states; ++q) {
        a.set_accepting(q, u(rng) < 0.3);
        for (Letter l = 0; l < L.letter_count(); ++l)
            for (State p = 0; p < states; ++p)
                if (u(rng) < density) a.add_transition(q, l, p);
    }
    a.normalize();
    return a;
}

/// Muddy children: two control states, identity loops, one observation jump anywhere.
inline Nfa muddy_transducer() {
    return parse_automaton(R"(tracks: src:m,c obs:0,1 tgt:m,c
initial: p
accepting: q
trans: p (m,0,m) p
trans: p (c,0,c) p
trans: p (*,1,*) q
trans: q (m,0,m) q
trans: q (c,0,c) q
)");
}

}  // namespace testing_support
