#pragma once

#include <string>

#include "prmc/automata/algorithms.hpp"

namespace prmc {

/// Tiny regular-expression front end for one-track layouts whose symbols are
/// single characters: literals, `.` (any symbol), `[abc]`, `|`, `*`, `+`, `?`
/// and parentheses. `~` denotes the empty language.
class RegexBuilder {
public:
    RegexBuilder(const TrackLayout& layout, std::string text) : L_(layout), s_(std::move(text)) {
        if (L_.arity() != 1) throw LayoutError("regex: layout must have exactly one track");
    }

    Nfa build() {
        pos_ = 0;
        Nfa a = alt();
        if (pos_ != s_.size()) throw ParseError("regex: unexpected '" + std::string(1, s_[pos_]) + "'", 1, pos_ + 1);
        return a;
    }

private:
    const TrackLayout& L_;
    std::string s_;
    std::size_t pos_ = 0;

    bool at(char c) const { return pos_ < s_.size() && s_[pos_] == c; }

    Nfa letters(const std::vector<Letter>& ls) {
        Nfa a(L_);
        a.add_states(2);
        a.set_initial(0);
        a.set_accepting(1);
        for (Letter l : ls) a.add_transition(0, l, 1);
        a.normalize();
        return a;
    }

    Nfa alt() {
        Nfa a = seq();
        while (at('|')) {
            ++pos_;
            a = union_of(a, seq());
        }
        return a;
    }

    Nfa seq() {
        Nfa a = epsilon_language(L_);
        while (pos_ < s_.size() && !at('|') && !at(')')) a = concat(a, postfix());
        return a;
    }

    Nfa postfix() {
        Nfa a = atom();
        while (at('*') || at('+') || at('?')) {
            char op = s_[pos_++];
            if (op == '*') a = star(a);
            else if (op == '+') a = concat(a, star(a));
            else a = union_of(a, epsilon_language(L_));
        }
        return a;
    }

    Nfa atom() {
        if (pos_ >= s_.size()) throw ParseError("regex: unexpected end", 1, pos_ + 1);
        char c = s_[pos_++];
        if (c == '(') {
            Nfa a = alt();
            if (!at(')')) throw ParseError("regex: missing ')'", 1, pos_ + 1);
            ++pos_;
            return a;
        }
        if (c == '~') return empty_language(L_);
        if (c == '.') {
            std::vector<Letter> all;
            for (Letter l = 0; l < L_.letter_count(); ++l) all.push_back(l);
            return letters(all);
        }
        if (c == '[') {
            std::vector<Letter> ls;
            while (pos_ < s_.size() && !at(']')) ls.push_back(symbol(s_[pos_++]));
            if (!at(']')) throw ParseError("regex: missing ']'", 1, pos_ + 1);
            ++pos_;
            return letters(ls);
        }
        return letters({symbol(c)});
    }

    Letter symbol(char c) {
        try {
            return L_.symbol_index(0, std::string(1, c));
        } catch (const LayoutError&) {
            throw ParseError("regex: '" + std::string(1, c) + "' is not a symbol", 1, pos_);
        }
    }
};

inline Nfa regex(const TrackLayout& layout, const std::string& text) { return RegexBuilder(layout, text).build(); }

}  // namespace prmc
