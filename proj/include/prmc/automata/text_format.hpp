#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "prmc/automata/nfa.hpp"

namespace prmc {

namespace detail {

inline std::string trim_ws(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

inline std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim_ws(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim_ws(cur));
    return out;
}

}  // namespace detail

/// Incremental reader for the line-oriented automaton format:
///
///   tracks: src:m,c obs:0,1 tgt:m,c
///   states: q0 q1
///   initial: q0
///   accepting: q1
///   trans: q0 (m,0,m) q0
///
/// `*` in a letter position matches every symbol of that track. States are
/// arbitrary tokens and are declared implicitly on first use.
class AutomatonReader {
public:
    explicit AutomatonReader(std::optional<TrackLayout> preset = std::nullopt) {
        if (preset) nfa_ = Nfa(*preset), have_layout_ = true;
    }

    /// Consumes one line (comments already stripped is not required).
    /// Returns false if the line's keyword is not part of the automaton format.
    bool feed(const std::string& raw, std::size_t line_no) {
        std::string line = raw.substr(0, raw.find('#'));
        line = detail::trim_ws(line);
        if (line.empty()) return true;
        auto colon = line.find(':');
        if (colon == std::string::npos) throw ParseError("expected '<keyword>:'", line_no);
        const std::string key = detail::trim_ws(line.substr(0, colon));
        const std::string rest = line.substr(colon + 1);
        if (key == "tracks") {
            if (have_layout_ && nfa_.num_states() > 0) throw ParseError("tracks declared after states", line_no);
            std::vector<Track> tracks;
            for (const auto& tok : detail::split_ws(rest)) {
                auto c = tok.find(':');
                if (c == std::string::npos || c == 0) throw ParseError("track must be name:sym,sym,...", line_no);
                Track t{tok.substr(0, c), {}};
                for (auto& s : detail::split_on(tok.substr(c + 1), ','))
                    if (!s.empty()) t.symbols.push_back(s);
                tracks.push_back(std::move(t));
            }
            try {
                nfa_ = Nfa(TrackLayout(std::move(tracks)));
            } catch (const Error& e) {
                throw ParseError(e.what(), line_no);
            }
            have_layout_ = true;
            names_.clear();
        } else if (key == "states") {
            need_layout(line_no);
            for (const auto& tok : detail::split_ws(rest)) state(tok);
        } else if (key == "initial") {
            need_layout(line_no);
            for (const auto& tok : detail::split_ws(rest)) nfa_.set_initial(state(tok));
        } else if (key == "accepting") {
            need_layout(line_no);
            for (const auto& tok : detail::split_ws(rest)) nfa_.set_accepting(state(tok));
        } else if (key == "trans") {
            need_layout(line_no);
            parse_trans(rest, line_no);
        } else {
            return false;
        }
        return true;
    }

    bool has_layout() const { return have_layout_; }

    Nfa finish() {
        nfa_.normalize();
        return nfa_;
    }

private:
    Nfa nfa_;
    bool have_layout_ = false;
    std::map<std::string, State> names_;

    void need_layout(std::size_t line_no) const {
        if (!have_layout_) throw ParseError("'tracks:' must come first", line_no);
    }

    State state(const std::string& name) {
        auto it = names_.find(name);
        if (it != names_.end()) return it->second;
        State q = nfa_.add_state();
        names_.emplace(name, q);
        return q;
    }

    void parse_trans(const std::string& rest, std::size_t line_no) {
        auto open = rest.find('(');
        auto close = rest.find(')', open == std::string::npos ? 0 : open);
        if (open == std::string::npos || close == std::string::npos) throw ParseError("transition must be 'src (a,b,...) dst'", line_no);
        auto src = detail::split_ws(rest.substr(0, open));
        auto dst = detail::split_ws(rest.substr(close + 1));
        if (src.size() != 1 || dst.size() != 1) throw ParseError("transition must be 'src (a,b,...) dst'", line_no);
        auto syms = detail::split_on(rest.substr(open + 1, close - open - 1), ',');
        const auto& L = nfa_.layout();
        if (syms.size() != L.arity())
            throw ParseError("letter has " + std::to_string(syms.size()) + " components, layout has " + std::to_string(L.arity()), line_no);
        std::vector<std::vector<std::uint32_t>> choices(L.arity());
        for (std::size_t i = 0; i < L.arity(); ++i) {
            if (syms[i] == "*") {
                for (std::uint32_t k = 0; k < L.domain_size(i); ++k) choices[i].push_back(k);
            } else {
                try {
                    choices[i].push_back(L.symbol_index(i, syms[i]));
                } catch (const LayoutError& e) {
                    throw ParseError(e.what(), line_no);
                }
            }
        }
        State p = state(src[0]), q = state(dst[0]);
        std::vector<std::uint32_t> cur(L.arity());
        auto rec = [&](auto&& self, std::size_t i) -> void {
            if (i == L.arity()) {
                nfa_.add_transition(p, L.encode(cur), q);
                return;
            }
            for (auto c : choices[i]) {
                cur[i] = c;
                self(self, i + 1);
            }
        };
        rec(rec, 0);
    }
};

inline Nfa parse_automaton(const std::string& text) {
    AutomatonReader r;
    std::istringstream in(text);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) {
        ++n;
        if (!r.feed(line, n)) throw ParseError("unknown keyword", n);
    }
    if (!r.has_layout()) throw ParseError("missing 'tracks:' line", n);
    return r.finish();
}

inline std::string print_automaton(const Nfa& a) {
    std::ostringstream out;
    const auto& L = a.layout();
    out << "tracks:";
    for (const auto& t : L.tracks()) {
        out << ' ' << t.name << ':';
        for (std::size_t i = 0; i < t.symbols.size(); ++i) out << (i ? "," : "") << t.symbols[i];
    }
    out << "\nstates:";
    for (State q = 0; q < a.num_states(); ++q) out << " q" << q;
    out << "\ninitial:";
    for (State q : a.initial()) out << " q" << q;
    out << "\naccepting:";
    for (State q = 0; q < a.num_states(); ++q)
        if (a.is_accepting(q)) out << " q" << q;
    out << '\n';
    for (State q = 0; q < a.num_states(); ++q)
        for (const auto& t : a.transitions(q)) out << "trans: q" << q << " (" << L.letter_to_string(t.letter) << ") q" << t.target << '\n';
    return out.str();
}

}  // namespace prmc
