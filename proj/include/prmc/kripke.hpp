#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "prmc/automata.hpp"

namespace prmc {

/// Reserved track names.
namespace tracks {
inline const std::string src = "src";
inline const std::string obs = "obs";
inline const std::string tgt = "tgt";
inline const std::string ctx = "ctx";
inline std::string var(const std::string& v) { return "v:" + v; }
}  // namespace tracks

/// A regular Kripke structure: states are words over `alphabet`, position i
/// of a state hosts agent i, and `trans` accepts s ⊗ V(i,|s|) ⊗ t whenever
/// agent i cannot distinguish s from t.
class RegularKripke {
public:
    RegularKripke() = default;
    RegularKripke(std::vector<std::string> alphabet, std::vector<std::string> props)
        : alphabet_(std::move(alphabet)), props_(std::move(props)),
          label_(alphabet_.size(), std::vector<char>(props_.size(), 0)),
          trans_(trans_layout_for(alphabet_)) {}

    const std::vector<std::string>& alphabet() const { return alphabet_; }
    const std::vector<std::string>& props() const { return props_; }
    const std::map<std::string, std::size_t>& agents() const { return agents_; }
    const Nfa& trans() const { return trans_; }

    Track state_track(const std::string& name = tracks::src) const { return Track{name, alphabet_}; }
    TrackLayout state_layout() const { return TrackLayout({state_track()}); }
    TrackLayout trans_layout() const { return trans_layout_for(alphabet_); }

    std::optional<std::size_t> prop_index(const std::string& p) const {
        for (std::size_t i = 0; i < props_.size(); ++i)
            if (props_[i] == p) return i;
        return std::nullopt;
    }

    /// Whether letter `l` (index into the alphabet) carries proposition `p`.
    bool holds(std::size_t p, Letter l) const { return label_[l][p] != 0; }

    void set_label(Letter l, std::size_t p, bool v = true) { label_.at(l).at(p) = v ? 1 : 0; }
    void set_agent(const std::string& name, std::size_t index) { agents_[name] = index; }
    void set_trans(Nfa t) {
        require_same_layout(t.layout(), trans_layout(), "set_trans");
        trans_ = std::move(t);
    }

    static TrackLayout trans_layout_for(const std::vector<std::string>& alphabet) {
        return TrackLayout({Track{tracks::src, alphabet}, bit_track(tracks::obs), Track{tracks::tgt, alphabet}});
    }

private:
    std::vector<std::string> alphabet_;
    std::vector<std::string> props_;
    std::vector<std::vector<char>> label_;
    std::map<std::string, std::size_t> agents_;
    Nfa trans_;
};

/// A family of Kripke structures indexed by same-length context words: the
/// slice of `trans` at context c is a regular Kripke transducer.
struct ContextKripke {
    std::shared_ptr<const RegularKripke> base;
    Track ctx;
    Nfa trans;  ///< over (src, obs, tgt, ctx)
};

// ---------------------------------------------------------------------------
// Validation

namespace detail {

inline std::string witness_string(const Nfa& lang) {
    auto w = shortest_word(lang);
    return w ? lang.layout().word_to_string(*w) : std::string();
}

/// { s ⊗ V(i,|s|) ⊗ s | s ∈ states } over the transducer layout of m.
inline Nfa reflexive_part(const RegularKripke& m, const Nfa& states, const Limits& lim) {
    Nfa diag = join(constraint::equal(m.state_track(tracks::src), m.state_track(tracks::tgt)), constraint::exactly_one(tracks::obs), lim);
    return keep_tracks(join(diag, states, lim), {tracks::src, tracks::obs, tracks::tgt});
}

}  // namespace detail

/// Projection of the transducer on the source track.
inline Nfa state_space(const RegularKripke& m) { return reduce(keep_tracks(m.trans(), {tracks::src})); }

/// Projection on (src, ctx).
inline Nfa state_space(const ContextKripke& m) { return reduce(keep_tracks(m.trans, {tracks::src, tracks::ctx})); }

/// Checks the obs-track shape and reflexivity; throws ValidationError with a
/// shortest witness. Letters outside the alphabet cannot be represented.
inline void validate_model(const RegularKripke& m, const Limits& lim = {}) {
    const Nfa& t = m.trans();
    Nfa shape = extend_to(constraint::exactly_one(tracks::obs), t.layout(), lim);
    Nfa bad = difference(t, shape, lim);
    if (!is_empty(bad)) throw ValidationError("obs-shape", "an accepted word does not mark exactly one agent", detail::witness_string(bad));
    Nfa refl = detail::reflexive_part(m, state_space(m), lim);
    Nfa missing = difference(refl, t, lim);
    if (!is_empty(missing)) throw ValidationError("reflexivity", "some state is not related to itself", detail::witness_string(missing));
}

struct S5Report {
    bool reflexive = true, symmetric = true, transitive = true;
    std::string reflexive_witness, symmetric_witness, transitive_witness;

    bool ok() const { return reflexive && symmetric && transitive; }
};

/// The transducer with source and target exchanged.
inline Nfa swap_src_tgt(const Nfa& t) {
    Nfa sw = rename_tracks(t, {{tracks::src, tracks::tgt}, {tracks::tgt, tracks::src}});
    std::vector<std::string> order;
    for (const auto& tr : t.layout().tracks()) order.push_back(tr.name);
    return keep_tracks(sw, order);
}

/// { s ⊗ V(i) ⊗ u | ∃t: s ∼_i t ∧ t ∼_i u }, keeping any extra tracks shared.
inline Nfa self_compose(const Nfa& t, const Limits& lim = {}) {
    Nfa first = rename_tracks(t, {{tracks::tgt, "mid"}});
    Nfa second = rename_tracks(t, {{tracks::src, "mid"}});
    std::vector<std::string> order;
    for (const auto& tr : t.layout().tracks()) order.push_back(tr.name);
    return keep_tracks(join(first, second, lim), order);
}

inline S5Report check_s5(const RegularKripke& m, const Limits& lim = {}) {
    S5Report r;
    const Nfa& t = m.trans();
    Nfa missing = difference(detail::reflexive_part(m, state_space(m), lim), t, lim);
    if (!is_empty(missing)) r.reflexive = false, r.reflexive_witness = detail::witness_string(missing);
    auto sym = equivalent(swap_src_tgt(t), t, lim);
    if (!sym.equal) r.symmetric = false, r.symmetric_witness = t.layout().word_to_string(sym.counterexample);
    Nfa extra = difference(self_compose(t, lim), t, lim);
    if (!is_empty(extra)) r.transitive = false, r.transitive_witness = detail::witness_string(extra);
    return r;
}

// ---------------------------------------------------------------------------
// Restriction and context extension

/// Keeps only the worlds in `keep` (over the src track): both endpoints of
/// every transition must lie in `keep`.
inline RegularKripke restrict(const RegularKripke& m, const Nfa& keep, const Limits& lim = {}) {
    require_same_layout(keep.layout(), m.state_layout(), "restrict");
    Nfa t = join(join(m.trans(), keep, lim), rename_tracks(keep, {{tracks::src, tracks::tgt}}), lim);
    RegularKripke out = m;
    out.set_trans(reduce(keep_tracks(t, {tracks::src, tracks::obs, tracks::tgt}), lim));
    return out;
}

/// Per-context restriction; `keep` is over (src, ctx).
inline ContextKripke restrict(const ContextKripke& m, const Nfa& keep, const Limits& lim = {}) {
    const auto& L = keep.layout();
    if (L.arity() != 2 || !L.has(tracks::src) || !L.has(tracks::ctx)) throw LayoutError("restrict: keep must be over (src, ctx)");
    Nfa t = join(join(m.trans, keep, lim), rename_tracks(keep, {{tracks::src, tracks::tgt}}), lim);
    return ContextKripke{m.base, m.ctx, reduce(keep_tracks(t, {tracks::src, tracks::obs, tracks::tgt, tracks::ctx}), lim)};
}

/// The family whose slice at context c is m restricted to {s | (s,c) ∈ constraint}.
/// `constraint` is over (src, ctx) with ctx's domain given by `ctx`.
inline ContextKripke extend_context(std::shared_ptr<const RegularKripke> m, const Track& ctx, const Nfa& constraint, const Limits& lim = {}) {
    if (ctx.name != tracks::ctx) throw LayoutError("extend_context: context track must be named '" + tracks::ctx + "'");
    const auto& L = constraint.layout();
    if (L.arity() != 2 || !L.has(tracks::src) || !L.has(tracks::ctx) || L.track(L.index_of(tracks::ctx)).symbols != ctx.symbols)
        throw LayoutError("extend_context: constraint must be over (src, ctx)");
    ContextKripke full{m, ctx, extend_to(m->trans(), TrackLayout({m->state_track(tracks::src), bit_track(tracks::obs), m->state_track(tracks::tgt), ctx}), lim)};
    return restrict(full, constraint, lim);
}

/// The Kripke structure of one context word (for tests and inspection).
inline RegularKripke slice(const ContextKripke& m, const Word& context, const Limits& lim = {}) {
    TrackLayout Lc({m.ctx});
    Nfa t = keep_tracks(join(m.trans, single_word(Lc, context), lim), {tracks::src, tracks::obs, tracks::tgt});
    RegularKripke out = *m.base;
    out.set_trans(reduce(t, lim));
    return out;
}

// ---------------------------------------------------------------------------
// Model files

/// Parses a model document:
///
///   alphabet: m c
///   props: m = {m}; c = {}
///   agents: a=1 b=2
///   transducer:
///   initial: p
///   ...
///
/// The transducer block uses the automaton format; its tracks default to
/// (src, obs, tgt). The result is validated.
inline RegularKripke parse_model(const std::string& text, const Limits& lim = {}) {
    std::istringstream in(text);
    std::vector<std::string> alphabet;
    struct LabelEntry {
        std::string letter;
        std::vector<std::string> props;
        std::size_t line;
    };
    std::vector<LabelEntry> labels;
    std::vector<std::pair<std::string, std::size_t>> agents;
    std::optional<AutomatonReader> reader;
    std::size_t n = 0;
    std::size_t transducer_line = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++n;
        std::string line = detail::trim_ws(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        if (reader) {
            if (!reader->feed(line, n)) throw ParseError("unexpected line in transducer block", n);
            continue;
        }
        auto colon = line.find(':');
        if (colon == std::string::npos) throw ParseError("expected '<keyword>:'", n);
        const std::string key = detail::trim_ws(line.substr(0, colon));
        const std::string rest = line.substr(colon + 1);
        if (key == "alphabet") {
            alphabet = detail::split_ws(rest);
            if (alphabet.empty()) throw ParseError("empty alphabet", n);
        } else if (key == "props") {
            for (const auto& entry : detail::split_on(rest, ';')) {
                if (entry.empty()) continue;
                auto eq = entry.find('=');
                auto ob = entry.find('{'), cb = entry.find('}');
                if (eq == std::string::npos || ob == std::string::npos || cb == std::string::npos || cb < ob)
                    throw ParseError("props entry must be 'letter = {p, q}'", n);
                std::vector<std::string> ps;
                for (auto& p : detail::split_on(entry.substr(ob + 1, cb - ob - 1), ','))
                    if (!p.empty()) ps.push_back(p);
                labels.push_back({detail::trim_ws(entry.substr(0, eq)), ps, n});
            }
        } else if (key == "agents") {
            for (const auto& tok : detail::split_ws(rest)) {
                auto eq = tok.find('=');
                if (eq == std::string::npos || eq == 0) throw ParseError("agent alias must be name=index", n);
                try {
                    agents.emplace_back(tok.substr(0, eq), std::stoul(tok.substr(eq + 1)));
                } catch (const std::logic_error&) {
                    throw ParseError("agent index must be a natural number", n);
                }
            }
        } else if (key == "transducer") {
            if (alphabet.empty()) throw ParseError("'alphabet:' must precede the transducer", n);
            reader.emplace(RegularKripke::trans_layout_for(alphabet));
            transducer_line = n;
            if (!detail::trim_ws(rest).empty()) throw ParseError("transducer block starts on the next line", n);
        } else {
            throw ParseError("unknown keyword '" + key + "'", n);
        }
    }
    if (alphabet.empty()) throw ParseError("missing 'alphabet:'", n);
    std::vector<std::string> props;
    for (const auto& e : labels)
        for (const auto& p : e.props)
            if (std::find(props.begin(), props.end(), p) == props.end()) props.push_back(p);
    RegularKripke m(alphabet, props);
    for (const auto& e : labels) {
        auto it = std::find(alphabet.begin(), alphabet.end(), e.letter);
        if (it == alphabet.end()) throw ParseError("props: '" + e.letter + "' is not in the alphabet", e.line);
        for (const auto& p : e.props) m.set_label(static_cast<Letter>(it - alphabet.begin()), *m.prop_index(p));
    }
    for (const auto& [name, idx] : agents) m.set_agent(name, idx);
    if (reader) {
        Nfa t = reader->finish();
        if (!(t.layout() == m.trans_layout()))
            throw ParseError("transducer tracks must be src, obs:0,1, tgt over the alphabet", transducer_line);
        m.set_trans(reduce(t, lim));
    }
    validate_model(m, lim);
    return m;
}

inline RegularKripke load_model(const std::string& path, const Limits& lim = {}) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open model file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_model(ss.str(), lim);
}

}  // namespace prmc
