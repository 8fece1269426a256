#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "prmc/automata.hpp"
#include "prmc/formula.hpp"
#include "prmc/kripke.hpp"

namespace prmc {

/// A transducer over (src, obs, tgt, params...). Parameter tracks are
/// state-aligned and shared between source and target: the context track of a
/// ContextKripke, and the valuation tracks of variables fixed by an enclosing
/// announcement or by init_extended.
struct ExtTransducer {
    std::shared_ptr<const RegularKripke> base;
    std::vector<Track> params;
    Nfa nfa;
    std::size_t id = 0;

    bool has_param(const std::string& name) const {
        for (const auto& p : params)
            if (p.name == name) return true;
        return false;
    }
};

namespace detail {

inline std::size_t next_transducer_id() {
    static std::atomic<std::size_t> counter{1};
    return counter++;
}

inline bool is_var_track(const std::string& name) { return name.rfind("v:", 0) == 0; }

inline std::vector<std::string> track_names(const TrackLayout& L) {
    std::vector<std::string> out;
    for (const auto& t : L.tracks()) out.push_back(t.name);
    return out;
}

}  // namespace detail

/// T(m) ⊗ E_X: one valuation track per variable of X, each marked exactly once.
inline ExtTransducer init_extended(const RegularKripke& m, const std::vector<std::string>& vars = {}, const Limits& lim = {}) {
    ExtTransducer T{std::make_shared<const RegularKripke>(m), {}, m.trans(), detail::next_transducer_id()};
    for (const auto& v : vars) {
        T.params.push_back(bit_track(tracks::var(v)));
        T.nfa = join(T.nfa, constraint::exactly_one(tracks::var(v)), lim);
    }
    T.nfa = reduce(T.nfa, lim);
    return T;
}

/// The context family as an extended transducer whose ctx track is a parameter.
inline ExtTransducer init_extended(const ContextKripke& m, const Limits& lim = {}) {
    return ExtTransducer{m.base, {m.ctx}, reduce(m.trans, lim), detail::next_transducer_id()};
}

/// A plain Kripke structure with the (parameter-free) transducer of T.
inline RegularKripke as_kripke(const ExtTransducer& T) {
    if (!T.params.empty()) throw LayoutError("as_kripke: transducer has parameter tracks");
    RegularKripke m = *T.base;
    m.set_trans(T.nfa);
    return m;
}

/// Learner budgets; exhausting one reports divergence.
struct LearnBudget {
    std::size_t max_equivalence = 500;
    std::size_t max_membership = 1'000'000;
    std::size_t length_cap = 12;  ///< longest brute-forced length
};

struct EvalOptions {
    Limits limits;
    LearnBudget budget;
    std::ostream* transcript = nullptr;  ///< learner log, one event per line
    std::vector<std::string> var_order;  ///< overrides the order of first appearance
    std::string dot_dir;                 ///< dump every intermediate set when non-empty
    bool check_invariants = false;       ///< verify the valuation-track shape after every step
};

struct EvalStats {
    std::size_t steps = 0;
    std::size_t cache_hits = 0;
    std::size_t announcements = 0;
    std::size_t peak_states = 0;
    std::size_t learned_relations = 0;
};

class Evaluator;

/// Satisfaction set of an iterated announcement; defined with the learner.
inline Nfa star_semantics(Evaluator& ev, const Formula& f, const ExtTransducer& T);

/// Computes satisfaction sets of core formulas (bound variables renamed
/// apart). A set over T has tracks (src, params of T..., variable tracks),
/// each variable track marked exactly once; variables missing from a set are
/// unconstrained.
class Evaluator {
public:
    explicit Evaluator(EvalOptions opts = {}) : opts_(std::move(opts)) {}

    const EvalOptions& options() const { return opts_; }
    const Limits& limits() const { return opts_.limits; }
    EvalStats& stats() { return stats_; }

    /// Variable ranks decide track order in every set.
    void set_var_order(const std::vector<std::string>& vars) {
        rank_.clear();
        for (const auto& v : opts_.var_order) rank_.emplace(v, rank_.size());
        for (const auto& v : vars) rank_.emplace(v, rank_.size());
    }

    /// ⟦⊤⟧(T).
    Nfa top(const ExtTransducer& T) {
        auto it = top_.find(T.id);
        if (it != top_.end()) return it->second;
        std::vector<std::string> keep{tracks::src};
        for (const auto& p : T.params) keep.push_back(p.name);
        Nfa r = reduce(keep_tracks(T.nfa, keep), limits());
        note(r);
        top_.emplace(T.id, r);
        return r;
    }

    Nfa eval(const Formula& f, const ExtTransducer& T) {
        pinned_.push_back(f);
        return run(f, T);
    }

    /// T{φ!}: keeps the transitions whose source and target both satisfy φ
    /// under the same valuation. Free variables of φ become parameters.
    ExtTransducer announce(const ExtTransducer& T, const Formula& phi) {
        pinned_.push_back(phi);
        return announce_node(T, phi);
    }

    /// Relative complement within ⟦⊤⟧(T), aligned to the tracks of `a`.
    Nfa negate(const Nfa& a, const ExtTransducer& T) {
        Nfa t = align(top(T), detail::track_names(a.layout()), T);
        return finish(difference(t, a, limits()), "not");
    }

    /// Cylindrifies `a` to the canonical layout containing `names` plus its own tracks.
    Nfa align(const Nfa& a, std::vector<std::string> names, const ExtTransducer& T) {
        for (const auto& t : a.layout().tracks()) names.push_back(t.name);
        auto order = canonical(names, T);
        Nfa cur = a;
        for (const auto& n : order)
            if (!cur.layout().has(n)) {
                if (!detail::is_var_track(n)) throw LayoutError("align: cannot add track '" + n + "'");
                cur = join(cur, constraint::exactly_one(n), limits());
            }
        if (detail::track_names(cur.layout()) == order) return cur;
        return keep_tracks(cur, order);
    }

    /// Canonical track order: src, parameters, then variables by rank.
    std::vector<std::string> canonical(const std::vector<std::string>& names, const ExtTransducer& T) const {
        std::set<std::string> want(names.begin(), names.end());
        std::vector<std::string> out{tracks::src};
        for (const auto& p : T.params)
            if (!detail::is_var_track(p.name)) out.push_back(p.name);
        std::vector<std::string> vars;
        for (const auto& n : want)
            if (detail::is_var_track(n)) vars.push_back(n);
        for (const auto& p : T.params)
            if (detail::is_var_track(p.name) && !want.count(p.name)) vars.push_back(p.name);
        std::stable_sort(vars.begin(), vars.end(), [&](const std::string& a, const std::string& b) { return rank(a) < rank(b); });
        out.insert(out.end(), vars.begin(), vars.end());
        return out;
    }

    /// Reduces, records statistics, and optionally dumps and checks.
    Nfa finish(const Nfa& a, const std::string& label) {
        Nfa r = reduce(a, limits());
        note(r);
        if (!opts_.dot_dir.empty()) dump(r, label);
        if (opts_.check_invariants) check_shape(r);
        return r;
    }

    void note(const Nfa& a) { stats_.peak_states = std::max(stats_.peak_states, a.num_states()); }

    /// Throws Error if a variable track of `a` is not of the shape 0*10*.
    static void check_shape(const Nfa& a) {
        for (const auto& t : a.layout().tracks()) {
            if (!detail::is_var_track(t.name)) continue;
            Nfa p = keep_tracks(a, {t.name});
            if (!is_subset(p, constraint::exactly_one(t.name))) throw Error("valuation track '" + t.name + "' is not marked exactly once");
        }
    }

private:
    EvalOptions opts_;
    EvalStats stats_;
    std::map<std::string, std::size_t> rank_;
    std::map<std::pair<const Node*, std::size_t>, Nfa> cache_;
    std::map<std::pair<const Node*, std::size_t>, ExtTransducer> announced_;
    std::map<std::size_t, Nfa> top_;
    std::vector<Formula> pinned_;
    std::size_t dumps_ = 0;

    std::size_t rank(const std::string& track) const {
        auto it = rank_.find(track.substr(2));
        return it == rank_.end() ? SIZE_MAX : it->second;
    }

    void dump(const Nfa& a, const std::string& label) {
        std::filesystem::create_directories(opts_.dot_dir);
        char buf[16];
        std::snprintf(buf, sizeof buf, "%05zu", dumps_++);
        std::ofstream(std::filesystem::path(opts_.dot_dir) / (std::string("step_") + buf + "_" + label + ".dot")) << to_dot(a, label);
    }

    // atom constraint c over variable tracks, intersected with ⟦⊤⟧(T)
    Nfa atom(const Nfa& c, const ExtTransducer& T, const std::string& label) {
        Nfa j = join(top(T), c, limits());
        return finish(align(j, {}, T), label);
    }

    Nfa run(const Formula& f, const ExtTransducer& T) {
        auto key = std::make_pair(f.get(), T.id);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            ++stats_.cache_hits;
            return it->second;
        }
        ++stats_.steps;
        Nfa r = compute(f, T);
        cache_.emplace(key, r);
        return r;
    }

    Nfa compute(const Formula& f, const ExtTransducer& T) {
        const auto& k = f->kids;
        const std::string vi = tracks::var(f->var);
        switch (f->kind) {
            case Kind::Top: return top(T);
            case Kind::Not: return negate(run(k[0], T), T);
            case Kind::And: {
                Nfa a = run(k[0], T), b = run(k[1], T);
                auto names = detail::track_names(b.layout());
                Nfa x = align(a, names, T), y = align(b, detail::track_names(x.layout()), T);
                return finish(intersect(x, y, limits()), "and");
            }
            case Kind::Exists: {
                Nfa a = run(k[0], T);
                if (T.has_param(vi)) throw Error("quantified variable '" + f->var + "' is already fixed");
                if (!a.layout().has(vi)) a = align(a, {vi}, T);
                return finish(drop_tracks(a, {vi}), "exists");
            }
            case Kind::AtZero: return atom(constraint::at_zero(vi), T, "at_zero");
            case Kind::ModZero: return atom(constraint::mod_zero(vi, f->k), T, "mod");
            case Kind::Offset: {
                if (f->var == f->var2) {
                    Nfa c = f->k == 0 ? constraint::exactly_one(vi) : empty_language(TrackLayout({bit_track(vi)}));
                    return atom(c, T, "offset");
                }
                return atom(constraint::offset(tracks::var(f->var2), vi, f->k), T, "offset");
            }
            case Kind::Prop: return atom(prop_marker(*T.base, f->name, vi), T, "prop");
            case Kind::Diamond: {
                Nfa body = run(k[0], T);
                Nfa moved = rename_tracks(body, {{tracks::src, tracks::tgt}});
                Nfa j = join(T.nfa, constraint::equal(bit_track(tracks::obs), bit_track(vi)), limits());
                j = join(j, moved, limits());
                std::vector<std::string> keep{tracks::src};
                for (const auto& t : j.layout().tracks())
                    if (t.name != tracks::src && t.name != tracks::obs && t.name != tracks::tgt) keep.push_back(t.name);
                return finish(align(keep_tracks(j, keep), {}, T), "diamond");
            }
            case Kind::Announce: {
                Nfa no = negate(run(k[0], T), T);
                ExtTransducer T2 = announce_node(T, k[0]);
                Nfa yes = run(k[1], T2);
                Nfa a = align(no, detail::track_names(yes.layout()), T);
                Nfa b = align(yes, detail::track_names(a.layout()), T);
                return finish(union_of(a, b), "announce");
            }
            case Kind::AnnounceStar: return finish(star_semantics(*this, f, T), "star");
            default: throw Error("evaluator expects a desugared formula");
        }
    }

    ExtTransducer announce_node(const ExtTransducer& T, const Formula& phi) {
        auto key = std::make_pair(phi.get(), T.id);
        auto it = announced_.find(key);
        if (it != announced_.end()) return it->second;
        ++stats_.announcements;
        Nfa x = run(phi, T);
        Nfa j = join(T.nfa, x, limits());
        j = join(j, rename_tracks(x, {{tracks::src, tracks::tgt}}), limits());
        ExtTransducer out{T.base, T.params, {}, detail::next_transducer_id()};
        std::vector<std::string> names;
        for (const auto& t : x.layout().tracks())
            if (detail::is_var_track(t.name) && !T.has_param(t.name)) names.push_back(t.name);
        for (const auto& n : canonical(names, T))
            if (detail::is_var_track(n) && !T.has_param(n)) out.params.push_back(bit_track(n));
        std::vector<std::string> order{tracks::src, tracks::obs, tracks::tgt};
        for (const auto& p : out.params) order.push_back(p.name);
        out.nfa = reduce(keep_tracks(j, order), limits());
        note(out.nfa);
        if (!opts_.dot_dir.empty()) dump(top(out), "states");
        announced_.emplace(key, out);
        return out;
    }

    // Words whose marked position carries proposition p, over (src, v).
    static Nfa prop_marker(const RegularKripke& m, const std::string& p, const std::string& v) {
        auto idx = m.prop_index(p);
        if (!idx) throw Error("unknown proposition '" + p + "'");
        TrackLayout L({m.state_track(tracks::src), bit_track(v)});
        Nfa a(L);
        a.add_states(2);
        a.set_initial(0);
        a.set_accepting(1);
        for (std::uint32_t s = 0; s < m.alphabet().size(); ++s) {
            std::uint32_t c0[2] = {s, 0}, c1[2] = {s, 1};
            a.add_transition(0, L.encode(c0), 0);
            a.add_transition(1, L.encode(c0), 1);
            if (m.holds(*idx, s)) a.add_transition(0, L.encode(c1), 1);
        }
        a.normalize();
        return a;
    }
};

// ---------------------------------------------------------------------------
// Model checking

/// Parses, resolves agent aliases, desugars and renames.
inline Analysis prepare(const std::string& text, const RegularKripke& m) {
    return analyze(desugar(resolve_aliases(parse_formula(text), m.agents())));
}

inline Analysis prepare(const Formula& f, const RegularKripke& m) { return analyze(desugar(resolve_aliases(f, m.agents()))); }

struct CheckResult {
    bool valid = true;
    Nfa counterexamples;          ///< over src
    std::optional<Word> witness;  ///< shortest counterexample state
    double seconds = 0;
    std::size_t peak_states = 0;
};

/// Validity of a closed formula on T: ⟦¬f⟧ projected to states must be empty.
inline CheckResult check_valid(Evaluator& ev, const ExtTransducer& T, const Analysis& a) {
    if (!a.closed) throw Error("formula has free variable '" + a.free[0] + "'");
    auto t0 = std::chrono::steady_clock::now();
    ev.set_var_order(a.vars);
    Nfa bad = ev.negate(ev.eval(a.formula, T), T);
    CheckResult r;
    r.counterexamples = reduce(keep_tracks(bad, {tracks::src}), ev.limits());
    r.witness = shortest_word(r.counterexamples);
    r.valid = !r.witness.has_value();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.peak_states = ev.stats().peak_states;
    return r;
}

inline CheckResult check_valid(const RegularKripke& m, const std::string& formula, const EvalOptions& opts = {}) {
    Evaluator ev(opts);
    return check_valid(ev, init_extended(m, {}, opts.limits), prepare(formula, m));
}

/// Satisfaction set of a closed formula projected to states.
inline Nfa sat_states(Evaluator& ev, const ExtTransducer& T, const Analysis& a) {
    ev.set_var_order(a.vars);
    return reduce(keep_tracks(ev.eval(a.formula, T), {tracks::src}), ev.limits());
}

}  // namespace prmc

#include "prmc/disappearance.hpp"
