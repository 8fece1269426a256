#pragma once

#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "prmc/semantics.hpp"

namespace prmc {

/// S_0 ∩ Σ^l ⊇ S_1 ∩ Σ^l ⊇ ... up to the first repeated set.
using Rounds = std::vector<std::vector<Word>>;

/// A state-shrinking operator F with F(X) ⊆ X. Words are over the state
/// alphabet (one letter per alphabet index).
class RestrictionOperator {
public:
    virtual ~RestrictionOperator() = default;

    virtual const std::vector<std::string>& alphabet() const = 0;
    /// S_0, over a single src track.
    virtual const Nfa& initial_states() const = 0;
    /// F(X) for a finite set of words of length `len`.
    virtual std::vector<Word> apply_at_length(const std::vector<Word>& xs, std::size_t len) = 0;

    virtual bool has_uniform() const { return false; }
    /// {(t, c) | t ∈ F({u | (u, c) ∈ r})}; r and the result are over (src, ctx).
    virtual Nfa uniform_apply(const Nfa&) { throw Error("operator has no uniform realization"); }

    virtual Rounds iterate_at_length(std::size_t len, const Limits& lim) {
        Rounds out{enumerate_length(initial_states(), len, lim)};
        while (true) {
            auto next = out.back().empty() ? std::vector<Word>{} : apply_at_length(out.back(), len);
            if (next == out.back()) return out;
            out.push_back(std::move(next));
        }
    }

    TrackLayout state_layout() const { return TrackLayout({Track{tracks::src, alphabet()}}); }
    /// Layout of L_≼: s on src, t on tgt.
    TrackLayout pair_layout() const { return TrackLayout({Track{tracks::src, alphabet()}, Track{tracks::tgt, alphabet()}}); }
};

/// F_φ(X) = ⟦φ⟧(m restricted to X) for a closed star-free φ (core, renamed).
class FormulaOperator : public RestrictionOperator {
public:
    FormulaOperator(RegularKripke m, Analysis phi, EvalOptions opts = {})
        : m_(std::make_shared<const RegularKripke>(std::move(m))), phi_(std::move(phi)), opts_(std::move(opts)) {
        if (!phi_.closed) throw UnsupportedStar("announced formula has free variable '" + phi_.free[0] + "'");
        if (!phi_.star_free) throw UnsupportedStar("announced formula contains an iterated announcement");
        opts_.dot_dir.clear();
        s0_ = state_space(*m_);
    }

    const std::vector<std::string>& alphabet() const override { return m_->alphabet(); }
    const Nfa& initial_states() const override { return s0_; }
    const RegularKripke& model() const { return *m_; }

    std::vector<Word> apply_at_length(const std::vector<Word>& xs, std::size_t len) override {
        if (xs.empty()) return {};
        RegularKripke sub = restrict(*m_, reduce(from_words(m_->state_layout(), xs), opts_.limits), opts_.limits);
        Evaluator ev(opts_);
        Nfa sat = sat_states(ev, init_extended(sub, {}, opts_.limits), phi_);
        return enumerate_length(sat, len, opts_.limits);
    }

    bool has_uniform() const override { return true; }

    Nfa uniform_apply(const Nfa& r) override {
        ContextKripke ck = extend_context(m_, Track{tracks::ctx, alphabet()}, r, opts_.limits);
        Evaluator ev(opts_);
        ev.set_var_order(phi_.vars);
        Nfa sat = ev.eval(phi_.formula, init_extended(ck, opts_.limits));
        return reduce(keep_tracks(sat, {tracks::src, tracks::ctx}), opts_.limits);
    }

private:
    std::shared_ptr<const RegularKripke> m_;
    Analysis phi_;
    EvalOptions opts_;
    Nfa s0_;
};

/// F = identity on a given state space: nothing ever disappears.
class IdentityOperator : public RestrictionOperator {
public:
    IdentityOperator(std::vector<std::string> alphabet, Nfa states) : alphabet_(std::move(alphabet)), s0_(reduce(states)) {}

    const std::vector<std::string>& alphabet() const override { return alphabet_; }
    const Nfa& initial_states() const override { return s0_; }
    std::vector<Word> apply_at_length(const std::vector<Word>& xs, std::size_t) override { return xs; }
    bool has_uniform() const override { return true; }
    Nfa uniform_apply(const Nfa& r) override { return r; }

private:
    std::vector<std::string> alphabet_;
    Nfa s0_;
};

/// Over a*b*: a^n b^m survives a round iff n = m = 0, or n, m > 0 and
/// a^(n-1) b^(m-1) survived the previous one. Not length-local, so rounds are
/// computed over all lengths up to the requested one.
class CountingOperator : public RestrictionOperator {
public:
    CountingOperator() : alphabet_{"a", "b"} { s0_ = reduce(regex(state_layout(), "a*b*")); }

    const std::vector<std::string>& alphabet() const override { return alphabet_; }
    const Nfa& initial_states() const override { return s0_; }

    std::vector<Word> apply_at_length(const std::vector<Word>&, std::size_t) override {
        throw Error("counting operator looks at shorter words; use iterate_at_length");
    }

    Rounds iterate_at_length(std::size_t len, const Limits&) override {
        // alive[n][m] for n + m <= len
        std::vector<std::vector<char>> alive(len + 1, std::vector<char>(len + 1, 0));
        for (std::size_t n = 0; n <= len; ++n)
            for (std::size_t m = 0; n + m <= len; ++m) alive[n][m] = 1;
        auto slice = [&] {
            std::vector<Word> out;
            for (std::size_t n = len + 1; n-- > 0;)
                if (alive[n][len - n]) {
                    Word w(n, 0);
                    w.resize(len, 1);
                    out.push_back(w);
                }
            return out;
        };
        Rounds out{slice()};
        while (true) {
            auto next = alive;
            for (std::size_t n = 0; n <= len; ++n)
                for (std::size_t m = 0; n + m <= len; ++m) {
                    bool keep = (n == 0 && m == 0) || (n > 0 && m > 0 && alive[n - 1][m - 1]);
                    next[n][m] = alive[n][m] && keep;
                }
            if (next == alive) break;
            alive.swap(next);
            out.push_back(slice());
        }
        while (out.size() > 1 && out.back() == out[out.size() - 2]) out.pop_back();
        return out;
    }

private:
    std::vector<std::string> alphabet_;
    Nfa s0_;
};

// ---------------------------------------------------------------------------
// Brute force

/// Round at which each word of S_0 ∩ Σ^l leaves (SIZE_MAX: never).
inline std::map<Word, std::size_t> drop_rounds(const Rounds& rounds) {
    std::map<Word, std::size_t> out;
    for (std::size_t k = 0; k < rounds.size(); ++k)
        for (const auto& w : rounds[k]) out[w] = k + 1 < rounds.size() ? k + 1 : SIZE_MAX;
    return out;
}

/// L_≼ ∩ (Σ×Σ)^l as sorted pair words, from the brute-force rounds.
inline std::vector<Word> true_relation(const RestrictionOperator& op, const std::map<Word, std::size_t>& drop) {
    const Letter k = op.alphabet().size();
    std::vector<Word> out;
    for (const auto& [s, ds] : drop)
        for (const auto& [t, dt] : drop)
            if (ds <= dt) {
                Word w(s.size());
                for (std::size_t i = 0; i < s.size(); ++i) w[i] = s[i] * k + t[i];
                out.push_back(std::move(w));
            }
    std::sort(out.begin(), out.end());
    return out;
}

/// L_≼ ∩ (Σ×Σ)^l as an automaton: the union over rounds j of C_{≤j} ⊗ C_j,
/// where C_j holds the words leaving at round j.
inline Nfa true_relation_automaton(const RestrictionOperator& op, const std::map<Word, std::size_t>& drop, const Limits& lim = {}) {
    std::map<std::size_t, std::vector<Word>> by_round;
    for (const auto& [w, d] : drop) by_round[d].push_back(w);
    const TrackLayout S = op.state_layout();
    Nfa out(op.pair_layout());
    std::vector<Word> below;
    for (const auto& [d, ws] : by_round) {
        below.insert(below.end(), ws.begin(), ws.end());
        std::sort(below.begin(), below.end());
        Nfa lo = reduce(from_words(S, below), lim);
        Nfa at = rename_tracks(reduce(from_words(S, ws), lim), {{tracks::src, tracks::tgt}});
        out = union_of(out, join(lo, at, lim));
    }
    return reduce(out, lim);
}

/// Answers membership and equivalence queries for L_≼ of an operator.
class Teacher {
public:
    Teacher(RestrictionOperator& op, LearnBudget budget = {}, Limits lim = {}) : op_(op), budget_(budget), lim_(lim) {}

    RestrictionOperator& op() { return op_; }
    std::size_t membership_count() const { return mem_; }
    std::size_t equivalence_count() const { return eq_; }

    std::vector<std::size_t> brute_forced_lengths() const {
        std::vector<std::size_t> out;
        for (const auto& [len, _] : drops_) out.push_back(len);
        return out;
    }

    const std::map<Word, std::size_t>& drops(std::size_t len) {
        auto it = drops_.find(len);
        if (it != drops_.end()) return it->second;
        return drops_.emplace(len, drop_rounds(op_.iterate_at_length(len, lim_))).first->second;
    }

    /// s ≼ t; pairs outside S_0 ⊗ S_0 are not in the relation.
    bool member(const Word& s, const Word& t) {
        if (s.size() != t.size()) return false;
        if (++mem_ > budget_.max_membership) throw Diverged("membership budget of " + std::to_string(budget_.max_membership) + " exhausted");
        const auto& d = drops(s.size());
        auto a = d.find(s), b = d.find(t);
        return a != d.end() && b != d.end() && a->second <= b->second;
    }

    bool member_pair(const Word& w) {
        const Letter k = op_.alphabet().size();
        Word s(w.size()), t(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) s[i] = w[i] / k, t[i] = w[i] % k;
        return member(s, t);
    }

    struct Verdict {
        bool equal = true;
        int condition = 0;  ///< failed condition (1-5, or 0 for the bounded check)
        Word counterexample;
        bool certified = true;  ///< false when equality was only checked up to the cap
    };

    Verdict equivalence(const Nfa& r) {
        if (++eq_ > budget_.max_equivalence) throw Diverged("equivalence budget of " + std::to_string(budget_.max_equivalence) + " exhausted");
        auto [cond, len] = find_violation(r);
        Verdict v;
        if (cond < 0) {
            v.certified = op_.has_uniform();
            return v;
        }
        v.equal = false;
        v.condition = cond;
        v.counterexample = counterexample_at(r, len);
        return v;
    }

    /// L_≼ ∩ (Σ×Σ)^len, from brute force.
    const Nfa& truth(std::size_t len) {
        auto it = truth_.find(len);
        if (it != truth_.end()) return it->second;
        return truth_.emplace(len, true_relation_automaton(op_, drops(len), lim_)).first->second;
    }

    /// Smallest pair word of length `len` on which r and L_≼ disagree.
    std::optional<Word> disagreement_at(const Nfa& r, std::size_t len) {
        const Nfa& t = truth(len);
        Nfa rl = reduce(intersect(r, words_of_length(op_.pair_layout(), len), lim_), lim_);
        auto a = shortest_word(difference(t, rl, lim_));
        auto b = shortest_word(difference(rl, t, lim_));
        if (a && b) return std::min(*a, *b);
        return a ? a : b;
    }

    Word counterexample_at(const Nfa& r, std::size_t len) {
        if (len > budget_.length_cap)
            throw Diverged("counterexample needed at length " + std::to_string(len) + ", beyond the cap " + std::to_string(budget_.length_cap));
        auto w = disagreement_at(r, len);
        if (!w) throw Error("equivalence: condition failed at length " + std::to_string(len) + " but the slice is exact");
        return *w;
    }

    /// Condition number and witness length, or {-1, 0} if none fails.
    std::pair<int, std::size_t> find_violation(const Nfa& r) {
        const TrackLayout P = op_.pair_layout();
        require_same_layout(r.layout(), P, "equivalence");
        auto fail = [&](const Nfa& bad) -> std::optional<std::size_t> {
            auto w = shortest_word(bad);
            if (!w) return std::nullopt;
            return w->size();
        };
        const Nfa& S = op_.initial_states();
        Nfa SS = reduce(join(S, rename_tracks(S, {{tracks::src, tracks::tgt}}), lim_), lim_);
        Nfa id = reduce(keep_tracks(join(constraint::equal(Track{tracks::src, op_.alphabet()}, Track{tracks::tgt, op_.alphabet()}), S, lim_), {tracks::src, tracks::tgt}), lim_);
        Nfa rinv = reduce(inverse(r), lim_);

        if (auto l = fail(difference(r, SS, lim_))) return {1, *l};
        if (auto l = fail(difference(id, r, lim_))) return {2, *l};
        if (auto l = fail(difference(SS, union_of(r, rinv), lim_))) return {4, *l};
        Nfa rr = keep_tracks(join(rename_tracks(r, {{tracks::tgt, "mid"}}), rename_tracks(r, {{tracks::src, "mid"}}), lim_), {tracks::src, tracks::tgt});
        if (auto l = fail(difference(rr, r, lim_))) return {3, *l};

        if (!op_.has_uniform()) {
            for (std::size_t len = 0; len <= budget_.length_cap; ++len)
                if (disagreement_at(r, len)) return {0, len};
            return {-1, 0};
        }
        // G(s, t): t ∈ F(↑s), with ↑s read off r
        Nfa up = rename_tracks(r, {{tracks::src, tracks::ctx}, {tracks::tgt, tracks::src}});
        Nfa g = op_.uniform_apply(up);
        g = reduce(keep_tracks(rename_tracks(g, {{tracks::ctx, tracks::src}, {tracks::src, tracks::tgt}}), {tracks::src, tracks::tgt}), lim_);
        // s is fine iff [s] = ↑s \ F(↑s), or [s] = ↑s = F(↑s)
        Nfa cls_and_g = intersect(rinv, g, lim_);
        Nfa b1 = union_of(intersect(r, cls_and_g, lim_), difference(r, union_of(rinv, g), lim_));
        Nfa b2 = difference(r, cls_and_g, lim_);
        Nfa bad = intersect(keep_tracks(b1, {tracks::src}), keep_tracks(b2, {tracks::src}), lim_);
        if (auto l = fail(bad)) return {5, *l};
        return {-1, 0};
    }

private:
    RestrictionOperator& op_;
    LearnBudget budget_;
    Limits lim_;
    std::map<std::size_t, std::map<Word, std::size_t>> drops_;
    std::map<std::size_t, Nfa> truth_;
    std::size_t mem_ = 0, eq_ = 0;
};

// ---------------------------------------------------------------------------
// Learning

struct DisappearanceRelation {
    bool converged = false;
    bool certified = false;  ///< passed the full equivalence check, not just the bounded one
    std::string reason;      ///< why learning stopped without converging
    Nfa relation;            ///< L_≼ (or the last hypothesis), reduced, over (src, tgt)
    std::size_t membership_queries = 0;
    std::size_t equivalence_queries = 0;
    std::size_t hypotheses = 0;
    std::map<std::size_t, bool> verified_lengths;  ///< lengths compared against brute force

    /// States of the complete minimal DFA.
    std::size_t dfa_states() const { return minimize(relation).num_states(); }
};

/// Angluin's L* over Σ×Σ with counterexample suffixes added as columns.
class Learner {
public:
    Learner(RestrictionOperator& op, LearnBudget budget = {}, Limits lim = {}, std::ostream* log = nullptr)
        : teacher_(op, budget, lim), layout_(op.pair_layout()), log_(log) {}

    Teacher& teacher() { return teacher_; }

    DisappearanceRelation run() {
        DisappearanceRelation out;
        out.relation = empty_language(layout_);
        try {
            prefixes_ = {Word{}};
            suffixes_ = {Word{}};
            while (true) {
                close();
                Nfa h = hypothesis();
                ++out.hypotheses;
                out.relation = h;
                log("hypothesis " + std::to_string(out.hypotheses) + " states=" + std::to_string(h.num_states()) +
                    " rows=" + std::to_string(prefixes_.size()) + " columns=" + std::to_string(suffixes_.size()));
                auto v = teacher_.equivalence(h);
                if (v.equal) {
                    out.converged = v.certified;
                    out.certified = v.certified;
                    if (!v.certified) out.reason = "no uniform realization; hypothesis agrees with brute force only up to the length cap";
                    log(v.certified ? "equivalent" : "bounded agreement only");
                    break;
                }
                log("counterexample condition=" + std::to_string(v.condition) + " length=" + std::to_string(v.counterexample.size()) + " " +
                    layout_.word_to_string(v.counterexample));
                add_suffixes(v.counterexample);
            }
        } catch (const Diverged& e) {
            out.reason = e.what();
            log(std::string("diverged: ") + e.what());
        } catch (const CapacityError& e) {
            out.reason = e.what();
            log(std::string("capacity: ") + e.what());
        }
        out.membership_queries = teacher_.membership_count();
        out.equivalence_queries = teacher_.equivalence_count();
        return out;
    }

private:
    Teacher teacher_;
    TrackLayout layout_;
    std::ostream* log_;
    std::vector<Word> prefixes_, suffixes_;
    std::map<Word, bool> mem_;
    std::map<Word, std::vector<char>> rows_;

    void log(const std::string& s) {
        if (log_) *log_ << s << '\n';
    }

    bool query(const Word& w) {
        auto it = mem_.find(w);
        if (it != mem_.end()) return it->second;
        bool r = teacher_.member_pair(w);
        mem_.emplace(w, r);
        return r;
    }

    const std::vector<char>& row(const Word& u) {
        auto& r = rows_[u];
        while (r.size() < suffixes_.size()) {
            Word w = u;
            const auto& e = suffixes_[r.size()];
            w.insert(w.end(), e.begin(), e.end());
            r.push_back(query(w));
        }
        return r;
    }

    void close() {
        for (std::size_t i = 0; i < prefixes_.size(); ++i) {
            for (Letter a = 0; a < layout_.letter_count(); ++a) {
                Word ua = prefixes_[i];
                ua.push_back(a);
                const auto& r = row(ua);
                bool found = false;
                for (const auto& p : prefixes_)
                    if (row(p) == r) {
                        found = true;
                        break;
                    }
                if (!found) prefixes_.push_back(ua);
            }
        }
    }

    Nfa hypothesis() {
        Nfa h(layout_);
        std::map<std::vector<char>, State> state;
        for (const auto& p : prefixes_) {
            const auto& r = row(p);
            if (!state.count(r)) state.emplace(r, h.add_state(r[0] != 0));
        }
        h.set_initial(state.at(row(Word{})));
        std::set<State> done;
        for (const auto& p : prefixes_) {
            State q = state.at(row(p));
            if (!done.insert(q).second) continue;
            for (Letter a = 0; a < layout_.letter_count(); ++a) {
                Word pa = p;
                pa.push_back(a);
                h.add_transition(q, a, state.at(row(pa)));
            }
        }
        h.normalize();
        return reduce(h);
    }

    void add_suffixes(const Word& c) {
        for (std::size_t i = 0; i <= c.size(); ++i) {
            Word e(c.begin() + i, c.end());
            if (std::find(suffixes_.begin(), suffixes_.end(), e) == suffixes_.end()) suffixes_.push_back(e);
        }
    }
};

inline DisappearanceRelation learn_relation(RestrictionOperator& op, LearnBudget budget = {}, Limits lim = {}, std::ostream* log = nullptr) {
    Learner l(op, budget, lim, log);
    auto r = l.run();
    for (std::size_t len : l.teacher().brute_forced_lengths())
        r.verified_lengths[len] = !l.teacher().disagreement_at(r.relation, len);
    return r;
}

// ---------------------------------------------------------------------------
// Iterated announcements

/// Satisfaction set of [φ!]*ψ over T: the states that eventually disappear,
/// plus the states satisfying ψ in some stage m|↑t.
inline Nfa star_semantics(Evaluator& ev, const Formula& f, const ExtTransducer& T) {
    if (!T.params.empty()) throw UnsupportedStar("iterated announcement under an announcement of an open formula or inside another iterated announcement");
    const Limits& lim = ev.limits();
    RegularKripke m = as_kripke(T);
    Analysis phi = analyze(f->kids[0]);
    FormulaOperator op(m, phi, ev.options());
    ++ev.stats().learned_relations;
    auto rel = learn_relation(op, ev.options().budget, lim, ev.options().transcript);
    if (!rel.converged) throw Diverged("learning the disappearance relation did not converge: " + rel.reason);
    const Nfa& r = rel.relation;

    // s survives forever iff s ∈ F(↑s)
    Nfa up = rename_tracks(r, {{tracks::src, tracks::ctx}, {tracks::tgt, tracks::src}});
    Nfa g = op.uniform_apply(up);
    Nfa diag = constraint::equal(Track{tracks::src, m.alphabet()}, Track{tracks::ctx, m.alphabet()});
    Nfa stay = keep_tracks(join(g, diag, lim), {tracks::src});
    Nfa gone = reduce(difference(op.initial_states(), stay, lim), lim);

    ContextKripke ck = extend_context(std::make_shared<const RegularKripke>(m), Track{tracks::ctx, m.alphabet()}, up, lim);
    Nfa body = ev.eval(f->kids[1], init_extended(ck, lim));
    Nfa stages = reduce(drop_tracks(body, {tracks::ctx}), lim);

    Nfa a = ev.align(gone, detail::track_names(stages.layout()), T);
    Nfa b = ev.align(stages, detail::track_names(a.layout()), T);
    return union_of(a, b);
}

}  // namespace prmc
