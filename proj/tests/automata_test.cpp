#include <gtest/gtest.h>

#include <random>
#include <set>

#include "support.hpp"

using namespace prmc;
using namespace testing_support;

namespace {

bool has_m(const TrackLayout& L, const Word& w) { return count_sym(L, w, "m") > 0; }

// Reference minimization by Moore refinement on the completed subset DFA.
std::size_t moore_state_count(const Nfa& a) {
    Nfa d = determinize(a);
    const Letter k = a.layout().letter_count();
    const std::size_t n = d.num_states() + 1;  // last = sink
    auto succ = [&](std::size_t q, Letter l) -> std::size_t {
        if (q + 1 == n) return q;
        for (const auto& t : d.transitions(static_cast<State>(q)))
            if (t.letter == l) return t.target;
        return n - 1;
    };
    std::vector<std::size_t> cls(n);
    for (std::size_t q = 0; q < n; ++q) cls[q] = (q + 1 < n && d.is_accepting(static_cast<State>(q))) ? 1 : 0;
    std::size_t count = 0;
    while (true) {
        std::map<std::vector<std::size_t>, std::size_t> sig;
        std::vector<std::size_t> next(n);
        for (std::size_t q = 0; q < n; ++q) {
            std::vector<std::size_t> s{cls[q]};
            for (Letter l = 0; l < k; ++l) s.push_back(cls[succ(q, l)]);
            next[q] = sig.emplace(s, sig.size()).first->second;
        }
        if (sig.size() == count) break;
        count = sig.size();
        cls = next;
    }
    // only classes reachable from the initial state count
    std::set<std::size_t> reach_cls;
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{d.num_states() ? std::size_t(d.initial()[0]) : n - 1};
    seen[stack[0]] = 1;
    while (!stack.empty()) {
        auto q = stack.back();
        stack.pop_back();
        reach_cls.insert(cls[q]);
        for (Letter l = 0; l < k; ++l)
            if (!seen[succ(q, l)]) seen[succ(q, l)] = 1, stack.push_back(succ(q, l));
    }
    return reach_cls.size();
}

}  // namespace

TEST(Layout, LettersOrderLexicographically) {
    TrackLayout L({Track{"a", {"m", "c"}}, bit_track("b")});
    EXPECT_EQ(L.letter_count(), 4u);
    EXPECT_EQ(L.letter_from_symbols({"m", "1"}), 1u);
    EXPECT_EQ(L.letter_from_symbols({"c", "0"}), 2u);
    EXPECT_EQ(L.letter_to_string(3), "c,1");
    EXPECT_THROW(TrackLayout({bit_track("x"), bit_track("x")}), LayoutError);
    EXPECT_THROW(TrackLayout({Track{"x", {}}}), LayoutError);
}

TEST(Boolean, ComplementIsAnInvolutionOnMuddyTransducer) {
    Nfa t = muddy_transducer();
    Nfa cc = complement(complement(t));
    EXPECT_TRUE(same_language(t, cc));
    for (const auto& w : words_upto(t.layout(), 3)) ASSERT_EQ(t.accepts(w), cc.accepts(w));
}

TEST(Boolean, IntersectContainment) {
    auto L = mc_layout();
    Nfa a = intersect(regex(L, ".*m.*"), regex(L, ".*c"));
    EXPECT_TRUE(a.accepts(w1(L, "mc")));
    EXPECT_FALSE(a.accepts(w1(L, "cc")));
}

TEST(Boolean, DifferenceAgainstSetOracle) {
    auto L = mc_layout();
    Nfa d = difference(regex(L, ".*"), regex(L, ".*m.*"));
    for (const auto& w : words_upto(L, 4)) EXPECT_EQ(d.accepts(w), !has_m(L, w)) << str1(L, w);
    EXPECT_TRUE(same_language(d, regex(L, "c*")));
}

TEST(Boolean, ComplementMembershipToLengthFour) {
    std::mt19937 rng(7);
    auto L = mc_layout();
    for (int i = 0; i < 20; ++i) {
        Nfa a = random_nfa(L, rng, 4, 0.25);
        Nfa c = complement(a);
        for (const auto& w : words_upto(L, 4)) ASSERT_NE(a.accepts(w), c.accepts(w));
    }
}

TEST(Boolean, LayoutMismatchThrows) {
    EXPECT_THROW(union_of(regex(mc_layout("x"), "m"), regex(mc_layout("y"), "m")), LayoutError);
    EXPECT_THROW(intersect(regex(mc_layout("x"), "m"), regex(mc_layout("y"), "m")), LayoutError);
}

TEST(Rational, StarOfEmptyIsEpsilon) {
    auto L = mc_layout();
    EXPECT_TRUE(same_language(star(empty_language(L)), epsilon_language(L)));
}

TEST(Rational, ConcatStarContainedByMembershipSampling) {
    auto L = mc_layout();
    Nfa sm = regex(L, ".*m");
    Nfa a = concat(sm, star(sm));
    for (const auto& w : words_upto(L, 5)) {
        const std::string s = str1(L, w);
        bool oracle = !s.empty() && s.back() == 'm';
        EXPECT_EQ(a.accepts(w), oracle) << s;
        if (a.accepts(w)) {
            EXPECT_TRUE(has_m(L, w));
        }
    }
}

TEST(Rational, TwoConstructionsOfSigmaMSigmaSquared) {
    auto L = mc_layout();
    Nfa msig = concat(single_word(L, w1(L, "m")), universal_language(L));
    Nfa a = concat(universal_language(L), concat(msig, msig));
    Nfa b = regex(L, ".*m.*m.*");
    EXPECT_TRUE(same_language(a, b));
    for (const auto& w : words_upto(L, 5)) EXPECT_EQ(a.accepts(w), count_sym(L, w, "m") >= 2);
}

TEST(Minimize, MuddyTransducerHasThreeStatesWithSink) {
    Nfa m = minimize(muddy_transducer());
    EXPECT_EQ(m.num_states(), 3u);
    EXPECT_EQ(moore_state_count(muddy_transducer()), 3u);
    EXPECT_TRUE(same_language(m, muddy_transducer()));
}

TEST(Minimize, EmptyWithUnreachableStatesIsOneSink) {
    auto L = mc_layout();
    Nfa a(L);
    a.add_states(5);
    a.set_initial(0);
    a.add_transition(1, 0, 2);
    a.set_accepting(2);
    Nfa m = minimize(a);
    EXPECT_EQ(m.num_states(), 1u);
    EXPECT_FALSE(m.is_accepting(0));
    EXPECT_EQ(m.transitions(0).size(), L.letter_count());
}

TEST(Minimize, IdempotentAndMinimalOnRandomNfas) {
    std::mt19937 rng(42);
    TrackLayout L({Track{"x", {"a", "b", "c"}}});
    for (int i = 0; i < 100; ++i) {
        Nfa a = random_nfa(L, rng, 1 + i % 6, 0.2);
        Nfa m = minimize(a);
        Nfa mm = minimize(m);
        ASSERT_EQ(m.num_states(), mm.num_states());
        ASSERT_TRUE(m.is_deterministic());
        ASSERT_EQ(m.num_states(), moore_state_count(a));
        ASSERT_TRUE(same_language(a, m));
    }
}

TEST(Equivalent, SelfIsEqual) {
    Nfa t = muddy_transducer();
    EXPECT_TRUE(equivalent(t, t).equal);
}

TEST(Equivalent, ShortestLexCounterexample) {
    auto L = mc_layout();
    Nfa a = regex(L, ".*"), b = regex(L, ".*m.*");
    auto r = equivalent(a, b);
    ASSERT_FALSE(r.equal);
    // oracle: first word in (length, lex) order in the symmetric difference
    Word expect;
    bool found = false;
    for (const auto& w : words_upto(L, 4))
        if (!found && a.accepts(w) != b.accepts(w)) expect = w, found = true;
    ASSERT_TRUE(found);
    EXPECT_EQ(r.counterexample, expect);
    EXPECT_TRUE(r.counterexample.empty());

    auto r2 = equivalent(regex(L, ".+"), regex(L, ".*m.*"));
    ASSERT_FALSE(r2.equal);
    EXPECT_EQ(str1(L, r2.counterexample), "c");
}

TEST(SyncProduct, Ex36Observation) {
    TrackLayout Ls({Track{"src", {"m", "c"}}}), Lt({Track{"tgt", {"m", "c"}}}), Lo({bit_track("obs")});
    Nfa S = union_of(regex(Ls, "ccm"), regex(Ls, "ccc"));
    Nfa T = union_of(regex(Lt, "ccm"), regex(Lt, "ccc"));
    Nfa V = single_word(Lo, {0, 0, 1});
    Nfa p = join(join(S, V), T);
    EXPECT_EQ(p.layout().track(1).name, "obs");
    EXPECT_TRUE(p.accepts(p.layout().word_from_strings({"ccm", "001", "ccc"})));
    EXPECT_FALSE(p.accepts(p.layout().word_from_strings({"ccm", "010", "ccc"})));
    EXPECT_TRUE(muddy_transducer().accepts(p.layout().word_from_strings({"ccm", "001", "ccc"})));
}

TEST(SyncProduct, WithEmptyIsEmpty) {
    auto A = regex(mc_layout("x"), ".*m");
    EXPECT_TRUE(is_empty(join(A, empty_language(mc_layout("y")))));
}

TEST(SyncProduct, ProjectionIsLengthFilter) {
    auto Lx = mc_layout("x"), Ly = mc_layout("y");
    Nfa A = regex(Lx, "(mc)*m?");
    Nfa B = regex(Ly, "(cc|m)*");
    Nfa back = keep_tracks(join(A, B), {"x"});
    std::set<std::size_t> blens;
    for (const auto& v : words_upto(Ly, 4))
        if (B.accepts(v)) blens.insert(v.size());
    for (const auto& w : words_upto(Lx, 4)) EXPECT_EQ(back.accepts(w), A.accepts(w) && blens.count(w.size()) > 0);
}

TEST(ProjectMap, StateSpaceOfMuddyIsSigmaPlus) {
    Nfa s = keep_tracks(muddy_transducer(), {"src"});
    auto L = s.layout();
    for (const auto& w : words_upto(L, 4)) EXPECT_EQ(s.accepts(w), !w.empty());
    // every nonempty word; ε has no agent and hence no transition
    EXPECT_TRUE(same_language(s, regex(L, ".+")));
}

TEST(ProjectMap, IdentityAndDoubleReorder) {
    Nfa t = muddy_transducer();
    Nfa id = map_letters(t, t.layout(), [](Letter l) { return l; });
    EXPECT_TRUE(same_language(t, id));
    Nfa r = keep_tracks(keep_tracks(t, {"tgt", "src", "obs"}), {"src", "obs", "tgt"});
    EXPECT_TRUE(same_language(t, r));
}

TEST(TrackConstraint, OffsetZero) {
    Nfa o = constraint::offset("i", "j", 0);
    const auto& L = o.layout();
    EXPECT_TRUE(o.accepts(L.word_from_strings({"010", "010"})));
    EXPECT_FALSE(o.accepts(L.word_from_strings({"10", "01"})));
}

TEST(TrackConstraint, OffsetAgainstArithmetic) {
    for (std::size_t k = 0; k <= 3; ++k) {
        Nfa o = constraint::offset("i", "j", k);
        for (const auto& w : words_upto(o.layout(), 5)) {
            int ones_i = 0, ones_j = 0, pi = -1, pj = -1;
            for (std::size_t p = 0; p < w.size(); ++p) {
                if (o.layout().component(w[p], 0)) ++ones_i, pi = int(p);
                if (o.layout().component(w[p], 1)) ++ones_j, pj = int(p);
            }
            bool oracle = ones_i == 1 && ones_j == 1 && pj == pi + int(k);
            ASSERT_EQ(o.accepts(w), oracle);
        }
    }
}

TEST(TrackConstraint, ExactlyOneAndModZero) {
    Nfa e = constraint::exactly_one("i");
    const auto& L = e.layout();
    EXPECT_TRUE(e.accepts(L.word_from_strings({"010"})));
    EXPECT_FALSE(e.accepts(L.word_from_strings({"011"})));
    EXPECT_FALSE(e.accepts(L.word_from_strings({"000"})));
    Nfa m3 = constraint::mod_zero("i", 3);
    EXPECT_TRUE(m3.accepts(L.word_from_strings({"000100"})));
    EXPECT_FALSE(m3.accepts(L.word_from_strings({"001000"})));
    for (const auto& w : words_upto(L, 7)) {
        int ones = 0, pos = -1;
        for (std::size_t p = 0; p < w.size(); ++p)
            if (w[p]) ++ones, pos = int(p);
        ASSERT_EQ(m3.accepts(w), ones == 1 && pos % 3 == 0);
    }
}

TEST(TrackConstraint, ExactlyOneMeetAtZero) {
    Nfa a = intersect(constraint::exactly_one("i"), constraint::at_zero("i"));
    EXPECT_TRUE(same_language(a, regex(a.layout(), "10*")));
}

TEST(TrackConstraint, EqualTracks) {
    Nfa e = constraint::equal(Track{"x", {"m", "c"}}, Track{"y", {"m", "c"}});
    EXPECT_TRUE(e.accepts(e.layout().word_from_strings({"mcm", "mcm"})));
    EXPECT_FALSE(e.accepts(e.layout().word_from_strings({"mcm", "mcc"})));
    EXPECT_THROW(constraint::equal(Track{"x", {"m"}}, Track{"y", {"c"}}), LayoutError);
    EXPECT_THROW(keep_tracks(e, {"z"}), LayoutError);
}

TEST(Enumerate, ExactSets) {
    auto L = mc_layout();
    auto ws = enumerate_length(regex(L, ".*m.*"), 2);
    std::set<std::string> got;
    for (const auto& w : ws) got.insert(str1(L, w));
    EXPECT_EQ(got, (std::set<std::string>{"mm", "mc", "cm"}));
    EXPECT_EQ(enumerate_length(regex(L, "m*"), 0).size(), 1u);
    EXPECT_EQ(enumerate_length(regex(L, "m+"), 0).size(), 0u);
    for (std::size_t l = 0; l <= 5; ++l) EXPECT_EQ(enumerate_length(universal_language(L), l).size(), std::size_t(1) << l);
    Limits lim;
    lim.max_enum = 10;
    EXPECT_THROW(enumerate_length(universal_language(L), 4, lim), CapacityError);
    EXPECT_EQ(count_length(universal_language(L), 10), 1024u);
}

TEST(Enumerate, FromWordsRoundTrip) {
    auto L = mc_layout();
    Nfa a = regex(L, "(m|cc)*");
    auto ws = enumerate_length(a, 4);
    EXPECT_TRUE(same_language(from_words(L, ws), intersect(a, words_of_length(L, 4))));
}

TEST(Relations, ComposeInverse) {
    Track x{"x", {"m", "c"}}, y{"y", {"m", "c"}}, z{"z", {"m", "c"}};
    auto Ls = mc_layout("x");
    Nfa S = regex(Ls, ".*m.*");
    Nfa id = intersect(constraint::equal(x, y), extend_to(S, TrackLayout({x, y})));
    std::mt19937 rng(3);
    TrackLayout Lxy({x, y});
    for (int i = 0; i < 10; ++i) {
        Nfa r = random_nfa(Lxy, rng, 3, 0.3);
        Nfa lhs = compose(id, rename_tracks(r, {{"x", "y"}, {"y", "z"}}), "y");
        Nfa rhs = intersect(r, extend_to(S, Lxy));
        EXPECT_TRUE(same_language(rename_tracks(lhs, {{"z", "y"}}), rhs));
        EXPECT_TRUE(same_language(inverse(inverse(r)), r));
    }
}

TEST(Relations, ComposeAssociative) {
    std::mt19937 rng(11);
    Track x{"x", {"m", "c"}}, y{"y", {"m", "c"}};
    TrackLayout Lxy({x, y});
    auto comp = [](const Nfa& r, const Nfa& s) {
        Nfa c = compose(rename_tracks(r, {{"y", "mid"}}), rename_tracks(s, {{"x", "mid"}}), "mid");
        return keep_tracks(c, {"x", "y"});
    };
    for (int i = 0; i < 5; ++i) {
        Nfa a = random_nfa(Lxy, rng, 3, 0.25), b = random_nfa(Lxy, rng, 3, 0.25), c = random_nfa(Lxy, rng, 3, 0.25);
        Nfa l = comp(comp(a, b), c), r = comp(a, comp(b, c));
        for (const auto& w : words_upto(Lxy, 3)) ASSERT_EQ(l.accepts(w), r.accepts(w));
        // set oracle on length-2 pairs
        for (const auto& w : words_exactly(Lxy, 2)) {
            bool oracle = false;
            for (const auto& u : words_exactly(Lxy, 2)) {
                for (const auto& v : words_exactly(Lxy, 2)) {
                    // a(x=w.x, y=u.x) b(x=u.x, y=v.x) c(x=v.x, y=w.y)
                    Word wa, wb, wc;
                    for (int p = 0; p < 2; ++p) {
                        std::uint32_t cx[2] = {Lxy.component(w[p], 0), Lxy.component(u[p], 0)};
                        std::uint32_t cy[2] = {Lxy.component(u[p], 0), Lxy.component(v[p], 0)};
                        std::uint32_t cz[2] = {Lxy.component(v[p], 0), Lxy.component(w[p], 1)};
                        wa.push_back(Lxy.encode(cx));
                        wb.push_back(Lxy.encode(cy));
                        wc.push_back(Lxy.encode(cz));
                    }
                    oracle = oracle || (a.accepts(wa) && b.accepts(wb) && c.accepts(wc));
                }
            }
            ASSERT_EQ(l.accepts(w), oracle);
        }
    }
}

TEST(TextFormat, RoundTripAndErrors) {
    Nfa t = muddy_transducer();
    Nfa back = parse_automaton(print_automaton(t));
    EXPECT_TRUE(same_language(t, back));
    EXPECT_THROW(parse_automaton("tracks: a:0,1\ntrans: p (0,1) q\n"), ParseError);
    EXPECT_THROW(parse_automaton("states: p\n"), ParseError);
    try {
        parse_automaton("tracks: a:0,1\ntrans: p (2) q\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    std::string dot = to_dot(minimize(t));
    EXPECT_NE(dot.find("digraph"), std::string::npos);
    EXPECT_NE(dot.find("m,0,m"), std::string::npos);
}

TEST(Capacity, DeterminizeCap) {
    Limits lim;
    lim.max_states = 4;
    auto L = mc_layout();
    // (m|c)*m(m|c)^3 needs 16 subsets
    EXPECT_THROW(determinize(regex(L, ".*m..."), lim), CapacityError);
}
