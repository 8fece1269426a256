#include <gtest/gtest.h>

#include <random>
#include <set>

#include "prmc/kripke.hpp"
#include "support.hpp"

using namespace prmc;
using namespace testing_support;

namespace {

RegularKripke muddy() { return load_model(std::string(PRMC_SOURCE_DIR) + "/models/muddy.kripke"); }

const char* kHeader = "alphabet: m c\nprops: m = {m}; c = {}\ntransducer:\n";

// Explicit relation of agent i at length l, read off the transducer.
std::set<std::pair<Word, Word>> explicit_relation(const RegularKripke& m, std::size_t l, std::size_t agent) {
    std::set<std::pair<Word, Word>> rel;
    const auto& L = m.trans().layout();
    for (const auto& w : enumerate_length(m.trans(), l)) {
        if (L.component(w[agent], 1) != 1) continue;
        Word s, t;
        for (Letter x : w) s.push_back(L.component(x, 0)), t.push_back(L.component(x, 2));
        rel.emplace(s, t);
    }
    return rel;
}

struct ExplicitS5 {
    bool refl = true, sym = true, trans = true;
};

ExplicitS5 explicit_s5(const RegularKripke& m, std::size_t maxlen) {
    ExplicitS5 r;
    const auto S = state_space(m);
    for (std::size_t l = 1; l <= maxlen; ++l) {
        auto states = enumerate_length(S, l);
        for (std::size_t i = 0; i < l; ++i) {
            auto rel = explicit_relation(m, l, i);
            for (const auto& s : states) r.refl = r.refl && rel.count({s, s});
            for (const auto& [s, t] : rel) r.sym = r.sym && rel.count({t, s});
            for (const auto& [s, t] : rel)
                for (const auto& [t2, u] : rel)
                    if (t2 == t) r.trans = r.trans && rel.count({s, u});
        }
    }
    return r;
}

}  // namespace

TEST(Model, MuddyParses) {
    auto m = muddy();
    const auto& L = m.trans().layout();
    EXPECT_TRUE(m.trans().accepts(L.word_from_strings({"ccm", "001", "ccc"})));
    EXPECT_FALSE(m.trans().accepts(L.word_from_strings({"ccm", "010", "ccc"})));
    EXPECT_EQ(m.props(), std::vector<std::string>{"m"});
    EXPECT_TRUE(m.holds(0, 0));
    EXPECT_FALSE(m.holds(0, 1));
}

TEST(Model, EmptyTransducerIsVacuous) {
    auto m = parse_model(std::string(kHeader));
    EXPECT_TRUE(is_empty(state_space(m)));
    auto r = check_s5(m);
    EXPECT_TRUE(r.ok());
}

TEST(Model, TwoObservationBitsRejected) {
    try {
        parse_model(std::string(kHeader) + "initial: p\naccepting: q\ntrans: p (m,1,m) r\ntrans: r (m,1,m) q\n");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.check(), "obs-shape");
        EXPECT_EQ(e.witness(), "mm|11|mm");
    }
}

TEST(Model, MissingLoopBreaksReflexivity) {
    const std::string doc = std::string(kHeader) +
                            "initial: p\naccepting: q\ntrans: p (m,0,m) p\ntrans: p (*,1,*) q\n"
                            "trans: q (m,0,m) q\ntrans: q (c,0,c) q\n";
    // oracle: shortest (then lex) s ⊗ V(i) ⊗ s missing, with s in the state space
    Nfa t = parse_automaton("tracks: src:m,c obs:0,1 tgt:m,c\n" + doc.substr(doc.find("initial")));
    Nfa S = keep_tracks(t, {"src"});
    std::string expect;
    for (std::size_t l = 1; l <= 3 && expect.empty(); ++l) {
        std::vector<Word> missing;
        for (const auto& s : enumerate_length(S, l))
            for (std::size_t i = 0; i < l; ++i) {
                Word w;
                for (std::size_t p = 0; p < l; ++p) {
                    std::uint32_t c[3] = {std::uint32_t(s[p]), p == i ? 1u : 0u, std::uint32_t(s[p])};
                    w.push_back(t.layout().encode(c));
                }
                if (!t.accepts(w)) missing.push_back(w);
            }
        if (!missing.empty()) expect = t.layout().word_to_string(*std::min_element(missing.begin(), missing.end()));
    }
    ASSERT_FALSE(expect.empty());
    try {
        parse_model(doc);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.check(), "reflexivity");
        EXPECT_EQ(e.witness(), expect);
    }
}

TEST(Model, SyntaxErrorsCarryLines) {
    try {
        parse_model("alphabet: m c\nbogus: 1\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(parse_model("alphabet: m c\nprops: x = {m}\n"), ParseError);
    EXPECT_THROW(parse_model(std::string(kHeader) + "initial: p\ntrans: p (z,0,m) p\n"), ParseError);
}

TEST(S5, MuddyAllTrueAndMatchesExplicitClosure) {
    auto m = muddy();
    auto r = check_s5(m);
    EXPECT_TRUE(r.reflexive);
    EXPECT_TRUE(r.symmetric);
    EXPECT_TRUE(r.transitive);
    auto e = explicit_s5(m, 4);
    EXPECT_TRUE(e.refl && e.sym && e.trans);
}

TEST(S5, OneDirectionalEdge) {
    const std::string doc = std::string(kHeader) +
                            "initial: p x\naccepting: q z\n"
                            "trans: p (m,0,m) p\ntrans: p (c,0,c) p\ntrans: p (m,1,m) q\ntrans: p (c,1,c) q\n"
                            "trans: q (m,0,m) q\ntrans: q (c,0,c) q\n"
                            "trans: x (m,0,m) y\ntrans: y (m,1,c) z\n";
    auto m = parse_model(doc);
    auto r = check_s5(m);
    EXPECT_TRUE(r.reflexive);
    EXPECT_FALSE(r.symmetric);
    EXPECT_EQ(r.symmetric_witness, "mm|01|mc");
    EXPECT_TRUE(r.transitive);
    auto e = explicit_s5(m, 3);
    EXPECT_FALSE(e.sym);
}

TEST(S5, NonTransitiveDetected) {
    // extra agent-0 edges at length two whose composite is missing
    const std::string doc = std::string(kHeader) +
                            "initial: p\naccepting: q\n"
                            "trans: p (m,0,m) p\ntrans: p (c,0,c) p\ntrans: p (m,1,m) q\ntrans: p (c,1,c) q\n"
                            "trans: q (m,0,m) q\ntrans: q (c,0,c) q\n"
                            "trans: p (m,1,c) a\ntrans: a (m,0,m) q\n"
                            "trans: p (c,1,m) b\ntrans: b (m,0,c) q\n"
                            "trans: p (m,1,c) c\ntrans: c (c,0,m) q\n";
    auto m = parse_model(doc);
    auto r = check_s5(m);
    auto e = explicit_s5(m, 2);
    EXPECT_EQ(r.transitive, e.trans);
    EXPECT_EQ(r.symmetric, e.sym);
    EXPECT_FALSE(r.transitive);
}

TEST(Restrict, StateSpaceLaws) {
    auto m = muddy();
    auto L = m.state_layout();
    Nfa K = regex(L, ".*m.*");
    auto r = restrict(m, K);
    EXPECT_TRUE(same_language(state_space(r), regex(L, ".*m.*")));
    EXPECT_TRUE(same_language(restrict(m, state_space(m)).trans(), m.trans()));
    EXPECT_TRUE(is_empty(restrict(m, empty_language(L)).trans()));
    EXPECT_THROW(restrict(m, regex(mc_layout("x"), "m")), LayoutError);
}

TEST(Restrict, PreservesS5AndShrinks) {
    auto m = muddy();
    auto L = m.state_layout();
    std::mt19937 rng(5);
    for (int i = 0; i < 10; ++i) {
        Nfa K = random_nfa(L, rng, 3, 0.35);
        auto r = restrict(m, K);
        EXPECT_TRUE(is_subset(r.trans(), m.trans()));
        EXPECT_TRUE(same_language(state_space(r), intersect(state_space(m), K)));
        EXPECT_TRUE(check_s5(r).ok());
    }
}

TEST(Context, SlicesMatchRestriction) {
    auto base = std::make_shared<const RegularKripke>(muddy());
    Track ctx{tracks::ctx, base->alphabet()};
    TrackLayout Lsc({base->state_track(), ctx});
    Nfa full = universal_language(Lsc);
    Nfa eq = constraint::equal(base->state_track(), ctx);
    // R = {(t,u) | t has no more m than u}, approximated regularly: u ≥ t letterwise
    Nfa mono = parse_automaton("tracks: src:m,c ctx:m,c\ninitial: a\naccepting: a\ntrans: a (m,m) a\ntrans: a (c,c) a\ntrans: a (m,c) a\n");
    for (const Nfa* cons : {&full, &eq, &mono}) {
        auto ck = extend_context(base, ctx, *cons);
        for (std::size_t l = 1; l <= 4; ++l) {
            for (const auto& c : words_exactly(TrackLayout({ctx}), l)) {
                std::vector<Word> keep;
                for (const auto& s : words_exactly(base->state_layout(), l)) {
                    Word w;
                    for (std::size_t p = 0; p < l; ++p) {
                        std::uint32_t cc[2] = {std::uint32_t(s[p]), std::uint32_t(c[p])};
                        w.push_back(Lsc.encode(cc));
                    }
                    if (cons->accepts(w)) keep.push_back(s);
                }
                auto expect = restrict(*base, from_words(base->state_layout(), keep));
                auto got = slice(ck, c);
                ASSERT_TRUE(same_language(intersect(got.trans(), words_of_length(got.trans().layout(), l)),
                                          intersect(expect.trans(), words_of_length(got.trans().layout(), l))));
            }
        }
    }
}
