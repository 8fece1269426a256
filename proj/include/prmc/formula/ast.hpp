#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace prmc {

/// Index term: `var + k`, or the constant `k` when `var` is empty.
struct Term {
    std::string var;
    std::size_t k = 0;

    bool is_const() const { return var.empty(); }
    bool operator==(const Term&) const = default;
};

enum class Kind {
    // core
    Top,
    Not,
    And,
    Exists,   // var, kid0
    AtZero,   // var = 0
    ModZero,  // var % k = 0
    Offset,   // var = var2 + k
    Prop,     // name at position var
    Diamond,  // <var> kid0
    Announce,      // [kid0 !] kid1
    AnnounceStar,  // [kid0 !]* kid1
    // sugar
    Bottom,
    Or,
    Implies,
    Iff,
    Forall,
    Eq,              // lhs = rhs
    Neq,             // lhs != rhs
    Mod,             // lhs % k = 0
    PropAt,          // name at term lhs
    DiamondAt,       // <lhs> kid0
    Knows,           // K lhs kid0
    AnnounceConj,    // [!!kid0] kid1
    AnnounceIter,    // [!kid0]^k kid1
};

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
    Kind kind;
    std::vector<Formula> kids;
    std::string var, var2, name;
    Term lhs, rhs;
    std::size_t k = 0;
    std::size_t line = 0, column = 0;
};

namespace fm {

inline Formula make(Node n) { return std::make_shared<const Node>(std::move(n)); }

inline Formula top() { return make({Kind::Top, {}, {}, {}, {}, {}, {}, 0}); }
inline Formula bottom() { return make({Kind::Bottom, {}, {}, {}, {}, {}, {}, 0}); }
inline Formula neg(Formula a) { return make({Kind::Not, {std::move(a)}, {}, {}, {}, {}, {}, 0}); }
inline Formula conj(Formula a, Formula b) { return make({Kind::And, {std::move(a), std::move(b)}, {}, {}, {}, {}, {}, 0}); }
inline Formula disj(Formula a, Formula b) { return make({Kind::Or, {std::move(a), std::move(b)}, {}, {}, {}, {}, {}, 0}); }
inline Formula implies(Formula a, Formula b) { return make({Kind::Implies, {std::move(a), std::move(b)}, {}, {}, {}, {}, {}, 0}); }
inline Formula iff(Formula a, Formula b) { return make({Kind::Iff, {std::move(a), std::move(b)}, {}, {}, {}, {}, {}, 0}); }
inline Formula exists(std::string v, Formula a) { return make({Kind::Exists, {std::move(a)}, std::move(v), {}, {}, {}, {}, 0}); }
inline Formula forall(std::string v, Formula a) { return make({Kind::Forall, {std::move(a)}, std::move(v), {}, {}, {}, {}, 0}); }
inline Formula at_zero(std::string v) { return make({Kind::AtZero, {}, std::move(v), {}, {}, {}, {}, 0}); }
inline Formula mod_zero(std::string v, std::size_t k) { return make({Kind::ModZero, {}, std::move(v), {}, {}, {}, {}, k}); }
inline Formula offset(std::string i, std::string j, std::size_t k) { return make({Kind::Offset, {}, std::move(i), std::move(j), {}, {}, {}, k}); }
inline Formula prop(std::string p, std::string v) { return make({Kind::Prop, {}, std::move(v), {}, std::move(p), {}, {}, 0}); }
inline Formula diamond(std::string v, Formula a) { return make({Kind::Diamond, {std::move(a)}, std::move(v), {}, {}, {}, {}, 0}); }
inline Formula announce(Formula a, Formula b) { return make({Kind::Announce, {std::move(a), std::move(b)}, {}, {}, {}, {}, {}, 0}); }
inline Formula announce_star(Formula a, Formula b) { return make({Kind::AnnounceStar, {std::move(a), std::move(b)}, {}, {}, {}, {}, {}, 0}); }
inline Formula announce_conj(Formula a, Formula b) { return make({Kind::AnnounceConj, {std::move(a), std::move(b)}, {}, {}, {}, {}, {}, 0}); }
inline Formula announce_iter(Formula a, Formula b, std::size_t n) { return make({Kind::AnnounceIter, {std::move(a), std::move(b)}, {}, {}, {}, {}, {}, n}); }
inline Formula eq(Term a, Term b) { return make({Kind::Eq, {}, {}, {}, {}, std::move(a), std::move(b), 0}); }
inline Formula neq(Term a, Term b) { return make({Kind::Neq, {}, {}, {}, {}, std::move(a), std::move(b), 0}); }
inline Formula mod(Term a, std::size_t k) { return make({Kind::Mod, {}, {}, {}, {}, std::move(a), {}, k}); }
inline Formula prop_at(std::string p, Term t) { return make({Kind::PropAt, {}, {}, {}, std::move(p), std::move(t), {}, 0}); }
inline Formula diamond_at(Term t, Formula a) { return make({Kind::DiamondAt, {std::move(a)}, {}, {}, {}, std::move(t), {}, 0}); }
inline Formula knows(Term t, Formula a) { return make({Kind::Knows, {std::move(a)}, {}, {}, {}, std::move(t), {}, 0}); }

/// Copy of `f` with new children.
inline Formula with_kids(const Formula& f, std::vector<Formula> kids) {
    Node n = *f;
    n.kids = std::move(kids);
    return make(std::move(n));
}

}  // namespace fm

inline bool is_core(Kind k) { return k <= Kind::AnnounceStar; }

/// Structural equality.
inline bool same_formula(const Formula& a, const Formula& b) {
    if (a == b) return true;
    if (a->kind != b->kind || a->var != b->var || a->var2 != b->var2 || a->name != b->name || !(a->lhs == b->lhs) ||
        !(a->rhs == b->rhs) || a->k != b->k || a->kids.size() != b->kids.size())
        return false;
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (!same_formula(a->kids[i], b->kids[i])) return false;
    return true;
}

}  // namespace prmc
