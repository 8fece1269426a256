#pragma once

#include <string>

#include "prmc/formula/ast.hpp"

namespace prmc {

namespace detail {

inline std::string term_str(const Term& t) {
    if (t.is_const()) return std::to_string(t.k);
    return t.k ? t.var + "+" + std::to_string(t.k) : t.var;
}

inline bool self_delimited(Kind k) {
    switch (k) {
        case Kind::Top: case Kind::Bottom: case Kind::Prop: case Kind::PropAt:
        case Kind::Not: case Kind::Diamond: case Kind::DiamondAt: case Kind::Knows:
        case Kind::Announce: case Kind::AnnounceConj: case Kind::AnnounceIter: case Kind::AnnounceStar:
            return true;
        default:
            return false;
    }
}

}  // namespace detail

/// Concrete syntax accepted by parse_formula. Binary connectives and
/// quantifiers are always parenthesized.
inline std::string to_string(const Formula& f) {
    auto operand = [](const Formula& g) {
        std::string s = to_string(g);
        return detail::self_delimited(g->kind) ? s : "(" + s + ")";
    };
    auto bin = [&](const char* op) { return "(" + to_string(f->kids[0]) + " " + op + " " + to_string(f->kids[1]) + ")"; };
    switch (f->kind) {
        case Kind::Top: return "true";
        case Kind::Bottom: return "false";
        case Kind::Not: return "!" + operand(f->kids[0]);
        case Kind::And: return bin("&");
        case Kind::Or: return bin("|");
        case Kind::Implies: return bin("->");
        case Kind::Iff: return bin("<->");
        case Kind::Exists: return "(E " + f->var + ": " + to_string(f->kids[0]) + ")";
        case Kind::Forall: return "(A " + f->var + ": " + to_string(f->kids[0]) + ")";
        case Kind::AtZero: return f->var + " = 0";
        case Kind::ModZero: return f->var + " % " + std::to_string(f->k) + " = 0";
        case Kind::Offset: return f->var + " = " + f->var2 + "+" + std::to_string(f->k);
        case Kind::Prop: return f->name + "_" + f->var;
        case Kind::Diamond: return "<" + f->var + "> " + operand(f->kids[0]);
        case Kind::Announce: return "[! " + to_string(f->kids[0]) + "] " + operand(f->kids[1]);
        case Kind::AnnounceStar: return "[! " + to_string(f->kids[0]) + "]* " + operand(f->kids[1]);
        case Kind::AnnounceConj: return "[!! " + to_string(f->kids[0]) + "] " + operand(f->kids[1]);
        case Kind::AnnounceIter: return "[! " + to_string(f->kids[0]) + "]^" + std::to_string(f->k) + " " + operand(f->kids[1]);
        case Kind::Eq: return detail::term_str(f->lhs) + " = " + detail::term_str(f->rhs);
        case Kind::Neq: return detail::term_str(f->lhs) + " != " + detail::term_str(f->rhs);
        case Kind::Mod: return detail::term_str(f->lhs) + " % " + std::to_string(f->k) + " = 0";
        case Kind::PropAt:
            return f->name + "_" + (f->lhs.is_const() || f->lhs.k == 0 ? detail::term_str(f->lhs) : "{" + detail::term_str(f->lhs) + "}");
        case Kind::DiamondAt: return "<" + detail::term_str(f->lhs) + "> " + operand(f->kids[0]);
        case Kind::Knows: return "K " + detail::term_str(f->lhs) + " " + operand(f->kids[0]);
    }
    return "?";
}

}  // namespace prmc
