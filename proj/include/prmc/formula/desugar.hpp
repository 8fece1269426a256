#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "prmc/error.hpp"
#include "prmc/formula/ast.hpp"

namespace prmc {

namespace detail {

class Desugarer {
public:
    Formula run(const Formula& f) {
        auto it = memo_.find(f.get());
        if (it != memo_.end()) return it->second;
        Formula r = go(f);
        memo_.emplace(f.get(), r);
        return r;
    }

private:
    std::size_t fresh_ = 0;
    std::map<const Node*, Formula> memo_;

    // Internal names cannot be written in concrete syntax, so they never capture.
    std::string fresh() { return "_" + std::to_string(fresh_++); }

    Formula const_eq(const std::string& x, std::size_t c) {
        if (c == 0) return fm::at_zero(x);
        std::string z = fresh();
        return fm::exists(z, fm::conj(fm::at_zero(z), fm::offset(x, z, c)));
    }

    // x = t for a plain variable x
    Formula var_eq(const std::string& x, const Term& t) {
        if (t.is_const()) return const_eq(x, t.k);
        return fm::offset(x, t.var, t.k);
    }

    // Binds term t to a position variable and continues.
    Formula bind(const Term& t, const std::function<Formula(const std::string&)>& body) {
        if (!t.is_const() && t.k == 0) return body(t.var);
        std::string x = fresh();
        return fm::exists(x, fm::conj(var_eq(x, t), body(x)));
    }

    Formula go(const Formula& f) {
        const auto& k = f->kids;
        switch (f->kind) {
            case Kind::Top:
            case Kind::AtZero:
            case Kind::ModZero:
            case Kind::Offset:
            case Kind::Prop:
                return f;
            case Kind::Bottom: return fm::neg(fm::top());
            case Kind::Not: return fm::neg(run(k[0]));
            case Kind::And: return fm::conj(run(k[0]), run(k[1]));
            case Kind::Or: return fm::neg(fm::conj(fm::neg(run(k[0])), fm::neg(run(k[1]))));
            case Kind::Implies: return fm::neg(fm::conj(run(k[0]), fm::neg(run(k[1]))));
            case Kind::Iff: {
                Formula a = run(k[0]), b = run(k[1]);
                return fm::conj(fm::neg(fm::conj(a, fm::neg(b))), fm::neg(fm::conj(b, fm::neg(a))));
            }
            case Kind::Exists: return fm::exists(f->var, run(k[0]));
            case Kind::Forall: return fm::neg(fm::exists(f->var, fm::neg(run(k[0]))));
            case Kind::Diamond: return fm::diamond(f->var, run(k[0]));
            case Kind::Announce: return fm::announce(run(k[0]), run(k[1]));
            case Kind::AnnounceStar: return fm::announce_star(run(k[0]), run(k[1]));
            case Kind::AnnounceConj: {
                Formula a = run(k[0]);
                return fm::conj(a, fm::announce(a, run(k[1])));
            }
            case Kind::AnnounceIter: {
                Formula a = run(k[0]);
                Formula r = run(k[1]);
                for (std::size_t i = 0; i < f->k; ++i) r = fm::announce(a, r);
                return r;
            }
            case Kind::Eq: return eq(f->lhs, f->rhs);
            case Kind::Neq: return fm::neg(eq(f->lhs, f->rhs));
            case Kind::Mod: {
                std::size_t m = f->k;
                return bind(f->lhs, [&](const std::string& x) { return fm::mod_zero(x, m); });
            }
            case Kind::PropAt: {
                std::string p = f->name;
                return bind(f->lhs, [&](const std::string& x) { return fm::prop(p, x); });
            }
            case Kind::DiamondAt: {
                Formula body = run(k[0]);
                return bind(f->lhs, [&](const std::string& x) { return fm::diamond(x, body); });
            }
            case Kind::Knows: {
                Formula body = fm::neg(run(k[0]));
                return fm::neg(bind(f->lhs, [&](const std::string& x) { return fm::diamond(x, body); }));
            }
        }
        throw Error("desugar: unknown node");
    }

    Formula eq(const Term& a, const Term& b) {
        if (!a.is_const() && a.k == 0) return var_eq(a.var, b);
        if (!b.is_const() && b.k == 0) return var_eq(b.var, a);
        return bind(a, [&](const std::string& x) { return var_eq(x, b); });
    }
};

inline void collect_free(const Formula& f, std::set<std::string>& bound, std::vector<std::string>& out) {
    auto use = [&](const std::string& v) {
        if (!v.empty() && !bound.count(v) && std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    };
    switch (f->kind) {
        case Kind::Exists:
        case Kind::Forall: {
            bool fresh = bound.insert(f->var).second;
            collect_free(f->kids[0], bound, out);
            if (fresh) bound.erase(f->var);
            return;
        }
        default:
            break;
    }
    if (f->kind == Kind::AtZero || f->kind == Kind::ModZero || f->kind == Kind::Prop || f->kind == Kind::Diamond) use(f->var);
    if (f->kind == Kind::Offset) use(f->var), use(f->var2);
    if (!f->lhs.is_const()) use(f->lhs.var);
    if (!f->rhs.is_const()) use(f->rhs.var);
    for (const auto& k : f->kids) collect_free(k, bound, out);
}

}  // namespace detail

/// Free variables in order of first occurrence.
inline std::vector<std::string> free_variables(const Formula& f) {
    std::set<std::string> bound;
    std::vector<std::string> out;
    detail::collect_free(f, bound, out);
    return out;
}

/// Rewrites the sugared syntax into the core kinds.
inline Formula desugar(const Formula& f) { return detail::Desugarer().run(f); }

/// Replaces free index identifiers that name an agent alias by its constant.
inline Formula resolve_aliases(const Formula& f, const std::map<std::string, std::size_t>& agents, std::set<std::string> bound = {}) {
    if (agents.empty()) return f;
    auto fix = [&](Term t) {
        if (!t.is_const() && !bound.count(t.var)) {
            auto it = agents.find(t.var);
            if (it != agents.end()) t = Term{"", it->second + t.k};
        }
        return t;
    };
    Node n = *f;
    n.lhs = fix(n.lhs);
    n.rhs = fix(n.rhs);
    if ((n.kind == Kind::Exists || n.kind == Kind::Forall)) bound.insert(n.var);
    for (auto& k : n.kids) k = resolve_aliases(k, agents, bound);
    return fm::make(std::move(n));
}

struct Analysis {
    Formula formula;                 ///< core, bound variables renamed apart
    std::vector<std::string> vars;   ///< every variable, in order of first appearance
    std::vector<std::string> free;   ///< free variables
    bool closed = true;
    bool star_free = true;
};

namespace detail {

class Renamer {
public:
    explicit Renamer(const std::vector<std::string>& free) {
        for (const auto& v : free) used_.insert(v), note(v);
    }

    Formula go(const Formula& f, const std::map<std::string, std::string>& scope) {
        auto name = [&](const std::string& v) {
            auto it = scope.find(v);
            std::string r = it == scope.end() ? v : it->second;
            note(r);
            return r;
        };
        Node n = *f;
        if (n.kind == Kind::Exists) {
            std::string fresh = pick(n.var);
            note(fresh);
            auto inner = scope;
            inner[n.var] = fresh;
            n.var = fresh;
            n.kids[0] = go(f->kids[0], inner);
            return fm::make(std::move(n));
        }
        if (n.kind == Kind::AtZero || n.kind == Kind::ModZero || n.kind == Kind::Prop || n.kind == Kind::Diamond) n.var = name(n.var);
        if (n.kind == Kind::Offset) n.var2 = name(n.var2), n.var = name(n.var);
        for (auto& k : n.kids) k = go(k, scope);
        return fm::make(std::move(n));
    }

    std::vector<std::string> order;

private:
    std::set<std::string> used_;
    std::set<std::string> noted_;

    void note(const std::string& v) {
        if (noted_.insert(v).second) order.push_back(v);
    }

    std::string pick(const std::string& base) {
        if (used_.insert(base).second) return base;
        for (std::size_t i = 1;; ++i) {
            std::string c = base + "'" + std::to_string(i);
            if (used_.insert(c).second) return c;
        }
    }
};

inline void check_stars(const Formula& f, bool& star_free) {
    if (f->kind == Kind::AnnounceStar) {
        star_free = false;
        const Formula& phi = f->kids[0];
        if (!free_variables(phi).empty()) throw UnsupportedStar("iterated announcement of an open formula: " + free_variables(phi)[0] + " is free");
        bool inner = true;
        check_stars(phi, inner);
        if (!inner) throw UnsupportedStar("iterated announcement of a formula that itself contains an iterated announcement");
    }
    for (const auto& k : f->kids) check_stars(k, star_free);
}

}  // namespace detail

/// Alpha-renames bound variables apart and collects the variable set.
/// Throws UnsupportedStar if an iterated announcement announces an open or
/// starred formula.
inline Analysis analyze(const Formula& core) {
    Analysis a;
    a.free = free_variables(core);
    detail::Renamer r(a.free);
    a.formula = r.go(core, {});
    a.vars = r.order;
    a.closed = a.free.empty();
    detail::check_stars(a.formula, a.star_free);
    return a;
}

}  // namespace prmc
