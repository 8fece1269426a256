#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "prmc/error.hpp"
#include "prmc/formula/ast.hpp"

namespace prmc {

namespace detail {

enum class Tok {
    End,
    Ident,
    Number,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Lt,
    Gt,
    AnnOpen,      // [!
    AnnConjOpen,  // [!!
    RBracket,
    Caret,
    Star,
    Not,
    And,
    Or,
    Arrow,
    DArrow,
    Eq,
    Neq,
    Percent,
    Plus,
    Colon,
    Comma,
    Underscore,
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t column;
};

inline std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto push = [&](Tok k, std::size_t len) {
        out.push_back({k, s.substr(i, len), i + 1});
        i += len;
    };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '\'')) ++j;
            push(Tok::Ident, j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            push(Tok::Number, j - i);
        } else if (s.compare(i, 3, "[!!") == 0) {
            push(Tok::AnnConjOpen, 3);
        } else if (s.compare(i, 2, "[!") == 0) {
            push(Tok::AnnOpen, 2);
        } else if (s.compare(i, 3, "<->") == 0) {
            push(Tok::DArrow, 3);
        } else if (s.compare(i, 2, "->") == 0) {
            push(Tok::Arrow, 2);
        } else if (s.compare(i, 2, "!=") == 0) {
            push(Tok::Neq, 2);
        } else {
            switch (c) {
                case '(': push(Tok::LParen, 1); break;
                case ')': push(Tok::RParen, 1); break;
                case '{': push(Tok::LBrace, 1); break;
                case '}': push(Tok::RBrace, 1); break;
                case '<': push(Tok::Lt, 1); break;
                case '>': push(Tok::Gt, 1); break;
                case ']': push(Tok::RBracket, 1); break;
                case '^': push(Tok::Caret, 1); break;
                case '*': push(Tok::Star, 1); break;
                case '!': push(Tok::Not, 1); break;
                case '&': push(Tok::And, 1); break;
                case '|': push(Tok::Or, 1); break;
                case '=': push(Tok::Eq, 1); break;
                case '%': push(Tok::Percent, 1); break;
                case '+': push(Tok::Plus, 1); break;
                case ':': push(Tok::Colon, 1); break;
                case ',': push(Tok::Comma, 1); break;
                case '_': push(Tok::Underscore, 1); break;
                default: throw ParseError(std::string("unexpected character '") + c + "'", 1, i + 1);
            }
        }
    }
    out.push_back({Tok::End, "", s.size() + 1});
    return out;
}

inline bool reserved(const std::string& w) { return w == "E" || w == "A" || w == "K" || w == "true" || w == "false"; }

/// Recursive-descent parser. Precedence, loosest first: `<->`, `->` (right
/// associative), `|`, `&`, then prefix operators. Quantifier bodies extend as
/// far to the right as possible; the other prefix operators (`!`, `<t>`,
/// `K t`, announcements) bind to the next prefix-level formula.
class FormulaParser {
public:
    explicit FormulaParser(const std::string& text) : toks_(tokenize(text)) {}

    Formula parse() {
        Formula f = iff();
        if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
        return f;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool accept(Tok k) {
        if (peek().kind != k) return false;
        ++pos_;
        return true;
    }
    const Token& expect(Tok k, const char* what) {
        if (peek().kind != k) fail(std::string("expected ") + what + (peek().kind == Tok::End ? " at end of input" : ", found '" + peek().text + "'"));
        return next();
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, 1, peek().column); }

    Formula at(Formula f, const Token& t) {
        Node n = *f;
        n.line = 1;
        n.column = t.column;
        return fm::make(std::move(n));
    }

    Formula iff() {
        Formula a = implies();
        while (peek().kind == Tok::DArrow) {
            const Token& t = next();
            a = at(fm::iff(a, implies()), t);
        }
        return a;
    }

    Formula implies() {
        Formula a = disj();
        if (peek().kind == Tok::Arrow) {
            const Token& t = next();
            return at(fm::implies(a, implies()), t);
        }
        return a;
    }

    Formula disj() {
        Formula a = conj();
        while (peek().kind == Tok::Or) {
            const Token& t = next();
            a = at(fm::disj(a, conj()), t);
        }
        return a;
    }

    Formula conj() {
        Formula a = prefix();
        while (peek().kind == Tok::And) {
            const Token& t = next();
            a = at(fm::conj(a, prefix()), t);
        }
        return a;
    }

    std::string variable() {
        const Token& t = expect(Tok::Ident, "a variable");
        if (reserved(t.text)) fail("'" + t.text + "' is reserved");
        return t.text;
    }

    std::size_t number() {
        const Token& t = expect(Tok::Number, "a number");
        try {
            return std::stoull(t.text);
        } catch (const std::exception&) {
            throw ParseError("number out of range", 1, t.column);
        }
    }

    // t ::= v | n | v + n
    Term term() {
        if (peek().kind == Tok::Number) return Term{"", number()};
        Term t{variable(), 0};
        if (accept(Tok::Plus)) t.k = number();
        return t;
    }

    Formula prefix() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Not:
                next();
                return at(fm::neg(prefix()), t);
            case Tok::Lt: {
                next();
                Term tm = term();
                expect(Tok::Gt, "'>'");
                return at(fm::diamond_at(tm, prefix()), t);
            }
            case Tok::AnnOpen:
            case Tok::AnnConjOpen: {
                const bool conj_form = t.kind == Tok::AnnConjOpen;
                next();
                Formula phi = iff();
                expect(Tok::RBracket, "']'");
                if (accept(Tok::Star)) {
                    if (conj_form) fail("'[!!' cannot be iterated");
                    return at(fm::announce_star(phi, prefix()), t);
                }
                if (accept(Tok::Caret)) {
                    if (conj_form) fail("'[!!' cannot be iterated");
                    std::size_t n = number();
                    return at(fm::announce_iter(phi, prefix(), n), t);
                }
                Formula psi = prefix();
                return at(conj_form ? fm::announce_conj(phi, psi) : fm::announce(phi, psi), t);
            }
            case Tok::LParen: {
                next();
                Formula f = iff();
                expect(Tok::RParen, "')'");
                return f;
            }
            case Tok::Ident:
                return ident_led();
            case Tok::Number:
                return comparison();
            default:
                fail(t.kind == Tok::End ? "unexpected end of formula" : "unexpected '" + t.text + "'");
        }
    }

    Formula ident_led() {
        const Token& t = peek();
        if (t.text == "true") return next(), at(fm::top(), t);
        if (t.text == "false") return next(), at(fm::bottom(), t);
        if ((t.text == "E" || t.text == "A") && peek(1).kind == Tok::Ident) {
            next();
            std::vector<std::string> vars{variable()};
            while (accept(Tok::Comma)) vars.push_back(variable());
            expect(Tok::Colon, "':'");
            Formula body = iff();
            for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = t.text == "E" ? fm::exists(*it, body) : fm::forall(*it, body);
            return at(body, t);
        }
        if (t.text == "K" && (peek(1).kind == Tok::Ident || peek(1).kind == Tok::Number)) {
            next();
            Term tm = term();
            return at(fm::knows(tm, prefix()), t);
        }
        if (peek(1).kind == Tok::Underscore) {
            next();
            next();
            Term tm;
            if (accept(Tok::LBrace)) {
                tm = term();
                expect(Tok::RBrace, "'}'");
            } else if (peek().kind == Tok::Number) {
                tm = Term{"", number()};
            } else {
                tm = Term{variable(), 0};
            }
            return at(fm::prop_at(t.text, tm), t);
        }
        return comparison();
    }

    // t = t | t != t | t % n = 0
    Formula comparison() {
        const Token& start = peek();
        Term a = term();
        if (accept(Tok::Percent)) {
            std::size_t k = number();
            if (k == 0) throw ParseError("modulus must be positive", 1, start.column);
            expect(Tok::Eq, "'='");
            const Token& z = expect(Tok::Number, "'0'");
            if (z.text != "0") throw ParseError("only '% n = 0' is supported", 1, z.column);
            return at(fm::mod(a, k), start);
        }
        if (accept(Tok::Eq)) return at(fm::eq(a, term()), start);
        if (accept(Tok::Neq)) return at(fm::neq(a, term()), start);
        fail("expected '=', '!=', '%' or a proposition subscript after '" + start.text + "'");
    }
};

}  // namespace detail

inline Formula parse_formula(const std::string& text) { return detail::FormulaParser(text).parse(); }

}  // namespace prmc
