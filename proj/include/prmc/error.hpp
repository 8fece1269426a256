#pragma once

#include <stdexcept>
#include <string>

namespace prmc {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two automata (or an automaton and a track reference) disagree on the layout.
class LayoutError : public Error {
public:
    using Error::Error;
};

/// A configured state or enumeration cap was exceeded. The computation is
/// not wrong, it is simply larger than the desk-scale limits allow.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Syntax error in one of the textual inputs (automaton, model, formula, script).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
        : Error(format(what, line, column)), line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    static std::string format(const std::string& what, std::size_t line, std::size_t column) {
        std::string msg = "line " + std::to_string(line);
        if (column != 0) msg += ", column " + std::to_string(column);
        return msg + ": " + what;
    }

    std::size_t line_;
    std::size_t column_;
};

/// A model violates one of the structural checks (obs shape, reflexivity, alphabet).
class ValidationError : public Error {
public:
    ValidationError(std::string check, const std::string& what, std::string witness = {})
        : Error(check + ": " + what + (witness.empty() ? "" : " (witness " + witness + ")")),
          check_(std::move(check)), witness_(std::move(witness)) {}

    const std::string& check() const { return check_; }
    const std::string& witness() const { return witness_; }

private:
    std::string check_;
    std::string witness_;
};

/// An iterated announcement whose announced formula is open, or nests another star.
class UnsupportedStar : public Error {
public:
    using Error::Error;
};

/// The learner ran out of budget before its hypothesis passed an equivalence query.
class Diverged : public Error {
public:
    using Error::Error;
};

}  // namespace prmc
