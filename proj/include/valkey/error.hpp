#pragma once

#include <stdexcept>
#include <string>

namespace valkey {

enum class ErrorKind {
    InvalidInput,
    DivisionByZero,
    InvalidBase,
    InvalidOrder,
    FieldMismatch,
    NotStabilized,
    Precondition,
    PsiEmpty,
    IndexOutOfRange,
    UndefinedEpsilon,
    NoInitialForm,
    Parse,
};

const char* to_string(ErrorKind kind);

/// Every library failure is reported through this type; `kind()` lets callers
/// (the CLI in particular) react to the category without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, int line, int column)
        : Error(ErrorKind::Parse, message + " at line " + std::to_string(line) +
                                      ", column " + std::to_string(column)),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace valkey
