#pragma once

#include <stdexcept>
#include <string>

namespace oddcover {

// Base of every error raised by the library. `kind()` is the stable
// machine-readable name used in CLI diagnostics and JSON reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define ODDCOVER_ERROR(Name)                                                    \
    class Name : public Error {                                                 \
    public:                                                                     \
        explicit Name(const std::string& message) : Error(#Name, message) {}    \
    }

ODDCOVER_ERROR(NotCoprime);
ODDCOVER_ERROR(FactorizationTooHard);
ODDCOVER_ERROR(ZeroModulus);
ODDCOVER_ERROR(LcmOverflow);
ODDCOVER_ERROR(UnknownSymbol);
ODDCOVER_ERROR(SlotCountMismatch);
ODDCOVER_ERROR(NonDividingModulus);
ODDCOVER_ERROR(DuplicateModulus);
ODDCOVER_ERROR(UnboundSymbol);
ODDCOVER_ERROR(AssignmentInfeasible);
ODDCOVER_ERROR(MopUpCollision);
ODDCOVER_ERROR(UnknownFigure);
ODDCOVER_ERROR(PostconditionFailed);
ODDCOVER_ERROR(MissingRepeatedModulus);
ODDCOVER_ERROR(InvalidParameters);
ODDCOVER_ERROR(FormatError);

#undef ODDCOVER_ERROR

class ParseError : public Error {
public:
    ParseError(const std::string& message, int line, int column)
        : Error("ParseError", std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace oddcover
