#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace liesym {

enum class ErrorKind {
    NonMonomialDivisor,
    SymbolicPowerSubstitution,
    NonlinearLeading,
    UnsupportedFieldShape,
    ResidualOldVariable,
    UnderdeterminedDecomposition,
    UnboundParameter,
    NonlinearHighest,
    Declaration,
    Syntax,
    Domain,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + detail), kind_(kind), detail_(detail) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

}  // namespace liesym
