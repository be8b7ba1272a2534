#ifndef BRENT_ERRORS_HPP
#define BRENT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace brent {

struct SingularMatrix : std::runtime_error {
    explicit SingularMatrix(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : std::invalid_argument {
    explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct VariantMismatch : std::invalid_argument {
    explicit VariantMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct NotASolution : std::invalid_argument {
    explicit NotASolution(const std::string& what) : std::invalid_argument(what) {}
};

struct DeficientSpan : std::invalid_argument {
    explicit DeficientSpan(const std::string& what) : std::invalid_argument(what) {}
};

struct DenominatorClash : std::runtime_error {
    explicit DenominatorClash(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"),
          line(line),
          column(column) {}
    std::size_t line;
    std::size_t column;
};

struct ShapeError : std::runtime_error {
    explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

struct ValueError : std::runtime_error {
    explicit ValueError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace brent

#endif
