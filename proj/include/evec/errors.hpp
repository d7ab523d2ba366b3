#ifndef EVEC_ERRORS_HPP
#define EVEC_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evec {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

/// Pivot fell below the singular tolerance; the denominator determinant is numerically zero.
class SingularSystem : public Error {
public:
    using Error::Error;
};

class InvalidScale : public Error {
public:
    InvalidScale(std::size_t index, const std::string& what)
        : Error("invalid scale at index " + std::to_string(index) + ": " + what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t position, const std::string& what)
        : Error("parse error at line " + std::to_string(line) + ", position " +
                std::to_string(position) + ": " + what),
          line_(line), position_(position) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t line_;
    std::size_t position_;
};

class IndexError : public Error {
public:
    using Error::Error;
};

class DegenerateNormalization : public Error {
public:
    using Error::Error;
};

class DegenerateProfile : public Error {
public:
    using Error::Error;
};

class ZeroDenominator : public Error {
public:
    ZeroDenominator(std::size_t m, const std::string& what)
        : Error(what + " (zero denominator at m=" + std::to_string(m) + ")"), m_(m) {}
    std::size_t index() const noexcept { return m_; }

private:
    std::size_t m_;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class NonpositiveError : public Error {
public:
    using Error::Error;
};

} // namespace evec

#endif // EVEC_ERRORS_HPP
