#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wmh {

// Every failure surfaced by the library derives from Error. The CLI maps
// DataError subclasses to exit code 1 and UsageError/IoError to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DataError : public Error {
public:
    using Error::Error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ParseError : public DataError {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : DataError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// Negative, NaN or infinite weights; out-of-range draws.
class DomainError : public DataError {
public:
    using DataError::DataError;
};

// Structurally invalid input: duplicate indices, bad file headers.
class FormatError : public DataError {
public:
    using DataError::DataError;
};

// A vector does not fit the layout it is hashed against.
class MismatchError : public DataError {
public:
    using DataError::DataError;
};

// Sketches that cannot be compared (different scheme, seed, layout or k).
class IncompatibleError : public DataError {
public:
    using DataError::DataError;
};

class ResourceError : public DataError {
public:
    using DataError::DataError;
};

class IterationCapError : public DataError {
public:
    IterationCapError(double sparsity, unsigned long long cap)
        : DataError("rejection sampling hit the iteration cap of " + std::to_string(cap) +
                    " draws (effective sparsity s_x = " + std::to_string(sparsity) + ")"),
          sparsity_(sparsity), cap_(cap) {}

    double sparsity() const { return sparsity_; }
    unsigned long long cap() const { return cap_; }

private:
    double sparsity_;
    unsigned long long cap_;
};

}  // namespace wmh
