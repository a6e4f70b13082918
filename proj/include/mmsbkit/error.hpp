#pragma once

#include <stdexcept>
#include <string>

namespace mmsb {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad arguments, dimension mismatches, malformed files. Maps to CLI exit code 2.
class InvalidInput : public Error {
public:
    using Error::Error;
};

class FormatError : public InvalidInput {
public:
    FormatError(const std::string& path, std::size_t line, const std::string& what)
        : InvalidInput(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Singular corner matrices, eigensolver or min-norm solver failures,
// degenerate geometry. Maps to CLI exit code 3.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

}  // namespace mmsb
