#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace statdec {

// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Incompatible matrix/vector shapes. The message names both shapes.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Invalid argument value (zero dimension, bad ratio, k > n, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

// Malformed input file (bad magic, truncation, ragged CSV rows, ...).
class FormatError : public Error {
public:
    using Error::Error;
};

// Degenerate numerical input: zero-sum rows, all-identical points,
// all-zero assignment rows.
class DegenerateDataError : public Error {
public:
    using Error::Error;
};

// A backward pass was given a trace that does not match its forward pass.
class TraceMismatchError : public Error {
public:
    using Error::Error;
};

// Training produced a non-finite loss.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::size_t iteration)
        : Error(what + " (iteration " + std::to_string(iteration) + ")"), iteration_(iteration) {}

    std::size_t iteration() const { return iteration_; }

private:
    std::size_t iteration_;
};

}  // namespace statdec
