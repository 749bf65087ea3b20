#pragma once

#include <stdexcept>

namespace qsearch {

/// Basis size of zero, or a size that does not match the operand.
class InvalidDimension : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// State norm drifted past the tolerance an operation requires.
class NormalizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnsupportedMode : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Problem size exceeds a desk-scale cap.
class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad command line or configuration.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class FitError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace qsearch
