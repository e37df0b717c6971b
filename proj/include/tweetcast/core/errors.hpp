#pragma once

#include <stdexcept>
#include <string>

namespace tweetcast {

/// Shape or dimension mismatch between operands.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Precondition of an operation was violated.
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A statistic is undefined for the given input (e.g. zero variance).
class UndefinedStatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The regression design matrix is rank deficient.
class SingularDesignError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input/output grids do not line up.
class AlignmentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file or stream could not be parsed.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Training diverged (non-finite loss).
class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tweetcast
