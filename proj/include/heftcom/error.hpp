#pragma once

#include <stdexcept>
#include <string>

namespace heftcom {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInputError : public Error {
public:
    using Error::Error;
};

class InvalidCoefficientError : public Error {
public:
    using Error::Error;
};

/// Quantile level outside the open interval (0, 1).
class InvalidLevelError : public Error {
public:
    using Error::Error;
};

/// Nothing left to evaluate after filtering (window, missing actuals, ...).
class EmptyEvaluationError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class FitError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

class StateError : public Error {
public:
    using Error::Error;
};

class DataError : public Error {
public:
    using Error::Error;
};

class LoadError : public Error {
public:
    using Error::Error;
};

class AlignmentError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace heftcom
