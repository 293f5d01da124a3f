#pragma once

#include <stdexcept>

namespace coatflow {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem failures: missing files, unwritable outputs.
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed content: bad headers, truncated payloads, schema violations.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Recognized but unsupported content (bit depth, file version, magic).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Precondition violations on operation inputs.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Numerical failures: degenerate fits, diverging optimization.
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace coatflow
